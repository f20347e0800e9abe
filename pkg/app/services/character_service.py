import logging
from typing import Dict, List, Tuple

from app.models.characters import CharacterForm, CharacterLabel
from app.models.errors import DomainError
from app.models.permutation import ColoredPermutation, FamilySpec
from app.models.statistics import OrderTag
from app.services.algebra.cyclotomic import CyclotomicInt, omega_power
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service

logger = logging.getLogger(__name__)


class CharacterService:
    def labels(self, r: int, form: CharacterForm = CharacterForm.LENGTH) -> List[CharacterLabel]:
        return [CharacterLabel(a=a, b=b, form=form) for a in (0, 1) for b in range(r)]

    def exponents(self, label: CharacterLabel, p: ColoredPermutation) -> Tuple[int, int]:
        """(sign, ω-exponent) with χ(p) = sign·ω^e"""
        if label.b >= p.r:
            raise DomainError(f"character index b={label.b} needs b < r={p.r}")
        col = sum(p.z)
        if label.a == 0:
            return 1, label.b * col
        if label.form == CharacterForm.LENGTH:
            parity = statistics_service.length(p) - col
        else:
            parity = statistics_service.inversions(permutation_service.absolute(p), OrderTag.NATURAL)
        return (-1 if parity % 2 else 1), label.b * col

    def chi(self, label: CharacterLabel, p: ColoredPermutation) -> CyclotomicInt:
        sign, e = self.exponents(label, p)
        value = omega_power(p.r, e)
        return value if sign == 1 else -value

    def character_correspondence(self, r: int, n: int) -> Dict[str, List[str]]:
        """For each length-form label, the classical labels that agree with it on all of G(r,1,n)"""
        elements = list(permutation_service.enumerate_family(FamilySpec.colored(r, n)))

        def table(form):
            return {
                label.key: tuple(self.chi(label, p) for p in elements)
                for label in self.labels(r, form)
            }

        length_values = table(CharacterForm.LENGTH)
        classical_values = table(CharacterForm.CLASSICAL)
        correspondence = {
            key: sorted(k for k, v in classical_values.items() if v == values)
            for key, values in length_values.items()
        }
        logger.info(f"Character correspondence for r={r}, n={n}: {correspondence}")
        return correspondence


character_service = CharacterService()
