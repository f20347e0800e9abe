import logging
from typing import Iterator, List, Tuple

from app.models.errors import DomainError
from app.models.involution import BarredPermutation, SignClass
from app.models.permutation import ColoredPermutation, FamilySpec, WindowStyle
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service

logger = logging.getLogger(__name__)


class BarredService:
    def _space_rules(self, p: ColoredPermutation) -> List[Tuple[int, int]]:
        """(parity, minimum) of the bar count in spaces 1..n"""
        delta = statistics_service.sign_change(p).delta
        descents = statistics_service.flag_stats(p).des_set
        rules = []
        for i, d in enumerate(delta, start=1):
            minimum = 2 if (i in descents and d == 0) else d
            rules.append((d, minimum))
        return rules

    def is_valid(self, b: BarredPermutation) -> bool:
        if len(b.bars) != b.base.n + 1 or any(x < 0 for x in b.bars):
            return False
        for (parity, minimum), count in zip(self._space_rules(b.base), b.bars[1:]):
            if count % 2 != parity or count < minimum:
                return False
        return True

    def min_barred(self, p: ColoredPermutation) -> BarredPermutation:
        """The flag barred permutation with the fewest bars"""
        if p.r != 2:
            raise DomainError(f"barred permutations are signed, got r={p.r}")
        return BarredPermutation(p, (0,) + tuple(minimum for _, minimum in self._space_rules(p)))

    def bar_vectors(self, p: ColoredPermutation, total: int) -> Iterator[Tuple[int, ...]]:
        """Every valid bar distribution on p with exactly `total` bars"""
        rules = self._space_rules(p)

        def fill(i: int, remaining: int) -> Iterator[Tuple[int, ...]]:
            if i == len(rules):
                yield (remaining,)
                return
            parity, minimum = rules[i]
            for count in range(minimum, remaining + 1, 2):
                if count % 2 != parity:
                    continue
                for rest in fill(i + 1, remaining - count):
                    yield (count,) + rest

        # space 0 takes whatever is left, so fill spaces 1..n first
        for tail in fill(0, total):
            yield (tail[-1],) + tail[:-1]

    def count_barred(self, n: int, k: int, sign_class: SignClass) -> int:
        """Flag barred permutations on B_{n+1} with k bars whose letter n+1 has the given sign"""
        if n < 1 or k < 0:
            raise DomainError(f"count_barred needs n >= 1 and k >= 0, got n={n}, k={k}")
        want = 0 if sign_class == SignClass.PLUS else 1
        count = 0
        for p in permutation_service.enumerate_family(FamilySpec.hyperoctahedral(n + 1)):
            if p.z[p.sigma.index(n + 1)] != want:
                continue
            count += sum(1 for _ in self.bar_vectors(p, k))
        return count

    @staticmethod
    def closed_form(n: int, k: int, sign_class: SignClass) -> int:
        """(k+1)^n ⌈(k+1)/2⌉ for plus, (k+1)^n ⌊(k+1)/2⌋ for minus"""
        half = (k + 2) // 2 if sign_class == SignClass.PLUS else (k + 1) // 2
        return (k + 1) ** n * half

    def format_barred(self, b: BarredPermutation) -> str:
        tokens = permutation_service.format_window(b.base, WindowStyle.SIGNED).split()
        parts = ["|" * b.bars[0]] if b.bars[0] else []
        for token, count in zip(tokens, b.bars[1:]):
            parts.append(token)
            if count:
                parts.append("|" * count)
        return " ".join(parts)


barred_service = BarredService()
