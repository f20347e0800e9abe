"""Hat bijections between fixed points and half-size hatted permutations."""
import logging
from typing import List, Tuple

from app.models.errors import DomainError
from app.models.involution import HatPartition, HattedPermutation, HatVariant, InvolutionTag
from app.models.permutation import ColoredPermutation
from app.services.involution_service import involution_service

logger = logging.getLogger(__name__)

_FIXED_BY = {
    HatVariant.G_EVEN: InvolutionTag.PHI,
    HatVariant.B_ODD: InvolutionTag.PHI,
    HatVariant.D_EVEN: InvolutionTag.ETA,
    HatVariant.D_ODD: InvolutionTag.IOTA,
}


def _block_starts(size: int, k: int) -> List[int]:
    """0-based start of each pair block when the maximum occupies slot k (1-based)"""
    starts = []
    for i in range(1, size + 1):
        if i < k:
            starts.append(2 * i - 2)
        elif i > k:
            starts.append(2 * i - 3)
    return starts


class FoldingService:
    def _check_variant(self, variant: HatVariant, p: ColoredPermutation):
        odd = variant in (HatVariant.B_ODD, HatVariant.D_ODD)
        if p.n % 2 != int(odd):
            raise DomainError(f"{variant.value} needs {'odd' if odd else 'even'} size, got {p.n}")
        if variant != HatVariant.G_EVEN and p.r != 2:
            raise DomainError(f"{variant.value} needs a signed permutation")
        if not involution_service.is_fixed(_FIXED_BY[variant], p):
            raise DomainError(f"{p.sigma}/{p.z} is not a fixed point of {_FIXED_BY[variant].value}")

    def hat_forward(self, variant: HatVariant, p: ColoredPermutation) -> HattedPermutation:
        self._check_variant(variant, p)
        sigma, z = p.sigma, p.z
        letters: List[int] = []
        colors: List[int] = []
        hats = set()

        if variant in (HatVariant.G_EVEN, HatVariant.D_EVEN):
            half = p.n // 2
            for i in range(half):
                a, b = sigma[2 * i], sigma[2 * i + 1]
                letters.append((a + 1) // 2)
                colors.append(z[2 * i])
                if a > b:
                    hats.add(i + 1)
        else:
            half = p.n // 2
            peak = sigma.index(p.n)
            k = peak // 2 + 1
            starts = iter(_block_starts(half + 1, k))
            for i in range(1, half + 2):
                if i == k:
                    letters.append(half + 1)
                    colors.append(z[peak])
                    continue
                s = next(starts)
                a, b = sigma[s], sigma[s + 1]
                letters.append((a + 1) // 2)
                last_block = variant == HatVariant.D_ODD and s == p.n - 2
                colors.append(0 if last_block else z[s])
                if a > b:
                    hats.add(i)

        if variant in (HatVariant.D_EVEN, HatVariant.D_ODD) and sum(colors) % 2:
            colors[-1] = 1
        base = ColoredPermutation.trusted(p.r, tuple(letters), tuple(colors))
        return HattedPermutation(base, frozenset(hats))

    def hat_backward(self, variant: HatVariant, h: HattedPermutation) -> ColoredPermutation:
        base = h.base
        n = base.n
        if any(not 1 <= i <= n for i in h.hats):
            raise DomainError(f"hat positions {sorted(h.hats)} outside 1..{n}")
        if variant != HatVariant.G_EVEN and base.r != 2:
            raise DomainError(f"{variant.value} needs a signed base")
        colors = list(base.z)
        if variant in (HatVariant.D_EVEN, HatVariant.D_ODD):
            if sum(colors) % 2:
                raise DomainError("a D-variant base has an even number of negatives")
            if n:
                colors[-1] = 0

        if variant in (HatVariant.G_EVEN, HatVariant.D_EVEN):
            sigma: List[int] = []
            z: List[int] = []
            for i, (j, c) in enumerate(zip(base.sigma, colors), start=1):
                sigma.extend((2 * j, 2 * j - 1) if i in h.hats else (2 * j - 1, 2 * j))
                z.extend((c, c))
            p = ColoredPermutation.trusted(base.r, tuple(sigma), tuple(z))
        else:
            if n == 0:
                raise DomainError("odd variants need a nonempty base")
            k = base.sigma.index(n) + 1
            if k in h.hats:
                raise DomainError("the maximum letter cannot carry a hat")
            size = 2 * n - 1
            sigma = [0] * size
            z = [0] * size
            starts = iter(_block_starts(n, k))
            for i, (j, c) in enumerate(zip(base.sigma, colors), start=1):
                if i == k:
                    sigma[2 * k - 2] = size
                    z[2 * k - 2] = c
                    continue
                s = next(starts)
                pair = (2 * j, 2 * j - 1) if i in h.hats else (2 * j - 1, 2 * j)
                sigma[s], sigma[s + 1] = pair
                z[s] = z[s + 1] = c
            if variant == HatVariant.D_ODD and k < n:
                # last-two block: first entry positive, second restores even parity
                z[size - 2] = 0
                z[size - 1] = 0
                z[size - 1] = sum(z) % 2
            p = ColoredPermutation.trusted(base.r, tuple(sigma), tuple(z))

        if not involution_service.is_fixed(_FIXED_BY[variant], p):
            raise DomainError(f"hatted permutation does not come from a {variant.value} fixed point")
        return p

    def hat_partition(self, h: HattedPermutation) -> HatPartition:
        base = h.base
        positions = sorted(h.hats)
        signed = base.r == 2
        return HatPartition(
            P=positions,
            L=sorted(base.sigma[i - 1] for i in positions),
            P_N=[i for i in positions if base.z[i - 1] == 0],
            P_C=[i for i in positions if base.z[i - 1] != 0],
            P_plus=[i for i in positions if signed and base.z[i - 1] == 0],
            P_minus=[i for i in positions if signed and base.z[i - 1] == 1],
        )

    def straighten(self, tag: InvolutionTag, p: ColoredPermutation) -> ColoredPermutation:
        """Map a psi-b / psi-d fixed point to the signed permutation with |π_i| = i"""
        if tag not in (InvolutionTag.PSI_B, InvolutionTag.PSI_D):
            raise DomainError(f"straightening is defined for psi-b and psi-d, not {tag.value}")
        if not involution_service.is_fixed(tag, p):
            raise DomainError(f"not a fixed point of {tag.value}")
        z = list(p.z)
        for i in range(p.n // 2):
            lo, hi = 2 * i, 2 * i + 1
            descending = p.sigma[lo] > p.sigma[hi]
            if tag == InvolutionTag.PSI_D and i == 0 and z[lo] != z[hi]:
                # 1 2̄ -> 1̄ 2̄ and 1̄ 2 -> 1 2; descending pairs keep their signs
                if not descending:
                    z[lo] = z[hi]
            elif descending:
                # 2i, 2i-1 -> 2i-1, \bar{2i} and \bar{2i}, \bar{2i-1} -> \bar{2i-1}, 2i
                z[hi] = 1 - z[lo]
        return ColoredPermutation.trusted(2, tuple(range(1, p.n + 1)), tuple(z))


folding_service = FoldingService()
