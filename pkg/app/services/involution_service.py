import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from app.models.errors import DomainError
from app.models.involution import InvolutionTag
from app.models.permutation import ColoredPermutation, FamilyKind, FamilySpec, RestrictionTuple
from app.services.permutation_service import permutation_service

logger = logging.getLogger(__name__)

ColorPair = Tuple[int, int]

_SAME_SIGN: List[ColorPair] = [(0, 0), (1, 1)]
_ANY_SIGNS: List[ColorPair] = [(0, 0), (0, 1), (1, 0), (1, 1)]


def _positions(p: ColoredPermutation) -> List[int]:
    """pos[a] is the 0-based position of letter a"""
    pos = [0] * (p.n + 1)
    for idx, a in enumerate(p.sigma):
        pos[a] = idx
    return pos


def _swap(p: ColoredPermutation, i: int, j: int, flip: bool = False) -> ColoredPermutation:
    """Exchange the letters at positions i, j; colors stay with the positions"""
    sigma = list(p.sigma)
    sigma[i], sigma[j] = sigma[j], sigma[i]
    z = p.z
    if flip:
        z = list(z)
        z[i] ^= 1
        z[j] ^= 1
        z = tuple(z)
    return ColoredPermutation.trusted(p.r, tuple(sigma), z)


class InvolutionService:
    def __init__(self):
        self._rules = {
            InvolutionTag.PHI: self._phi,
            InvolutionTag.ETA: self._eta,
            InvolutionTag.IOTA: self._iota,
            InvolutionTag.PSI_B: self._psi_b,
            InvolutionTag.PSI_D: self._psi_d,
            InvolutionTag.THETA: self._theta,
        }

    def check_domain(self, tag: InvolutionTag, p: ColoredPermutation):
        m = p.n
        if tag == InvolutionTag.PHI:
            if m % 2 and p.r != 2:
                raise DomainError(f"phi on odd size {m} needs r=2, got r={p.r}")
            return
        if p.r != 2:
            raise DomainError(f"{tag.value} acts on signed permutations, got r={p.r}")
        odd_neg = sum(p.z) % 2 == 1
        if tag == InvolutionTag.ETA and (m % 2 or odd_neg):
            raise DomainError(f"eta acts on D_2n; got size {m} with {sum(p.z)} negatives")
        if tag == InvolutionTag.IOTA and (m % 2 == 0 or odd_neg):
            raise DomainError(f"iota acts on D_2n+1; got size {m} with {sum(p.z)} negatives")
        if tag == InvolutionTag.PSI_D and odd_neg:
            raise DomainError(f"psi-d acts on D_n; got {sum(p.z)} negatives")

    def involute(self, tag: InvolutionTag, p: ColoredPermutation) -> ColoredPermutation:
        self.check_domain(tag, p)
        return self._rules[tag](p)

    def is_fixed(self, tag: InvolutionTag, p: ColoredPermutation) -> bool:
        return self.involute(tag, p) == p

    # Rules. Each scans pairs {2i-1, 2i} and acts on the first one that qualifies.

    def _phi(self, p: ColoredPermutation) -> ColoredPermutation:
        pos = _positions(p)
        z = p.z
        for i in range(1, p.n // 2 + 1):
            pa, pb = pos[2 * i - 1], pos[2 * i]
            if abs(pa - pb) != 1 or z[pa] != z[pb]:
                return _swap(p, pa, pb)
        return p

    def _eta(self, p: ColoredPermutation) -> ColoredPermutation:
        pos = _positions(p)
        z = p.z
        last_two = {p.n - 2, p.n - 1}
        for i in range(1, p.n // 2 + 1):
            pa, pb = pos[2 * i - 1], pos[2 * i]
            at_last = {pa, pb} == last_two
            if (
                abs(pa - pb) != 1
                or (z[pa] != z[pb] and not at_last)
                or (at_last and z[pa] == 1 and z[pb] == 1)
            ):
                return _swap(p, pa, pb)
        return p

    def _iota(self, p: ColoredPermutation) -> ColoredPermutation:
        pos = _positions(p)
        z = p.z
        last_two = {p.n - 2, p.n - 1}
        for i in range(1, p.n // 2 + 1):
            pa, pb = pos[2 * i - 1], pos[2 * i]
            at_last = {pa, pb} == last_two
            if (
                abs(pa - pb) != 1
                or (z[pa] != z[pb] and not at_last)
                or (at_last and z[p.n - 2] == 1)
            ):
                return _swap(p, pa, pb)
        return p

    def _psi_b(self, p: ColoredPermutation) -> ColoredPermutation:
        pos = _positions(p)
        z = p.z
        for i in range(1, p.n // 2 + 1):
            pa, pb = pos[2 * i - 1], pos[2 * i]
            if abs(pa - pb) != 1 or z[pa] != z[pb]:
                return _swap(p, pa, pb)
            if {pa, pb} != {2 * i - 2, 2 * i - 1}:
                return _swap(p, pa, pb, flip=True)
        return p

    def _psi_d(self, p: ColoredPermutation) -> ColoredPermutation:
        pos = _positions(p)
        z = p.z
        for i in range(1, p.n // 2 + 1):
            pa, pb = pos[2 * i - 1], pos[2 * i]
            if abs(pa - pb) != 1:
                return _swap(p, pa, pb)
            if z[pa] != z[pb]:
                if i == 1 and {pa, pb} == {0, 1}:
                    continue
                return _swap(p, pa, pb)
            if {pa, pb} != {2 * i - 2, 2 * i - 1}:
                return _swap(p, pa, pb, flip=True)
        return p

    def _theta(self, p: ColoredPermutation) -> ColoredPermutation:
        for k in range(1, p.n + 1):
            if p.sigma[k - 1] != k:
                i = p.sigma.index(k)
                z = list(p.z)
                z[i] ^= 1
                return ColoredPermutation.trusted(2, p.sigma, tuple(z))
        return p

    # Fixed points

    def domain_family(self, tag: InvolutionTag, spec: FamilySpec) -> FamilySpec:
        """Validate that `spec` is a legal domain for `tag`"""
        kind, m = spec.kind, spec.n
        if tag == InvolutionTag.PHI:
            if kind not in (FamilyKind.G, FamilyKind.B, FamilyKind.RESTRICTED_G, FamilyKind.SYM):
                raise DomainError(f"phi acts on colored families, not {kind.value}")
            if m % 2 and spec.r != 2:
                raise DomainError(f"phi on odd size {m} needs r=2")
        elif tag in (InvolutionTag.PSI_B, InvolutionTag.THETA):
            if kind != FamilyKind.B:
                raise DomainError(f"{tag.value} acts on B_n, not {kind.value}")
        else:
            if kind != FamilyKind.D:
                raise DomainError(f"{tag.value} acts on D_n, not {kind.value}")
            if tag == InvolutionTag.ETA and m % 2:
                raise DomainError(f"eta needs even size, got {m}")
            if tag == InvolutionTag.IOTA and m % 2 == 0:
                raise DomainError(f"iota needs odd size, got {m}")
        return spec

    def fixed_points(self, tag: InvolutionTag, spec: FamilySpec) -> Iterator[ColoredPermutation]:
        """Fixed points built from their structural description (no filtering through involute)"""
        self.domain_family(tag, spec)
        m = spec.n
        half = m // 2
        if tag == InvolutionTag.PHI:
            yield from self._phi_fixed(spec)
        elif tag == InvolutionTag.ETA:
            if m == 0:
                yield ColoredPermutation.identity(2, 0)
                return
            # the block at the last two positions is positive
            yield from self._block_words(2, [_SAME_SIGN] * (half - 1) + [[(0, 0)]])
        elif tag == InvolutionTag.IOTA:
            for k in range(1, half + 2):
                blocks = [_SAME_SIGN] * half
                if k <= half:
                    # block at the last two positions: first entry positive
                    blocks[-1] = [(0, 0), (0, 1)]
                yield from self._block_words(2, blocks, single_slot=k, single_colors=(0, 1), even_only=True)
        elif tag == InvolutionTag.PSI_B:
            yield from self._block_words(
                2,
                [_SAME_SIGN] * half,
                single_slot=half + 1 if m % 2 else None,
                single_colors=(0, 1),
                permute=False,
            )
        elif tag == InvolutionTag.PSI_D:
            blocks = [_ANY_SIGNS] + [_SAME_SIGN] * (half - 1) if half else []
            yield from self._block_words(
                2,
                blocks,
                single_slot=half + 1 if m % 2 else None,
                single_colors=(0, 1),
                permute=False,
                even_only=True,
            )
        else:
            identity = tuple(range(1, m + 1))
            for z in itertools.product((0, 1), repeat=m):
                yield ColoredPermutation.trusted(2, identity, z)

    def fixed_points_by_filter(self, tag: InvolutionTag, spec: FamilySpec) -> Iterator[ColoredPermutation]:
        self.domain_family(tag, spec)
        for p in permutation_service.enumerate_family(spec):
            if self._rules[tag](p) == p:
                yield p

    def _phi_fixed(self, spec: FamilySpec) -> Iterator[ColoredPermutation]:
        h = spec.restriction if spec.restriction is not None else RestrictionTuple.full(spec.r, spec.n)
        if spec.n % 2 == 0:
            s = permutation_service.refine_restriction(h)
            blocks = [[(c, c) for c in sorted(entry)] for entry in s.entries]
            yield from self._block_words(spec.r, blocks)
            return
        for tilde in permutation_service.tilde_family(h):
            entries = tilde.base.entries
            blocks = [[(c, c) for c in sorted(e)] for i, e in enumerate(entries, start=1) if i != tilde.k]
            yield from self._block_words(
                spec.r, blocks, single_slot=tilde.k, single_colors=tuple(sorted(entries[tilde.k - 1]))
            )

    def _block_words(
        self,
        r: int,
        block_colors: Sequence[Sequence[ColorPair]],
        single_slot: Optional[int] = None,
        single_colors: Sequence[int] = (0,),
        permute: bool = True,
        even_only: bool = False,
    ) -> Iterator[ColoredPermutation]:
        """Words made of adjacent pairs {2j-1, 2j} plus an optional maximum letter.

        Slots are filled left to right; `single_slot` (1-based) holds the
        letter 2·len(block_colors)+1, every other slot holds one pair whose
        two position colors are drawn from that block's list.
        """
        nb = len(block_colors)
        slots = nb + (1 if single_slot is not None else 0)
        single_letter = 2 * nb + 1
        orders = itertools.permutations(range(1, nb + 1)) if permute else [tuple(range(1, nb + 1))]
        singles = tuple(single_colors) if single_slot is not None else (None,)
        for tau in orders:
            for descending in itertools.product((False, True), repeat=nb):
                for colors in itertools.product(*block_colors):
                    for single_color in singles:
                        sigma: List[int] = []
                        z: List[int] = []
                        b = 0
                        for slot in range(1, slots + 1):
                            if slot == single_slot:
                                sigma.append(single_letter)
                                z.append(single_color)
                                continue
                            j = tau[b]
                            sigma.extend((2 * j, 2 * j - 1) if descending[b] else (2 * j - 1, 2 * j))
                            z.extend(colors[b])
                            b += 1
                        if even_only and sum(z) % 2:
                            continue
                        yield ColoredPermutation.trusted(r, tuple(sigma), tuple(z))


involution_service = InvolutionService()
