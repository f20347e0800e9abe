import itertools
import logging
import random
import re
from collections import Counter, deque
from math import factorial, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from app.models.errors import DomainError, RestrictionError, WindowParseError, one_line
from app.models.permutation import (
    ColoredPermutation,
    FamilyKind,
    FamilySpec,
    RestrictionTuple,
    TildeRestriction,
    WindowStyle,
)

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^([-−]?)(\d+)(?:\[(\d+)\])?$")

# r=2 shorthand for restriction entries
_SIGN_SETS = {
    "+": frozenset({0}),
    "-": frozenset({1}),
    "−": frozenset({1}),
    "±": frozenset({0, 1}),
    "+-": frozenset({0, 1}),
    "∅": frozenset(),
}


class PermutationService:
    def parse_window(self, text: str, r: int) -> ColoredPermutation:
        """Parse window notation such as "5 1[1] 3 4[2] 2[1] 6[3]" or "-2 3 -5" """
        if r < 1:
            raise WindowParseError(f"number of colors must be positive, got {r}")

        letters: List[int] = []
        colors: List[int] = []
        for token in text.replace(",", " ").split():
            match = _TOKEN.match(token)
            if not match:
                raise WindowParseError(f"cannot read token '{token}'")
            minus, digits, bracket = match.groups()
            if minus:
                if r != 2:
                    raise WindowParseError(f"'{token}' uses a minus sign, which needs r=2 (got r={r})")
                if bracket is not None:
                    raise WindowParseError(f"'{token}' mixes a minus sign with a color")
                color = 1
            else:
                color = int(bracket) if bracket is not None else 0
            if not 0 <= color < r:
                raise WindowParseError(f"color {color} in '{token}' is outside 0..{r - 1}")
            letters.append(int(digits))
            colors.append(color)

        n = len(letters)
        duplicates = sorted(a for a, count in Counter(letters).items() if count > 1)
        if duplicates:
            raise WindowParseError(f"letters repeated: {duplicates}")
        missing = sorted(set(range(1, n + 1)) - set(letters))
        if missing:
            raise WindowParseError(f"letters missing: {missing}")
        return ColoredPermutation.trusted(r, tuple(letters), tuple(colors))

    def format_window(self, p: ColoredPermutation, style: WindowStyle = WindowStyle.BRACKETS) -> str:
        if style == WindowStyle.SIGNED:
            if p.r != 2:
                raise DomainError(f"signed style needs r=2, got r={p.r}")
            return " ".join(f"-{a}" if c else str(a) for a, c in zip(p.sigma, p.z))
        return " ".join(f"{a}[{c}]" if c else str(a) for a, c in zip(p.sigma, p.z))

    def parse_restriction(self, data: Sequence, r: int) -> RestrictionTuple:
        """Read a JSON restriction array; r=2 accepts "+", "−", "±" shorthand"""
        if not isinstance(data, (list, tuple)):
            raise RestrictionError("restriction must be a JSON array of color arrays")
        entries = []
        for i, item in enumerate(data, start=1):
            if isinstance(item, str):
                if r != 2 or item.strip() not in _SIGN_SETS:
                    raise RestrictionError(f"entry {i}: shorthand '{item}' needs r=2 and one of + − ±")
                entries.append(_SIGN_SETS[item.strip()])
            elif isinstance(item, (list, tuple)) and all(isinstance(c, int) for c in item):
                entries.append(frozenset(item))
            else:
                raise RestrictionError(f"entry {i}: expected a color array, got {item!r}")
        try:
            return RestrictionTuple(r=r, entries=tuple(entries))
        except ValueError as e:
            raise RestrictionError(f"restriction rejected: {one_line(e)}") from e

    def restriction_to_json(self, restriction: RestrictionTuple) -> List[List[int]]:
        return [sorted(entry) for entry in restriction.entries]

    def random_restriction(self, r: int, n: int, rng: random.Random) -> RestrictionTuple:
        """Random tuple of nonempty color sets"""
        entries = []
        for _ in range(n):
            size = rng.randint(1, r)
            entries.append(frozenset(rng.sample(range(r), size)))
        return RestrictionTuple(r=r, entries=tuple(entries))

    def random_element(self, r: int, n: int, rng: random.Random) -> ColoredPermutation:
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        return ColoredPermutation.trusted(r, tuple(sigma), tuple(rng.randrange(r) for _ in range(n)))

    # Enumeration

    def family_size(self, spec: FamilySpec) -> int:
        color_counts = [len(s) for s in spec.color_sets()]
        if spec.kind == FamilyKind.D:
            return factorial(spec.n) * (2 ** (spec.n - 1) if spec.n else 1)
        if spec.kind == FamilyKind.TILDE_B:
            return factorial(spec.n - 1) * prod(color_counts)
        return factorial(spec.n) * prod(color_counts)

    @staticmethod
    def chunk_bounds(total: int, index: int, parts: int) -> Tuple[int, int]:
        """Half-open rank range of chunk `index` out of `parts`"""
        if not 0 <= index < parts:
            raise ValueError(f"chunk {index} outside 0..{parts - 1}")
        return total * index // parts, total * (index + 1) // parts

    def enumerate_family(
        self, spec: FamilySpec, chunk: Optional[Tuple[int, int]] = None
    ) -> Iterator[ColoredPermutation]:
        """Yield every element once, lexicographically by (sigma, z).

        `chunk=(index, parts)` restricts to a slice of the permutation ranks;
        the slices for index 0..parts-1 partition the family.
        """
        n, r = spec.n, spec.r
        color_sets = spec.color_sets()
        if any(not s for s in color_sets):
            return

        perms = itertools.permutations(range(1, n + 1))
        if chunk is not None:
            start, stop = self.chunk_bounds(factorial(n), *chunk)
            perms = itertools.islice(perms, start, stop)

        colorings = list(itertools.product(*color_sets))
        if spec.kind == FamilyKind.D:
            colorings = [z for z in colorings if sum(z) % 2 == 0]
        max_position = spec.tilde.k - 1 if spec.kind == FamilyKind.TILDE_B else None

        for sigma in perms:
            if max_position is not None and sigma[max_position] != n:
                continue
            for z in colorings:
                yield ColoredPermutation.trusted(r, sigma, z)

    # Restriction tuples

    def refine_restriction(self, h: RestrictionTuple) -> RestrictionTuple:
        """The unique S with S_i = H_{2i-1} ∩ H_{2i}"""
        if h.n % 2:
            raise RestrictionError(f"refinement needs an even-length tuple, got length {h.n}")
        e = h.entries
        return RestrictionTuple(r=h.r, entries=tuple(e[2 * i] & e[2 * i + 1] for i in range(h.n // 2)))

    def tilde_family(self, h: RestrictionTuple) -> List[TildeRestriction]:
        """All S_k ◁ H for k = 1..n+1, where H has length 2n+1"""
        if h.n % 2 == 0:
            raise RestrictionError(f"tilde family needs an odd-length tuple, got length {h.n}")
        if h.r != 2:
            raise RestrictionError(f"tilde family needs r=2, got r={h.r}")
        e = h.entries
        half = (h.n - 1) // 2
        family = []
        for k in range(1, half + 2):
            entries = []
            for i in range(1, half + 2):
                if i < k:
                    entries.append(e[2 * i - 2] & e[2 * i - 1])
                elif i == k:
                    entries.append(e[2 * i - 2])
                else:
                    # blocks after the maximum sit at positions 2i-2, 2i-1
                    entries.append(e[2 * i - 3] & e[2 * i - 2])
            family.append(TildeRestriction(base=RestrictionTuple(r=2, entries=tuple(entries)), k=k))
        return family

    # Group structure

    def compose(self, p: ColoredPermutation, q: ColoredPermutation) -> ColoredPermutation:
        """(σ,z)·(τ,w) = (σ∘τ, z_{τ(i)} + w_i)"""
        if p.r != q.r or p.n != q.n:
            raise DomainError(f"cannot compose G({p.r},{p.n}) with G({q.r},{q.n})")
        sigma = tuple(p.sigma[t - 1] for t in q.sigma)
        z = tuple((p.z[t - 1] + w) % p.r for t, w in zip(q.sigma, q.z))
        return ColoredPermutation.trusted(p.r, sigma, z)

    def inverse(self, p: ColoredPermutation) -> ColoredPermutation:
        sigma = [0] * p.n
        z = [0] * p.n
        for i, (a, c) in enumerate(zip(p.sigma, p.z), start=1):
            sigma[a - 1] = i
            z[a - 1] = (-c) % p.r
        return ColoredPermutation.trusted(p.r, tuple(sigma), tuple(z))

    def apply_generator(self, p: ColoredPermutation, i: int, type_d: bool = False) -> ColoredPermutation:
        """Right action of s_i; with type_d, i=0 means s_0' = (1̄, 2)"""
        n = p.n
        if i == 0 and type_d:
            if p.r != 2 or n < 2:
                raise DomainError("s_0' acts on signed permutations with n >= 2")
            sigma = (p.sigma[1], p.sigma[0]) + p.sigma[2:]
            z = (1 - p.z[1], 1 - p.z[0]) + p.z[2:]
            return ColoredPermutation.trusted(2, sigma, z)
        if i == 0:
            if n < 1:
                raise DomainError("s_0 needs at least one letter")
            return ColoredPermutation.trusted(p.r, p.sigma, ((p.z[0] + 1) % p.r,) + p.z[1:])
        if 1 <= i < n:
            sigma = list(p.sigma)
            z = list(p.z)
            sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
            z[i - 1], z[i] = z[i], z[i - 1]
            return ColoredPermutation.trusted(p.r, tuple(sigma), tuple(z))
        raise DomainError(f"no generator s_{i} for n={n}")

    def generators(self, kind: FamilyKind, n: int) -> List[Tuple[int, bool]]:
        """(index, type_d) pairs generating the family"""
        swaps = [(i, False) for i in range(1, n)]
        if kind == FamilyKind.SYM:
            return swaps
        if kind == FamilyKind.D:
            return ([(0, True)] if n >= 2 else []) + swaps
        return [(0, False)] + swaps

    def bfs_lengths(self, kind: FamilyKind, r: int, n: int) -> Dict[ColoredPermutation, int]:
        """Word length of every element, by breadth-first search from the identity"""
        gens = self.generators(kind, n)
        start = ColoredPermutation.identity(r, n)
        distance = {start: 0}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for i, type_d in gens:
                q = self.apply_generator(p, i, type_d)
                if q not in distance:
                    distance[q] = distance[p] + 1
                    queue.append(q)
        logger.debug(f"BFS over {kind.value} r={r} n={n} reached {len(distance)} elements")
        return distance

    def absolute(self, p: ColoredPermutation) -> ColoredPermutation:
        return ColoredPermutation.trusted(p.r, p.sigma, (0,) * p.n)


permutation_service = PermutationService()
