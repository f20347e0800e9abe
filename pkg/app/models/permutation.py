from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.errors import DomainError


@dataclass(frozen=True, slots=True, order=True)
class ColoredPermutation:
    """An element of G(r,1,n) in window notation; colors belong to positions"""

    r: int
    sigma: Tuple[int, ...]
    z: Tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise DomainError(f"number of colors must be positive, got {self.r}")
        if len(self.z) != len(self.sigma):
            raise DomainError(f"{len(self.sigma)} letters but {len(self.z)} colors")
        if sorted(self.sigma) != list(range(1, len(self.sigma) + 1)):
            raise DomainError(f"{self.sigma} is not a permutation of 1..{len(self.sigma)}")
        for color in self.z:
            if not 0 <= color < self.r:
                raise DomainError(f"color {color} outside 0..{self.r - 1}")

    @classmethod
    def trusted(cls, r: int, sigma: Tuple[int, ...], z: Tuple[int, ...]) -> "ColoredPermutation":
        """Build without validation (enumerators and involutions only)"""
        p = object.__new__(cls)
        object.__setattr__(p, "r", r)
        object.__setattr__(p, "sigma", sigma)
        object.__setattr__(p, "z", z)
        return p

    @classmethod
    def identity(cls, r: int, n: int) -> "ColoredPermutation":
        return cls(r, tuple(range(1, n + 1)), (0,) * n)

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def signed(self) -> Tuple[int, ...]:
        """Window as signed integers; only meaningful for r=2"""
        return tuple(-a if c else a for a, c in zip(self.sigma, self.z))

    @property
    def col(self) -> int:
        return sum(self.z)


class WindowStyle(str, Enum):
    BRACKETS = "brackets"
    SIGNED = "signed"


class RestrictionTuple(BaseModel):
    """Allowed colors per position (the S and H tuples)"""

    model_config = ConfigDict(frozen=True)

    r: int = Field(..., ge=1, description="Number of colors")
    entries: Tuple[FrozenSet[int], ...] = Field(..., description="Allowed color set per position")

    @model_validator(mode="after")
    def _colors_in_range(self):
        for i, entry in enumerate(self.entries, start=1):
            bad = sorted(c for c in entry if not 0 <= c < self.r)
            if bad:
                raise ValueError(f"entry {i} holds colors {bad} outside 0..{self.r - 1}")
        return self

    @classmethod
    def full(cls, r: int, n: int) -> "RestrictionTuple":
        return cls(r=r, entries=tuple(frozenset(range(r)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)


class TildeRestriction(BaseModel):
    """A restriction tuple with a tilde on entry k; the maximum letter sits at position k"""

    model_config = ConfigDict(frozen=True)

    base: RestrictionTuple
    k: int = Field(..., ge=1, description="Tilde position (1-based)")

    @model_validator(mode="after")
    def _k_in_range(self):
        if self.k > self.base.n:
            raise ValueError(f"tilde position {self.k} exceeds length {self.base.n}")
        return self


class FamilyKind(str, Enum):
    SYM = "sym"
    B = "b"
    D = "d"
    G = "g"
    RESTRICTED_G = "restricted-g"
    TILDE_B = "tilde-b"


class FamilySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FamilyKind
    r: int = Field(1, ge=1, description="Number of colors")
    n: int = Field(..., ge=0, description="Number of letters")
    restriction: Optional[RestrictionTuple] = Field(None, description="Per-position color sets for restricted-g")
    tilde: Optional[TildeRestriction] = Field(None, description="Tilde tuple for tilde-b")

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == FamilyKind.SYM and self.r != 1:
            raise ValueError("sym requires r=1")
        if self.kind in (FamilyKind.B, FamilyKind.D, FamilyKind.TILDE_B) and self.r != 2:
            raise ValueError(f"{self.kind.value} requires r=2")
        if self.kind == FamilyKind.RESTRICTED_G:
            if self.restriction is None:
                raise ValueError("restricted-g needs a restriction tuple")
            if self.restriction.n != self.n or self.restriction.r != self.r:
                raise ValueError(
                    f"restriction of length {self.restriction.n} over r={self.restriction.r} "
                    f"does not fit n={self.n}, r={self.r}"
                )
        if self.kind == FamilyKind.TILDE_B:
            if self.tilde is None:
                raise ValueError("tilde-b needs a tilde restriction")
            if self.tilde.base.n != self.n or self.tilde.base.r != 2:
                raise ValueError(f"tilde restriction does not fit n={self.n}")
        return self

    @classmethod
    def sym(cls, n: int) -> "FamilySpec":
        return cls(kind=FamilyKind.SYM, r=1, n=n)

    @classmethod
    def hyperoctahedral(cls, n: int) -> "FamilySpec":
        return cls(kind=FamilyKind.B, r=2, n=n)

    @classmethod
    def even_signed(cls, n: int) -> "FamilySpec":
        return cls(kind=FamilyKind.D, r=2, n=n)

    @classmethod
    def colored(cls, r: int, n: int) -> "FamilySpec":
        return cls(kind=FamilyKind.G, r=r, n=n)

    @classmethod
    def restricted(cls, restriction: RestrictionTuple) -> "FamilySpec":
        return cls(kind=FamilyKind.RESTRICTED_G, r=restriction.r, n=restriction.n, restriction=restriction)

    @classmethod
    def tilde_b(cls, tilde: TildeRestriction) -> "FamilySpec":
        return cls(kind=FamilyKind.TILDE_B, r=2, n=tilde.base.n, tilde=tilde)

    def color_sets(self) -> Tuple[Tuple[int, ...], ...]:
        """Sorted allowed colors per position"""
        if self.kind == FamilyKind.RESTRICTED_G:
            return tuple(tuple(sorted(e)) for e in self.restriction.entries)
        if self.kind == FamilyKind.TILDE_B:
            return tuple(tuple(sorted(e)) for e in self.tilde.base.entries)
        return tuple(tuple(range(self.r)) for _ in range(self.n))
