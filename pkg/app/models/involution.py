from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List, Tuple

from pydantic import BaseModel, Field

from app.models.permutation import ColoredPermutation


class InvolutionTag(str, Enum):
    PHI = "phi"        # G_{r,2n}(H) and B_{2n+1}(H)
    ETA = "eta"        # D_{2n}
    IOTA = "iota"      # D_{2n+1}
    PSI_B = "psi-b"    # B_n
    PSI_D = "psi-d"    # D_n
    THETA = "theta"    # B_n


class HatVariant(str, Enum):
    G_EVEN = "G-even"
    B_ODD = "B-odd"
    D_EVEN = "D-even"
    D_ODD = "D-odd"


class SignClass(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True, slots=True)
class HattedPermutation:
    base: ColoredPermutation
    hats: FrozenSet[int]


class HatPartition(BaseModel):
    P: List[int] = Field(..., description="Hatted positions")
    L: List[int] = Field(..., description="Hatted letters")
    P_N: List[int] = Field(..., description="Hatted positions with color 0")
    P_C: List[int] = Field(..., description="Hatted positions with nonzero color")
    P_plus: List[int] = Field(..., description="Hatted positive letters (r=2)")
    P_minus: List[int] = Field(..., description="Hatted negative letters (r=2)")


@dataclass(frozen=True, slots=True)
class BarredPermutation:
    """A signed permutation with bars[i] bars in space i (space 0 precedes the first letter)"""

    base: ColoredPermutation
    bars: Tuple[int, ...]

    @property
    def total_bars(self) -> int:
        return sum(self.bars)
