from enum import Enum
from typing import FrozenSet, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, Field


class OrderTag(str, Enum):
    NATURAL = "natural"
    ORDER_L = "order-l"
    FLAG = "flag"


class DescentPrefix(str, Enum):
    NONE = "none"
    ZERO = "zero"
    MINUS_PI2 = "minus-pi2"


class DescentData(NamedTuple):
    des_set: FrozenSet[int]
    des: int
    maj: int


class FlagStats(NamedTuple):
    des_set: FrozenSet[int]
    des: int
    maj: int
    fdes: int
    fmaj: int
    col: int
    neg: int
    neg_set: FrozenSet[int]


class DStats(NamedTuple):
    ddes: int
    dmaj: int
    sgm: int


class SignChange(NamedTuple):
    delta: Tuple[int, ...]
    ch: int


class StatBundle(BaseModel):
    """Every statistic of one element; family-specific fields are None where undefined"""

    window: str = Field(..., description="Window notation of the element")
    r: int
    n: int
    inv_natural: int
    inv_L: int
    Des: List[int] = Field(..., description="Descent set under the natural order")
    des: int
    maj: int
    Des_F: List[int]
    des_F: int
    maj_F: int
    fdes: int
    fmaj: int
    col: int
    neg: int
    Neg: List[int]
    len_G: int
    len_B: Optional[int] = None
    len_D: Optional[int] = Field(None, description="Only for even neg")
    Des_B: Optional[List[int]] = None
    des_B: Optional[int] = None
    maj_B: Optional[int] = None
    Des_D: Optional[List[int]] = None
    des_D: Optional[int] = None
    maj_D: Optional[int] = None
    ddes: Optional[int] = None
    dmaj: Optional[int] = None
    sgm: Optional[int] = None
    delta: Optional[List[int]] = None
    ch: Optional[int] = None
