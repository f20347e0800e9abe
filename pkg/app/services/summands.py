"""Per-element monomials summed by the identity registry.

A `Summand` is a frozen description of one side's summand; calling it on an
element returns (exponent, ω-exponent, ±1) or None when the element is
filtered out. Instances pickle cleanly, so joblib workers can run them.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from app.models.permutation import ColoredPermutation, FamilyKind
from app.models.statistics import OrderTag
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service


class Stat(str, Enum):
    ZERO = "zero"
    DES = "des"
    MAJ = "maj"
    INV = "inv"
    FDES = "fdes"
    FMAJ = "fmaj"
    DES_B = "des_B"
    MAJ_B = "maj_B"
    DES_D = "des_D"
    MAJ_D = "maj_D"
    DDES = "ddes"
    DMAJ = "dmaj"
    CH_FORMULA = "ch-formula"


class SignRule(str, Enum):
    NONE = "none"
    INV = "inv"                # (-1)^inv, natural order
    LENGTH_G = "length-g"      # (-1)^(ℓ - col), the sign part of χ_{1,b}
    LENGTH_B = "length-b"
    LENGTH_D = "length-d"
    ABS_INV = "abs-inv"        # (-1)^inv(|π|)
    NEG = "neg"
    SGM = "sgm"
    FMAJ = "fmaj"


class XMode(str, Enum):
    NONE = "none"
    COL = "col"                        # x^(scale·col)
    COL_BUT_LAST = "col-but-last"      # x^(scale·#{i ∈ Neg, i < n})
    POSITIONS = "positions"            # ∏ x_i^{z_i}
    PAIRS = "pairs"                    # ∏ (x_{2i-1} x_{2i})^{z_i}
    PAIRS_BUT_LAST = "pairs-but-last"  # ∏_{i ∈ Neg, i < n} x_{2i-1} x_{2i}


def ch_formula(p: ColoredPermutation) -> int:
    """ch(π) plus two for every flag descent without a sign change"""
    change = statistics_service.sign_change(p)
    descents = statistics_service.flag_stats(p).des_set
    return change.ch + 2 * sum(1 for i in descents if change.delta[i - 1] == 0)


def stat_value(p: ColoredPermutation, stat: Stat) -> int:
    if stat == Stat.ZERO:
        return 0
    if stat in (Stat.DES, Stat.MAJ):
        data = statistics_service.descent_data(p)
        return data.des if stat == Stat.DES else data.maj
    if stat == Stat.INV:
        return statistics_service.inversions(p, OrderTag.NATURAL)
    if stat in (Stat.FDES, Stat.FMAJ):
        flag = statistics_service.flag_stats(p)
        return flag.fdes if stat == Stat.FDES else flag.fmaj
    if stat in (Stat.DES_B, Stat.MAJ_B):
        data = statistics_service.type_b_descents(p)
        return data.des if stat == Stat.DES_B else data.maj
    if stat in (Stat.DES_D, Stat.MAJ_D):
        data = statistics_service.type_d_descents(p)
        return data.des if stat == Stat.DES_D else data.maj
    if stat in (Stat.DDES, Stat.DMAJ):
        d = statistics_service.d_stats(p)
        return d.ddes if stat == Stat.DDES else d.dmaj
    return ch_formula(p)


def sign_parity(p: ColoredPermutation, rule: SignRule) -> int:
    if rule == SignRule.NONE:
        return 0
    if rule == SignRule.INV:
        return statistics_service.inversions(p, OrderTag.NATURAL)
    if rule == SignRule.LENGTH_G:
        return statistics_service.length(p, FamilyKind.G) - p.col
    if rule == SignRule.LENGTH_B:
        return statistics_service.length(p, FamilyKind.B)
    if rule == SignRule.LENGTH_D:
        return statistics_service.length(p, FamilyKind.D)
    if rule == SignRule.ABS_INV:
        return statistics_service.inversions(permutation_service.absolute(p), OrderTag.NATURAL)
    if rule == SignRule.NEG:
        return sum(1 for c in p.z if c)
    if rule == SignRule.SGM:
        return statistics_service.d_stats(p).sgm
    return statistics_service.flag_stats(p).fmaj


@dataclass(frozen=True)
class Summand:
    """sign · ω^(omega_col·col + omega_fmaj·fmaj) · t^(t_scale·t_stat) q^(q_scale·q_stat) · x-part"""

    t_stat: Stat = Stat.ZERO
    q_stat: Stat = Stat.ZERO
    t_scale: int = 1
    q_scale: int = 1
    sign: SignRule = SignRule.NONE
    x_mode: XMode = XMode.NONE
    x_scale: int = 1
    x_width: int = 0
    omega_col: int = 0
    omega_fmaj: int = 0
    only_sgm: Optional[int] = None

    @property
    def arity(self) -> int:
        if self.x_mode == XMode.NONE:
            return 2
        if self.x_mode in (XMode.COL, XMode.COL_BUT_LAST):
            return 3
        return 2 + self.x_width

    def _x_part(self, p: ColoredPermutation) -> Tuple[int, ...]:
        mode = self.x_mode
        if mode == XMode.NONE:
            return ()
        if mode == XMode.COL:
            return (self.x_scale * p.col,)
        if mode == XMode.COL_BUT_LAST:
            return (self.x_scale * sum(1 for c in p.z[:-1] if c),)
        slots = [0] * self.x_width
        if mode == XMode.POSITIONS:
            for i, c in enumerate(p.z):
                slots[i] = c
        else:
            colors = p.z[:-1] if mode == XMode.PAIRS_BUT_LAST else p.z
            for i, c in enumerate(colors):
                slots[2 * i] = slots[2 * i + 1] = (1 if c else 0) if mode == XMode.PAIRS_BUT_LAST else c
        return tuple(slots)

    def __call__(self, p: ColoredPermutation) -> Optional[Tuple[Tuple[int, ...], int, int]]:
        if self.only_sgm is not None and statistics_service.d_stats(p).sgm != self.only_sgm:
            return None
        exp = (self.t_scale * stat_value(p, self.t_stat), self.q_scale * stat_value(p, self.q_stat)) + self._x_part(p)
        omega = self.omega_col * p.col
        if self.omega_fmaj:
            omega += self.omega_fmaj * statistics_service.flag_stats(p).fmaj
        sign = -1 if sign_parity(p, self.sign) % 2 else 1
        return exp, omega, sign


@dataclass(frozen=True)
class StatMismatch:
    """Counts elements where two statistics disagree (constant term only)"""

    left: Stat
    right: Stat
    arity: int = 2

    def __call__(self, p: ColoredPermutation) -> Optional[Tuple[Tuple[int, ...], int, int]]:
        if stat_value(p, self.left) == stat_value(p, self.right):
            return None
        return (0,) * self.arity, 0, 1
