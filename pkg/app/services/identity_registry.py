"""Catalog of signed Euler-Mahonian identities, each checked by brute force.

Every entry has a builder returning both sides as independent computations:
the left side is a signed sum over the large family, the right side a closed
factor times a fresh enumeration of the smaller family (or, for the
cancellation entries, the same summand over the fixed points only).
"""
import logging
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional, Tuple

from app.models.errors import InvariantBreach, SchemaError
from app.models.identity import IdentityInfo, IdentityParams, IdentityReport, SeriesReport
from app.models.involution import InvolutionTag
from app.models.permutation import FamilySpec, RestrictionTuple
from app.services.algebra.cyclotomic import CyclotomicInt
from app.services.algebra.polynomial import Poly, gessel_simion_rhs, product_one_minus, q_factorial
from app.services.algebra.series import (
    TruncatedSeries,
    brenti_series,
    nega2_series,
    nepo_series,
    posi2_series,
)
from app.services.involution_service import involution_service
from app.services.permutation_service import permutation_service
from app.services.summands import SignRule, Stat, StatMismatch, Summand, XMode
from app.utils.parallel import family_sum, stream_sum

logger = logging.getLogger(__name__)

PLAIN = "plain"
REFINED = "refined"
CANCELLATION = "cancellation"
SERIES = "series"

_SIGN_SHORTHAND = {frozenset(): "∅", frozenset({0}): "+", frozenset({1}): "−", frozenset({0, 1}): "±"}


@dataclass
class Sides:
    lhs: Poly
    rhs: Poly
    elements: int
    # size of the left-side family when the sides range over different families
    lhs_elements: Optional[int] = None
    extra: Dict[str, Tuple[Poly, Poly]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    description: str
    kind: str
    required: Tuple[str, ...]
    optional: Tuple[str, ...] = ()
    smallest: Tuple[Tuple[str, int], ...] = (("n", 1),)
    # restriction length as a function of n (refined and restricted entries)
    restriction_length: Optional[Callable[[int], int]] = None
    signed: bool = False


def _series_to_poly(series: TruncatedSeries) -> Poly:
    return Poly.from_terms(
        1, 2, [((k, 0), CyclotomicInt.from_int(1, c)) for k, c in enumerate(series.coeffs) if c]
    )


def _one_minus_t(power: int, t_exp: int = 1, r: int = 1, arity: int = 2) -> Poly:
    """(1 - t^t_exp)^power"""
    return product_one_minus(t_exp, [0] * power, r, arity)


class IdentityRegistry:
    def __init__(self):
        entries = [
            IdentityEntry("macmahon", "Σ_{S_n} q^maj = Σ_{S_n} q^inv = [n]_q!", PLAIN, ("n",)),
            IdentityEntry("A-even", "Σ_{S_2n} (-1)^inv t^des = (1-t)^n Σ_{S_n} t^des", PLAIN, ("n",)),
            IdentityEntry("A-odd", "Σ_{S_2n+1} (-1)^inv t^des = (1-t)^n Σ_{S_n+1} t^des", PLAIN, ("n",)),
            IdentityEntry(
                "A-EM",
                "Σ_{S_2n} (-1)^inv t^des q^maj = ∏(1-tq^(2i-1)) Σ_{S_n} t^des q^(2maj)",
                PLAIN,
                ("n",),
            ),
            IdentityEntry(
                "gessel-simion", "Σ_{S_n} (-1)^inv q^maj = [1]_q [2]_-q [3]_q ... [n]_±q", PLAIN, ("n",)
            ),
            IdentityEntry(
                "G-main-even",
                "Σ_{G_r,2n} χ_1,b t^fdes q^fmaj x^col = ∏(1-t^r q^(r(2i-1))) Σ_{G_r,n} t^fdes (ω^b q)^(2fmaj) x^(2col)",
                PLAIN,
                ("r", "n", "b"),
                smallest=(("r", 1), ("n", 1), ("b", 0)),
            ),
            IdentityEntry(
                "G-main-even-refined",
                "G-main-even over G_r,2n(H) with per-position x_i; right side over G_r,n(S), S ≺ H",
                REFINED,
                ("r", "n", "b"),
                ("restriction",),
                smallest=(("r", 1), ("n", 1), ("b", 0)),
                restriction_length=lambda n: 2 * n,
            ),
            IdentityEntry(
                "G-main-odd",
                "Σ_{G_r,n} χ_0,b t^fdes q^fmaj x^col = Σ_{G_r,n} t^fdes (ω^b q)^fmaj x^col",
                PLAIN,
                ("r", "n", "b"),
                smallest=(("r", 1), ("n", 1), ("b", 0)),
            ),
            IdentityEntry(
                "G-main-odd-refined",
                "G-main-odd over G_r,n(S) with per-position x_i",
                REFINED,
                ("r", "n", "b"),
                ("restriction",),
                smallest=(("r", 1), ("n", 1), ("b", 0)),
                restriction_length=lambda n: n,
            ),
            IdentityEntry(
                "B-EM-length",
                "Σ_{B_2n} (-1)^ℓ_B t^fdes q^fmaj x^neg = ∏(1-t²q^(4i-2)) Σ_{B_n} t^fdes q^(2fmaj) x^(2neg)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-EM-length-refined",
                "B-EM-length over B_2n(H) with ∏_{Neg} x_i; right side over B_n(S) with ∏_{Neg} x_2i-1 x_2i",
                REFINED,
                ("n",),
                ("restriction",),
                restriction_length=lambda n: 2 * n,
                signed=True,
            ),
            IdentityEntry(
                "B-EM-absinv",
                "Σ_{B_2n} (-1)^inv|π| t^fdes q^fmaj x^neg = ∏(1-t²q^(4i-2)) Σ_{B_n} t^fdes q^(2fmaj) x^(2neg)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-EM-absinv-refined",
                "B-EM-absinv over B_2n(H) with ∏_{Neg} x_i",
                REFINED,
                ("n",),
                ("restriction",),
                restriction_length=lambda n: 2 * n,
                signed=True,
            ),
            IdentityEntry(
                "B-neg-flip",
                "Σ_{B_n} (-1)^neg t^fdes q^fmaj x^neg = Σ_{B_n} t^fdes (-q)^fmaj x^neg",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-neg-flip-refined",
                "B-neg-flip over B_n(S) with ∏_{Neg} x_i",
                REFINED,
                ("n",),
                ("restriction",),
                restriction_length=lambda n: n,
                signed=True,
            ),
            IdentityEntry(
                "B-signedM", "Σ_{B_2n} (-1)^ℓ_B q^fmaj = ∏(1-q^(4i-2)) Σ_{B_n} q^(2fmaj)", PLAIN, ("n",), signed=True
            ),
            IdentityEntry(
                "B-odd-absinv",
                "Σ_{B_2n+1} (-1)^inv|π| t^fdes = (1-t²)^n Σ_{B_n+1} t^fdes",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-odd-absinv-refined",
                "Σ_{B_2n+1(H)} (-1)^inv|π| t^fdes = (1-t²)^n Σ_{S_k ◁ H} Σ_{B_n+1(S_k)} t^fdes",
                REFINED,
                ("n",),
                ("restriction",),
                restriction_length=lambda n: 2 * n + 1,
                signed=True,
            ),
            IdentityEntry(
                "B-odd-length",
                "Σ_{B_2n+1} (-1)^ℓ_B t^fdes = (1-t²)^n (1-t) Σ_{B_n} t^(2des_B)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "lemma-lin",
                "Σ_{B_n+1} (-1)^sgm t^fdes = (1-t) Σ_{B_n} t^(2des_B)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "eq-ch",
                "fdes(π) = ch(π) + 2·#{i ∈ Des_F(π) : δ_i = 0} for every π in B_n",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "lin-posi2",
                "Σ_{B_n+1, sgm=0} t^fdes / ((1-t)(1-t²)^(n+1)) = Σ (k+1)^n ⌈(k+1)/2⌉ t^k",
                SERIES,
                ("n", "max_degree"),
                smallest=(("n", 1), ("max_degree", 0)),
                signed=True,
            ),
            IdentityEntry(
                "lin-nega2",
                "Σ_{B_n+1, sgm=1} t^fdes / ((1-t)(1-t²)^(n+1)) = Σ (k+1)^n ⌊(k+1)/2⌋ t^k",
                SERIES,
                ("n", "max_degree"),
                smallest=(("n", 1), ("max_degree", 0)),
                signed=True,
            ),
            IdentityEntry(
                "lin-nepo",
                "Σ_{B_n+1} (-1)^sgm t^fdes / ((1-t)(1-t²)^(n+1)) = Σ (2k+1)^n t^(2k)",
                SERIES,
                ("n", "max_degree"),
                smallest=(("n", 1), ("max_degree", 0)),
                signed=True,
            ),
            IdentityEntry(
                "brenti-series",
                "Σ_{B_n} t^des_B / (1-t)^(n+1) = Σ (2k+1)^n t^k",
                SERIES,
                ("n", "max_degree"),
                smallest=(("n", 1), ("max_degree", 0)),
                signed=True,
            ),
            IdentityEntry(
                "D-EM-even",
                "Σ_{D_2n} (-1)^ℓ_D t^ddes q^dmaj x^neg = ∏(1-t²q^(4i-2)) Σ_{D_n} t^ddes q^(2dmaj) x^(2|Neg∖{n}|)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "D-EM-even-refined",
                "D-EM-even with distinct x_1..x_2n; right side carries ∏_{Neg∖{n}} x_2i-1 x_2i",
                REFINED,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "D-odd-length",
                "Σ_{D_2n+1} (-1)^ℓ_D t^ddes = (1-t²)^n Σ_{D_n+1} t^ddes",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-GF-length",
                "Σ_{B_n} (-1)^ℓ_B t^des_B q^maj_B = Σ_{B_n} (-1)^neg t^des_B q^maj_B = ∏_{i<n}(1-tq^i)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "B-GF-absinv",
                "Σ_{B_n} (-1)^inv|π| t^des_B q^maj_B = (1+(-1)^(n-1) tq^(n-1)) ∏_{i<n-1}(1-tq^i)",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "D-GF",
                "Σ_{D_n} (-1)^ℓ_D t^des_D q^maj_D = (1+(-1)^(n-1) tq^(n-1)) ∏_{i<n-1}(1-tq^i), and 1 at n=1",
                PLAIN,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-phi",
                "χ_1,b t^fdes q^fmaj ∏x_i^z_i summed over G_r,2n(H) equals the sum over the phi fixed points",
                CANCELLATION,
                ("r", "n", "b"),
                ("restriction",),
                smallest=(("r", 1), ("n", 1), ("b", 0)),
                restriction_length=lambda n: 2 * n,
            ),
            IdentityEntry(
                "cancel-B-absinv",
                "(-1)^inv|π| t^fdes summed over B_2n+1(H) equals the sum over the phi fixed points",
                CANCELLATION,
                ("n",),
                ("restriction",),
                restriction_length=lambda n: 2 * n + 1,
                signed=True,
            ),
            IdentityEntry(
                "cancel-B-length",
                "(-1)^ℓ_B t^fdes summed over B_2n+1 equals the sum over the phi fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-D-even",
                "(-1)^ℓ_D t^ddes q^dmaj ∏_{Neg} x_i summed over D_2n equals the sum over the eta fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-D-odd",
                "(-1)^ℓ_D t^ddes summed over D_2n+1 equals the sum over the iota fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-theta-neg",
                "(-1)^neg t^des_B q^maj_B summed over B_n equals the sum over the theta fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-theta-length",
                "(-1)^ℓ_B t^des_B q^maj_B summed over B_n equals the sum over the theta fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-psi-b",
                "(-1)^inv|π| t^des_B q^maj_B summed over B_n equals the sum over the psi-b fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
            IdentityEntry(
                "cancel-psi-d",
                "(-1)^ℓ_D t^des_D q^maj_D summed over D_n equals the sum over the psi-d fixed points",
                CANCELLATION,
                ("n",),
                signed=True,
            ),
        ]
        self._entries: Dict[str, IdentityEntry] = {e.id: e for e in entries}
        self._builders: Dict[str, Callable[[IdentityParams, int], Sides]] = {
            "macmahon": self._macmahon,
            "A-even": self._a_even,
            "A-odd": self._a_odd,
            "A-EM": self._a_em,
            "gessel-simion": self._gessel_simion,
            "G-main-even": self._g_main_even,
            "G-main-even-refined": self._g_main_even_refined,
            "G-main-odd": self._g_main_odd,
            "G-main-odd-refined": self._g_main_odd_refined,
            "B-EM-length": lambda p, j: self._b_em(p, j, SignRule.LENGTH_B),
            "B-EM-length-refined": lambda p, j: self._b_em_refined(p, j, SignRule.LENGTH_B),
            "B-EM-absinv": lambda p, j: self._b_em(p, j, SignRule.ABS_INV),
            "B-EM-absinv-refined": lambda p, j: self._b_em_refined(p, j, SignRule.ABS_INV),
            "B-neg-flip": self._b_neg_flip,
            "B-neg-flip-refined": self._b_neg_flip_refined,
            "B-signedM": self._b_signed_m,
            "B-odd-absinv": self._b_odd_absinv,
            "B-odd-absinv-refined": self._b_odd_absinv_refined,
            "B-odd-length": self._b_odd_length,
            "lemma-lin": self._lemma_lin,
            "eq-ch": self._eq_ch,
            "lin-posi2": partial(self._series_sides, "lin-posi2"),
            "lin-nega2": partial(self._series_sides, "lin-nega2"),
            "lin-nepo": partial(self._series_sides, "lin-nepo"),
            "brenti-series": partial(self._series_sides, "brenti-series"),
            "D-EM-even": self._d_em_even,
            "D-EM-even-refined": self._d_em_even_refined,
            "D-odd-length": self._d_odd_length,
            "B-GF-length": self._b_gf_length,
            "B-GF-absinv": self._b_gf_absinv,
            "D-GF": self._d_gf,
            "cancel-phi": self._cancel_phi,
            "cancel-B-absinv": self._cancel_b_absinv,
            "cancel-B-length": self._cancel_b_length,
            "cancel-D-even": self._cancel_d_even,
            "cancel-D-odd": self._cancel_d_odd,
            "cancel-theta-neg": lambda p, j: self._cancel_type_b(p, j, InvolutionTag.THETA, SignRule.NEG),
            "cancel-theta-length": lambda p, j: self._cancel_type_b(p, j, InvolutionTag.THETA, SignRule.LENGTH_B),
            "cancel-psi-b": lambda p, j: self._cancel_type_b(p, j, InvolutionTag.PSI_B, SignRule.ABS_INV),
            "cancel-psi-d": self._cancel_psi_d,
        }

    # Catalog

    def list_identities(self) -> List[IdentityInfo]:
        return [
            IdentityInfo(id=e.id, description=e.description, params=list(e.required), optional=list(e.optional))
            for e in self._entries.values()
        ]

    def entry(self, identity_id: str) -> IdentityEntry:
        if identity_id not in self._entries:
            raise SchemaError(f"unknown identity '{identity_id}'")
        return self._entries[identity_id]

    def ids(self, kind: Optional[str] = None) -> List[str]:
        return [e.id for e in self._entries.values() if kind is None or e.kind == kind]

    def smallest_params(self, identity_id: str) -> IdentityParams:
        return IdentityParams(**dict(self.entry(identity_id).smallest))

    def validate(self, identity_id: str, params: IdentityParams) -> IdentityEntry:
        """Check params against the entry's schema; raises SchemaError"""
        entry = self.entry(identity_id)
        given = {k for k in ("r", "n", "b", "restriction", "max_degree") if getattr(params, k) is not None}
        missing = [k for k in entry.required if k not in given]
        if missing:
            raise SchemaError(f"{identity_id} needs {', '.join(missing)}")
        unexpected = sorted(given - set(entry.required) - set(entry.optional))
        if unexpected:
            raise SchemaError(f"{identity_id} does not take {', '.join(unexpected)}")
        if params.n < 1:
            raise SchemaError(f"{identity_id} needs n >= 1, got {params.n}")
        if params.b is not None and params.b >= params.r:
            raise SchemaError(f"character index b={params.b} needs 0 <= b < r={params.r}")
        restriction = params.restriction
        if restriction is not None:
            expected_r = 2 if entry.signed else params.r
            if restriction.r != expected_r:
                raise SchemaError(f"{identity_id} restriction must be over r={expected_r}, got r={restriction.r}")
            expected_n = entry.restriction_length(params.n)
            if restriction.n != expected_n:
                raise SchemaError(f"{identity_id} restriction must have length {expected_n}, got {restriction.n}")
        return entry

    # Verification

    def verify(
        self, identity_id: str, params: IdentityParams, jobs: int = 1, timings: bool = False
    ) -> IdentityReport:
        entry = self.validate(identity_id, params)
        logger.info(f"Verifying {identity_id} with {params.to_json()} (jobs={jobs})")
        started = time.perf_counter()
        sides = self._builders[identity_id](params, jobs)
        elapsed = (time.perf_counter() - started) * 1000 if timings else None

        if sides.lhs.r != sides.rhs.r or sides.lhs.arity != sides.rhs.arity:
            raise InvariantBreach(f"{identity_id} built sides over different rings")
        equal = sides.lhs == sides.rhs and all(poly == expected for poly, expected in sides.extra.values())
        if equal:
            logger.info(f"✅ {identity_id} holds over {sides.elements} elements")
        else:
            logger.warning(f"❌ {identity_id} fails for {params.to_json()}")
        return IdentityReport(
            id=entry.id,
            params=params.to_json(),
            equal=equal,
            elements=sides.elements,
            lhs_elements=sides.elements if sides.lhs_elements is None else sides.lhs_elements,
            elapsed_ms=round(elapsed, 3) if elapsed is not None else None,
            lhs=sides.lhs.to_json(),
            rhs=sides.rhs.to_json(),
            lhs_text=sides.lhs.pretty(),
            rhs_text=sides.rhs.pretty(),
            extra={name: poly.to_json() for name, (poly, _) in sides.extra.items()},
            notes=sides.notes,
        )

    def verify_refined(
        self,
        identity_id: str,
        restriction: Optional[RestrictionTuple],
        params: IdentityParams,
        jobs: int = 1,
        timings: bool = False,
    ) -> IdentityReport:
        if self.entry(identity_id).kind != REFINED:
            raise SchemaError(f"{identity_id} is not a refined identity")
        if restriction is not None:
            params = params.model_copy(update={"restriction": restriction})
        return self.verify(identity_id, params, jobs, timings)

    def cancellation_check(
        self, identity_id: str, params: IdentityParams, jobs: int = 1, timings: bool = False
    ) -> IdentityReport:
        if self.entry(identity_id).kind != CANCELLATION:
            raise SchemaError(f"{identity_id} is not a cancellation check")
        return self.verify(identity_id, params, jobs, timings)

    def series(self, identity_id: str, n: int, max_degree: int, jobs: int = 1) -> SeriesReport:
        entry = self.entry(identity_id)
        if entry.kind != SERIES:
            raise SchemaError(f"{identity_id} is not a series identity")
        self.validate(identity_id, IdentityParams(n=n, max_degree=max_degree))
        lhs, rhs, _ = self._series_pair(identity_id, n, max_degree, jobs)
        return SeriesReport(
            id=identity_id, n=n, max_degree=max_degree, lhs=list(lhs.coeffs), rhs=list(rhs.coeffs), equal=lhs == rhs
        )

    # Builders: type A

    def _macmahon(self, params: IdentityParams, jobs: int) -> Sides:
        spec = FamilySpec.sym(params.n)
        lhs, count = family_sum(spec, Summand(q_stat=Stat.MAJ), 1, 2, jobs)
        inv, count_inv = family_sum(spec, Summand(q_stat=Stat.INV), 1, 2, jobs)
        return Sides(
            lhs, q_factorial(params.n), count + count_inv, lhs_elements=count, extra={"inv": (inv, q_factorial(params.n))}
        )

    def _a_even(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(FamilySpec.sym(2 * n), Summand(t_stat=Stat.DES, sign=SignRule.INV), 1, 2, jobs)
        small, c2 = family_sum(FamilySpec.sym(n), Summand(t_stat=Stat.DES), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(n) * small, c1 + c2, lhs_elements=c1)

    def _a_odd(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(FamilySpec.sym(2 * n + 1), Summand(t_stat=Stat.DES, sign=SignRule.INV), 1, 2, jobs)
        small, c2 = family_sum(FamilySpec.sym(n + 1), Summand(t_stat=Stat.DES), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(n) * small, c1 + c2, lhs_elements=c1)

    def _a_em(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.sym(2 * n), Summand(t_stat=Stat.DES, q_stat=Stat.MAJ, sign=SignRule.INV), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.sym(n), Summand(t_stat=Stat.DES, q_stat=Stat.MAJ, q_scale=2), 1, 2, jobs)
        factor = product_one_minus(1, [2 * i - 1 for i in range(1, n + 1)])
        note = "product taken as ∏(1 − t q^(2i−1)); an extra exponent n on each factor disagrees with brute force"
        return Sides(lhs, factor * small, c1 + c2, lhs_elements=c1, notes=[note])

    def _gessel_simion(self, params: IdentityParams, jobs: int) -> Sides:
        lhs, count = family_sum(FamilySpec.sym(params.n), Summand(q_stat=Stat.MAJ, sign=SignRule.INV), 1, 2, jobs)
        return Sides(lhs, gessel_simion_rhs(params.n), count)

    # Builders: colored groups

    def _g_even_sides(self, r: int, n: int, b: int, big: FamilySpec, small: FamilySpec, refined: bool, jobs: int) -> Sides:
        if refined:
            lhs_x = dict(x_mode=XMode.POSITIONS, x_width=2 * n)
            rhs_x = dict(x_mode=XMode.PAIRS, x_width=2 * n)
        else:
            lhs_x = dict(x_mode=XMode.COL)
            rhs_x = dict(x_mode=XMode.COL, x_scale=2)
        lhs_summand = Summand(Stat.FDES, Stat.FMAJ, sign=SignRule.LENGTH_G, omega_col=b, **lhs_x)
        rhs_summand = Summand(Stat.FDES, Stat.FMAJ, q_scale=2, omega_fmaj=2 * b, **rhs_x)
        arity = lhs_summand.arity
        lhs, c1 = family_sum(big, lhs_summand, r, arity, jobs)
        small_sum, c2 = family_sum(small, rhs_summand, r, arity, jobs)
        factor = product_one_minus(r, [r * (2 * i - 1) for i in range(1, n + 1)], r, arity)
        return Sides(lhs, factor * small_sum, c1 + c2, lhs_elements=c1)

    def _g_main_even(self, params: IdentityParams, jobs: int) -> Sides:
        r, n = params.r, params.n
        return self._g_even_sides(r, n, params.b, FamilySpec.colored(r, 2 * n), FamilySpec.colored(r, n), False, jobs)

    def _g_main_even_refined(self, params: IdentityParams, jobs: int) -> Sides:
        r, n = params.r, params.n
        h = params.restriction or RestrictionTuple.full(r, 2 * n)
        s = permutation_service.refine_restriction(h)
        sides = self._g_even_sides(r, n, params.b, FamilySpec.restricted(h), FamilySpec.restricted(s), True, jobs)
        sides.notes.append(f"S = {permutation_service.restriction_to_json(s)}")
        return sides

    def _g_odd_sides(self, r: int, b: int, spec: FamilySpec, refined: bool, jobs: int) -> Sides:
        x = dict(x_mode=XMode.POSITIONS, x_width=spec.n) if refined else dict(x_mode=XMode.COL)
        lhs_summand = Summand(Stat.FDES, Stat.FMAJ, omega_col=b, **x)
        rhs_summand = Summand(Stat.FDES, Stat.FMAJ, omega_fmaj=b, **x)
        lhs, c1 = family_sum(spec, lhs_summand, r, lhs_summand.arity, jobs)
        rhs, c2 = family_sum(spec, rhs_summand, r, rhs_summand.arity, jobs)
        return Sides(lhs, rhs, c1 + c2, lhs_elements=c1)

    def _g_main_odd(self, params: IdentityParams, jobs: int) -> Sides:
        return self._g_odd_sides(params.r, params.b, FamilySpec.colored(params.r, params.n), False, jobs)

    def _g_main_odd_refined(self, params: IdentityParams, jobs: int) -> Sides:
        s = params.restriction or RestrictionTuple.full(params.r, params.n)
        return self._g_odd_sides(params.r, params.b, FamilySpec.restricted(s), True, jobs)

    # Builders: type B

    def _b_em_sides(self, n: int, sign: SignRule, big: FamilySpec, small: FamilySpec, refined: bool, jobs: int) -> Sides:
        if refined:
            lhs_x = dict(x_mode=XMode.POSITIONS, x_width=2 * n)
            rhs_x = dict(x_mode=XMode.PAIRS, x_width=2 * n)
        else:
            lhs_x = dict(x_mode=XMode.COL)
            rhs_x = dict(x_mode=XMode.COL, x_scale=2)
        lhs_summand = Summand(Stat.FDES, Stat.FMAJ, sign=sign, **lhs_x)
        rhs_summand = Summand(Stat.FDES, Stat.FMAJ, q_scale=2, **rhs_x)
        arity = lhs_summand.arity
        lhs, c1 = family_sum(big, lhs_summand, 1, arity, jobs)
        small_sum, c2 = family_sum(small, rhs_summand, 1, arity, jobs)
        factor = product_one_minus(2, [4 * i - 2 for i in range(1, n + 1)], 1, arity)
        return Sides(lhs, factor * small_sum, c1 + c2, lhs_elements=c1)

    def _b_em(self, params: IdentityParams, jobs: int, sign: SignRule) -> Sides:
        n = params.n
        return self._b_em_sides(
            n, sign, FamilySpec.hyperoctahedral(2 * n), FamilySpec.hyperoctahedral(n), False, jobs
        )

    def _b_em_refined(self, params: IdentityParams, jobs: int, sign: SignRule) -> Sides:
        n = params.n
        h = params.restriction or RestrictionTuple.full(2, 2 * n)
        s = permutation_service.refine_restriction(h)
        sides = self._b_em_sides(n, sign, FamilySpec.restricted(h), FamilySpec.restricted(s), True, jobs)
        sides.notes.append(f"S = {self._shorthand(s)}")
        return sides

    def _neg_flip_sides(self, spec: FamilySpec, refined: bool, jobs: int) -> Sides:
        x = dict(x_mode=XMode.POSITIONS, x_width=spec.n) if refined else dict(x_mode=XMode.COL)
        lhs_summand = Summand(Stat.FDES, Stat.FMAJ, sign=SignRule.NEG, **x)
        rhs_summand = Summand(Stat.FDES, Stat.FMAJ, sign=SignRule.FMAJ, **x)
        lhs, c1 = family_sum(spec, lhs_summand, 1, lhs_summand.arity, jobs)
        rhs, c2 = family_sum(spec, rhs_summand, 1, rhs_summand.arity, jobs)
        return Sides(lhs, rhs, c1 + c2, lhs_elements=c1)

    def _b_neg_flip(self, params: IdentityParams, jobs: int) -> Sides:
        return self._neg_flip_sides(FamilySpec.hyperoctahedral(params.n), False, jobs)

    def _b_neg_flip_refined(self, params: IdentityParams, jobs: int) -> Sides:
        s = params.restriction or RestrictionTuple.full(2, params.n)
        return self._neg_flip_sides(FamilySpec.restricted(s), True, jobs)

    def _b_signed_m(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.hyperoctahedral(2 * n), Summand(q_stat=Stat.FMAJ, sign=SignRule.LENGTH_B), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.hyperoctahedral(n), Summand(q_stat=Stat.FMAJ, q_scale=2), 1, 2, jobs)
        factor = product_one_minus(0, [4 * i - 2 for i in range(1, n + 1)])
        return Sides(lhs, factor * small, c1 + c2, lhs_elements=c1)

    def _b_odd_absinv(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.hyperoctahedral(2 * n + 1), Summand(t_stat=Stat.FDES, sign=SignRule.ABS_INV), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.hyperoctahedral(n + 1), Summand(t_stat=Stat.FDES), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(n, 2) * small, c1 + c2, lhs_elements=c1)

    def _b_odd_absinv_refined(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        h = params.restriction or RestrictionTuple.full(2, 2 * n + 1)
        lhs, count = family_sum(
            FamilySpec.restricted(h), Summand(t_stat=Stat.FDES, sign=SignRule.ABS_INV), 1, 2, jobs
        )
        lhs_count = count
        small = Poly.zero(1, 2)
        notes = []
        for tilde in permutation_service.tilde_family(h):
            part, c = family_sum(FamilySpec.tilde_b(tilde), Summand(t_stat=Stat.FDES), 1, 2, jobs)
            small = small + part
            count += c
            notes.append(f"S_{tilde.k} = {self._shorthand(tilde.base, tilde.k)}: {c} elements")
        return Sides(lhs, _one_minus_t(n, 2) * small, count, lhs_elements=lhs_count, notes=notes)

    def _b_odd_length(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.hyperoctahedral(2 * n + 1), Summand(t_stat=Stat.FDES, sign=SignRule.LENGTH_B), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.hyperoctahedral(n), Summand(t_stat=Stat.DES_B, t_scale=2), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(n, 2) * _one_minus_t(1) * small, c1 + c2, lhs_elements=c1)

    def _lemma_lin(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.hyperoctahedral(n + 1), Summand(t_stat=Stat.FDES, sign=SignRule.SGM), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.hyperoctahedral(n), Summand(t_stat=Stat.DES_B, t_scale=2), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(1) * small, c1 + c2, lhs_elements=c1)

    def _eq_ch(self, params: IdentityParams, jobs: int) -> Sides:
        spec = FamilySpec.hyperoctahedral(params.n)
        lhs, c1 = family_sum(spec, Summand(t_stat=Stat.FDES), 1, 2, jobs)
        rhs, c2 = family_sum(spec, Summand(t_stat=Stat.CH_FORMULA), 1, 2, jobs)
        mismatch, c3 = family_sum(spec, StatMismatch(Stat.FDES, Stat.CH_FORMULA), 1, 2, jobs)
        return Sides(lhs, rhs, c1 + c2 + c3, lhs_elements=c1, extra={"mismatches": (mismatch, Poly.zero(1, 2))})

    def _series_pair(self, identity_id: str, n: int, cap: int, jobs: int) -> Tuple[TruncatedSeries, TruncatedSeries, int]:
        if identity_id == "brenti-series":
            numerator, count = family_sum(FamilySpec.hyperoctahedral(n), Summand(t_stat=Stat.DES_B), 1, 2, jobs)
            lhs = TruncatedSeries.from_poly(numerator, cap).div_one_minus(n + 1, 0)
            return lhs, brenti_series(n, cap), count
        summand, closed = {
            "lin-posi2": (Summand(t_stat=Stat.FDES, only_sgm=0), posi2_series),
            "lin-nega2": (Summand(t_stat=Stat.FDES, only_sgm=1), nega2_series),
            "lin-nepo": (Summand(t_stat=Stat.FDES, sign=SignRule.SGM), nepo_series),
        }[identity_id]
        numerator, count = family_sum(FamilySpec.hyperoctahedral(n + 1), summand, 1, 2, jobs)
        lhs = TruncatedSeries.from_poly(numerator, cap).div_one_minus(1, n + 1)
        return lhs, closed(n, cap), count

    def _series_sides(self, identity_id: str, params: IdentityParams, jobs: int) -> Sides:
        lhs, rhs, count = self._series_pair(identity_id, params.n, params.max_degree, jobs)
        return Sides(
            _series_to_poly(lhs), _series_to_poly(rhs), count, notes=[f"series truncated after t^{params.max_degree}"]
        )

    # Builders: type D

    def _d_em_even(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs_summand = Summand(Stat.DDES, Stat.DMAJ, sign=SignRule.LENGTH_D, x_mode=XMode.COL)
        rhs_summand = Summand(Stat.DDES, Stat.DMAJ, q_scale=2, x_mode=XMode.COL_BUT_LAST, x_scale=2)
        return self._d_em_sides(n, lhs_summand, rhs_summand, jobs)

    def _d_em_even_refined(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs_summand = Summand(
            Stat.DDES, Stat.DMAJ, sign=SignRule.LENGTH_D, x_mode=XMode.POSITIONS, x_width=2 * n
        )
        rhs_summand = Summand(Stat.DDES, Stat.DMAJ, q_scale=2, x_mode=XMode.PAIRS_BUT_LAST, x_width=2 * n)
        return self._d_em_sides(n, lhs_summand, rhs_summand, jobs)

    def _d_em_sides(self, n: int, lhs_summand: Summand, rhs_summand: Summand, jobs: int) -> Sides:
        arity = lhs_summand.arity
        lhs, c1 = family_sum(FamilySpec.even_signed(2 * n), lhs_summand, 1, arity, jobs)
        small, c2 = family_sum(FamilySpec.even_signed(n), rhs_summand, 1, arity, jobs)
        factor = product_one_minus(2, [4 * i - 2 for i in range(1, n + 1)], 1, arity)
        return Sides(lhs, factor * small, c1 + c2, lhs_elements=c1)

    def _d_odd_length(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, c1 = family_sum(
            FamilySpec.even_signed(2 * n + 1), Summand(t_stat=Stat.DDES, sign=SignRule.LENGTH_D), 1, 2, jobs
        )
        small, c2 = family_sum(FamilySpec.even_signed(n + 1), Summand(t_stat=Stat.DDES), 1, 2, jobs)
        return Sides(lhs, _one_minus_t(n, 2) * small, c1 + c2, lhs_elements=c1)

    # Builders: sign-balance generating functions

    @staticmethod
    def _alternating_product(n: int) -> Poly:
        """(1 + (-1)^(n-1) t q^(n-1)) ∏_{i=0}^{n-2} (1 - t q^i)"""
        head = Poly.one(1, 2) + Poly.monomial(1, 2, (1, n - 1), (-1) ** (n - 1))
        return head * product_one_minus(1, list(range(n - 1)))

    def _b_gf_length(self, params: IdentityParams, jobs: int) -> Sides:
        spec = FamilySpec.hyperoctahedral(params.n)
        lhs, c1 = family_sum(spec, Summand(Stat.DES_B, Stat.MAJ_B, sign=SignRule.LENGTH_B), 1, 2, jobs)
        neg, c2 = family_sum(spec, Summand(Stat.DES_B, Stat.MAJ_B, sign=SignRule.NEG), 1, 2, jobs)
        rhs = product_one_minus(1, list(range(params.n)))
        return Sides(lhs, rhs, c1 + c2, lhs_elements=c1, extra={"neg-sign": (neg, rhs)})

    def _b_gf_absinv(self, params: IdentityParams, jobs: int) -> Sides:
        spec = FamilySpec.hyperoctahedral(params.n)
        lhs, count = family_sum(spec, Summand(Stat.DES_B, Stat.MAJ_B, sign=SignRule.ABS_INV), 1, 2, jobs)
        return Sides(lhs, self._alternating_product(params.n), count)

    def _d_gf(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        lhs, count = family_sum(
            FamilySpec.even_signed(n), Summand(Stat.DES_D, Stat.MAJ_D, sign=SignRule.LENGTH_D), 1, 2, jobs
        )
        if n == 1:
            return Sides(lhs, Poly.one(1, 2), count, notes=["D_1 is trivial; the sum is 1"])
        return Sides(lhs, self._alternating_product(n), count)

    # Builders: cancellation lemmas

    def _fixed_point_sides(
        self, tag: InvolutionTag, spec: FamilySpec, summand: Summand, ring: int, jobs: int
    ) -> Sides:
        whole, c1 = family_sum(spec, summand, ring, summand.arity, jobs)
        fixed, c2 = stream_sum(involution_service.fixed_points(tag, spec), summand, ring, summand.arity)
        return Sides(whole, fixed, c1 + c2, lhs_elements=c1, notes=[f"{c2} fixed points of {tag.value}"])

    def _cancel_phi(self, params: IdentityParams, jobs: int) -> Sides:
        r, n = params.r, params.n
        h = params.restriction or RestrictionTuple.full(r, 2 * n)
        summand = Summand(
            Stat.FDES, Stat.FMAJ, sign=SignRule.LENGTH_G, omega_col=params.b, x_mode=XMode.POSITIONS, x_width=2 * n
        )
        return self._fixed_point_sides(InvolutionTag.PHI, FamilySpec.restricted(h), summand, r, jobs)

    def _cancel_b_absinv(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        h = params.restriction or RestrictionTuple.full(2, 2 * n + 1)
        summand = Summand(t_stat=Stat.FDES, sign=SignRule.ABS_INV)
        return self._fixed_point_sides(InvolutionTag.PHI, FamilySpec.restricted(h), summand, 1, jobs)

    def _cancel_b_length(self, params: IdentityParams, jobs: int) -> Sides:
        summand = Summand(t_stat=Stat.FDES, sign=SignRule.LENGTH_B)
        spec = FamilySpec.hyperoctahedral(2 * params.n + 1)
        return self._fixed_point_sides(InvolutionTag.PHI, spec, summand, 1, jobs)

    def _cancel_d_even(self, params: IdentityParams, jobs: int) -> Sides:
        n = params.n
        summand = Summand(
            Stat.DDES, Stat.DMAJ, sign=SignRule.LENGTH_D, x_mode=XMode.POSITIONS, x_width=2 * n
        )
        return self._fixed_point_sides(InvolutionTag.ETA, FamilySpec.even_signed(2 * n), summand, 1, jobs)

    def _cancel_d_odd(self, params: IdentityParams, jobs: int) -> Sides:
        summand = Summand(t_stat=Stat.DDES, sign=SignRule.LENGTH_D)
        spec = FamilySpec.even_signed(2 * params.n + 1)
        return self._fixed_point_sides(InvolutionTag.IOTA, spec, summand, 1, jobs)

    def _cancel_type_b(self, params: IdentityParams, jobs: int, tag: InvolutionTag, sign: SignRule) -> Sides:
        summand = Summand(Stat.DES_B, Stat.MAJ_B, sign=sign)
        return self._fixed_point_sides(tag, FamilySpec.hyperoctahedral(params.n), summand, 1, jobs)

    def _cancel_psi_d(self, params: IdentityParams, jobs: int) -> Sides:
        summand = Summand(Stat.DES_D, Stat.MAJ_D, sign=SignRule.LENGTH_D)
        return self._fixed_point_sides(InvolutionTag.PSI_D, FamilySpec.even_signed(params.n), summand, 1, jobs)

    # Helpers

    @staticmethod
    def _shorthand(restriction: RestrictionTuple, tilde: Optional[int] = None) -> str:
        """Render an r=2 tuple with +, −, ±, ∅ and a tilde mark on entry `tilde`"""
        items = []
        for i, entry in enumerate(restriction.entries, start=1):
            text = _SIGN_SHORTHAND.get(entry, str(sorted(entry)))
            items.append(f"~{text}" if i == tilde else text)
        return "(" + ", ".join(items) + ")"


identity_registry = IdentityRegistry()
