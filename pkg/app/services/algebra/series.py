import logging
from dataclasses import dataclass
from typing import Tuple

from app.services.algebra.polynomial import Poly

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TruncatedSeries:
    """Integer power series in t, kept up to t^cap"""

    cap: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if self.cap < 0:
            raise ValueError(f"series cap must be nonnegative, got {self.cap}")
        if len(self.coeffs) != self.cap + 1:
            raise ValueError(f"expected {self.cap + 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_function(cls, cap: int, fn) -> "TruncatedSeries":
        return cls(cap, tuple(fn(k) for k in range(cap + 1)))

    @classmethod
    def from_poly(cls, poly: Poly, cap: int) -> "TruncatedSeries":
        """Read a t-only integer polynomial (other slots must have exponent 0)"""
        coeffs = [0] * (cap + 1)
        for exp, coef in poly.terms.items():
            if any(exp[1:]):
                raise ValueError(f"term {exp} involves variables other than t")
            if len(coef.coeffs) != 1:
                raise ValueError("series coefficients must be integers")
            if exp[0] <= cap:
                coeffs[exp[0]] += coef.coeffs[0]
        return cls(cap, tuple(coeffs))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.cap, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = [0] * (self.cap + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.cap + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(self.cap, tuple(out))

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Truncated quotient; the divisor's constant term must be ±1"""
        self._check(other)
        lead = other.coeffs[0]
        if lead not in (1, -1):
            raise ValueError(f"divisor constant term {lead} is not a unit")
        out = []
        for k in range(self.cap + 1):
            acc = self.coeffs[k] - sum(out[j] * other.coeffs[k - j] for j in range(k))
            out.append(acc * lead)
        return TruncatedSeries(self.cap, tuple(out))

    def mul_one_minus(self, a: int = 0, b: int = 0) -> "TruncatedSeries":
        """Multiply by (1-t)^a (1-t²)^b"""
        return self * one_minus_power(self.cap, a, b)

    def div_one_minus(self, a: int = 0, b: int = 0) -> "TruncatedSeries":
        """Divide by (1-t)^a (1-t²)^b"""
        return self.divide(one_minus_power(self.cap, a, b))

    def to_json(self) -> dict:
        return {"cap": self.cap, "coeffs": list(self.coeffs)}

    def _check(self, other: "TruncatedSeries"):
        if other.cap != self.cap:
            raise ValueError(f"series caps differ: {self.cap} vs {other.cap}")


def one_minus_power(cap: int, a: int, b: int) -> TruncatedSeries:
    """(1-t)^a (1-t²)^b truncated to t^cap"""
    series = TruncatedSeries(cap, (1,) + (0,) * cap)
    one_minus_t = TruncatedSeries(cap, tuple([1, -1][k] if k < 2 else 0 for k in range(cap + 1)))
    one_minus_t2 = TruncatedSeries(cap, tuple(1 if k == 0 else (-1 if k == 2 else 0) for k in range(cap + 1)))
    for _ in range(a):
        series = series * one_minus_t
    for _ in range(b):
        series = series * one_minus_t2
    return series


def posi2_series(n: int, cap: int) -> TruncatedSeries:
    """Σ (k+1)^n ⌈(k+1)/2⌉ t^k"""
    return TruncatedSeries.from_function(cap, lambda k: (k + 1) ** n * ((k + 2) // 2))


def nega2_series(n: int, cap: int) -> TruncatedSeries:
    """Σ (k+1)^n ⌊(k+1)/2⌋ t^k"""
    return TruncatedSeries.from_function(cap, lambda k: (k + 1) ** n * ((k + 1) // 2))


def nepo_series(n: int, cap: int) -> TruncatedSeries:
    """Σ (2k+1)^n t^{2k}"""
    return TruncatedSeries.from_function(cap, lambda k: (k + 1) ** n if k % 2 == 0 else 0)


def brenti_series(n: int, cap: int) -> TruncatedSeries:
    """Σ (2k+1)^n t^k"""
    return TruncatedSeries.from_function(cap, lambda k: (2 * k + 1) ** n)
