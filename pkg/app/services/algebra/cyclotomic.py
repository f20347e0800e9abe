"""Exact arithmetic in Z[ω], ω a primitive r-th root of unity.

Elements are stored as their canonical residue modulo the r-th cyclotomic
polynomial Φ_r, so equality is plain coefficient equality.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple, Union

from sympy import Poly as SymPoly, divisors, symbols

logger = logging.getLogger(__name__)

_X = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_polynomial(r: int) -> Tuple[int, ...]:
    """Coefficients of Φ_r, constant term first, by exact division of x^r - 1"""
    if r < 1:
        raise ValueError(f"cyclotomic order must be positive, got {r}")
    quotient = SymPoly(_X**r - 1, _X)
    for d in divisors(r)[:-1]:
        divisor = SymPoly.from_list(list(reversed(cyclotomic_polynomial(d))), _X)
        quotient, remainder = quotient.div(divisor)
        if not remainder.is_zero:
            raise ArithmeticError(f"Φ_{d} does not divide x^{r} - 1")
    return tuple(int(c) for c in reversed(quotient.all_coeffs()))


def totient_degree(r: int) -> int:
    return len(cyclotomic_polynomial(r)) - 1


@lru_cache(maxsize=None)
def _power_table(r: int) -> Tuple[Tuple[int, ...], ...]:
    """Residues of x^k mod Φ_r for every k a product or ω-power can reach"""
    phi = cyclotomic_polynomial(r)
    degree = len(phi) - 1
    size = max(2 * degree - 1, r, 1)
    table = []
    current = [0] * degree
    current[0] = 1
    for _ in range(size):
        table.append(tuple(current))
        top = current[-1]
        current = [0] + current[:-1]
        if top:
            # x^degree = -(φ_0 + ... + φ_{degree-1} x^{degree-1})
            for i in range(degree):
                current[i] -= top * phi[i]
    return tuple(table)


def _reduce(r: int, vector: Sequence[int]) -> Tuple[int, ...]:
    table = _power_table(r)
    degree = totient_degree(r)
    if len(vector) <= degree:
        return tuple(vector) + (0,) * (degree - len(vector))
    result = [0] * degree
    for k, value in enumerate(vector):
        if value:
            row = table[k] if k < len(table) else table[k % r]
            for i, c in enumerate(row):
                if c:
                    result[i] += value * c
    return tuple(result)


@dataclass(frozen=True, slots=True)
class CyclotomicInt:
    r: int
    coeffs: Tuple[int, ...]

    @classmethod
    def from_int(cls, r: int, value: int) -> "CyclotomicInt":
        return cls(r, (value,) + (0,) * (totient_degree(r) - 1))

    @classmethod
    def zero(cls, r: int) -> "CyclotomicInt":
        return cls.from_int(r, 0)

    @classmethod
    def one(cls, r: int) -> "CyclotomicInt":
        return cls.from_int(r, 1)

    @classmethod
    def from_vector(cls, r: int, vector: Sequence[int]) -> "CyclotomicInt":
        """Reduce an arbitrary coefficient vector (ascending powers of ω)"""
        return cls(r, _reduce(r, vector))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other: Union["CyclotomicInt", int]) -> "CyclotomicInt":
        if isinstance(other, int):
            return CyclotomicInt.from_int(self.r, other)
        if other.r != self.r:
            raise ValueError(f"cannot combine Z[ω_{self.r}] with Z[ω_{other.r}]")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicInt(self.r, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.r, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        product = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        return CyclotomicInt(self.r, _reduce(self.r, product))

    __rmul__ = __mul__

    def __str__(self):
        if len(self.coeffs) == 1:
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                power = "" if k == 0 else ("ω" if k == 1 else f"ω^{k}")
                if not power:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(power)
                elif c == -1:
                    parts.append(f"-{power}")
                else:
                    parts.append(f"{c}{power}")
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")" if parts else "0"


def omega_power(r: int, e: int) -> CyclotomicInt:
    """Canonical residue of ω^e"""
    return CyclotomicInt(r, _power_table(r)[e % r])


def omega_vectors(r: int) -> Tuple[Tuple[int, ...], ...]:
    """Coefficient vectors of ω^0 .. ω^{r-1}, for accumulation loops"""
    return _power_table(r)[:r]
