"""Sparse polynomials in t, q, x_1, x_2, ... over Z[ω].

Slot 0 is t, slot 1 is q, slots 2.. are x_1, x_2, ...
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from app.services.algebra.cyclotomic import CyclotomicInt, omega_vectors, totient_degree

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

_BASE_NAMES = ("t", "q")


def variable_names(arity: int) -> List[str]:
    return list(_BASE_NAMES[:arity]) + [f"x{i}" for i in range(1, arity - 1)]


@dataclass(frozen=True)
class Poly:
    r: int
    arity: int
    terms: Dict[Exponent, CyclotomicInt] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, r: int, arity: int, items: Iterable[Tuple[Exponent, CyclotomicInt]]) -> "Poly":
        """Combine like terms and drop zeros"""
        collected: Dict[Exponent, CyclotomicInt] = {}
        for exp, coef in items:
            if len(exp) != arity:
                raise ValueError(f"exponent {exp} does not have arity {arity}")
            if exp in collected:
                collected[exp] = collected[exp] + coef
            else:
                collected[exp] = coef
        return cls(r, arity, {e: c for e, c in collected.items() if not c.is_zero()})

    @classmethod
    def zero(cls, r: int, arity: int) -> "Poly":
        return cls(r, arity, {})

    @classmethod
    def constant(cls, r: int, arity: int, value: Union[int, CyclotomicInt]) -> "Poly":
        if isinstance(value, int):
            value = CyclotomicInt.from_int(r, value)
        return cls.from_terms(r, arity, [((0,) * arity, value)])

    @classmethod
    def one(cls, r: int, arity: int) -> "Poly":
        return cls.constant(r, arity, 1)

    @classmethod
    def monomial(cls, r: int, arity: int, exp: Exponent, value: Union[int, CyclotomicInt] = 1) -> "Poly":
        if isinstance(value, int):
            value = CyclotomicInt.from_int(r, value)
        return cls.from_terms(r, arity, [(tuple(exp), value)])

    def _check(self, other: "Poly"):
        if other.r != self.r or other.arity != self.arity:
            raise ValueError(
                f"polynomial mismatch: (r={self.r}, arity={self.arity}) vs (r={other.r}, arity={other.arity})"
            )

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly.from_terms(self.r, self.arity, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "Poly":
        return Poly(self.r, self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        items = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                items.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Poly.from_terms(self.r, self.arity, items)

    def scale(self, factor: Union[int, CyclotomicInt]) -> "Poly":
        if isinstance(factor, int):
            factor = CyclotomicInt.from_int(self.r, factor)
        return Poly.from_terms(self.r, self.arity, [(e, c * factor) for e, c in self.terms.items()])

    def extend(self, arity: int) -> "Poly":
        """Embed into more variables (new slots get exponent 0)"""
        if arity < self.arity:
            raise ValueError(f"cannot shrink arity {self.arity} to {arity}")
        pad = (0,) * (arity - self.arity)
        return Poly(self.r, arity, {e + pad: c for e, c in self.terms.items()})

    def substitute_one(self, slot: int) -> "Poly":
        """Set the variable in `slot` to 1"""
        return Poly.from_terms(
            self.r, self.arity, [(e[:slot] + (0,) + e[slot + 1:], c) for e, c in self.terms.items()]
        )

    def collapse(self, first_slot: int = 2) -> "Poly":
        """Identify all variables from `first_slot` on with a single one"""
        return Poly.from_terms(
            self.r, first_slot + 1, [(e[:first_slot] + (sum(e[first_slot:]),), c) for e, c in self.terms.items()]
        )

    def sorted_terms(self) -> List[Tuple[Exponent, CyclotomicInt]]:
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "vars": variable_names(self.arity),
            "terms": [{"exp": list(e), "coef": list(c.coeffs)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Poly":
        r = data["r"]
        arity = len(data["vars"])
        return cls.from_terms(
            r, arity, [(tuple(t["exp"]), CyclotomicInt.from_vector(r, t["coef"])) for t in data["terms"]]
        )

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        names = variable_names(self.arity)
        pieces = []
        for exp, coef in self.sorted_terms():
            monomial = " ".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(names, exp) if k
            )
            scalar = str(coef)
            if monomial and scalar in ("1", "-1"):
                text = monomial if scalar == "1" else f"-{monomial}"
            elif monomial:
                text = f"{scalar} {monomial}"
            else:
                text = scalar
            pieces.append(text)
        out = pieces[0]
        for piece in pieces[1:]:
            out += f" − {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out.replace("-", "−", 1) if out.startswith("-") else out


class PolyAccumulator:
    """Mutable sum of ±ω^e monomials; the hot loop of every identity check"""

    def __init__(self, r: int, arity: int):
        self.r = r
        self.arity = arity
        self._omega = omega_vectors(r)
        self._width = totient_degree(r)
        self._terms: Dict[Exponent, List[int]] = {}
        self.count = 0

    def add(self, exp: Exponent, omega_exp: int = 0, sign: int = 1):
        vector = self._omega[omega_exp % self.r]
        slot = self._terms.get(exp)
        if slot is None:
            slot = self._terms[exp] = [0] * self._width
        for i, c in enumerate(vector):
            if c:
                slot[i] += sign * c
        self.count += 1

    def merge(self, other: "PolyAccumulator") -> "PolyAccumulator":
        for exp, vector in other._terms.items():
            slot = self._terms.get(exp)
            if slot is None:
                self._terms[exp] = list(vector)
            else:
                for i, c in enumerate(vector):
                    slot[i] += c
        self.count += other.count
        return self

    def to_poly(self) -> Poly:
        return Poly(
            self.r,
            self.arity,
            {e: CyclotomicInt(self.r, tuple(v)) for e, v in self._terms.items() if any(v)},
        )


def q_integer(i: int, sign: int = 1, arity: int = 2) -> Poly:
    """[i]_x = 1 + x + ... + x^{i-1} with x = sign·q"""
    items = []
    for j in range(i):
        exp = (0, j) + (0,) * (arity - 2)
        items.append((exp, CyclotomicInt.from_int(1, sign**j)))
    return Poly.from_terms(1, arity, items)


def q_factorial(n: int, arity: int = 2) -> Poly:
    result = Poly.one(1, arity)
    for i in range(1, n + 1):
        result = result * q_integer(i, 1, arity)
    return result


def product_one_minus(t_exp: int, q_exps: Sequence[int], r: int = 1, arity: int = 2) -> Poly:
    """∏_j (1 - t^{t_exp} q^{q_exps[j]})"""
    result = Poly.one(r, arity)
    for e in q_exps:
        factor = Poly.one(r, arity) - Poly.monomial(r, arity, (t_exp, e) + (0,) * (arity - 2))
        result = result * factor
    return result


def gessel_simion_rhs(n: int) -> Poly:
    """[1]_q [2]_{-q} [3]_q ... [n]_{(-1)^{n-1} q}"""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    result = Poly.one(1, 2)
    for i in range(1, n + 1):
        result = result * q_integer(i, -1 if i % 2 == 0 else 1)
    return result
