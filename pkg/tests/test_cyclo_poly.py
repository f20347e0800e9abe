import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.algebra import CyclotomicInt, Poly, cyclotomic_polynomial, omega_power
from app.services.algebra.cyclotomic import totient_degree
from app.services.algebra.polynomial import q_factorial, q_integer
from app.services.algebra import gessel_simion_rhs, product_one_minus
from app.services.algebra.series import (
    TruncatedSeries,
    brenti_series,
    nega2_series,
    nepo_series,
    posi2_series,
)


@st.composite
def cyclotomic_ints(draw, r):
    width = totient_degree(r)
    coeffs = draw(st.lists(st.integers(-20, 20), min_size=width, max_size=width))
    return CyclotomicInt(r, tuple(coeffs))


@st.composite
def cyclotomic_triples(draw):
    r = draw(st.integers(1, 12))
    return r, draw(cyclotomic_ints(r)), draw(cyclotomic_ints(r)), draw(cyclotomic_ints(r))


@st.composite
def polys(draw, r=3, arity=2):
    terms = draw(
        st.lists(
            st.tuples(st.tuples(st.integers(0, 3), st.integers(0, 3)), cyclotomic_ints(r)),
            max_size=4,
        )
    )
    return Poly.from_terms(r, arity, terms)


class TestCyclotomic:
    @pytest.mark.parametrize(
        "r, coeffs",
        [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (12, (1, 0, -1, 0, 1))],
    )
    def test_cyclotomic_polynomial(self, r, coeffs):
        assert cyclotomic_polynomial(r) == coeffs

    def test_rejects_nonpositive_order(self):
        with pytest.raises(ValueError):
            cyclotomic_polynomial(0)

    def test_omega_facts(self):
        assert omega_power(2, 1).coeffs == (-1,)
        assert omega_power(4, 2) == CyclotomicInt.from_int(4, -1)
        assert omega_power(3, 3) == CyclotomicInt.one(3)
        assert omega_power(3, 1) + omega_power(3, 2) == CyclotomicInt.from_int(3, -1)

    def test_products_reduce(self):
        w = omega_power(4, 1)
        assert (1 + w) * (CyclotomicInt.one(4) - w) == CyclotomicInt.from_int(4, 2)

    def test_mixed_orders_rejected(self):
        with pytest.raises(ValueError):
            omega_power(3, 1) + omega_power(4, 1)

    def test_from_vector_reduces_high_powers(self):
        # ω^5 = ω^2 for r=3
        assert CyclotomicInt.from_vector(3, [0, 0, 0, 0, 0, 1]) == omega_power(3, 2)

    @settings(max_examples=200, deadline=None)
    @given(cyclotomic_triples())
    def test_ring_axioms(self, triple):
        r, a, b, c = triple
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * CyclotomicInt.one(r) == a
        assert (a - a).is_zero()

    @settings(deadline=None)
    @given(st.integers(1, 12), st.integers(0, 40), st.integers(0, 40))
    def test_omega_powers_multiply(self, r, e1, e2):
        assert omega_power(r, e1) * omega_power(r, e2) == omega_power(r, e1 + e2)


class TestPoly:
    def test_pretty(self):
        assert product_one_minus(1, [0]).pretty() == "1 − t"
        assert product_one_minus(1, [0, 1]).pretty() == "1 − t − t q + t^2 q"
        assert Poly.zero(1, 2).pretty() == "0"

    def test_gessel_simion_small(self):
        expected = Poly.one(1, 2) - Poly.monomial(1, 2, (0, 1))
        assert gessel_simion_rhs(2) == expected
        assert gessel_simion_rhs(1) == Poly.one(1, 2)

    def test_q_integers(self):
        assert q_integer(3, sign=-1) == Poly.from_terms(
            1, 2, [((0, 0), CyclotomicInt.one(1)), ((0, 1), CyclotomicInt.from_int(1, -1)), ((0, 2), CyclotomicInt.one(1))]
        )
        assert q_factorial(4).substitute_one(1) == Poly.constant(1, 2, 24)

    def test_like_terms_cancel(self):
        x = Poly.monomial(2, 2, (1, 1))
        assert (x - x).is_zero()

    def test_collapse_merges_x_variables(self):
        p = Poly.monomial(1, 4, (1, 0, 2, 3)) + Poly.monomial(1, 4, (1, 0, 3, 2))
        assert p.collapse() == Poly.monomial(1, 3, (1, 0, 5), 2)

    def test_extend_and_mismatch(self):
        p = Poly.monomial(3, 2, (1, 2), omega_power(3, 1))
        assert p.extend(3).terms == {(1, 2, 0): omega_power(3, 1)}
        with pytest.raises(ValueError):
            p + Poly.one(3, 3)
        with pytest.raises(ValueError):
            p.extend(1)

    def test_json_form(self):
        p = Poly.monomial(3, 3, (2, 1, 4), omega_power(3, 2)) + Poly.one(3, 3)
        data = p.to_json()
        assert data["vars"] == ["t", "q", "x1"]
        assert data["terms"][0] == {"exp": [0, 0, 0], "coef": [1, 0]}
        assert Poly.from_json(data) == p

    @settings(max_examples=100, deadline=None)
    @given(polys(), polys(), polys())
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c


class TestSeries:
    def test_known_series(self):
        assert posi2_series(1, 3).coeffs == (1, 2, 6, 8)
        assert nega2_series(1, 3).coeffs == (0, 2, 3, 8)
        assert nepo_series(1, 4).coeffs == (1, 0, 3, 0, 5)
        assert brenti_series(2, 2).coeffs == (1, 9, 25)

    def test_division_undoes_multiplication(self):
        series = brenti_series(3, 6)
        assert series.mul_one_minus(3, 1).div_one_minus(3, 1) == series

    def test_from_poly(self):
        assert TruncatedSeries.from_poly(product_one_minus(1, [0, 0]), 3).coeffs == (1, -2, 1, 0)

    def test_rejects_non_unit_divisor(self):
        with pytest.raises(ValueError):
            posi2_series(1, 2).divide(TruncatedSeries(2, (2, 0, 0)))

    def test_coefficient_count(self):
        with pytest.raises(ValueError):
            TruncatedSeries(2, (1, 2))
