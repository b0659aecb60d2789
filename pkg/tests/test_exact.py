"""Exact rationals, polynomials, resultants, and cyclotomic fields."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramcalc.exact import (
    QQ,
    NumberField,
    Poly,
    SmoothnessFailure,
    cyclotomic,
    factor_over_primes,
    is_irreducible,
    is_smooth,
    poly_gcd,
    rational_roots,
    resultant,
    solve_linear_system,
    squarefree_part,
)

small_rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=6
)


def polys(max_degree=4):
    return st.lists(small_rationals, min_size=1, max_size=max_degree + 1).map(
        lambda cs: Poly(QQ, cs)
    )


class TestPolyArithmetic:
    def test_constant_first_coefficients(self):
        p = Poly(QQ, [1, 2, 3])  # 3z^2 + 2z + 1
        assert p(0) == 1
        assert p(1) == 6
        assert p(2) == 17
        assert p.degree == 2

    def test_trailing_zeros_stripped(self):
        assert Poly(QQ, [1, 0, 0]) == Poly(QQ, [1])
        assert Poly(QQ, [0, 0]).is_zero()

    @given(polys(), polys())
    @settings(max_examples=60, deadline=None)
    def test_evaluation_is_ring_homomorphism(self, a, b):
        x = Fraction(3, 2)
        assert (a + b)(x) == a(x) + b(x)
        assert (a * b)(x) == a(x) * b(x)

    @given(polys(), polys())
    @settings(max_examples=60, deadline=None)
    def test_divmod_round_trip(self, a, b):
        if b.is_zero():
            return
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree

    @given(polys())
    @settings(max_examples=60, deadline=None)
    def test_evaluates_to_zero_agrees_with_call(self, p):
        for x in (Fraction(0), Fraction(1), Fraction(-2, 3)):
            assert p.evaluates_to_zero(x) == (p(x) == 0)

    def test_from_roots_and_vanishing_order(self):
        p = Poly.from_roots(QQ, [1, 1, 1, 2])
        assert p.vanishing_order(1) == 3
        assert p.vanishing_order(2) == 1
        assert p.vanishing_order(5) == 0

    def test_derivative(self):
        p = Poly(QQ, [1, 2, 3])
        assert p.derivative() == Poly(QQ, [2, 6])

    def test_compose(self):
        p = Poly(QQ, [0, 0, 1])  # z^2
        q = Poly(QQ, [1, 1])  # z + 1
        assert p.compose(q) == Poly(QQ, [1, 2, 1])


class TestGcdAndSquarefree:
    def test_gcd_of_shared_factor(self):
        a = Poly.from_roots(QQ, [1, 2])
        b = Poly.from_roots(QQ, [2, 3])
        assert poly_gcd(a, b) == Poly.from_roots(QQ, [2])

    def test_squarefree_part_drops_multiplicity(self):
        p = Poly.from_roots(QQ, [1, 1, 2])
        assert squarefree_part(p) == Poly.from_roots(QQ, [1, 2])

    @given(polys(3), polys(3))
    @settings(max_examples=40, deadline=None)
    def test_gcd_divides_both(self, a, b):
        if a.is_zero() or b.is_zero():
            return
        g = poly_gcd(a, b)
        assert (a % g).is_zero()
        assert (b % g).is_zero()


class TestResultant:
    def test_known_value(self):
        # res(z^2 - 1, z - 2) = (2^2 - 1) = 3
        a = Poly(QQ, [-1, 0, 1])
        b = Poly(QQ, [-2, 1])
        assert resultant(a, b) == 3

    def test_vanishes_iff_common_root(self):
        a = Poly.from_roots(QQ, [1, 2])
        b = Poly.from_roots(QQ, [2, 5])
        c = Poly.from_roots(QQ, [3, 5])
        assert resultant(a, b) == 0
        assert resultant(a, c) != 0

    @given(polys(3), polys(3), polys(2))
    @settings(max_examples=30, deadline=None)
    def test_multiplicative_in_first_argument(self, a, b, c):
        if a.is_zero() or b.is_zero() or c.is_zero() or c.degree < 1:
            return
        assert resultant(a * b, c) == resultant(a, c) * resultant(b, c)

    def test_product_of_evaluations_route(self):
        # second, independent route: res(a, b) = lc(a)^deg(b) prod b(alpha_i)
        roots = [Fraction(1), Fraction(-2), Fraction(1, 2)]
        a = Poly.from_roots(QQ, roots)
        b = Poly(QQ, [3, 1, 2])
        expected = 1
        for r in roots:
            expected *= b(r)
        assert resultant(a, b) == expected


class TestCyclotomic:
    def test_small_cyclotomics(self):
        assert cyclotomic(1) == Poly(QQ, [-1, 1])
        assert cyclotomic(2) == Poly(QQ, [1, 1])
        assert cyclotomic(5) == Poly(QQ, [1, 1, 1, 1, 1])
        assert cyclotomic(6) == Poly(QQ, [1, -1, 1])

    def test_degree_is_euler_phi(self):
        phis = {3: 2, 4: 2, 7: 6, 8: 4, 12: 4}
        for n, phi in phis.items():
            assert cyclotomic(n).degree == phi


class TestNumberField:
    def test_fifth_roots_of_unity(self):
        K = NumberField.cyclotomic_field(5)
        t = K.gen
        assert t ** 5 == K.one
        assert t + t ** 2 + t ** 3 + t ** 4 == K.coerce(-1)

    def test_inverse(self):
        K = NumberField.cyclotomic_field(7)
        x = K.gen + K.coerce(2)
        assert x * x.inverse() == K.one

    def test_rationality_detection(self):
        K = NumberField.cyclotomic_field(5)
        t = K.gen
        s = t + t ** 2 + t ** 3 + t ** 4
        assert s.is_rational()
        assert s.as_rational() == -1
        assert not t.is_rational()

    def test_reducible_minpoly_rejected(self):
        with pytest.raises(ValueError):
            NumberField(Poly(QQ, [-1, 0, 1]))


class TestSmoothness:
    def test_factor_success(self):
        assert factor_over_primes(27648, (2, 3)) == {2: 10, 3: 3}
        assert factor_over_primes(1, (2, 3)) == {}

    def test_factor_failure_witness(self):
        f = factor_over_primes(14, (2, 3))
        assert isinstance(f, SmoothnessFailure)

    def test_is_smooth(self):
        assert is_smooth(2 ** 15 * 3 ** 10 * 5 ** 4 * 13, (2, 3, 5, 13))
        assert not is_smooth(7, (2, 3, 5))

    @given(st.integers(min_value=1, max_value=10 ** 6))
    @settings(max_examples=80, deadline=None)
    def test_smoothness_matches_direct_division(self, n):
        m = n
        for p in (2, 3, 5):
            while m % p == 0:
                m //= p
        assert is_smooth(n, (2, 3, 5)) == (m == 1)


class TestLinearAlgebraAndRoots:
    def test_solve_known_system(self):
        sol = solve_linear_system(
            [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]],
            [Fraction(3), Fraction(1)],
        )
        assert sol == [Fraction(2), Fraction(1)]

    def test_rational_roots(self):
        p = Poly.from_roots(QQ, [Fraction(1, 2), -3]) * Poly(QQ, [1, 0, 1])
        assert sorted(rational_roots(p)) == [Fraction(-3), Fraction(1, 2)]

    def test_irreducibility(self):
        assert is_irreducible(Poly(QQ, [1, 0, 1]))
        assert is_irreducible(Poly(QQ, [-2, 0, 0, 1]))
        assert not is_irreducible(Poly(QQ, [-1, 0, 1]))
