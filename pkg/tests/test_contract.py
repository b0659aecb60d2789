"""Contraction of algebraic point sets to rational points."""

from fractions import Fraction

import pytest

from ramcalc.contract import (
    AlgebraicPointSet,
    StrategyExhausted,
    _is_squarefree_qq,
    build_cofactor,
    contract_to_rational,
    split_degree,
)
from ramcalc.exact import QQ, Poly, cyclotomic, resultant, squarefree_part


class TestSplitDegree:
    def test_examples(self):
        assert split_degree(2) == (2, 2)
        assert split_degree(3) == (2, 1)
        assert split_degree(5) == (3, 3)
        assert split_degree(8) == (4, 8)

    def test_degree_one_rejected(self):
        with pytest.raises(ValueError):
            split_degree(1)

    def test_invariant(self):
        for m in range(2, 65):
            k, r = split_degree(m)
            assert m + r == 2 ** k
            assert 0 <= r < m or m == r  # r < m except the power-of-2 doubling case
            assert 2 ** (k - 1) < m + r <= 2 ** k


class TestBuildCofactor:
    def test_cofactor_degree_matches_target_count(self):
        f = Poly(QQ, [-2, 0, 0, 1])  # z^3 - 2; one padding root lifts it to 2^2
        g = build_cofactor(f, [Fraction(1)])
        F = f * g
        assert g.degree == 1 and F.degree == 4
        assert F.derivative().evaluates_to_zero(Fraction(1))

    def test_derivative_vanishes_at_every_target(self):
        f = Poly(QQ, [-2, 0, 1])  # z^2 - 2
        g = build_cofactor(f, [Fraction(0), Fraction(1)])
        F = f * g
        assert F.degree == 4
        assert F.derivative().evaluates_to_zero(Fraction(0))
        assert F.derivative().evaluates_to_zero(Fraction(1))


class TestSquarefreeCheck:
    def test_modular_route_agrees_with_exact_route(self):
        cases = [
            Poly(QQ, [-2, 0, 0, 1]),
            Poly.from_roots(QQ, [1, 1, 2]),
            Poly.from_roots(QQ, [Fraction(1, 3), -5]) * cyclotomic(5),
            Poly.from_roots(QQ, [2, 2]),
        ]
        for p in cases:
            exact = squarefree_part(p).degree == p.degree
            assert _is_squarefree_qq(p) == exact


def assert_contraction_certificate(result):
    assert result.final_set.all_rational()
    measures = [None]
    for (fin, at_inf), step in zip(result.index_certificate, result.steps):
        assert fin == 2
        assert at_inf == 2 ** step.k
        assert at_inf & (at_inf - 1) == 0  # power of 2
    bound = result.composite_index_bound
    assert bound & (bound - 1) == 0


class TestContraction:
    def test_cube_root_of_two(self):
        S = AlgebraicPointSet.from_polys([Poly(QQ, [-2, 0, 0, 1])])
        result = contract_to_rational(S)
        assert_contraction_certificate(result)
        assert len(result.steps) >= 1

    def test_measure_strictly_decreases(self):
        from ramcalc.contract import reduction_step

        current = AlgebraicPointSet.from_polys(
            [Poly(QQ, [-2, 0, 0, 1]), Poly(QQ, [-3, 0, 1])]
        )
        seen = [current.measure()]
        while not current.all_rational():
            step, current = reduction_step(current)
            seen.append(current.measure())
        assert all(b < a for a, b in zip(seen, seen[1:]))

    def test_rational_only_set_needs_zero_steps(self):
        S = AlgebraicPointSet.from_polys([Poly(QQ, [-5, 1])])
        result = contract_to_rational(S)
        assert result.steps == []
        assert result.composite_index_bound == 1

    def test_irreducible_factorization_on_entry(self):
        S = AlgebraicPointSet.from_polys([Poly(QQ, [-1, 0, 0, 0, 1])])  # z^4 - 1
        degrees = sorted(p.degree for p in S.polys)
        assert degrees == [1, 1, 2]

    def test_quadratic_single_step(self):
        S = AlgebraicPointSet.from_polys([Poly(QQ, [-2, 0, 1])])
        result = contract_to_rational(S)
        assert len(result.steps) == 1
        assert result.index_certificate == [(2, 4)]
