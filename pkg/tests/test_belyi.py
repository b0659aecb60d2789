"""Four-point product-form maps branched over {0, 1, infinity}."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramcalc.belyi import (
    BelyiTuple,
    DegenerateSupport,
    NotBelyiForm,
    dlog_numerator,
    exponent_factorizations,
    hyperplane_membership,
    search_smooth_tuples,
    vandermonde_exponents,
    verify_belyi,
)


class TestVandermondeExponents:
    def test_reference_support(self):
        assert vandermonde_exponents((0, 1, 5, 6)) == (2, -3, 3, -2)

    def test_exponents_sum_to_zero(self):
        for sup in [(0, 1, 5, 6), (0, 2, 3, 7), (0, 1, 2, 4, 7)]:
            assert sum(vandermonde_exponents(sup)) == 0

    def test_degenerate_support_rejected(self):
        with pytest.raises(DegenerateSupport):
            vandermonde_exponents((0, 1, 1, 5))

    @given(st.lists(st.integers(min_value=-8, max_value=8), min_size=4, max_size=4,
                    unique=True))
    @settings(max_examples=60, deadline=None)
    def test_resulting_tuple_verifies(self, sup):
        exps = vandermonde_exponents(tuple(sup))
        t = BelyiTuple(tuple(sup), exps)
        v = verify_belyi(t)
        assert v.dlog_constant != 0


class TestVerifyBelyi:
    def test_reference_tuple(self):
        t = BelyiTuple((0, 1, 5, 6), (2, -3, 3, -2))
        v = verify_belyi(t)
        assert v.degree == 5
        assert v.dlog_constant != 0
        assert v.infinity_index == 3
        assert sorted(e for _, e in v.fiber_over_zero) == [2, 3]
        assert sorted(e for _, e in v.fiber_over_inf) == [2, 3]

    def test_dlog_numerator_constant_iff_belyi(self):
        good = BelyiTuple((0, 1, 5, 6), (2, -3, 3, -2))
        assert dlog_numerator(good).degree == 0
        bad = BelyiTuple((0, 1, 2, 3), (1, 1, -1, -1))
        assert dlog_numerator(bad).degree > 0
        with pytest.raises(NotBelyiForm):
            verify_belyi(bad)

    def test_nonzero_sum_rejected(self):
        with pytest.raises(NotBelyiForm):
            verify_belyi(BelyiTuple((0, 1, 5, 6), (2, -3, 3, -1)))


class TestFactorizationsAndHyperplane:
    def test_exponent_factorizations(self):
        t = BelyiTuple((0, 1, 5, 6), (2, -3, 3, -2))
        facs = exponent_factorizations(t, (2, 3))
        assert facs == [{2: 1}, {3: 1}, {3: 1}, {2: 1}]

    def test_nonsmooth_exponent_gives_none(self):
        t = BelyiTuple((0, 1, 6, 7), vandermonde_exponents((0, 1, 6, 7)))
        facs = exponent_factorizations(t, (2, 3))
        assert any(f is None for f in facs)

    def test_hyperplane_membership(self):
        ok, witness = hyperplane_membership((0, 1, 5, 6))
        assert ok and -witness[0] - witness[1] + witness[2] + witness[3] == 0
        ok, witness = hyperplane_membership((0, 1, 2, 7))
        assert not ok and witness is None


class TestSearch:
    def test_box_search_finds_reference(self):
        found = search_smooth_tuples(4, (2, 3), 10)
        supports = {t.support for t in found}
        assert (0, 1, 5, 6) in supports

    def test_deterministic_order_across_thread_counts(self):
        single = search_smooth_tuples(4, (2, 3), 12, threads=1)
        multi = search_smooth_tuples(4, (2, 3), 12, threads=4)
        assert [(t.support, t.exponents) for t in single] == [
            (t.support, t.exponents) for t in multi
        ]

    def test_all_results_verify(self):
        for t in search_smooth_tuples(4, (2, 3), 10):
            assert verify_belyi(t).dlog_constant != 0
