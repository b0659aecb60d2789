"""Smooth-number enumeration and unit-equation solving, against brute force."""

from math import gcd

import pytest

from ramcalc.sunit import (
    prop24_pairs,
    smooth_enum,
    thm26_family,
    unit_equation_solutions,
)


def naive_smooth(n, primes):
    """Independent per-number route: repeated division."""
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


class TestSmoothEnum:
    def test_small_case(self):
        s = smooth_enum((2, 3), 20)
        assert s.values == (1, 2, 3, 4, 6, 8, 9, 12, 16, 18)

    def test_matches_naive_route(self):
        s = smooth_enum((2, 3, 5), 2000)
        expected = tuple(n for n in range(1, 2001) if naive_smooth(n, (2, 3, 5)))
        assert s.values == expected

    def test_threaded_route_identical(self):
        single = smooth_enum((2, 3, 5), 3000, threads=1)
        multi = smooth_enum((2, 3, 5), 3000, threads=4)
        assert single.values == multi.values

    def test_membership(self):
        s = smooth_enum((2, 3), 100)
        assert 96 in s and 97 not in s and 200 not in s

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            smooth_enum((), 10)
        with pytest.raises(ValueError):
            smooth_enum((2,), 0)


class TestUnitEquation:
    def test_matches_brute_force(self):
        primes, bound = (2, 3, 5), 500
        got = unit_equation_solutions(primes, bound)
        expected = []
        for a in range(1, bound + 1):
            if not naive_smooth(a, primes):
                continue
            for b in range(a, bound + 1 - a):
                c = a + b
                if gcd(a, b) != 1:
                    continue
                if naive_smooth(b, primes) and naive_smooth(c, primes):
                    expected.append((a, b, c))
        assert got == sorted(expected)

    def test_classic_solutions_present(self):
        sols = unit_equation_solutions((2, 3), 10)
        assert (1, 1, 2) in sols
        assert (1, 2, 3) in sols
        assert (1, 3, 4) in sols
        assert (1, 8, 9) in sols


class TestProp24Pairs:
    def test_requires_two(self):
        with pytest.raises(ValueError):
            prop24_pairs((3, 5), 100)

    def test_matches_brute_force(self):
        primes, bound = (2, 3, 5), 300
        got = prop24_pairs(primes, bound)
        expected = [
            (n2, n3)
            for n2 in range(2, bound + 1)
            for n3 in range(1, n2)
            if gcd(n2, n3) == 1
            and naive_smooth(n2, primes)
            and naive_smooth(n3, primes)
            and naive_smooth(n2 - n3, primes)
        ]
        assert got == sorted(expected)

    def test_canonical_form(self):
        for n2, n3 in prop24_pairs((2, 3), 200):
            assert n2 > n3 >= 1
            assert gcd(n2, n3) == 1


class TestFamily:
    def test_contains_reference_tuple_as_exceptional(self):
        fam = thm26_family((2, 3), 10)
        match = [t for t in fam if t.entries == (0, 6, 1, 5)]
        assert match, "reference tuple missing"
        assert all(t.exceptional for t in match)

    def test_entry_structure(self):
        for t in thm26_family((2, 3), 12):
            assert t.entries == (0, 2 * t.r3, t.r1 + t.r3, t.r3 - t.r1)
            assert gcd(abs(t.r1), t.r3) == 1
            assert len(set(t.entries)) == 4

    def test_exceptional_flag_meaning(self):
        for t in thm26_family((2, 3), 10):
            diffs = [
                t.entries[i] - t.entries[j]
                for i in range(4)
                for j in range(i + 1, 4)
            ]
            assert t.exceptional == any(not naive_smooth(abs(d), (2, 3)) for d in diffs)
