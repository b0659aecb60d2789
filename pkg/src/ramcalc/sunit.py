"""Smooth-number enumeration and small unit-equation solving.

Everything here is desk-scale and exhaustive within an explicit height
box: smooth numbers, coprime smooth solutions of a + b = c, the
coprime pair classification (both entries and their difference
smooth), and the one-parameter family of four-point supports whose
exponent vectors stay smooth.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional

from .exact import is_smooth


@dataclass(frozen=True)
class SmoothSet:
    """All P-smooth positive integers up to a height bound, sorted."""

    primes: tuple
    bound: int
    values: tuple

    def __contains__(self, n: int) -> bool:
        return 1 <= n <= self.bound and is_smooth(n, self.primes)


def _normalize_primes(primes: Iterable[int]) -> tuple:
    ps = sorted(set(int(p) for p in primes))
    if not ps:
        raise ValueError("prime set must be nonempty")
    if any(p < 2 for p in ps):
        raise ValueError("primes must be >= 2")
    return tuple(ps)


def smooth_enum(primes: Iterable[int], bound: int, threads: Optional[int] = None) -> SmoothSet:
    """Every P-smooth n <= bound, by product generation.

    With threads > 1 the range is partitioned and checked per slice,
    then merged; the result is identical either way.
    """
    ps = _normalize_primes(primes)
    if bound < 1:
        raise ValueError("height bound must be >= 1")
    if threads is None:
        threads = int(os.environ.get("RAMCALC_THREADS", "1"))
    if threads > 1 and bound > 256:
        chunk = (bound + threads - 1) // threads
        ranges = [(lo, min(lo + chunk - 1, bound)) for lo in range(1, bound + 1, chunk)]

        def check(rng):
            lo, hi = rng
            return [n for n in range(lo, hi + 1) if is_smooth(n, ps)]

        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(check, ranges))
        vals = [n for piece in pieces for n in piece]
        return SmoothSet(ps, bound, tuple(vals))
    vals = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for v in frontier:
            for p in ps:
                w = v * p
                if w <= bound and w not in vals:
                    vals.add(w)
                    nxt.append(w)
        frontier = nxt
    return SmoothSet(ps, bound, tuple(sorted(vals)))


def unit_equation_solutions(primes: Iterable[int], bound: int) -> list:
    """Coprime triples (a, b, c) with a + b = c, all P-smooth, a <= b <= c <= bound.

    Exhaustive within the box, in lexicographic order.
    """
    ps = _normalize_primes(primes)
    if bound < 2:
        raise ValueError("height bound must be >= 2")
    smooth = smooth_enum(ps, bound)
    members = set(smooth.values)
    out = []
    for a in smooth.values:
        for b in smooth.values:
            if b < a:
                continue
            c = a + b
            if c > bound or c not in members:
                continue
            if gcd(a, b) != 1:
                continue
            out.append((a, b, c))
    out.sort()
    return out


def prop24_pairs(primes: Iterable[int], bound: int) -> list:
    """Coprime pairs (n2, n3), n2 > n3 >= 1, with n2, n3, n2 - n3 all P-smooth.

    The prime set must contain 2 (the hypothesis under which the
    finiteness argument runs).  Pairs are canonical representatives:
    larger entry first, both positive, coprime.  Lexicographic order.
    """
    ps = _normalize_primes(primes)
    if 2 not in ps:
        raise ValueError("the prime set must contain 2")
    smooth = smooth_enum(ps, bound)
    out = []
    for n2 in smooth.values:
        for n3 in smooth.values:
            if n3 >= n2:
                break
            if gcd(n2, n3) != 1:
                continue
            if not is_smooth(n2 - n3, ps):
                continue
            out.append((n2, n3))
    out.sort()
    return out


@dataclass(frozen=True)
class FamilyTuple:
    """A support tuple (0, 2*r3, r1 + r3, r3 - r1) from the smooth pair family.

    `exceptional` marks tuples where some pairwise difference fails to
    be P-smooth, so the smooth-exponent sufficient condition does not
    apply even though the exponents themselves may be smooth.
    """

    entries: tuple
    r1: int
    r3: int
    exceptional: bool


def thm26_family(primes: Iterable[int], bound: int) -> list:
    """All tuples (0, 2*r3, r1+r3, r3-r1) with smooth coprime (r1, r3) in the box.

    r3 >= 1 and r1 may be negative (smoothness is of the absolute
    value); entries must be pairwise distinct and bounded by the
    height.  Each tuple carries the exceptional tag.  Lexicographic
    order in the entries.
    """
    ps = _normalize_primes(primes)
    if bound < 2:
        return []
    smooth = smooth_enum(ps, 2 * bound)
    r3_values = [v for v in smooth.values if 2 * v <= bound]
    out = []
    for r3 in r3_values:
        for mag in smooth.values:
            for r1 in (mag, -mag):
                if gcd(mag, r3) != 1:
                    continue
                entries = (0, 2 * r3, r1 + r3, r3 - r1)
                if len(set(entries)) != 4:
                    continue
                if any(abs(e) > bound for e in entries):
                    continue
                exceptional = any(
                    not is_smooth(entries[i] - entries[j], ps)
                    for i in range(4)
                    for j in range(i + 1, 4)
                )
                out.append(FamilyTuple(entries, r1, r3, exceptional))
    out.sort(key=lambda t: t.entries)
    return out
