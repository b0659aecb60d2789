"""Belyi functions in product form prod (x - n_i)^{r_i}.

Exponent vectors come from Vandermonde minors; verification works
purely on exponents and the logarithmic-derivative numerator, so maps
of astronomically large degree are never expanded.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .exact import Poly, QQ, factor_over_primes, SmoothnessFailure


class DegenerateSupport(ValueError):
    pass


class NotBelyiForm(ValueError):
    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


@dataclass(frozen=True)
class BelyiTuple:
    """Support points plus nonzero integer exponents summing to zero."""

    support: tuple
    exponents: tuple

    def __init__(self, support: Sequence, exponents: Sequence[int]):
        support = tuple(QQ.coerce(n) for n in support)
        exponents = tuple(int(r) for r in exponents)
        if len(support) != len(exponents):
            raise ValueError("support and exponent lengths differ")
        if len(set(support)) != len(support):
            raise DegenerateSupport("support points must be distinct")
        if any(r == 0 for r in exponents):
            raise ValueError("exponents must be nonzero")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "exponents", exponents)

    @property
    def k(self) -> int:
        return len(self.support)

    @property
    def degree(self) -> int:
        return sum(r for r in self.exponents if r > 0)


@dataclass
class BelyiVerification:
    """Result of checking the product form: dlog numerator and profile."""

    dlog_constant: Fraction
    degree: int
    fiber_over_zero: list   # (point, index) with positive exponent
    fiber_over_inf: list    # (point, index) with negative exponent
    infinity_index: int     # index of the point at infinity over 1


def vandermonde(points: Sequence[Fraction]) -> Fraction:
    v = Fraction(1)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            v *= points[j] - points[i]
    return v


def vandermonde_exponents(support: Sequence) -> tuple[int, ...]:
    """Exponent vector r_i = (-1)^(i-1) V(n_1,...,^n_i,...,n_k), reduced.

    Raw minors are divided by their gcd and sign-normalized so the
    first exponent is positive.  The result always sums to zero.
    """
    pts = [QQ.coerce(n) for n in support]
    if len(set(pts)) != len(pts):
        raise DegenerateSupport("support points must be distinct")
    k = len(pts)
    if k < 2:
        raise DegenerateSupport("need at least two support points")
    if k == 2:
        return (1, -1)  # documented boundary: no finite ramification
    raw = []
    for i in range(k):
        minor = vandermonde(pts[:i] + pts[i + 1:])
        raw.append(minor if i % 2 == 0 else -minor)
    # clear denominators, then reduce by gcd
    denom = 1
    for r in raw:
        denom = denom * r.denominator // gcd(denom, r.denominator)
    ints = [int(r * denom) for r in raw]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    if ints[0] < 0:
        ints = [-v for v in ints]
    assert sum(ints) == 0
    return tuple(ints)


def dlog_numerator(t: BelyiTuple) -> Poly:
    """N(z) = sum_i r_i prod_{j != i} (z - n_j); constant iff Belyi form."""
    out = Poly(QQ, [])
    for i, r in enumerate(t.exponents):
        term = Poly(QQ, [r])
        for j, n in enumerate(t.support):
            if j != i:
                term = term * Poly(QQ, [-n, 1])
        out = out + term
    return out


def verify_belyi(t: BelyiTuple) -> BelyiVerification:
    """Check the defining properties of the product form.

    Requires sum r_i = 0 and a constant nonzero dlog numerator; the
    ramification profile then sits over {0, 1, infinity} with indices
    |r_i| at the support and k - 1 at infinity.
    """
    if sum(t.exponents) != 0:
        raise NotBelyiForm(f"exponents sum to {sum(t.exponents)}, not zero")
    n = dlog_numerator(t)
    if n.degree > 0:
        raise NotBelyiForm(
            f"dlog numerator is not constant (degree {n.degree})",
            offending=n.coeffs[-1],
        )
    if n.is_zero():
        raise NotBelyiForm("dlog numerator vanishes identically")
    pos = [(p, r) for p, r in zip(t.support, t.exponents) if r > 0]
    neg = [(p, -r) for p, r in zip(t.support, t.exponents) if r < 0]
    degree = sum(e for _, e in pos)
    if degree != sum(e for _, e in neg):
        raise NotBelyiForm("fiber sums over 0 and infinity disagree")
    return BelyiVerification(
        dlog_constant=n.coeffs[0],
        degree=degree,
        fiber_over_zero=pos,
        fiber_over_inf=neg,
        infinity_index=t.k - 1,
    )


def exponent_factorizations(t: BelyiTuple, primes: Iterable[int]):
    """Factor each |exponent| over a prime set; None entries on failure."""
    out = []
    for r in t.exponents:
        f = factor_over_primes(r, primes)
        out.append(None if isinstance(f, SmoothnessFailure) else f)
    return out


def hyperplane_membership(points: Sequence[int]):
    """Whether some ordering (x1,x2,x3,x4) satisfies -x1-x2+x3+x4 = 0.

    Returns (True, ordering) with the witness, or (False, None).
    """
    pts = [QQ.coerce(p) for p in points]
    if len(pts) != 4:
        raise ValueError("hyperplane test is for 4-tuples")
    from itertools import permutations

    for perm in permutations(pts):
        if -perm[0] - perm[1] + perm[2] + perm[3] == 0:
            return True, tuple(perm)
    return False, None


# ---------------------------------------------------------------------------
# search


def _normalized_supports(k: int, box: int):
    """Supports with n_1 = 0, ascending, content 1, inside [0, box]."""
    for rest in combinations(range(1, box + 1), k - 1):
        g = 0
        for v in rest:
            g = gcd(g, v)
        if g != 1:
            continue
        yield (0,) + rest


def _smooth_filter(supports, primes):
    out = []
    for sup in supports:
        exps = vandermonde_exponents(sup)
        if all(not isinstance(factor_over_primes(r, primes), SmoothnessFailure) for r in exps):
            out.append(BelyiTuple(sup, exps))
    return out


def search_smooth_tuples(
    k: int,
    primes: Iterable[int],
    box: int,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> list[BelyiTuple]:
    """Enumerate normalized supports in the box and keep the smooth ones.

    Deterministic output order (lexicographic in the support) no matter
    how many worker threads run; RAMCALC_THREADS caps parallelism.
    """
    if not 3 <= k <= 7:
        raise ValueError("support size must be between 3 and 7")
    primes = sorted(set(primes))
    supports = list(_normalized_supports(k, box))
    if threads is None:
        threads = int(os.environ.get("RAMCALC_THREADS", "1"))
    if threads > 1 and len(supports) > 64:
        chunk = (len(supports) + threads - 1) // threads
        cells = [supports[i:i + chunk] for i in range(0, len(supports), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(lambda cell: _smooth_filter(cell, primes), cells))
        results = [t for piece in pieces for t in piece]
    else:
        results = _smooth_filter(supports, primes)
    if budget is not None:
        results = results[:budget]
    return results
