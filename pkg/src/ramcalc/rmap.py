"""Exact calculus of rational self-maps of the projective line.

Maps are pairs of coprime polynomials over a field (QQ or a number
field).  Points live on the projective line: either a finite field
element or the point at infinity.  All computations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Optional

from .exact import (
    NumberField,
    NumberFieldElement,
    Poly,
    QQ,
    factor_over_primes,
    poly_gcd,
    resultant,
    squarefree_part,
    SmoothnessFailure,
)


class Infinity:
    """The point at infinity on the projective line (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("ramcalc.inf")


INF = Infinity()


def is_inf(p) -> bool:
    return isinstance(p, Infinity)


class VerificationError(Exception):
    """Base class for structured verification failures."""


class IndexMismatch(VerificationError):
    def __init__(self, point, claimed, actual):
        self.point, self.claimed, self.actual = point, claimed, actual
        super().__init__(f"index at {point!r}: claimed {claimed}, actual {actual}")


class IncompletenessGap(VerificationError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__(f"ramification divisor incomplete: missing total {missing}")


@dataclass(frozen=True)
class RamPoint:
    """A claimed ramification point with its local index."""

    point: object
    index: int

    def __post_init__(self):
        if self.index < 2:
            raise ValueError("ramification index must be >= 2")


class RationalMap:
    """P/Q with gcd(P, Q) = 1 and Q monic, as a morphism of the line."""

    def __init__(self, numerator: Poly, denominator: Poly):
        if numerator.field != denominator.field:
            raise TypeError("numerator and denominator over different fields")
        if denominator.is_zero():
            raise ValueError("zero denominator")
        if denominator.degree > 0:
            g = poly_gcd(numerator, denominator)
            if g.degree > 0:
                numerator = numerator // g
                denominator = denominator // g
        lc = denominator.lc
        if lc != 1:
            numerator = numerator * Poly(numerator.field, [numerator.field.one / lc])
            denominator = denominator.monic()
        self.num = numerator
        self.den = denominator
        if self.degree < 1:
            raise ValueError("constant map is not a morphism of the line")

    @property
    def field(self):
        return self.num.field

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @staticmethod
    def from_coeffs(field, num: Iterable, den: Iterable = (1,)) -> "RationalMap":
        return RationalMap(Poly(field, num), Poly(field, den))

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __repr__(self):
        return f"RationalMap({self.num!r} / {self.den!r})"

    # -- evaluation ----------------------------------------------------

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Value at a projective point; total on the line."""
        if is_inf(x):
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return self.field.zero
            return self.num.lc / self.den.lc
        x = self.field.coerce(x)
        q = self.den(x)
        if not q:
            return INF
        return self.num(x) / q

    # -- structure -----------------------------------------------------

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner, in lowest terms."""
        if self.field != inner.field:
            raise TypeError("maps over different fields")
        d = self.degree
        P, Q = inner.num, inner.den
        num = Poly(self.field, [])
        den = Poly(self.field, [])
        for i in range(d + 1):
            pq = (P ** i) * (Q ** (d - i))
            if i < len(self.num.coeffs):
                num = num + pq * self.num.coeffs[i]
            if i < len(self.den.coeffs):
                den = den + pq * self.den.coeffs[i]
        return RationalMap(num, den)

    def wronskian(self) -> Poly:
        """P'Q - PQ'; its zeros are the finite critical points."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def conjugate_by_inversion(self) -> "RationalMap":
        """The map z -> 1/f(1/z), used for local analysis at infinity."""
        d = max(self.num.degree, self.den.degree)
        return RationalMap(self.den.reversed(d), self.num.reversed(d))

    def local_index(self, x) -> int:
        """Multiplicity of x as a solution of f(z) = f(x)."""
        if is_inf(x):
            if self.den.degree == 0 and self.num.degree > 0:
                # polynomial map: infinity is totally ramified over itself
                return self.num.degree
            # move x to 0 by z -> 1/z on the source
            d = self.degree
            num_r = self.num.reversed(d)
            den_r = self.den.reversed(d)
            g = RationalMap(num_r, den_r)
            return g.local_index(self.field.zero)
        x = self.field.coerce(x)
        y = self.eval(x)
        if is_inf(y):
            return self.den.vanishing_order(x)
        return (self.num - self.den * y).vanishing_order(x)

    # -- ramification --------------------------------------------------

    def ram_divisor(self, claimed: Iterable[RamPoint]) -> list[RamPoint]:
        """Verify a claimed full ramification divisor.

        Each claimed index is recomputed via local_index, and
        completeness is checked against Riemann-Hurwitz on the line:
        sum (e - 1) = 2 deg - 2.
        """
        claimed = list(claimed)
        seen = set()
        for rp in claimed:
            key = ("inf",) if is_inf(rp.point) else rp.point
            if key in seen:
                raise ValueError(f"duplicate claimed point {rp.point!r}")
            seen.add(key)
        total = 0
        for rp in claimed:
            actual = self.local_index(rp.point)
            if actual != rp.index:
                raise IndexMismatch(rp.point, rp.index, actual)
            total += rp.index - 1
        expect = 2 * self.degree - 2
        if total != expect:
            raise IncompletenessGap(expect - total)
        return claimed

    def branch_locus(self, claimed: Iterable[RamPoint]) -> "PointSet":
        """Images of a verified ramification divisor, as a point set."""
        verified = self.ram_divisor(claimed)
        finite = []
        has_inf = False
        for rp in verified:
            y = self.eval(rp.point)
            if is_inf(y):
                has_inf = True
            else:
                finite.append(y)
        return PointSet.from_points(self.field, finite, has_inf)


# ---------------------------------------------------------------------------
# point sets as squarefree polynomials


class PointSet:
    """Finite part as a squarefree monic polynomial, plus an infinity flag."""

    def __init__(self, poly: Poly, has_inf: bool = False):
        if poly.is_zero():
            raise ValueError("finite part must be a nonzero polynomial")
        p = poly.monic()
        sf = squarefree_part(p) if p.degree > 0 else p
        if sf != p:
            raise ValueError("finite part must be squarefree")
        self.poly = p
        self.has_inf = has_inf

    @staticmethod
    def empty(field) -> "PointSet":
        return PointSet(Poly(field, [1]), False)

    @staticmethod
    def from_points(field, points: Iterable, has_inf: bool = False) -> "PointSet":
        distinct = []
        for p in points:
            p = field.coerce(p)
            if p not in distinct:
                distinct.append(p)
        return PointSet(Poly.from_roots(field, distinct), has_inf)

    @property
    def field(self):
        return self.poly.field

    def contains(self, x) -> bool:
        if is_inf(x):
            return self.has_inf
        return not self.poly(self.field.coerce(x))

    def union(self, other: "PointSet") -> "PointSet":
        g = poly_gcd(self.poly, other.poly)
        prod = self.poly * (other.poly // g) if g.degree > 0 else self.poly * other.poly
        return PointSet(prod, self.has_inf or other.has_inf)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.poly == other.poly and self.has_inf == other.has_inf

    def __repr__(self):
        return f"PointSet({self.poly!r}, inf={self.has_inf})"


def image_set(f: RationalMap, s: PointSet) -> PointSet:
    """Zero set of the image of s under f, without locating any root.

    The finite image polynomial is the squarefree part of
    Res_x(s(x), P(x) - y Q(x)) as a polynomial in y, recovered by
    exact interpolation.  The infinity flag propagates through eval.
    """
    field = f.field
    has_inf = False
    if s.has_inf:
        v = f.eval(INF)
        has_inf = has_inf or is_inf(v)
    # image of poles of f that are zeros of s
    pole_gcd = poly_gcd(s.poly, f.den)
    if pole_gcd.degree > 0:
        has_inf = True
    finite_src = s.poly // pole_gcd if pole_gcd.degree > 0 else s.poly
    parts = []
    if s.has_inf:
        v = f.eval(INF)
        if not is_inf(v):
            parts.append(Poly(field, [-v, field.one]))
    if finite_src.degree > 0:
        deg_y = finite_src.degree
        samples = []
        k = 0
        while len(samples) < deg_y + 1:
            y = field.coerce(k)
            val = resultant(finite_src, f.num - f.den * y)
            samples.append((y, val))
            k += 1
        img = _interpolate(field, samples)
        if img.degree < 0 or img.degree == 0 and not img.coeffs[0]:
            raise ArithmeticError("degenerate image polynomial")
        if img.degree > 0:
            parts.append(squarefree_part(img))
    out = Poly(field, [1])
    for p in parts:
        g = poly_gcd(out, p)
        out = out * (p // g) if g.degree > 0 else out * p
    return PointSet(out, has_inf)


def _interpolate(field, samples) -> Poly:
    """Lagrange interpolation over the coefficient field."""
    out = Poly(field, [])
    for i, (xi, yi) in enumerate(samples):
        if not yi:
            continue
        basis = Poly(field, [1])
        denom = field.one
        for j, (xj, _) in enumerate(samples):
            if j == i:
                continue
            basis = basis * Poly(field, [-xj, field.one])
            denom = denom * (xi - xj)
        out = out + basis * (yi / denom)
    return out


# ---------------------------------------------------------------------------
# chain verification


@dataclass
class ChainStepReport:
    name: str
    status: str  # "pass" | "fail"
    details: list = dc_field(default_factory=list)
    erratum: bool = False


@dataclass
class ChainReport:
    name: str
    steps: list
    final_set: list
    composite_indices: list
    bound_ok: Optional[bool]
    bound: Optional[int]

    @property
    def passed(self) -> bool:
        return all(s.status == "pass" for s in self.steps) and self.bound_ok is not False


def _point_key(p):
    if is_inf(p):
        return ("inf",)
    if isinstance(p, NumberFieldElement):
        return ("nfe", p.coeffs)
    return ("q", Fraction(p))


def verify_chain(manifest) -> ChainReport:
    """Verify a chain manifest step by step.

    Tracks, for every point ever introduced (initial branch values and
    later ramification points), the set of composite local indices
    accumulated along every orbit reaching it.  Each step recomputes
    the claimed ramification divisor and the claimed output set; any
    disagreement with the recorded claim is reported as a failure (a
    paper erratum is a failure with erratum=True, never silently
    corrected).
    """
    field = manifest.field
    tracked: dict = {}
    for pt, idx in manifest.start:
        tracked.setdefault(_point_key(pt), [pt, set()])[1].add(idx)
    reports = []
    for step in manifest.steps:
        rep = ChainStepReport(name=step.name, status="pass")
        try:
            if step.kind == "belyi":
                tracked = _verify_belyi_step(field, step, tracked, rep)
            else:
                tracked = _verify_map_step(field, step, tracked, rep)
        except VerificationError as exc:
            rep.status = "fail"
            rep.details.append(str(exc))
        reports.append(rep)
    composite = sorted({i for _, (pt, idxs) in tracked.items() for i in idxs})
    bound_ok = None
    if manifest.bound is not None:
        bound_ok = all(manifest.bound % i == 0 for i in composite)
    if manifest.bound_primes is not None:
        primes_ok = all(
            not isinstance(factor_over_primes(i, manifest.bound_primes), SmoothnessFailure)
            for i in composite
            if i > 1
        )
        bound_ok = primes_ok if bound_ok is None else (bound_ok and primes_ok)
    final = [pt for pt, idxs in tracked.values()]
    return ChainReport(
        name=manifest.name,
        steps=reports,
        final_set=final,
        composite_indices=composite,
        bound_ok=bound_ok,
        bound=manifest.bound,
    )


def _claimed_set_check(claimed_points, new_tracked, rep):
    claimed_keys = {_point_key(p) for p in claimed_points}
    got_keys = set(new_tracked)
    if claimed_keys != got_keys:
        missing = claimed_keys - got_keys
        extra = got_keys - claimed_keys
        rep.status = "fail"
        rep.erratum = True
        rep.details.append(
            f"claimed output set disagrees with recomputation: "
            f"missing={sorted(map(str, missing))} extra={sorted(map(str, extra))}"
        )


def _verify_map_step(field, step, tracked, rep):
    f = step.map
    claimed = [RamPoint(p, e) for p, e in step.ram]
    if step.kind == "auto":
        if f.degree != 1:
            raise VerificationError(f"step {step.name}: automorphism must have degree 1")
        if claimed:
            raise VerificationError(f"step {step.name}: automorphism cannot ramify")
    else:
        f.ram_divisor(claimed)
    new_tracked: dict = {}

    def push(point, indices):
        key = _point_key(point)
        slot = new_tracked.setdefault(key, [point, set()])
        slot[1].update(indices)

    for key, (pt, idxs) in tracked.items():
        e = f.local_index(pt)
        img = f.eval(pt)
        push(img, {a * e for a in idxs})
    for rp in claimed:
        img = f.eval(rp.point)
        push(img, {rp.index})
    _claimed_set_check(step.out, new_tracked, rep)
    return new_tracked


def _verify_belyi_step(field, step, tracked, rep):
    from .belyi import BelyiTuple, verify_belyi, NotBelyiForm

    t = BelyiTuple(step.support, step.exponents)
    try:
        verification = verify_belyi(t)
    except NotBelyiForm as exc:
        raise VerificationError(f"step {step.name}: {exc}")
    support = {QQ.coerce(n): r for n, r in zip(t.support, t.exponents)}
    k = len(t.support)
    new_tracked: dict = {}

    def push(point, indices):
        key = _point_key(point)
        slot = new_tracked.setdefault(key, [point, set()])
        slot[1].update(indices)

    def image_and_index(pt):
        if is_inf(pt):
            return field.one, k - 1
        if isinstance(pt, NumberFieldElement):
            if not pt.is_rational():
                raise VerificationError(
                    f"step {step.name}: belyi-form step needs rational points, got {pt!r}"
                )
            pt = pt.as_rational()
        r = support.get(QQ.coerce(pt))
        if r is None:
            raise VerificationError(
                f"step {step.name}: tracked point {pt!r} outside the belyi support"
            )
        if r > 0:
            return field.zero, r
        return INF, -r

    for key, (pt, idxs) in tracked.items():
        img, e = image_and_index(pt)
        push(img, {a * e for a in idxs})
    for n, r in zip(t.support, t.exponents):
        img = field.zero if r > 0 else INF
        push(img, {abs(r)})
    push(field.one, {k - 1})
    _claimed_set_check(step.out, new_tracked, rep)
    rep.details.append(f"belyi-form step of degree {verification.degree} (not expanded)")
    return new_tracked
