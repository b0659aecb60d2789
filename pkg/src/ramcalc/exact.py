"""Exact arithmetic substrate: rationals, univariate polynomials over a
field, and number fields Q[a]/(p(a)).

Everything here is immutable and exact; no floating point anywhere.
Polynomials store coefficients constant-term first with no trailing
zeros, so the zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # GMP-backed rationals: identical semantics, far faster gcd
    from gmpy2 import mpq as RAT, gcd as _int_gcd
except ImportError:  # pragma: no cover
    from math import gcd as _int_gcd

    RAT = Fraction


class RationalField:
    """The field of rational numbers (a coercion target, not a container)."""

    degree = 1

    def coerce(self, v):
        if isinstance(v, (int, numbers.Rational)) or type(v) is RAT:
            return RAT(v)
        if isinstance(v, str):
            return RAT(Fraction(v))
        raise TypeError(f"cannot coerce {v!r} into Q")

    @property
    def zero(self):
        return RAT(0)

    @property
    def one(self):
        return RAT(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("ramcalc.QQ")


QQ = RationalField()


class Poly:
    """Univariate polynomial over QQ or a NumberField.

    Coefficients are stored constant term first.  All arithmetic keeps
    canonical form (no trailing zero coefficients).
    """

    __slots__ = ("field", "coeffs", "_intform")

    def __init__(self, field, coeffs: Iterable):
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_intform", None)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(field, c) -> "Poly":
        return Poly(field, [c])

    @staticmethod
    def x(field) -> "Poly":
        return Poly(field, [0, 1])

    @staticmethod
    def from_roots(field, roots: Sequence) -> "Poly":
        p = Poly(field, [1])
        for r in roots:
            p = p * Poly(field, [-field.coerce(r), 1])
        return p

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    # -- arithmetic ----------------------------------------------------

    def _wrap(self, coeffs):
        return Poly(self.field, coeffs)

    def __add__(self, other):
        other = self._coerce_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return self._wrap([x + y for x, y in zip(a, b)])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce_poly(other))

    def __rsub__(self, other):
        return (-self) + self._coerce_poly(other)

    def __mul__(self, other):
        other = self._coerce_poly(other)
        if self.is_zero() or other.is_zero():
            return self._wrap([])
        z = self.field.zero
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return self._wrap(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self._wrap([self.field.one])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        z = self.field.zero
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return self._wrap([]), self
        quot = [z] * (dq + 1)
        inv_lc = self.field.one / other.lc if isinstance(other.lc, NumberFieldElement) else None
        for i in range(dq, -1, -1):
            top = rem[i + other.degree]
            if not top:
                continue
            q = top / other.lc if inv_lc is None else top * inv_lc
            quot[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - q * b
        return self._wrap(quot), self._wrap(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def _coerce_poly(self, v) -> "Poly":
        if isinstance(v, Poly):
            if v.field != self.field:
                raise TypeError("polynomials over different fields")
            return v
        return Poly(self.field, [self.field.coerce(v)])

    # -- calculus and evaluation --------------------------------------

    def int_form(self):
        """Cached (integer coefficients, common denominator) over Q."""
        if self._intform is None:
            denom = 1
            for c in self.coeffs:
                d = c.denominator
                denom = denom * d // _int_gcd(denom, d)
            denom = int(denom)
            ints = tuple(int(c * denom) for c in self.coeffs)
            object.__setattr__(self, "_intform", (ints, denom))
        return self._intform

    def __call__(self, x):
        x = self.field.coerce(x)
        if isinstance(self.field, RationalField):
            if self.is_zero():
                return self.field.zero
            # integer Horner with one reduction at the end: far cheaper
            # than per-step gcd normalization once coefficients are huge
            ints, denom = self.int_form()
            na, da = int(x.numerator), int(x.denominator)
            acc = 0
            bpow = 1
            for c in reversed(ints):
                acc = acc * na + c * bpow
                bpow *= da
            return RAT(acc, denom * da ** self.degree)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluates_to_zero(self, x) -> bool:
        """Whether p(x) = 0, skipping the final normalization over Q."""
        if self.is_zero():
            return True
        if isinstance(self.field, RationalField):
            x = self.field.coerce(x)
            ints, _ = self.int_form()
            na, da = int(x.numerator), int(x.denominator)
            acc = 0
            bpow = 1
            for c in reversed(ints):
                acc = acc * na + c * bpow
                bpow *= da
            return acc == 0
        return not self(x)

    def derivative(self) -> "Poly":
        return self._wrap([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc
        return self._wrap([c / lc for c in self.coeffs])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly(self.field, [c])
        return acc

    def reversed(self, at_degree: int | None = None) -> "Poly":
        """Coefficients reversed, i.e. z^d * p(1/z) for d = at_degree."""
        d = self.degree if at_degree is None else at_degree
        if d < self.degree:
            raise ValueError("reversal degree below actual degree")
        z = self.field.zero
        padded = list(self.coeffs) + [z] * (d + 1 - len(self.coeffs))
        return self._wrap(padded[::-1])

    def vanishing_order(self, x) -> int:
        """Multiplicity of x as a root (0 if not a root)."""
        if self.is_zero():
            raise ValueError("zero polynomial vanishes everywhere")
        if isinstance(self.field, RationalField):
            # derivative criterion: avoids repeated exact division,
            # which is slow once coefficients are large
            p = self
            order = 0
            while order <= self.degree:
                if not p.evaluates_to_zero(x):
                    return order
                order += 1
                p = p.derivative()
            raise AssertionError("unreachable for a nonzero polynomial")
        lin = Poly(self.field, [-self.field.coerce(x), self.field.one])
        order = 0
        p = self
        while True:
            q, r = divmod(p, lin)
            if not r.is_zero():
                return order
            order += 1
            p = q

    def map_field(self, field) -> "Poly":
        """Reinterpret the coefficients in another field."""
        return Poly(field, [field.coerce(c) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*z")
            else:
                terms.append(f"({c})*z^{i}")
        return "Poly(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------
# gcd / squarefree / resultant


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(a: Poly) -> Poly:
    """a / gcd(a, a'), monic.  Keeps exactly the distinct roots of a."""
    if a.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    g = poly_gcd(a, a.derivative())
    if g.degree <= 0:
        return a.monic()
    return (a // g).monic()


def _clear_denominators(p: Poly):
    """(integer coefficient list, common denominator D) with coeffs*D integral."""
    ints, denom = p.int_form()
    return list(ints), denom


def _bareiss_det(m):
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _resultant_qq(a: Poly, b: Poly):
    """Sylvester-determinant resultant over Q in integer arithmetic."""
    ai, da = _clear_denominators(a)
    bi, db = _clear_denominators(b)
    na, nb = a.degree, b.degree
    rows = []
    for i in range(nb):
        rows.append([0] * i + list(reversed(ai)) + [0] * (nb - 1 - i))
    for i in range(na):
        rows.append([0] * i + list(reversed(bi)) + [0] * (na - 1 - i))
    det = _bareiss_det(rows)
    return RAT(det, da ** nb * db ** na)


def resultant(a: Poly, b: Poly):
    """Res(a, b) = lc(a)^deg(b) * prod b(alpha) over the roots alpha of a.

    Computed over Q by an integer Sylvester determinant (fraction-free,
    fast even with huge coefficients) and over number fields by the
    Euclidean remainder recurrence.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of a zero polynomial")
    field = a.field
    if isinstance(field, RationalField) and a.degree > 0 and b.degree > 0:
        return _resultant_qq(a, b)
    acc = field.one
    sign = 1
    while True:
        if b.degree == 0:
            return acc * (1 if sign > 0 else -1) * b.lc ** a.degree
        if a.degree == 0:
            return acc * (1 if sign > 0 else -1) * a.lc ** b.degree
        r = a % b
        if r.is_zero():
            return field.zero
        if (a.degree * b.degree) % 2:
            sign = -sign
        acc = acc * b.lc ** (a.degree - r.degree)
        a, b = b, r


def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial, by iterated exact division of z^n - 1."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num = Poly(QQ, [-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = num // cyclotomic(d)
    return num


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of a polynomial over QQ, with multiplicity 1 each."""
    if p.field != QQ:
        raise TypeError("rational root search needs a polynomial over QQ")
    if p.is_zero():
        raise ValueError("zero polynomial")
    coeffs = list(p.coeffs)
    # clear denominators
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    shift = 0
    while ints[shift] == 0:
        shift += 1
    roots = [Fraction(0)] if shift else []
    a0, an = abs(ints[shift]), abs(ints[-1])
    for p0 in _divisors(a0):
        for q0 in _divisors(an):
            for sgn in (1, -1):
                cand = Fraction(sgn * p0, q0)
                if cand not in roots and not p(cand):
                    roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# smoothness


class SmoothnessFailure:
    """Witness that an integer is not smooth over a prime set."""

    def __init__(self, witness):
        self.witness = witness  # a prime, or the string "composite remainder"

    def __repr__(self):
        return f"SmoothnessFailure({self.witness!r})"

    def __eq__(self, other):
        return isinstance(other, SmoothnessFailure) and self.witness == other.witness


def factor_over_primes(n: int, primes: Iterable[int], trial_limit: int = 10 ** 6):
    """Exponent vector of |n| over the prime set, or a failure witness.

    Returns a dict {p: e} with only nonzero exponents on success.  On
    failure returns a SmoothnessFailure holding the smallest prime
    factor of the non-smooth remainder found by trial division, or the
    string "composite remainder" if none below the trial limit.
    """
    if n == 0:
        raise ValueError("smoothness of zero is undefined")
    m = abs(n)
    out = {}
    for p in sorted(set(primes)):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out[p] = e
    if m == 1:
        return out
    d = 2
    while d <= trial_limit and d * d <= m:
        if m % d == 0:
            return SmoothnessFailure(d)
        d += 1
    if m <= trial_limit * trial_limit:
        return SmoothnessFailure(m)  # m itself is prime
    return SmoothnessFailure("composite remainder")


def is_smooth(n: int, primes: Iterable[int]) -> bool:
    return not isinstance(factor_over_primes(n, primes), SmoothnessFailure)


# ---------------------------------------------------------------------------
# number fields


MAX_CHECKED_DEGREE = 8


class NumberField:
    """Q[a]/(p(a)) for a monic irreducible integer polynomial p.

    Irreducibility is certified at construction for degree <= 8 (via a
    factorization check); larger degrees must be constructed with
    assume_irreducible=True and carry that flag.
    """

    def __init__(self, minpoly: Poly, name: str = "a", assume_irreducible: bool = False):
        if minpoly.field != QQ:
            raise TypeError("defining polynomial must be over QQ")
        if minpoly.degree < 1:
            raise ValueError("defining polynomial must be nonconstant")
        if minpoly.lc != 1:
            raise ValueError("defining polynomial must be monic")
        if any(c.denominator != 1 for c in minpoly.coeffs):
            raise ValueError("defining polynomial must have integer coefficients")
        self.minpoly = minpoly
        self.name = name
        self.degree = minpoly.degree
        self.assumed_irreducible = False
        if assume_irreducible:
            self.assumed_irreducible = True
        elif self.degree <= MAX_CHECKED_DEGREE:
            if not is_irreducible(minpoly):
                raise ValueError("defining polynomial is reducible over Q")
        else:
            raise ValueError(
                "degree above the checking bound; pass assume_irreducible=True"
            )
        self._cyclotomic_index = None

    @staticmethod
    def cyclotomic_field(n: int) -> "NumberField":
        phi = cyclotomic(n)
        if phi.degree <= MAX_CHECKED_DEGREE:
            fld = NumberField(phi, name="t")
        else:
            fld = NumberField(phi, name="t", assume_irreducible=True)
            fld.assumed_irreducible = False  # cyclotomics are irreducible
        fld._cyclotomic_index = n
        return fld

    @property
    def cyclotomic_index(self):
        return self._cyclotomic_index

    def coerce(self, v) -> "NumberFieldElement":
        if isinstance(v, NumberFieldElement):
            if v.field is not self and v.field != self:
                raise TypeError("element of a different number field")
            return v
        if isinstance(v, (int, numbers.Rational, str)) or type(v) is RAT:
            return self.element([QQ.coerce(v)])
        raise TypeError(f"cannot coerce {v!r} into {self!r}")

    def element(self, coeffs: Sequence) -> "NumberFieldElement":
        cs = [QQ.coerce(c) for c in coeffs]
        if len(cs) > self.degree:
            rem = Poly(QQ, cs) % self.minpoly
            cs = list(rem.coeffs)
        cs += [QQ.zero] * (self.degree - len(cs))
        return NumberFieldElement(self, tuple(cs))

    @property
    def zero(self):
        return self.element([])

    @property
    def one(self):
        return self.element([1])

    @property
    def gen(self):
        return self.element([0, 1])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly.coeffs == other.minpoly.coeffs

    def __hash__(self):
        return hash(("ramcalc.NumberField", self.minpoly.coeffs))

    def __repr__(self):
        if self._cyclotomic_index:
            return f"Q(zeta_{self._cyclotomic_index})"
        return f"Q[{self.name}]/({self.minpoly!r})"


class NumberFieldElement:
    """Residue polynomial of degree < deg(p) over Q, reduced mod p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("NumberFieldElement is immutable")

    def _co(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise TypeError("elements of different number fields")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        other = self._co(other)
        return NumberFieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + self._co(other)

    def __mul__(self, other):
        other = self._co(other)
        prod = Poly(QQ, self.coeffs) * Poly(QQ, other.coeffs)
        return self.field.element(list((prod % self.field.minpoly).coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid on (residue, minpoly)
        a = Poly(QQ, self.coeffs)
        b = self.field.minpoly
        r0, r1 = a, b
        s0, s1 = Poly(QQ, [1]), Poly(QQ, [])
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ZeroDivisionError("zero divisor: defining polynomial not irreducible")
        inv = s0 * Poly(QQ, [QQ.one / r0.coeffs[0]])
        return self.field.element(list(inv.coeffs))

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, numbers.Rational)) or type(other) is RAT:
            other = self.field.coerce(other)
        if not isinstance(other, NumberFieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def __repr__(self):
        name = self.field.name
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*{name}" if c != 1 else name)
            else:
                terms.append(f"{c}*{name}^{i}" if c != 1 else f"{name}^{i}")
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# irreducibility over Q (small degrees)


def is_irreducible(p: Poly) -> bool:
    """Irreducibility over Q for degree <= 8; delegates to sympy's
    rational factorization (stdlib-free exact methods cover this fine,
    but sympy's is battle tested)."""
    if p.field != QQ:
        raise TypeError("irreducibility check is over QQ")
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    if p.degree > MAX_CHECKED_DEGREE:
        raise ValueError("degree above the irreducibility checking bound")
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x ** i for i, c in enumerate(p.coeffs))
    return sympy.Poly(expr, x, domain="QQ").is_irreducible


# ---------------------------------------------------------------------------
# exact linear algebra over Q


def solve_linear_system(matrix: list[list[Fraction]], rhs: list[Fraction]):
    """Solve M x = b over Q by Gaussian elimination.

    Returns the solution vector, or None if the square system is singular.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("square system expected")
    aug = [[QQ.coerce(v) for v in row] + [QQ.coerce(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]
