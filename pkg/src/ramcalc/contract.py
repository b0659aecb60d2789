"""Contract algebraic point sets on the line to rational points.

Given a finite set of algebraic points (as minimal polynomials), build
a composition of polynomial maps over Q, each of 2-power degree with
all finite local indices 2, whose composite sends every point to a
rational point.  The trick in each step: multiply the worst minimal
polynomial f (degree m) by a solved cofactor g of degree r = 2^k - m
so that F = fg has critical points at chosen rational targets; roots
of f all map to 0 under F.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Optional

from .exact import Poly, QQ, resultant, solve_linear_system, squarefree_part
from .rmap import RationalMap, INF


class TargetCollision(ValueError):
    pass


class SingularSystem(ValueError):
    pass


class StrategyExhausted(RuntimeError):
    def __init__(self, attempts):
        self.attempts = attempts
        super().__init__(f"no admissible target tuple found in {attempts} attempts")


class HeightCapExceeded(RuntimeError):
    pass


@dataclass
class AlgebraicPointSet:
    """Monic irreducible rational polynomials plus an infinity flag.

    Each polynomial stands for its full conjugacy class of points;
    degree-1 entries are rational points.
    """

    polys: list
    has_inf: bool = False

    def __post_init__(self):
        seen = set()
        for p in self.polys:
            if p.field != QQ or p.is_zero() or p.lc != 1:
                raise ValueError("entries must be monic polynomials over Q")
            if p.coeffs in seen:
                raise ValueError("duplicate entry")
            seen.add(p.coeffs)

    @staticmethod
    def from_polys(polys: Iterable[Poly], has_inf: bool = False) -> "AlgebraicPointSet":
        out = []
        for p in polys:
            for q in _irreducible_factors(p):
                if q.coeffs not in {r.coeffs for r in out}:
                    out.append(q)
        return AlgebraicPointSet(sorted(out, key=lambda q: (q.degree, q.coeffs)), has_inf)

    def max_degree(self) -> int:
        return max((p.degree for p in self.polys), default=0)

    def degree_multiset(self) -> tuple:
        return tuple(sorted((p.degree for p in self.polys), reverse=True))

    def measure(self) -> tuple:
        """(max degree, count at max degree) — strictly drops each step."""
        m = self.max_degree()
        return (m, sum(1 for p in self.polys if p.degree == m))

    def all_rational(self) -> bool:
        return self.max_degree() <= 1


def _irreducible_factors(p: Poly) -> list:
    """Monic irreducible factors of a squarefree polynomial over Q.

    Delegates to sympy: coefficient sizes here can be huge and its
    factorization stays polynomial-time, unlike rational-root trial
    division.
    """
    p = squarefree_part(p)
    if p.degree == 0:
        return []
    if p.degree == 1:
        return [p]
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x ** i for i, c in enumerate(p.coeffs))
    out = []
    _, factors = sympy.Poly(expr, x, domain="QQ").factor_list()
    for fac, mult in factors:
        assert mult == 1
        coeffs = [Fraction(c.p, c.q) for c in reversed(fac.monic().all_coeffs())]
        out.append(Poly(QQ, coeffs))
    return out


def split_degree(m: int):
    """The unique (k, r) with 2^(k-1) <= m < 2^k and r = 2^k - m."""
    if m < 2:
        raise ValueError("rational points need no reduction step")
    k = m.bit_length()
    return k, (1 << k) - m


def build_cofactor(f: Poly, targets: list) -> Poly:
    """Monic g with (fg)'(x_i) = 0 at each target, by exact linear solve.

    Write g = z^r + a_{r-1} z^{r-1} + ... + a_0; each condition
    F'(x_i) = 0 is linear in the a_j.  Targets must be distinct and
    avoid the roots of f and the common roots of f and f'.
    """
    if f.field != QQ:
        raise TypeError("cofactor construction works over Q")
    targets = [QQ.coerce(x) for x in targets]
    if len(set(targets)) != len(targets):
        raise TargetCollision("repeated target")
    for x in targets:
        if f.evaluates_to_zero(x):
            raise TargetCollision(f"target {x} is a root of f")
    r = len(targets)
    if r == 0:
        return Poly(QQ, [1])
    fp = f.derivative()
    # F' = f'g + fg'; row for target x: sum_j a_j (f'(x) x^j + f(x) j x^(j-1))
    matrix = []
    rhs = []
    for x in targets:
        fx, fpx = f(x), fp(x)
        row = []
        for j in range(r):
            dmono = j * x ** (j - 1) if j else Fraction(0)
            row.append(fpx * x ** j + fx * dmono)
        lead = fpx * x ** r + fx * r * x ** (r - 1)
        matrix.append(row)
        rhs.append(-lead)
    sol = solve_linear_system(matrix, rhs)
    if sol is None:
        raise SingularSystem(f"degenerate {r}x{r} system for targets {targets}")
    return Poly(QQ, list(sol) + [1])


@dataclass
class ReductionStep:
    eliminated: Poly
    k: int
    r: int
    targets: list
    cofactor: Poly
    product: Poly  # F = f * g, degree 2^k
    finite_ram: list  # verified (point-or-polynomial, index) data
    coeff_bits: int  # largest numerator/denominator bit size in F


@dataclass
class ContractionResult:
    steps: list
    final_set: AlgebraicPointSet
    index_certificate: list  # per-step (finite index bound, index at infinity)

    @property
    def composite_index_bound(self) -> int:
        """Product of per-step index bounds along any orbit (a 2-power)."""
        out = 1
        for _, at_inf in self.index_certificate:
            out *= at_inf
        return out


def default_targets():
    """Deterministic small-height spiral 0, 1, -1, 2, -2, ..."""
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        k += 1


# large primes for the modular squarefreeness certificate
_CERT_PRIMES = (
    (1 << 61) - 1,
    (1 << 62) - 57,
    (1 << 62) - 87,
    (1 << 62) - 117,
    (1 << 62) - 143,
    (1 << 62) - 153,
    (1 << 62) - 167,
    (1 << 62) - 171,
)


def _poly_gcd_degree_mod(a: list, b: list, q: int) -> int:
    """Degree of gcd of two integer coefficient lists modulo a prime q."""
    a = [c % q for c in a]
    b = [c % q for c in b]
    while b and not b[-1] % q:
        b.pop()
    while a and not a[-1] % q:
        a.pop()
    while b:
        inv = pow(b[-1], -1, q)
        while len(a) >= len(b):
            factor = a[-1] * inv % q
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - factor * c) % q
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _is_squarefree_qq(p: Poly) -> bool:
    """Certified squarefreeness over Q.

    A trivial gcd(p, p') modulo any good prime certifies a nonzero
    discriminant, which is exact evidence; an unlucky prime only forces
    a retry.  The exact resultant is the (rarely needed) fallback.
    """
    ints, _ = p.int_form()
    ints = list(ints)
    deriv = [i * c for i, c in enumerate(ints)][1:]
    for q in _CERT_PRIMES:
        if ints[-1] % q == 0:
            continue
        if _poly_gcd_degree_mod(ints, deriv, q) == 0:
            return True
    return bool(resultant(p, p.derivative()))


def _check_step(F: Poly, targets: list) -> list:
    """Verify the per-step ramification certificate of F as a map.

    F' vanishes at each target, F' is squarefree (so all finite
    indices are exactly 2), and the index at infinity is deg F.
    """
    Fp = F.derivative()
    for x in targets:
        if not Fp.evaluates_to_zero(x):
            raise ArithmeticError(f"F'({x}) != 0")
    if not _is_squarefree_qq(Fp):
        raise ArithmeticError("F' is not squarefree")
    fmap = RationalMap(F, Poly(QQ, [1]))
    ram = []
    for x in targets:
        e = fmap.local_index(x)
        if e != 2:
            raise ArithmeticError(f"finite index at {x} is {e}, not 2")
        ram.append((x, 2))
    if fmap.local_index(INF) != F.degree:
        raise ArithmeticError("index at infinity is not deg F")
    # Riemann-Hurwitz completeness: deg F - 1 simple finite critical
    # points plus index deg F at infinity gives exactly 2 deg F - 2
    if Fp.degree != F.degree - 1:
        raise ArithmeticError("critical divisor has the wrong degree")
    return ram


def _max_coeff_bits(p: Poly) -> int:
    bits = 0
    for c in p.coeffs:
        bits = max(bits, c.numerator.bit_length(), c.denominator.bit_length())
    return bits


def reduction_step(
    S: AlgebraicPointSet,
    strategy=None,
    retry_cap: int = 1000,
    height_cap: Optional[int] = None,
):
    """One round of the elimination: returns (ReductionStep, new set).

    Picks a maximal-degree entry f, searches the strategy stream for an
    admissible target tuple (cofactor solvable, F' squarefree), then
    rebuilds the point set as F(S) together with the ramification data
    of F.  The degree-m count strictly drops: roots of f go to the
    rational point 0.
    """
    m = S.max_degree()
    if m < 2:
        raise ValueError("set is already rational")
    f = next(p for p in S.polys if p.degree == m)
    k, r = split_degree(m)
    stream = strategy() if strategy is not None else default_targets()

    attempts = 0
    window: list = []
    step = None
    for cand in stream:
        if attempts >= retry_cap:
            break
        if cand in window or f.evaluates_to_zero(cand):
            continue
        window.append(cand)
        if len(window) < r:
            continue
        attempts += 1
        targets = list(window[-r:]) if r else []
        try:
            g = build_cofactor(f, targets)
            F = f * g
            finite_ram = _check_step(F, targets)
        except (SingularSystem, TargetCollision, ArithmeticError):
            window.pop(0)
            continue
        bits = _max_coeff_bits(F)
        if height_cap is not None and bits > height_cap:
            raise HeightCapExceeded(f"coefficient size {bits} bits exceeds cap {height_cap}")
        step = ReductionStep(
            eliminated=f, k=k, r=r, targets=targets, cofactor=g,
            product=F, finite_ram=finite_ram, coeff_bits=bits,
        )
        break
    if step is None:
        raise StrategyExhausted(attempts)

    F = step.product
    new_polys = []
    for p in S.polys:
        if p.degree == 1:
            # rational points stay rational under every later map;
            # carry them along untouched instead of pushing them forward
            new_polys.append(p)
        else:
            new_polys.append(_image_poly(F, p))
    # ramification data: targets and the remaining critical cofactor, plus images
    Fp = F.derivative()
    crit = Fp.monic()
    for x in step.targets:
        crit = crit // Poly(QQ, [-x, 1])
    for x in step.targets:
        new_polys.append(Poly(QQ, [-x, 1]))
        new_polys.append(Poly(QQ, [-F(x), 1]))
    if crit.degree > 0:
        new_polys.append(crit)
        new_polys.append(_image_poly(F, crit))
    new_set = AlgebraicPointSet.from_polys(new_polys, has_inf=True)

    old_measure, new_measure = S.measure(), new_set.measure()
    if not new_measure < old_measure:
        raise ArithmeticError(f"termination measure did not drop: {old_measure} -> {new_measure}")
    return step, new_set


def _image_poly(F: Poly, s: Poly) -> Poly:
    """Squarefree polynomial vanishing on F(roots of s).

    Computed as the characteristic polynomial of multiplication by
    F mod s on Q[z]/(s): its eigenvalues are exactly F(alpha) over the
    roots alpha of s.  This avoids resultants of huge polynomials.
    """
    s = squarefree_part(s)
    k = s.degree
    if k == 0:
        raise ValueError("image of an empty point set")
    rbar = F % s
    # multiplication matrix: column j holds rbar * z^j mod s
    cols = []
    cur = rbar
    for j in range(k):
        coeffs = list(cur.coeffs) + [QQ.zero] * (k - len(cur.coeffs))
        cols.append(coeffs)
        if j < k - 1:
            cur = (cur * Poly(QQ, [0, 1])) % s
    matrix = [[cols[j][i] for j in range(k)] for i in range(k)]
    char = _charpoly(matrix)
    return squarefree_part(char)


def _charpoly(matrix: list) -> Poly:
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion."""
    n = len(matrix)
    ident = [[QQ.one if i == j else QQ.zero for j in range(n)] for i in range(n)]
    coeffs = [QQ.one]  # of y^n down to y^0
    M = ident
    for m in range(1, n + 1):
        # M <- A (M + c_{m-1} I), c_m = -tr(M)/m
        AM = [[sum(matrix[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        trace = sum(AM[i][i] for i in range(n))
        c = -trace / m
        coeffs.append(c)
        if m < n:
            M = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return Poly(QQ, list(reversed(coeffs)))


def contract_to_rational(
    S: AlgebraicPointSet,
    strategy=None,
    retry_cap: int = 1000,
    height_cap: Optional[int] = None,
    max_steps: int = 64,
) -> ContractionResult:
    """Iterate reduction steps until every tracked point is rational.

    The composite map is the composition of the step products F; its
    local indices multiply along orbits, and each step contributes
    finite indices in {1, 2} and index 2^k at infinity, so every
    composite index is a power of 2.
    """
    steps = []
    cert = []
    current = S
    while not current.all_rational():
        if len(steps) >= max_steps:
            raise StrategyExhausted(len(steps))
        step, current = reduction_step(current, strategy, retry_cap, height_cap)
        steps.append(step)
        cert.append((2, step.product.degree))
    return ContractionResult(steps=steps, final_set=current, index_certificate=cert)
