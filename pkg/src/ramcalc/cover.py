"""Ramification-profile calculus for covers of curves.

Two layers live here.  The concrete layer works with integer fiber
multisets: Riemann-Hurwitz genus accounting, the gcd/lcm compositum
rule and its permutation-action cross-check.  The certificate layer
works with parametrized index claims (c or c*n) and discharges
unramifiedness diagrams at chosen parameter instances.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from math import gcd, lcm
from typing import Optional, Sequence

from .exact import Poly, QQ, squarefree_part
from .rmap import PointSet


class InconsistentProfile(ValueError):
    pass


class BaseMismatch(ValueError):
    pass


class SingularCurve(ValueError):
    pass


# ---------------------------------------------------------------------------
# concrete profiles


@dataclass
class CoverProfile:
    """Degree, and for each base-point label a sorted multiset of indices.

    Unlisted base points are implicitly unramified full fibers.  Sheet
    labels are opaque: two covers with equal profiles are
    interchangeable here.
    """

    degree: int
    fibers: dict
    base_genus: int = 0

    def __post_init__(self):
        if self.degree < 1:
            raise InconsistentProfile("degree must be positive")
        clean = {}
        for label, fib in self.fibers.items():
            fib = tuple(sorted(int(e) for e in fib))
            if any(e < 1 for e in fib):
                raise InconsistentProfile(f"nonpositive index over {label!r}")
            if sum(fib) != self.degree:
                raise InconsistentProfile(
                    f"fiber over {label!r} sums to {sum(fib)}, degree is {self.degree}"
                )
            clean[label] = fib
        self.fibers = clean

    def fiber(self, label) -> tuple:
        """Fiber over a label; full unramified fiber if unlisted."""
        return self.fibers.get(label, (1,) * self.degree)


def rh_genus(p: CoverProfile) -> int:
    """Source genus from 2g - 2 = d(2g'' - 2) + sum (e - 1)."""
    branch_sum = sum(e - 1 for fib in p.fibers.values() for e in fib)
    rhs = p.degree * (2 * p.base_genus - 2) + branch_sum
    if rhs % 2:
        raise InconsistentProfile("odd Riemann-Hurwitz sum")
    g = (rhs + 2) // 2
    if g < 0:
        raise InconsistentProfile(f"negative genus {g}")
    return g


def standard_projection_profile(n: int) -> CoverProfile:
    """Degree-2 profile of the hyperelliptic projection of y^2 = x^n - 1.

    Branch points are the n-th roots of unity, plus infinity when n is
    odd; labels are opaque strings.
    """
    if n < 1:
        raise ValueError("n must be positive")
    fibers = {f"root{i}": (2,) for i in range(n)}
    if n % 2:
        fibers["inf"] = (2,)
    return CoverProfile(degree=2, fibers=fibers)


def compositum_profile(f: CoverProfile, g: CoverProfile):
    """The gcd/lcm rule for the fiber product of two covers of a base.

    Above each pair (x_i, y_j) with indices (a, b) over z sit gcd(a, b)
    points of index lcm(a, b) over z, hence lcm/a over x_i and lcm/b
    over y_j.  Returns (profile over base, over f-source, over g-source).
    """
    labels = set(f.fibers) | set(g.fibers)
    base_fibers = {}
    over_f = {}
    over_g = {}
    for z in labels:
        fa, gb = f.fiber(z), g.fiber(z)
        base = []
        for i, a in enumerate(fa):
            pts = []
            for b in gb:
                pts.extend([lcm(a, b)] * gcd(a, b))
            base.extend(pts)
            over_f[(z, i)] = tuple(sorted(e // a for e in pts))
        for j, b in enumerate(gb):
            col = []
            for a in fa:
                col.extend([lcm(a, b) // b] * gcd(a, b))
            over_g[(z, j)] = tuple(sorted(col))
        base_fibers[z] = tuple(sorted(base))
    d = f.degree * g.degree
    return (
        CoverProfile(degree=d, fibers=base_fibers, base_genus=f.base_genus),
        CoverProfile(degree=g.degree, fibers={k: v for k, v in over_f.items() if any(e > 1 for e in v)}),
        CoverProfile(degree=f.degree, fibers={k: v for k, v in over_g.items() if any(e > 1 for e in v)}),
    )


def permutation_compositum_fiber(fa: Sequence[int], gb: Sequence[int]) -> tuple:
    """Brute-force oracle for one base point of the compositum rule.

    Realize each fiber as a permutation with one cycle per index, act
    on the product set, and read off orbit sizes.
    """
    points_f = [(i, s) for i, a in enumerate(fa) for s in range(a)]
    points_g = [(j, s) for j, b in enumerate(gb) for s in range(b)]

    def succ_f(p):
        i, s = p
        return (i, (s + 1) % fa[i])

    def succ_g(p):
        j, s = p
        return (j, (s + 1) % gb[j])

    seen = set()
    orbits = []
    for pf in points_f:
        for pg in points_g:
            if (pf, pg) in seen:
                continue
            size = 0
            cur = (pf, pg)
            while cur not in seen:
                seen.add(cur)
                size += 1
                cur = (succ_f(cur[0]), succ_g(cur[1]))
            orbits.append(size)
    return tuple(sorted(orbits))


def is_unramified_over(f: CoverProfile, g: CoverProfile):
    """Abhyankar's criterion: every g-index divides every f-index.

    True means the compositum is unramified over the f-source.
    Returns (ok, witness) with witness = (label, a, b) on failure.
    """
    for z in set(f.fibers) | set(g.fibers):
        for a in f.fiber(z):
            for b in g.fiber(z):
                if a % b:
                    return False, (z, a, b)
    return True, None


# ---------------------------------------------------------------------------
# division polynomials (x-coordinates of small torsion)


def division_poly_zeroset(a, b, m: int) -> PointSet:
    """x-coordinates of the nontrivial m-torsion of y^2 = x^3 + ax + b."""
    a, b = QQ.coerce(a), QQ.coerce(b)
    if 4 * a ** 3 + 27 * b ** 2 == 0:
        raise SingularCurve("discriminant vanishes")
    if m == 2:
        p = Poly(QQ, [b, a, 0, 1])
    elif m == 3:
        p = Poly(QQ, [-a * a, 12 * b, 6 * a, 0, 3])
    else:
        raise ValueError("only m = 2 and m = 3 are supported")
    return PointSet(squarefree_part(p))


# ---------------------------------------------------------------------------
# parametrized indices and fiber claims


_PARAM_RE = re.compile(r"^(\d*)(n?)$")


@dataclass(frozen=True)
class ParamIndex:
    """c * n^e with integer c >= 1 and e in {0, 1}."""

    coeff: int
    power: int = 0

    def __post_init__(self):
        if self.coeff < 1:
            raise ValueError("coefficient must be >= 1")
        if self.power not in (0, 1):
            raise ValueError("parameter power must be 0 or 1")

    def at(self, n: int) -> int:
        return self.coeff * (n if self.power else 1)

    @staticmethod
    def parse(s: str) -> "ParamIndex":
        m = _PARAM_RE.match(s.strip())
        if not m:
            raise ValueError(f"bad parametrized index {s!r}")
        c = int(m.group(1)) if m.group(1) else 1
        return ParamIndex(c, 1 if m.group(2) else 0)

    def divides_symbolically(self, other: "ParamIndex") -> Optional[bool]:
        """Whether self | other for every n >= 1; None when undecided."""
        if self.power == other.power:
            return other.coeff % self.coeff == 0
        if self.power == 0 and other.power == 1:
            # sufficient: c1 | c2 implies c1 | c2*n
            return True if other.coeff % self.coeff == 0 else None
        return None

    def __str__(self):
        if self.power == 0:
            return str(self.coeff)
        return "n" if self.coeff == 1 else f"{self.coeff}n"


@dataclass(frozen=True)
class Fiber:
    """A parametrized fiber claim over one base point.

    form "explicit": the full list of indices; "all": every point has
    this index; "divides": every index divides this value; "multiple":
    every index is a multiple of this value.
    """

    form: str
    data: tuple

    def __post_init__(self):
        if self.form not in ("explicit", "all", "divides", "multiple"):
            raise ValueError(f"unknown fiber form {self.form!r}")
        if self.form != "explicit" and len(self.data) != 1:
            raise ValueError(f"{self.form} fiber takes a single index")

    @staticmethod
    def trivial() -> "Fiber":
        return Fiber("all", (ParamIndex(1),))

    def values_at(self, n: int):
        return tuple(p.at(n) for p in self.data)

    def __str__(self):
        inner = ",".join(str(p) for p in self.data)
        return f"{self.form}({inner})"


TRIVIAL_FIBER = Fiber("all", (ParamIndex(1),))


@dataclass
class Arrow:
    """A cover in a certificate: named, with parametrized fiber claims."""

    name: str
    source: str
    target: str
    degree: Optional[ParamIndex]
    fibers: dict  # base label -> Fiber


@dataclass
class DiagramCertificate:
    name: str
    nodes: list
    claims: list  # (kind, payload...) tuples in dependency order
    conclusion: Optional[tuple] = None  # (source node, target node)


@dataclass
class ClaimVerdict:
    kind: str
    subject: str
    status: str  # "pass" | "fail" | "assumed"
    details: list = dc_field(default_factory=list)


@dataclass
class CertificateReport:
    name: str
    instances: list
    verdicts: list
    assumptions: list  # (tag, text), echoed, never counted as pass

    @property
    def passed(self) -> bool:
        return all(v.status != "fail" for v in self.verdicts)

    @property
    def discharged_arrows(self) -> list:
        return [v.subject for v in self.verdicts if v.kind == "unramified" and v.status == "pass"]


class CertificateError(ValueError):
    pass


def _divisibility_ok(f_fiber: Fiber, g_fiber: Fiber, n: int):
    """Does every g-index divide every f-index at this instance?

    Returns (ok, witness).  Rules are conservative: a fiber form the
    rule set cannot bound is a failure, never a silent pass.
    """
    ff, gf = f_fiber.form, g_fiber.form
    if gf in ("explicit", "all"):
        bs = g_fiber.values_at(n)
        if ff in ("explicit", "all"):
            for a in f_fiber.values_at(n):
                for b in bs:
                    if a % b:
                        return False, (a, b)
            return True, None
        if ff == "multiple":
            (m,) = f_fiber.values_at(n)
            for b in bs:
                if m % b:
                    return False, (f"multiple {m}", b)
            return True, None
        return False, (str(f_fiber), str(g_fiber))
    if gf == "divides":
        (c,) = g_fiber.values_at(n)
        if ff in ("explicit", "all"):
            for a in f_fiber.values_at(n):
                if a % c:
                    return False, (a, f"divides {c}")
            return True, None
        if ff == "multiple":
            (m,) = f_fiber.values_at(n)
            return (True, None) if m % c == 0 else (False, (f"multiple {m}", f"divides {c}"))
        if ff == "divides":
            (d,) = f_fiber.values_at(n)
            return (True, None) if c == 1 else (False, (f"divides {d}", f"divides {c}"))
    return False, (str(f_fiber), str(g_fiber))


def _uniform_value(fiber: Fiber, n: int) -> Optional[int]:
    vals = set(fiber.values_at(n))
    if fiber.form in ("explicit", "all") and len(vals) == 1:
        return vals.pop()
    return None


def _project_ok(f_fiber: Fiber, g_fiber: Fiber, claimed: Fiber, n: int):
    """Validate a claimed index profile over the g-source above one base.

    A point over x (f-index a) and y (g-index b) acquires lcm(a, b)/b
    over y.  The claim forms mirror the arguments actually used:
    uniform values project to uniform values, "multiple" and "divides"
    bounds project to "multiple" bounds.
    """
    fu = _uniform_value(f_fiber, n)
    gu = _uniform_value(g_fiber, n)
    if claimed.form == "all":
        (r,) = claimed.values_at(n)
        if fu is None or gu is None:
            return False, "uniform claim needs uniform fibers"
        actual = lcm(fu, gu) // gu
        return (True, None) if actual == r else (False, f"index over g-source is {actual}, claimed {r}")
    if claimed.form == "multiple":
        (r,) = claimed.values_at(n)
        if f_fiber.form == "multiple":
            (m,) = f_fiber.values_at(n)
            if gu is not None:
                bound = m // gcd(m, gu)
            elif g_fiber.form == "divides":
                (c,) = g_fiber.values_at(n)
                bound = m // gcd(m, c)
            else:
                return False, "unsupported g-fiber form"
            return (True, None) if bound % r == 0 else (False, f"guaranteed multiple {bound}, claimed {r}")
        if fu is not None and g_fiber.form == "divides":
            (c,) = g_fiber.values_at(n)
            # every b | c gives lcm(fu,b)/b = fu/b whenever b | fu; need r*c | fu
            return (True, None) if fu % (r * c) == 0 else (False, f"{r}*{c} does not divide {fu}")
        if fu is not None and gu is not None:
            actual = lcm(fu, gu) // gu
            return (True, None) if actual % r == 0 else (False, f"index {actual} not a multiple of {r}")
        return False, "unsupported fiber forms"
    return False, f"unsupported claim form {claimed.form}"


def _compose_ok(outer_fiber: Fiber, inner: Fiber, claimed: Fiber, n: int):
    """Composite index over one base point: outer index times inner index.

    The inner fiber claim comes from a project step covering all the
    relevant preimages (a certificate assumption records why).
    """
    ou = _uniform_value(outer_fiber, n)
    if claimed.form == "all":
        (r,) = claimed.values_at(n)
        iu = _uniform_value(inner, n)
        if ou is None or iu is None:
            return False, "uniform composite claim needs uniform factors"
        return (True, None) if ou * iu == r else (False, f"composite index {ou * iu}, claimed {r}")
    if claimed.form == "multiple":
        (r,) = claimed.values_at(n)
        if inner.form == "multiple" or (inner.form in ("all", "explicit") and _uniform_value(inner, n) is not None):
            (m,) = (inner.values_at(n) if inner.form == "multiple" else (_uniform_value(inner, n),))
            if ou is not None:
                return (True, None) if (ou * m) % r == 0 else (False, f"composite multiple {ou * m}, claimed {r}")
            if outer_fiber.form == "divides":
                # outer index unknown but >= 1; only the inner bound survives
                return (True, None) if m % r == 0 else (False, f"inner multiple {m}, claimed {r}")
        return False, "unsupported inner fiber form"
    return False, f"unsupported claim form {claimed.form}"


def verify_certificate(cert: DiagramCertificate, parameter_instances: Sequence[int]) -> CertificateReport:
    """Discharge a diagram certificate at the given parameter values.

    Claims are processed in order; profile claims register arrows,
    unramified/project/compose claims are checked against the arrows
    already registered.  Assumptions are echoed in the report and never
    counted as passes.
    """
    instances = sorted(set(int(v) for v in parameter_instances))
    if not instances or any(v < 1 for v in instances):
        raise CertificateError("parameter instances must be positive integers")
    arrows: dict = {}
    verdicts = []
    assumptions = []
    nodes = set(cert.nodes)

    def lookup(name: str) -> Arrow:
        if name not in arrows:
            raise CertificateError(f"claim references unregistered arrow {name!r}")
        return arrows[name]
    for claim in cert.claims:
        kind = claim[0]
        if kind == "profile":
            _, arrow, basis = claim
            if arrow.source not in nodes or arrow.target not in nodes:
                raise CertificateError(f"arrow {arrow.name} references unknown nodes")
            if arrow.name in arrows:
                raise CertificateError(f"duplicate arrow {arrow.name}")
            arrows[arrow.name] = arrow
            if basis.startswith("assume:"):
                tag = basis.split(":", 1)[1]
                assumptions.append((tag, f"profile of {arrow.name} taken as given"))
                verdicts.append(ClaimVerdict("profile", arrow.name, "assumed", [f"tag {tag}"]))
            else:
                verdicts.append(ClaimVerdict("profile", arrow.name, "pass", [f"basis {basis}"]))
        elif kind == "assume":
            _, tag, text = claim
            assumptions.append((tag, text))
            verdicts.append(ClaimVerdict("assume", tag, "assumed", [text]))
        elif kind == "unramified":
            _, name, f_name, g_name = claim
            f, g = lookup(f_name), lookup(g_name)
            verdict = ClaimVerdict("unramified", name, "pass")
            labels = set(f.fibers) | set(g.fibers)
            for z in sorted(labels, key=str):
                ff = f.fibers.get(z, TRIVIAL_FIBER)
                gf = g.fibers.get(z, TRIVIAL_FIBER)
                sym = _symbolic_divides(gf, ff)
                if sym:
                    verdict.details.append(f"over {z}: {gf} | {ff} symbolically")
                    continue
                for n in instances:
                    ok, witness = _divisibility_ok(ff, gf, n)
                    if not ok:
                        verdict.status = "fail"
                        verdict.details.append(f"over {z} at n={n}: {witness}")
            verdicts.append(verdict)
        elif kind == "project":
            _, arrow, f_name, g_name, at_labels = claim
            f, g = lookup(f_name), lookup(g_name)
            verdict = ClaimVerdict("project", arrow.name, "pass")
            for z in at_labels:
                ff = f.fibers.get(z, TRIVIAL_FIBER)
                gf = g.fibers.get(z, TRIVIAL_FIBER)
                for target_label, claimed in arrow.fibers.items():
                    for n in instances:
                        ok, why = _project_ok(ff, gf, claimed, n)
                        if not ok:
                            verdict.status = "fail"
                            verdict.details.append(f"base {z} -> {target_label} at n={n}: {why}")
            arrows[arrow.name] = arrow
            verdicts.append(verdict)
        elif kind == "compose":
            _, arrow, outer_name, inner_name = claim
            outer, inner = lookup(outer_name), lookup(inner_name)
            inner_specs = list(inner.fibers.values())
            if not inner_specs:
                raise CertificateError(f"compose {arrow.name}: inner arrow has no fiber claims")
            inner_spec = inner_specs[0]
            if any(s != inner_spec for s in inner_specs):
                raise CertificateError(f"compose {arrow.name}: inner fiber claims not uniform")
            verdict = ClaimVerdict("compose", arrow.name, "pass")
            for z, claimed in arrow.fibers.items():
                of = outer.fibers.get(z, TRIVIAL_FIBER)
                for n in instances:
                    ok, why = _compose_ok(of, inner_spec, claimed, n)
                    if not ok:
                        verdict.status = "fail"
                        verdict.details.append(f"over {z} at n={n}: {why}")
            arrows[arrow.name] = arrow
            verdicts.append(verdict)
        elif kind == "conclude":
            _, source, target = claim
            verdicts.append(ClaimVerdict("conclude", f"{source} => {target}", "pass"))
        else:
            raise CertificateError(f"unknown claim kind {kind!r}")
    return CertificateReport(
        name=cert.name, instances=instances, verdicts=verdicts, assumptions=assumptions
    )


def _symbolic_divides(g_fiber: Fiber, f_fiber: Fiber) -> bool:
    """Symbolic b | a when both sides are uniform parametrized indices."""
    if g_fiber.form in ("all", "explicit") and f_fiber.form in ("all", "explicit", "multiple"):
        gs, fs = set(g_fiber.data), set(f_fiber.data)
        if len(gs) == 1 and len(fs) == 1:
            res = gs.pop().divides_symbolically(fs.pop())
            return bool(res)
    return False
