"""Versioned text formats for chain and certificate artifacts.

Chains: a base field, a starting branch set with indices, and a list
of steps (explicit rational map, degree-1 automorphism, or a
product-form step given by support and exponents), each with claimed
ramification data and claimed output set.  Certificates: nodes,
parametrized arrows, and an ordered claim list for the diagram
checker.  All numbers are exact decimal strings; number-field elements
are expressions in the generator t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .exact import NumberField, NumberFieldElement, Poly, QQ, RationalField
from .rmap import INF, RationalMap, is_inf
from .cover import Arrow, DiagramCertificate, Fiber, ParamIndex

CHAIN_HEADER = "ramcalc-chain 1"
CERT_HEADER = "ramcalc-cert 1"


class ManifestError(ValueError):
    pass


# ---------------------------------------------------------------------------
# point expressions


_TOKEN_RE = re.compile(r"\s*(\d+|[tT]|\^|\+|\-|\*|/|\(|\))")


def _tokenize(s: str):
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise ManifestError(f"bad character in expression {s!r} at {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _ExprParser:
    """Recursive-descent parser for field-element expressions.

    Grammar: expr = term (('+'|'-') term)*; term = factor (('*'|'/')
    factor)*; factor = '-'* atom ('^' int)?; atom = int | t | (expr).
    """

    def __init__(self, field, tokens):
        self.field = field
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            raise ManifestError(f"trailing tokens near {self.peek()!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            w = self.factor()
            v = v * w if op == "*" else v / w
        return v

    def factor(self):
        sign = 1
        while self.peek() == "-":
            self.take()
            sign = -sign
        v = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise ManifestError("exponent must be a nonnegative integer")
            v = v ** int(e)
        return v if sign > 0 else -v

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ManifestError("unexpected end of expression")
        if tok.isdigit():
            return self.field.coerce(int(tok))
        if tok in ("t", "T"):
            if isinstance(self.field, RationalField):
                raise ManifestError("generator t used over the rationals")
            return self.field.gen
        if tok == "(":
            v = self.expr()
            if self.take() != ")":
                raise ManifestError("unbalanced parenthesis")
            return v
        raise ManifestError(f"unexpected token {tok!r}")


def parse_point(field, s: str):
    """Parse 'inf' or a field-element expression."""
    s = s.strip()
    if s == "inf":
        return INF
    return _ExprParser(field, _tokenize(s)).parse()


def render_point(p) -> str:
    if is_inf(p):
        return "inf"
    if isinstance(p, NumberFieldElement):
        return _render_nfe(p)
    return str(Fraction(p))


def _render_coeff_monomial(c, i: int) -> str:
    c = Fraction(c)
    if i == 0:
        return str(c)
    power = "t" if i == 1 else f"t^{i}"
    if c == 1:
        return power
    if c == -1:
        return f"-{power}"
    return f"{c}*{power}"


def _render_nfe(p: NumberFieldElement) -> str:
    terms = [_render_coeff_monomial(c, i) for i, c in enumerate(p.coeffs) if c]
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _render_field_spec(field) -> str:
    if isinstance(field, RationalField):
        return "rational"
    if isinstance(field, NumberField) and field.cyclotomic_index is not None:
        return f"cyclotomic {field.cyclotomic_index}"
    raise ManifestError("only rational and cyclotomic base fields are supported")


def _parse_field_spec(spec: str):
    parts = spec.split()
    if parts == ["rational"]:
        return QQ
    if len(parts) == 2 and parts[0] == "cyclotomic":
        return NumberField.cyclotomic_field(int(parts[1]))
    raise ManifestError(f"bad field spec {spec!r}")


# ---------------------------------------------------------------------------
# chain manifests


@dataclass
class ChainStep:
    name: str
    kind: str  # "map" | "auto" | "belyi"
    map: Optional[RationalMap] = None
    support: Optional[tuple] = None
    exponents: Optional[tuple] = None
    ram: list = dc_field(default_factory=list)  # (point, index)
    out: list = dc_field(default_factory=list)  # points


@dataclass
class ChainManifest:
    name: str
    field: object
    start: list  # (point, index)
    steps: list
    bound: Optional[int] = None
    bound_primes: Optional[tuple] = None


def render_chain(m: ChainManifest) -> str:
    lines = [CHAIN_HEADER, f"name {m.name}", f"field {_render_field_spec(m.field)}"]
    if m.bound is not None:
        lines.append(f"bound {m.bound}")
    if m.bound_primes is not None:
        lines.append("bound-primes " + " ".join(str(p) for p in m.bound_primes))
    lines.append("start " + " ".join(f"{render_point(p)}:{i}" for p, i in m.start))
    for step in m.steps:
        lines.append(f"step {step.name} {step.kind}")
        if step.kind == "belyi":
            lines.append("support " + " ".join(str(Fraction(q)) for q in step.support))
            lines.append("exponents " + " ".join(str(r) for r in step.exponents))
        else:
            lines.append("num " + " ".join(render_point(c) for c in step.map.num.coeffs))
            lines.append("den " + " ".join(render_point(c) for c in step.map.den.coeffs))
        if step.ram:
            lines.append("ram " + " ".join(f"{render_point(p)}:{i}" for p, i in step.ram))
        lines.append("out " + " ".join(render_point(p) for p in step.out))
    return "\n".join(lines) + "\n"


def parse_chain(text: str) -> ChainManifest:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CHAIN_HEADER:
        raise ManifestError("missing or wrong chain header")
    name = None
    field = None
    bound = None
    bound_primes = None
    start = []
    steps = []
    current = None

    def close_step():
        if current is None:
            return
        if current.kind == "belyi":
            if current.support is None or current.exponents is None:
                raise ManifestError(f"step {current.name}: missing support/exponents")
        else:
            if current.map is None:
                raise ManifestError(f"step {current.name}: missing num/den")
        steps.append(current)

    num_coeffs = None
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "name":
            name = rest.strip()
        elif key == "field":
            field = _parse_field_spec(rest)
        elif key == "bound":
            bound = int(rest)
        elif key == "bound-primes":
            bound_primes = tuple(int(p) for p in rest.split())
        elif key == "start":
            if field is None:
                raise ManifestError("field must precede start")
            for item in rest.split():
                p, _, i = item.rpartition(":")
                start.append((parse_point(field, p), int(i)))
        elif key == "step":
            close_step()
            parts = rest.split()
            if len(parts) != 2 or parts[1] not in ("map", "auto", "belyi"):
                raise ManifestError(f"bad step line {ln!r}")
            current = ChainStep(name=parts[0], kind=parts[1])
            num_coeffs = None
        elif key == "support":
            current.support = tuple(Fraction(q) for q in rest.split())
        elif key == "exponents":
            current.exponents = tuple(int(r) for r in rest.split())
        elif key == "num":
            num_coeffs = [parse_point(field, c) for c in rest.split()]
        elif key == "den":
            den_coeffs = [parse_point(field, c) for c in rest.split()]
            if num_coeffs is None:
                raise ManifestError(f"step {current.name}: den before num")
            current.map = RationalMap(Poly(field, num_coeffs), Poly(field, den_coeffs))
        elif key == "ram":
            for item in rest.split():
                p, _, i = item.rpartition(":")
                current.ram.append((parse_point(field, p), int(i)))
        elif key == "out":
            current.out = [parse_point(field, p) for p in rest.split()]
        else:
            raise ManifestError(f"unknown chain key {key!r}")
    close_step()
    if name is None or field is None or not start:
        raise ManifestError("chain needs name, field, and start")
    return ChainManifest(
        name=name, field=field, start=start, steps=steps, bound=bound, bound_primes=bound_primes
    )


# ---------------------------------------------------------------------------
# certificate manifests


@dataclass
class CertificateManifest:
    certificate: DiagramCertificate
    parameter: str
    instances: tuple
    arrows: list  # declaration order, for rendering


def _render_pi(pi: Optional[ParamIndex]) -> str:
    return "-" if pi is None else str(pi)


def _parse_pi(s: str) -> Optional[ParamIndex]:
    return None if s == "-" else ParamIndex.parse(s)


def render_cert(m: CertificateManifest) -> str:
    cert = m.certificate
    lines = [CERT_HEADER, f"name {cert.name}", f"parameter {m.parameter}"]
    lines.append("instances " + " ".join(str(v) for v in m.instances))
    for node in cert.nodes:
        lines.append(f"node {node}")
    for arrow in m.arrows:
        lines.append(
            f"arrow {arrow.name} {arrow.source} {arrow.target} degree={_render_pi(arrow.degree)}"
        )
        for label, fiber in arrow.fibers.items():
            idx = " ".join(str(p) for p in fiber.data)
            lines.append(f"fiber {arrow.name} {label} {fiber.form} {idx}")
    for claim in cert.claims:
        kind = claim[0]
        if kind == "profile":
            _, arrow, basis = claim
            lines.append(f"claim profile {arrow.name} {basis}")
        elif kind == "assume":
            _, tag, text = claim
            lines.append(f"claim assume {tag} {text}")
        elif kind == "unramified":
            _, nm, f_name, g_name = claim
            lines.append(f"claim unramified {nm} {f_name} {g_name}")
        elif kind == "project":
            _, arrow, f_name, g_name, at_labels = claim
            lines.append(
                f"claim project {arrow.name} {f_name} {g_name} at " + " ".join(at_labels)
            )
        elif kind == "compose":
            _, arrow, outer, inner = claim
            lines.append(f"claim compose {arrow.name} {outer} {inner}")
        elif kind == "conclude":
            _, src, tgt = claim
            lines.append(f"claim conclude {src} {tgt}")
        else:
            raise ManifestError(f"unknown claim kind {kind!r}")
    return "\n".join(lines) + "\n"


def parse_cert(text: str) -> CertificateManifest:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CERT_HEADER:
        raise ManifestError("missing or wrong certificate header")
    name = None
    parameter = "n"
    instances: tuple = ()
    nodes = []
    arrows: dict = {}
    order = []
    claims = []
    conclusion = None
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "name":
            name = rest.strip()
        elif key == "parameter":
            parameter = rest.strip()
        elif key == "instances":
            instances = tuple(int(v) for v in rest.split())
        elif key == "node":
            nodes.append(rest.strip())
        elif key == "arrow":
            parts = rest.split()
            if len(parts) != 4 or not parts[3].startswith("degree="):
                raise ManifestError(f"bad arrow line {ln!r}")
            arrow = Arrow(
                name=parts[0],
                source=parts[1],
                target=parts[2],
                degree=_parse_pi(parts[3][len("degree="):]),
                fibers={},
            )
            if arrow.name in arrows:
                raise ManifestError(f"duplicate arrow {arrow.name}")
            arrows[arrow.name] = arrow
            order.append(arrow)
        elif key == "fiber":
            parts = rest.split()
            if len(parts) < 4:
                raise ManifestError(f"bad fiber line {ln!r}")
            arrow = arrows.get(parts[0])
            if arrow is None:
                raise ManifestError(f"fiber for unknown arrow {parts[0]!r}")
            fiber = Fiber(parts[2], tuple(ParamIndex.parse(s) for s in parts[3:]))
            arrow.fibers[parts[1]] = fiber
        elif key == "claim":
            ckind, _, crest = rest.partition(" ")
            parts = crest.split()
            if ckind == "profile":
                claims.append(("profile", arrows[parts[0]], parts[1]))
            elif ckind == "assume":
                tag, _, text = crest.partition(" ")
                claims.append(("assume", tag, text.strip()))
            elif ckind == "unramified":
                claims.append(("unramified", parts[0], parts[1], parts[2]))
            elif ckind == "project":
                if "at" not in parts:
                    raise ManifestError(f"project claim needs 'at': {ln!r}")
                cut = parts.index("at")
                claims.append(
                    ("project", arrows[parts[0]], parts[1], parts[2], parts[cut + 1:])
                )
            elif ckind == "compose":
                claims.append(("compose", arrows[parts[0]], parts[1], parts[2]))
            elif ckind == "conclude":
                conclusion = (parts[0], parts[1])
                claims.append(("conclude", parts[0], parts[1]))
            else:
                raise ManifestError(f"unknown claim kind {ckind!r}")
        else:
            raise ManifestError(f"unknown certificate key {key!r}")
    if name is None or not nodes:
        raise ManifestError("certificate needs a name and nodes")
    cert = DiagramCertificate(name=name, nodes=nodes, claims=claims, conclusion=conclusion)
    return CertificateManifest(
        certificate=cert, parameter=parameter, instances=instances, arrows=order
    )


# ---------------------------------------------------------------------------
# bundled artifacts


def bundled_text(filename: str) -> str:
    from importlib import resources

    return resources.files("ramcalc.data").joinpath(filename).read_text()


def load_bundled_chain(filename: str) -> ChainManifest:
    return parse_chain(bundled_text(filename))


def load_bundled_cert(filename: str) -> CertificateManifest:
    return parse_cert(bundled_text(filename))
