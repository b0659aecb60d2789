"""Cover profiles, Riemann-Hurwitz, compositum rule, diagram certificates."""

import random

import pytest

from ramcalc.cover import (
    Arrow,
    CoverProfile,
    DiagramCertificate,
    Fiber,
    InconsistentProfile,
    ParamIndex,
    compositum_profile,
    division_poly_zeroset,
    is_unramified_over,
    permutation_compositum_fiber,
    rh_genus,
    standard_projection_profile,
    verify_certificate,
)


class TestRiemannHurwitz:
    def test_standard_projection_genus(self):
        for n in range(3, 13):
            g = rh_genus(standard_projection_profile(n))
            assert g == (n - 1) // 2

    def test_unramified_cover_of_line_rejected_only_if_inconsistent(self):
        # odd total branch contribution is impossible
        with pytest.raises(InconsistentProfile):
            rh_genus(CoverProfile(degree=2, fibers={"a": (2,)}))

    def test_elliptic_double_cover(self):
        p = CoverProfile(degree=2, fibers={k: (2,) for k in "abcd"})
        assert rh_genus(p) == 1

    def test_fiber_sums_checked(self):
        with pytest.raises(InconsistentProfile):
            CoverProfile(degree=3, fibers={"a": (2, 2)})


def random_fiber(rng, degree):
    """Random partition of `degree` as a cyclic-monodromy fiber."""
    parts = []
    left = degree
    while left:
        e = rng.randint(1, left)
        parts.append(e)
        left -= e
    return tuple(sorted(parts))


class TestCompositumRule:
    def test_reference_example(self):
        f = CoverProfile(degree=4, fibers={"z": (4,)})
        g = CoverProfile(degree=2, fibers={"z": (2,)})
        base, over_f, over_g = compositum_profile(f, g)
        assert base.fibers["z"] == (4, 4)
        assert base.degree == 8

    def test_matches_permutation_oracle_on_random_pairs(self):
        rng = random.Random(20260826)
        for _ in range(200):
            df = rng.randint(1, 6)
            dg = rng.randint(1, 6)
            fa = random_fiber(rng, df)
            gb = random_fiber(rng, dg)
            f = CoverProfile(degree=df, fibers={"z": fa})
            g = CoverProfile(degree=dg, fibers={"z": gb})
            base, _, _ = compositum_profile(f, g)
            assert base.fibers["z"] == permutation_compositum_fiber(fa, gb)

    def test_unramified_criterion(self):
        f = CoverProfile(degree=4, fibers={"z": (4,)})
        g = CoverProfile(degree=2, fibers={"z": (2,)})
        ok, witness = is_unramified_over(f, g)
        assert ok and witness is None
        ok, witness = is_unramified_over(g, f)
        assert not ok and witness == ("z", 2, 4)


class TestDivisionPolynomials:
    def test_two_torsion_of_nonsingular_curve(self):
        s = division_poly_zeroset(0, -1, 2)  # y^2 = x^3 - 1
        assert s.poly.degree == 3

    def test_three_torsion(self):
        s = division_poly_zeroset(0, -1, 3)
        assert s.poly.degree == 4

    def test_singular_curve_rejected(self):
        from ramcalc.cover import SingularCurve

        with pytest.raises(SingularCurve):
            division_poly_zeroset(-3, 2, 2)


class TestParamIndex:
    def test_parse_and_render(self):
        for s in ("1", "4", "n", "8n"):
            assert str(ParamIndex.parse(s)) == s

    def test_instantiation(self):
        assert ParamIndex.parse("8n").at(3) == 24
        assert ParamIndex.parse("4").at(3) == 4

    def test_symbolic_divisibility(self):
        assert ParamIndex.parse("2").divides_symbolically(ParamIndex.parse("8n"))
        assert ParamIndex.parse("4n").divides_symbolically(ParamIndex.parse("8n"))
        assert not ParamIndex.parse("3").divides_symbolically(ParamIndex.parse("8n"))


def doubling_certificate():
    def PI(s):
        return ParamIndex.parse(s)

    def allf(s):
        return Fiber("all", (PI(s),))

    def exp(*ss):
        return Fiber("explicit", tuple(PI(s) for s in ss))

    f1 = Arrow("f1", "A", "P1", PI("8n"),
               {"0": exp("4n", "4n"), "1": exp("8n"), "inf": exp("8n")})
    F1 = Arrow("F1", "E", "P1", PI("16"),
               {"0": allf("4"), "1": allf("2"), "inf": allf("4")})
    f10 = Arrow("f10", "Ec", "E", None, {"T": allf("4n")})
    f6 = Arrow("f6", "E", "Q1", PI("2"),
               {"0": allf("2"), "1": allf("2"), "-1": allf("2"), "inf": allf("2")})
    f6f10 = Arrow("f6f10", "Ec", "Q1", None,
                  {"0": allf("8n"), "1": allf("8n"), "-1": allf("8n"), "inf": allf("8n")})
    F2 = Arrow("F2", "B", "Q1", PI("32n"),
               {"0": allf("4"), "1": allf("8n"), "inf": allf("4")})
    claims = [
        ("profile", f1, "given"),
        ("profile", F1, "given"),
        ("unramified", "u1", "f1", "F1"),
        ("project", f10, "f1", "F1", ["1"]),
        ("profile", f6, "given"),
        ("compose", f6f10, "f6", "f10"),
        ("profile", F2, "given"),
        ("unramified", "u2", "f6f10", "F2"),
        ("conclude", "A", "B"),
    ]
    return DiagramCertificate("test-doubling", ["A", "P1", "E", "Ec", "Q1", "B"],
                              claims, ("A", "B"))


class TestCertificates:
    def test_valid_certificate_discharges(self):
        report = verify_certificate(doubling_certificate(), (1, 2, 3))
        assert report.passed
        assert "u1" in report.discharged_arrows and "u2" in report.discharged_arrows

    def test_tampered_compose_claim_fails(self):
        cert = doubling_certificate()
        bad_claims = []
        for c in cert.claims:
            if c[0] == "compose":
                arrow = c[1]
                wrong = Arrow(arrow.name, arrow.source, arrow.target, arrow.degree,
                              {k: Fiber("all", (ParamIndex.parse("4n"),))
                               for k in arrow.fibers})
                bad_claims.append(("compose", wrong, c[2], c[3]))
            else:
                bad_claims.append(c)
        bad = DiagramCertificate(cert.name, cert.nodes, bad_claims, cert.conclusion)
        report = verify_certificate(bad, (1, 2))
        assert not report.passed

    def test_assumptions_never_count_as_pass(self):
        cert = doubling_certificate()
        claims = [("assume", "extra", "an uncheckable geometric input")] + list(cert.claims)
        with_assume = DiagramCertificate(cert.name, cert.nodes, claims, cert.conclusion)
        report = verify_certificate(with_assume, (1,))
        assert report.passed
        assert ("extra", "an uncheckable geometric input") in report.assumptions
        statuses = {v.status for v in report.verdicts if v.kind == "assume"}
        assert statuses <= {"assumed"}

    def test_unknown_arrow_reference_rejected(self):
        from ramcalc.cover import CertificateError

        cert = doubling_certificate()
        claims = list(cert.claims) + [("unramified", "u3", "nope", "F2")]
        bad = DiagramCertificate(cert.name, cert.nodes, claims, cert.conclusion)
        with pytest.raises(CertificateError):
            verify_certificate(bad, (1,))
