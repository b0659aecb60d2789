"""Generate the bundled rule store, verifying each cited artifact first."""
import sys
sys.path.insert(0, "src")

from ramcalc.cover import verify_certificate
from ramcalc.manifest import bundled_text, parse_cert
from ramcalc.relation import EdgeRule, NodePattern, RuleStore


def artifact_checker(name: str) -> bool:
    if not name.endswith(".cert"):
        return False
    manifest = parse_cert(bundled_text(name))
    return verify_certificate(manifest.certificate, manifest.instances).passed


def rule(rule_id, src, tgt, cond, kind, prov):
    return EdgeRule(rule_id, NodePattern.parse(src), NodePattern.parse(tgt), cond, kind, prov)


BIG5 = 2 * 2 ** 10 * 3 ** 3
BIG7 = 2 * 2 ** 15 * 3 ** 10 * 5 ** 4 * 13

RULES = [
    rule("membership", "C(n)", "hyperbolic-hyperelliptic", "n>=5",
         "axiom", "hyperelliptic-curve-classification"),
    rule("base-6", "hyperbolic-hyperelliptic", "C(6)", "n>=1",
         "axiom", "cited-prior-work"),
    rule("base-8", "hyperbolic-hyperelliptic", "C(8)", "n>=1",
         "verified", "prop6.cert"),
    rule("double-8", "C(8n)", "C(16n)", "n>=1", "verified", "prop7a.cert"),
    rule("threehalf-16", "C(16n)", "C(24n)", "n>=1", "verified", "prop7b.cert"),
    rule("to-five", f"C({BIG5}n)", "C(5n)", "n>=1", "verified", "prop10.cert"),
    rule("to-seven", f"C({BIG7}n)", "C(7n)", "n>=1", "verified", "prop13.cert"),
    rule("divisor", "C(kn)", "C(n)", "n>=1", "axiom", "subfamily-projection"),
]

if __name__ == "__main__":
    store = RuleStore()
    for r in RULES:
        store.add_rule(r, artifact_checker)
    text = store.dump()
    reloaded = RuleStore.load(text, artifact_checker)
    assert reloaded.dump() == text, "round-trip failure"
    with open("src/ramcalc/data/rules.store", "w") as f:
        f.write(text)
    print(text)
    print(f"wrote src/ramcalc/data/rules.store ({len(store)} rules)")
