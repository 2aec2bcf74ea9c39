"""Randomized audits and the search for independence counterexamples."""
from passalloc.axioms import CHARACTERIZING, DEFAULT_AUDIT_CONFIG, audit, independence_witnesses

config = DEFAULT_AUDIT_CONFIG.with_seed(7)

for rule, axioms in CHARACTERIZING.items():
    rep = audit(rule, config, axioms, instances=100)
    summary = ", ".join(f"{a.value} {t.passed}/{t.checked} (n/a {t.not_applicable})" for a, t in rep.tallies.items())
    print(f"{rule.value}: {'ok' if rep.ok else 'FAILED'}  {summary}")

print()
for theorem in (2, 3, 4, 5):
    for e in independence_witnesses(theorem, config, budget=500, sample=30):
        note = f"  (also fails {[a.value for a in e.discrepancies]})" if e.discrepancies else ""
        print(f"theorem {theorem}: {e.rule.value} breaks {e.axiom.value} after {e.searched} instances{note}")
