"""Blowing up a pencil's base locus and splitting the induced filtration.

A built-in pencil fixture packages an ambient model X, a fibre model Y,
and a base-locus model; the blow-up along the base locus fibres over a
line.  The two-step filtration on the blow-up (classes restricting to
zero on a fibre, classes pushed forward from a fibre) admits an exact
three-strand splitting, and the strands carry a fibrewise sl2 action.
"""

from lefschetz import LerayStructure, blowup_model, builtin_pencils
from lefschetz.leray import relative_suite
from lefschetz.rational_linalg import rank

pencil = next(p for p in builtin_pencils() if p.name == "quadric-p3")
s = LerayStructure(blowup_model(pencil))
n = s.n

print(f"pencil {pencil.name}: ambient {pencil.x.name}, "
      f"fibre {pencil.y.name}, base locus {pencil.delta.name}")
print("blow-up degree dims:", s.model.dims)

print("\nfiltration dims per degree (step one / step two):")
for d in range(s.model.top + 1):
    print(f"  H^{d}: {s.F1[d].dim} / {s.F2[d].dim}")

print("\nsplitting projector ranks (fibre degree, strand):")
for (i, eps), op in sorted(s.pi.items()):
    r = sum(rank(op.block(d)) for d in range(s.model.top + 1))
    print(f"  pi({i},{eps}): rank {r}")

rep = relative_suite(s)
print(f"\nfibrewise sl2 suite: "
      f"{'all pass' if rep.ok else 'FAILURES'} ({len(rep.checks)} checks)")
