"""The sl2 action on a polarized model: raising, lowering, weights.

Cup product with the polarization raises degree by two.  Together with
the dual lowering operator and the weight operator it generates an sl2
action; the primitive decomposition and the grading projectors are all
polynomial expressions in this pair.
"""

from lefschetz import LefschetzContext, projective_space
from lefschetz.core import closure_suite, sl2_verify

ctx = LefschetzContext(projective_space(3))
L, clam, h = ctx.L, ctx.clam, ctx.h_op

print("bracket [cLambda, L] == H:", (clam @ L - L @ clam) == h)
print("bracket [H, L] == -2 L:  ", (h @ L - L @ h) == L.scale(-2))

# Full bracket suite, including the weight law on generated operators.
rep = sl2_verify(ctx)
print(f"\nsl2 suite: {'all pass' if rep.ok else 'FAILURES'} "
      f"({len(rep.checks)} checks)")

# The operator ring is the same whichever lowering partner generates it.
rep = closure_suite(ctx)
for c in rep.checks:
    print(f"  {c.name}: {'pass' if c.passed else 'fail'}")

# The inverse of a raising power, computed exactly.
theta = ctx.theta(2)
print("\ntheta(2) block on the complementary degree:")
for row in theta.block(2 * 3 - 2).entries:
    print("  ", [str(c) for c in row])
