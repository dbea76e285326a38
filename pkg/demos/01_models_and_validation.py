"""Build graded Frobenius-algebra models and check their ring axioms.

Every model carries exact rational structure constants, a trace on the
top degree, and a distinguished degree-2 class whose cup product acts as
the raising operator.  Validation checks associativity, graded
commutativity, nondegeneracy of the trace pairing, and that every
raising power to the complementary degree is an isomorphism.
"""

from lefschetz import (
    kunneth_product,
    projective_space,
    validate_model,
)

# A family of one-generator models: H*(P^n) = Q[h]/(h^(n+1)).
for n in range(1, 5):
    m = projective_space(n)
    rep = validate_model(m)
    print(f"{m.name}: dims {m.dims} -> "
          f"{'valid' if rep.ok else 'INVALID'}")

# Products of two such models, with the product polarization.
prod = kunneth_product(projective_space(1), projective_space(2))
rep = validate_model(prod)
print(f"\n{prod.name}: dims {prod.dims} -> "
      f"{'valid' if rep.ok else 'INVALID'}")
print("degree-2 labels:", ", ".join(prod.labels[2]))

# Each validation report lists every identity it checked.
print(f"\nchecked {len(rep.checks)} identities, e.g.:")
for c in rep.checks[:5]:
    print(f"  {c.name}: {'pass' if c.passed else 'fail'}")
