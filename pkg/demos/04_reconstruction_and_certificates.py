"""Rebuilding ambient operators from fibre-level data, with provenance.

The pipeline exposes only a restricted set of ingredients (section
restriction and its adjoint, the blow-down maps, fibre-level operators,
and the pencil-compatible projectors).  From these it reconstructs the
low-degree grading projectors and the dual lowering operator of the
ambient model, tracking which ingredients each formula consumed.

The one obstruction is the top primitive projector: an exact linear
feasibility system shows it lifts to a filtration-preserving operator on
the blow-up exactly when it vanishes.
"""

from lefschetz import LerayStructure, blowup_model, builtin_pencils
from lefschetz.bootstrap import (
    BootstrapPipeline,
    assemble_lambda_minus_p,
    liftability_system,
    reconstruct_low_kunneth,
)
from lefschetz.rational_linalg import rank

for pencil in builtin_pencils():
    s = LerayStructure(blowup_model(pencil))
    b = BootstrapPipeline(s)

    rep = reconstruct_low_kunneth(b)
    trail = rep.metadata.get("trail-degree-0", "")
    print(f"{pencil.name}: low projectors "
          f"{'reconstructed' if rep.ok else 'FAILED'}")
    print(f"  ingredients used: {trail}")

    rep = assemble_lambda_minus_p(b)
    print(f"  lowering-minus-projector assembly: "
          f"{'exact match' if rep.ok else 'MISMATCH'}")

    p_top = s.ctx_x.p(s.n + 1)
    r = sum(rank(p_top.block(d)) for d in range(s.model.top + 1))
    feasible, _ = liftability_system(s, p_top)
    print(f"  top primitive projector rank {r}; "
          f"lift {'exists' if feasible else 'is infeasible'}\n")
