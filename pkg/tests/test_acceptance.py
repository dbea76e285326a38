"""Acceptance battery: twelve exact criteria, one pass/fail line each.

Every check uses rational arithmetic with zero tolerance.  Run with
``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
"""

import itertools
import json

from lefschetz import cli
from lefschetz.bootstrap import (
    BootstrapPipeline,
    assemble_lambda_minus_p,
    finalsi_suite,
    lemafinal_suite,
    liftability_system,
    reconstruct_low_kunneth,
)
from lefschetz.chern import Poly, chi_delta
from lefschetz.core import (
    LefschetzContext,
    closure_suite,
    prinduccion_residual,
    sl2_verify,
    theta_suite,
)
from lefschetz.frobenius import (
    kunneth_product,
    projective_space,
    validate_model,
)
from lefschetz.leray import (
    LerayStructure,
    leray_suite,
    psi_suite,
    relative_kunneth_suite,
    relative_suite,
    splitting_suite,
    tilde_power_suite,
)
from lefschetz.models import (
    blowup_model,
    builtin_pencils,
    validate_blowup,
    vanishing_subspace,
)
from lefschetz.rational_linalg import rank


def _report(num, name, ok):
    status = "PASS" if ok else "FAIL"
    print(f"acceptance {num:02d} {name}: {status}")
    assert ok, f"acceptance criterion {num} ({name}) failed"


def _all_contexts(pencils, blowups):
    for p in pencils.values():
        for m in (p.x, p.y, p.delta):
            yield LefschetzContext(m)
    for b in blowups.values():
        yield LefschetzContext(b.model)


def test_criterion_01_model_validation(pencils, blowups):
    ok = all(validate_model(projective_space(n)).ok for n in range(1, 7))
    ok = ok and all(
        validate_model(kunneth_product(projective_space(a),
                                       projective_space(b))).ok
        for a, b in itertools.combinations_with_replacement(range(1, 7), 2))
    ok = ok and all(validate_blowup(b).ok for b in blowups.values())
    _report(1, "model-validation", ok)


def test_criterion_02_sl2_brackets(pencils, blowups):
    ok = all(sl2_verify(LefschetzContext(projective_space(n))).ok
             for n in range(1, 5))
    ok = ok and all(sl2_verify(ctx).ok
                    for ctx in _all_contexts(pencils, blowups))
    _report(2, "sl2-brackets", ok)


def test_criterion_03_operator_ring_closures(pencils, blowups):
    ok = all(closure_suite(ctx).ok
             for ctx in _all_contexts(pencils, blowups))
    _report(3, "operator-ring-closures", ok)


def test_criterion_04_theta_inversion(pencils, structures):
    ok = True
    for name, p in pencils.items():
        s = structures[name]
        cd = LefschetzContext(p.delta)
        ok = ok and theta_suite(p.xy, s.ctx_x, s.ctx_y).ok
        ok = ok and theta_suite(p.ydelta, s.ctx_y, cd).ok
    _report(4, "theta-inversion", ok)


def test_criterion_05_leray_splitting(pencils, structures):
    ok = True
    for name, s in structures.items():
        ok = ok and leray_suite(s).ok and splitting_suite(s).ok
        p = pencils[name]
        n = p.x.n
        prim_mid = s.ctx_x.primitive_subspace(n).dim
        v_delta = vanishing_subspace(p.ydelta).dim
        mid_rank = rank(s.pi_eps(n - 1, 1).block(n))
        ok = ok and mid_rank == prim_mid + v_delta
        expected = {"hyperplane-p3": 0, "quadric-p3": 2, "triple-p1": 2}
        ok = ok and mid_rank == expected[name]
    _report(5, "leray-splitting", ok)


def test_criterion_06_relative_operators(structures):
    ok = all(relative_kunneth_suite(s).ok and relative_suite(s).ok
             and psi_suite(s).ok for s in structures.values())
    _report(6, "relative-operators", ok)


def test_criterion_07_power_formulas(structures):
    ok = all(tilde_power_suite(s).ok for s in structures.values())
    for m in (2, 3):
        for p in builtin_pencils(m):
            ok = ok and tilde_power_suite(
                LerayStructure(blowup_model(p))).ok
    _report(7, "power-formulas", ok)


def test_criterion_08_main_theorem_assembly(structures):
    ok = True
    for name, s in structures.items():
        b = BootstrapPipeline(s)
        ok = ok and reconstruct_low_kunneth(b).ok
        ok = ok and lemafinal_suite(b).ok
        ok = ok and finalsi_suite(b).ok
        ok = ok and assemble_lambda_minus_p(b).ok
    p_top = structures["triple-p1"].ctx_x.p(4)
    xt_top = structures["triple-p1"].pencil.x.top
    ok = ok and sum(rank(p_top.block(d))
                    for d in range(xt_top + 1)) == 2
    _report(8, "main-theorem-assembly", ok)


def test_criterion_09_non_liftability(structures):
    ok = True
    for name, s in structures.items():
        p_top = s.ctx_x.p(s.n + 1)
        feasible, _ = liftability_system(s, p_top)
        if name == "triple-p1":
            ok = ok and not feasible and not p_top.is_zero()
        else:
            ok = ok and feasible and p_top.is_zero()
    _report(9, "non-liftability-certificate", ok)


def test_criterion_10_summation_bound_discrepancy(structures):
    s = structures["hyperplane-p3"]
    p = s.pencil
    n = p.x.n
    short = prinduccion_residual(p.xy, s.ctx_x, s.ctx_y, j_max=2 * n - 2)
    full = prinduccion_residual(p.xy, s.ctx_x, s.ctx_y, j_max=2 * n)
    failed = short.failures()
    ok = (not short.ok and full.ok and failed
          and all(f.name == f"residual-vanishes-degree-{2 * n}"
                  for f in failed)
          and all(f.witness for f in failed))
    _report(10, "summation-bound-discrepancy", ok)


def test_criterion_11_euler_characteristic():
    chi = chi_delta((1, 4, 6, 4), 1, 3)
    ok = (chi == Poly([0, 0, 4, -2])
          and [chi(d) for d in (1, 2, 3)] == [2, 0, -18]
          and chi.degree == 3)
    _report(11, "euler-characteristic", ok)


def test_criterion_12_determinism(tmp_path):
    ok = True
    for pencil in ("hyperplane-p3", "triple-p1"):
        outs = []
        for run in (1, 2):
            out = tmp_path / f"{pencil}-{run}.json"
            code = cli.main(["--suite", "all", "--pencil",
                             f"builtin:{pencil}", "--out", str(out)])
            ok = ok and code == 0
            outs.append(out.read_bytes())
        ok = ok and outs[0] == outs[1]
        doc = json.loads(outs[0])
        ok = ok and all(e["status"] == "pass" for e in doc["identities"])
    _report(12, "deterministic-reports", ok)
