import pytest

from lefschetz.core import (
    LefschetzContext,
    cgen_descent,
    closure_suite,
    decompose_suite,
    lemabc_suite,
    prinduccion_residual,
    sl2_verify,
    theta_suite,
)
from lefschetz.frobenius import kunneth_product, projective_space
from lefschetz.rational_linalg import Matrix


def contexts_for(pencil):
    return {m.name: LefschetzContext(m)
            for m in (pencil.x, pencil.y, pencil.delta)}


@pytest.fixture(scope="module")
def contexts(pencils, blowups):
    out = {}
    for name, p in pencils.items():
        out[name] = contexts_for(p)
        out[name][blowups[name].model.name] = LefschetzContext(
            blowups[name].model)
    return out


def test_sl2_on_projective_spaces():
    for n in range(1, 5):
        rep = sl2_verify(LefschetzContext(projective_space(n)))
        assert rep.ok, rep.failures()


def test_sl2_on_kunneth_product():
    m = kunneth_product(projective_space(1), projective_space(2))
    assert sl2_verify(LefschetzContext(m)).ok


def test_sl2_on_all_models(contexts):
    for by_model in contexts.values():
        for name, ctx in by_model.items():
            rep = sl2_verify(ctx)
            assert rep.ok, (name, rep.failures())


def test_decompose_on_all_models(contexts):
    for by_model in contexts.values():
        for name, ctx in by_model.items():
            rep = decompose_suite(ctx)
            assert rep.ok, (name, rep.failures())


def test_closure_on_all_models(contexts):
    for by_model in contexts.values():
        for name, ctx in by_model.items():
            rep = closure_suite(ctx)
            assert rep.ok, (name, rep.failures())


def test_theta_inverts_raising_power(pencils, contexts):
    for name, p in pencils.items():
        ctx_x = contexts[name][p.x.name]
        ctx_y = contexts[name][p.y.name]
        rep = theta_suite(p.xy, ctx_x, ctx_y)
        assert rep.ok, (name, rep.failures())
        n = p.x.n
        for i in range(n):
            th = ctx_x.theta(i)
            assert (th.block(2 * n - i)
                    @ (ctx_x.L ** (n - i)).block(i)
                    == Matrix.identity(p.x.dims[i]))


def test_prinduccion_full_range_vanishes(pencils, contexts):
    for name, p in pencils.items():
        rep = prinduccion_residual(
            p.xy, contexts[name][p.x.name], contexts[name][p.y.name])
        assert rep.ok, (name, rep.failures())


def test_prinduccion_truncated_range_fails_at_top(pencils, contexts):
    p = pencils["hyperplane-p3"]
    n = p.x.n
    rep = prinduccion_residual(
        p.xy, contexts[p.name][p.x.name], contexts[p.name][p.y.name],
        j_max=2 * n - 2)
    failed = rep.failures()
    assert failed
    assert all(f.name == f"residual-vanishes-degree-{2 * n}"
               for f in failed)
    assert failed[0].witness["block"]


def test_lemabc(pencils, contexts):
    for name, p in pencils.items():
        for d in (p.xy, p.ydelta):
            rep = lemabc_suite(
                d, contexts[name][d.ambient.name],
                contexts[name][d.section.name])
            assert rep.ok, (name, d.section.name, rep.failures())


def test_cgen_descent_through_blowdown(blowups):
    for name, b in blowups.items():
        rep = cgen_descent(b.f_lower, b.f_upper, 1)
        assert rep.ok, (name, rep.failures())
