import pytest

from lefschetz.bootstrap import (
    ALLOWED_TAGS,
    BootstrapPipeline,
    TrackedOperator,
    assemble_lambda_minus_p,
    bootstrap_reports,
    liftability_system,
    reconstruct_low_kunneth,
)
from lefschetz.frobenius import GradedOperator
from lefschetz.rational_linalg import rank


@pytest.fixture(scope="module")
def pipelines(structures):
    return {name: BootstrapPipeline(s) for name, s in structures.items()}


def test_all_bootstrap_reports_pass(structures):
    for name, s in structures.items():
        for rep in bootstrap_reports(s):
            assert rep.ok, (name, rep.suite,
                            [c.name for c in rep.failures()])


def test_reconstruction_trails_stay_legal(pipelines):
    for name, b in pipelines.items():
        rep = reconstruct_low_kunneth(b)
        trails = [v for k, v in rep.metadata.items() if "trail" in k]
        assert trails, name
        for t in trails:
            for tag in t.split(","):
                assert tag.strip() in ALLOWED_TAGS, (name, tag)


def test_low_primitive_projectors_are_not_inputs(pipelines):
    for b in pipelines.values():
        for j in range(b.n + 1):
            with pytest.raises(ValueError):
                b.high_p(j)
        assert b.high_p(b.n + 1).trail <= ALLOWED_TAGS


def test_tracked_operator_rejects_foreign_tags(pipelines):
    b = next(iter(pipelines.values()))
    with pytest.raises(ValueError):
        TrackedOperator(b.ctx_x.L, {"directly-computed-answer"})


def test_assembly_matches_direct_operator(pipelines):
    for name, b in pipelines.items():
        rep = assemble_lambda_minus_p(b)
        assert rep.ok, (name, [c.name for c in rep.failures()])
        direct = b.ctx_x.lam - b.ctx_x.p(b.n + 1)
        assert direct.degree == -2


def test_top_projector_rank_and_feasibility(structures):
    expected_rank = {"hyperplane-p3": 0, "quadric-p3": 0, "triple-p1": 2}
    for name, s in structures.items():
        ctx = s.ctx_x
        n = s.n
        p_top = ctx.p(n + 1)
        got = sum(rank(p_top.block(d))
                  for d in range(s.model.top + 1))
        assert got == expected_rank[name], name
        feasible, sol = liftability_system(s, p_top)
        assert feasible == (expected_rank[name] == 0), name
        if feasible:
            assert sol is not None


def test_liftability_of_zero_target_always_feasible(structures):
    for s in structures.values():
        zero = GradedOperator.zero(s.pencil.x, s.pencil.x, -2)
        feasible, _ = liftability_system(s, zero)
        assert feasible
