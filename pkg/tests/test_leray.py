import pytest

from lefschetz.leray import (
    LerayStructure,
    dense_test_operator,
    leray_suite,
    psi_suite,
    relative_kunneth_suite,
    relative_suite,
    splitting_suite,
    structural_suite,
    tilde_power_suite,
)
from lefschetz.models import blowup_model, builtin_pencils
from lefschetz.rational_linalg import rank

SUITES = (leray_suite, splitting_suite, relative_kunneth_suite,
          psi_suite, relative_suite, tilde_power_suite, structural_suite)


@pytest.mark.parametrize("suite", SUITES, ids=lambda f: f.__name__)
def test_suites_pass_on_all_pencils(structures, suite):
    for name, s in structures.items():
        rep = suite(s)
        assert rep.ok, (name, [c.name for c in rep.failures()])


@pytest.mark.parametrize("m", (2, 3))
def test_power_formulas_at_higher_multiples(m):
    for p in builtin_pencils(m):
        s = LerayStructure(blowup_model(p))
        for suite in (tilde_power_suite, relative_suite):
            rep = suite(s)
            assert rep.ok, (p.name, m, [c.name for c in rep.failures()])


def test_filtration_dimensions(structures, pencils):
    from lefschetz.models import vanishing_subspace

    for name, s in structures.items():
        p = pencils[name]
        n = p.x.n
        for d in range(s.model.top + 1):
            b_y = p.y.dims[d - 2] if 0 <= d - 2 <= p.y.top else 0
            drop = vanishing_subspace(p.xy).dim if d - 2 == n - 1 else 0
            assert s.F2[d].dim == b_y - drop, (name, d)


def test_splitting_projector_ranks(structures, pencils):
    expected_middle = {"hyperplane-p3": 0, "quadric-p3": 2, "triple-p1": 2}
    for name, s in structures.items():
        p = pencils[name]
        n = p.x.n
        for i in range(2 * n - 1):
            b_x = p.x.dims[min(i, 2 * n - 2 - i)]
            for eps in (0, 2):
                op = s.pi_eps(i, eps)
                got = sum(rank(op.block(d))
                          for d in range(s.model.top + 1))
                assert got == b_x, (name, i, eps)
        mid = s.pi_eps(n - 1, 1)
        assert rank(mid.block(n)) == expected_middle[name]


def test_projectors_resolve_identity(structures):
    from lefschetz.frobenius import GradedOperator

    for s in structures.values():
        acc = GradedOperator.zero(s.model, s.model, 0)
        for i in range(2 * s.n - 1):
            acc = acc + s.pi_rho(i)
        assert acc == GradedOperator.identity(s.model)
        for (i, eps), op in s.pi.items():
            assert op @ op == op
            for (j, de), other in s.pi.items():
                if (i, eps) != (j, de):
                    assert (op @ other).is_zero()


def test_psi_is_idempotent_projection(structures):
    for s in structures.values():
        for deg in (0, -2, 2):
            u = dense_test_operator(s.model, deg)
            assert s.psi(s.psi(u)) == s.psi(u)


def test_strand_parts_decompose(structures):
    for s in structures.values():
        u = dense_test_operator(s.model, 0)
        total = (s.psi(u) + s.strictly_raising_part(u)
                 + s.strictly_lowering_part(u))
        assert total == u


def test_weight_drop_commutes_and_nilpotent(structures):
    from lefschetz.rational_linalg import nilpotent_order

    for s in structures.values():
        u = dense_test_operator(s.model, -2)
        nu = s.weight_preserving_drop(u)
        hm = s.h_rho.full_matrix()
        nm = nu.full_matrix()
        assert hm @ nm == nm @ hm
        assert nilpotent_order(nm) >= 1
        assert s.psi(nu).is_zero()
