import itertools

import pytest

from lefschetz.frobenius import (
    kunneth_product,
    pairing_adjoint,
    point_model,
    projective_space,
    validate_model,
)
from lefschetz.models import (
    blowup_model,
    builtin_pencils,
    validate_blowup,
    validate_pencil,
    validate_section,
    vanishing_subspace,
)


@pytest.mark.parametrize("n", range(1, 7))
def test_projective_space_valid(n):
    rep = validate_model(projective_space(n))
    assert rep.ok, rep.failures()


def test_point_model_valid():
    assert validate_model(point_model()).ok


@pytest.mark.parametrize("a,b", list(
    itertools.combinations_with_replacement(range(1, 7), 2)))
def test_kunneth_products_valid(a, b):
    m = kunneth_product(projective_space(a), projective_space(b))
    rep = validate_model(m)
    assert rep.ok, rep.failures()


def test_pencils_validate(pencils):
    for p in pencils.values():
        rep = validate_pencil(p)
        assert rep.ok, (p.name, rep.failures())


def test_sections_validate(pencils):
    for p in pencils.values():
        for d in (p.xy, p.ydelta):
            rep = validate_section(d)
            assert rep.ok, rep.failures()


def test_blowups_validate(blowups):
    for name, b in blowups.items():
        rep = validate_blowup(b)
        assert rep.ok, (name, rep.failures())


def test_blowups_validate_higher_multiples():
    for m in (2, 3):
        for p in builtin_pencils(m):
            rep = validate_blowup(blowup_model(p))
            assert rep.ok, (p.name, m, rep.failures())


def test_vanishing_dimensions(pencils):
    expected = {"hyperplane-p3": (0, 0), "quadric-p3": (1, 2),
                "triple-p1": (1, 2)}
    for name, p in pencils.items():
        vy = vanishing_subspace(p.xy).dim
        vd = vanishing_subspace(p.ydelta).dim
        assert (vy, vd) == expected[name]


def test_blowup_dimensions(pencils, blowups):
    for name, b in blowups.items():
        p = pencils[name]
        xt = b.model
        for d in range(xt.top + 1):
            extra = p.delta.dims[d - 2] if 2 <= d <= p.delta.top + 2 else 0
            assert xt.dims[d] == p.x.dims[d] + extra


def test_gysin_maps_are_pairing_adjoints(pencils, blowups):
    for name, p in pencils.items():
        assert p.xy.gysin == pairing_adjoint(p.iota_restrict)
        assert p.ydelta.gysin == pairing_adjoint(p.h_restrict)
        b = blowups[name]
        assert b.f_lower == pairing_adjoint(b.f_upper)
        assert b.k_lower == pairing_adjoint(b.k_upper)
