from fractions import Fraction

import pytest

from lefschetz.chern import (
    CHERN_DATA,
    Poly,
    TruncatedSeries,
    chi_delta,
    chern_suite,
)


def test_poly_arithmetic_exact():
    d = Poly.x()
    p = (d * d - Poly.const(Fraction(1, 2))) * d
    assert p == Poly([0, Fraction(-1, 2), 0, 1])
    assert p(Fraction(1, 2)) == Fraction(-1, 8)
    assert str(Poly([0, 0, 4, -2])) == "4*d^2 - 2*d^3"


def test_series_inverse_exact():
    d = Poly.x()
    s = TruncatedSeries([Poly.const(1), d.scale(2), d * d], 5)
    assert s * s.inverse() == TruncatedSeries.one(5)


def test_series_inverse_requires_constant_term():
    with pytest.raises(ValueError):
        TruncatedSeries([Poly.x(), Poly.const(1)], 3).inverse()


def test_chi_polynomial_for_projective_space():
    chi = chi_delta((1, 4, 6, 4), 1, 3)
    assert chi == Poly([0, 0, 4, -2])
    assert [chi(d) for d in (1, 2, 3)] == [2, 0, -18]


def test_chi_requires_unit_constant_term():
    with pytest.raises(ValueError):
        chi_delta((2, 4, 6, 4), 1, 3)


def test_base_locus_euler_matches_models(pencils):
    for p in pencils.values():
        coeffs, deg_x, dv = CHERN_DATA[p.name]
        chi = chi_delta(coeffs, deg_x, 3)
        euler = sum((-1) ** i * p.delta.dims[i]
                    for i in range(p.delta.top + 1))
        assert chi(dv) == euler, p.name


def test_chern_suite_passes():
    rep = chern_suite()
    assert rep.ok, [c.name for c in rep.failures()]
    assert "lead-coefficient" in rep.metadata
