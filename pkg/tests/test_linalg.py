from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefschetz.rational_linalg import (
    Matrix,
    Q,
    Subspace,
    image,
    inverse,
    kernel,
    lagrange_projectors,
    nilpotent_order,
    projector_onto,
    rank,
    rref,
    semisimple_part,
    solve,
)

rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=4)


def small_matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.integers(1, max_dim).flatmap(
            lambda m: st.lists(
                st.lists(rationals, min_size=m, max_size=m),
                min_size=n, max_size=n).map(
                    lambda rows: Matrix(rows, n, m))))


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rref_idempotent(a):
    r = rref(a)[0]
    assert rref(r)[0] == r


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_kernel_annihilated(a):
    for v in kernel(a).basis:
        out = a * list(v)
        assert all(c == 0 for c in out)


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rank_nullity(a):
    assert rank(a) + kernel(a).dim == a.cols


@settings(max_examples=30, deadline=None)
@given(small_matrices(3), small_matrices(3))
def test_image_of_product_inside_image(a, b):
    if b.rows != a.cols:
        return
    assert image(a).contains_space(image(a @ b))


def test_solve_and_inverse_exact():
    a = Matrix([[Q(2), Q(1)], [Q(1), Q(1)]], 2, 2)
    x = solve(a, [Q(3), Q(2)])
    assert list(x) == [Q(1), Q(1)]
    ainv = inverse(a)
    assert a @ ainv == Matrix.identity(2)
    assert ainv @ a == Matrix.identity(2)


def test_solve_inconsistent_returns_none():
    a = Matrix([[Q(1), Q(0)], [Q(1), Q(0)]], 2, 2)
    assert solve(a, [Q(0), Q(1)]) is None


def test_subspace_operations():
    u = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
    v = Subspace.from_vectors(3, [[0, 1, 0], [0, 0, 1]])
    assert u.intersection(v) == Subspace.from_vectors(3, [[0, 1, 0]])
    assert u.sum(v).dim == 3
    assert u.contains([Fraction(1, 2), Fraction(-3), 0])
    assert not u.contains([0, 0, 1])


def test_projector_onto():
    img = Subspace.from_vectors(2, [[1, 1]])
    ker = Subspace.from_vectors(2, [[1, -1]])
    p = projector_onto(img, ker)
    assert p @ p == p
    assert image(p) == img
    assert kernel(p) == ker


def test_lagrange_projectors_diagonalizable():
    t = Matrix([[Q(1), Q(1)], [Q(0), Q(-1)]], 2, 2)
    projs = lagrange_projectors(t, [Q(1), Q(-1)])
    assert sum_mats(projs) == Matrix.identity(2)
    for i, p in enumerate(projs):
        assert p @ p == p
    recon = projs[0].scale(Q(1)) + projs[1].scale(Q(-1))
    assert recon == t


def sum_mats(mats):
    acc = mats[0]
    for m in mats[1:]:
        acc = acc + m
    return acc


def test_lagrange_projectors_reject_non_semisimple():
    t = Matrix([[Q(0), Q(1)], [Q(0), Q(0)]], 2, 2)
    with pytest.raises(ValueError):
        lagrange_projectors(t, [Q(0), Q(1)])


def test_semisimple_part_identity_on_semisimple():
    t = Matrix([[Q(-1), Q(0), Q(0)],
                [Q(0), Q(0), Q(0)],
                [Q(0), Q(0), Q(1)]], 3, 3)
    assert semisimple_part(t, 1) == t


def test_semisimple_part_strips_commuting_nilpotent():
    # diag(1, 1, -1) plus a nilpotent commuting with it
    s = Matrix([[Q(1), Q(0), Q(0)],
                [Q(0), Q(1), Q(0)],
                [Q(0), Q(0), Q(-1)]], 3, 3)
    nil = Matrix([[Q(0), Q(5), Q(0)],
                  [Q(0), Q(0), Q(0)],
                  [Q(0), Q(0), Q(0)]], 3, 3)
    out = semisimple_part(s + nil, 1)
    assert out == s


def test_nilpotent_order():
    nil = Matrix([[Q(0), Q(1)], [Q(0), Q(0)]], 2, 2)
    assert nilpotent_order(nil) == 2
    assert nilpotent_order(Matrix.zeros(2, 2)) == 1
