"""Graded Frobenius algebra models of cohomology rings and graded operators.

A :class:`PoincareModel` packages the additive grading, cup-product
structure constants, trace functional and a distinguished polarization
class.  A :class:`GradedOperator` is a degree-homogeneous linear map
between models, stored as one rational matrix per source degree.
"""

from __future__ import annotations

from fractions import Fraction

from .rational_linalg import Matrix, Q, inverse, rank
from .report import VerificationReport

Vec = tuple


def _tup(v):
    return tuple(Fraction(x) for x in v)


def _zero_vec(d):
    return tuple([Q(0)] * d)


class PoincareModel:
    """Graded Frobenius algebra over Q with a polarization class.

    ``mult`` maps (i, a, j, b) to the coefficient vector of the product of
    basis element ``a`` of degree ``i`` with basis element ``b`` of degree
    ``j``; missing keys mean zero.  ``trace`` is the coefficient vector of
    the trace functional on the top degree, and ``xi`` lives in degree 2.
    """

    def __init__(self, name, n, dims, labels, mult, trace, xi):
        self.name = name
        self.n = n
        self.top = 2 * n
        self.dims = list(dims)
        if len(self.dims) != self.top + 1:
            raise ValueError("dims must cover degrees 0..2n")
        self.labels = [list(ls) for ls in labels]
        self.mult = {k: _tup(v) for k, v in mult.items() if any(Fraction(x) for x in v)}
        self.trace_vec = _tup(trace)
        self.xi = _tup(xi)
        self._pairing_cache = {}
        self._pairing_inv_cache = {}

    # -- algebra structure -------------------------------------------------

    def mult_basis(self, i, a, j, b) -> Vec:
        d = i + j
        if d > self.top:
            return ()
        return self.mult.get((i, a, j, b), _zero_vec(self.dims[d]))

    def mult_vec(self, i, x, j, y) -> Vec:
        d = i + j
        if d > self.top:
            return ()
        out = [Q(0)] * self.dims[d]
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                prod = self.mult_basis(i, a, j, b)
                for k, c in enumerate(prod):
                    out[k] += xa * yb * c
        return tuple(out)

    def trace(self, v) -> Fraction:
        return sum((a * b for a, b in zip(self.trace_vec, v)), Q(0))

    def pairing(self, i, x, y) -> Fraction:
        """<x, y> = trace(x ^ y) for x in degree i, y in degree 2n - i."""
        return self.trace(self.mult_vec(i, x, 2 * self.n - i, y))

    def pairing_matrix(self, i) -> Matrix:
        """G with G[a][b] = <e_a^(i), e_b^(2n-i)>."""
        if i not in self._pairing_cache:
            j = self.top - i
            g = [
                [self.pairing(i, self._basis_vec(i, a), self._basis_vec(j, b))
                 for b in range(self.dims[j])]
                for a in range(self.dims[i])
            ]
            self._pairing_cache[i] = Matrix(g, self.dims[i], self.dims[j])
        return self._pairing_cache[i]

    def pairing_inverse(self, i) -> Matrix:
        if i not in self._pairing_inv_cache:
            self._pairing_inv_cache[i] = inverse(self.pairing_matrix(i))
        return self._pairing_inv_cache[i]

    def _basis_vec(self, i, a) -> Vec:
        v = [Q(0)] * self.dims[i]
        v[a] = Q(1)
        return tuple(v)

    def unit(self) -> Vec:
        return self._basis_vec(0, 0)

    @property
    def total_dim(self):
        return sum(self.dims)

    def degree_offset(self, i):
        return sum(self.dims[:i])

    def label(self, i, a):
        return self.labels[i][a]

    def equals(self, other) -> bool:
        return (
            self.n == other.n
            and self.dims == other.dims
            and self.labels == other.labels
            and self.mult == other.mult
            and self.trace_vec == other.trace_vec
            and self.xi == other.xi
        )

    def __repr__(self):
        return f"PoincareModel({self.name!r}, n={self.n}, dims={self.dims})"


class GradedOperator:
    """Degree-homogeneous linear map between models, one block per degree."""

    def __init__(self, source, target, degree, blocks):
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        for i in range(source.top + 1):
            j = i + degree
            sd = source.dims[i]
            td = target.dims[j] if 0 <= j <= target.top else 0
            blk = blocks.get(i)
            if blk is None:
                blk = Matrix([], 0, sd) if td == 0 else Matrix.zeros(td, sd)
            if blk.rows != td or blk.cols != sd:
                raise ValueError(
                    f"block at degree {i} has shape {blk.rows}x{blk.cols}, "
                    f"expected {td}x{sd}"
                )
            self.blocks[i] = blk

    @staticmethod
    def zero(source, target=None, degree=0):
        return GradedOperator(source, target or source, degree, {})

    @staticmethod
    def identity(model):
        return GradedOperator(
            model, model, 0,
            {i: Matrix.identity(model.dims[i]) for i in range(model.top + 1)},
        )

    def block(self, i) -> Matrix:
        return self.blocks[i]

    def apply(self, i, vec) -> Vec:
        return self.blocks[i] * vec

    def _same_frame(self, other):
        if (
            self.source is not other.source
            or self.target is not other.target
            or self.degree != other.degree
        ):
            raise ValueError("operator frames differ")

    def __add__(self, other):
        self._same_frame(other)
        return GradedOperator(
            self.source, self.target, self.degree,
            {i: self.blocks[i] + other.blocks[i] for i in self.blocks},
        )

    def __sub__(self, other):
        self._same_frame(other)
        return GradedOperator(
            self.source, self.target, self.degree,
            {i: self.blocks[i] - other.blocks[i] for i in self.blocks},
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return GradedOperator(
            self.source, self.target, self.degree,
            {i: self.blocks[i].scale(c) for i in self.blocks},
        )

    def __matmul__(self, other):
        """self after other."""
        if other.target is not self.source:
            raise ValueError("composition frame mismatch")
        deg = self.degree + other.degree
        blocks = {}
        for i in range(other.source.top + 1):
            j = i + other.degree
            if 0 <= j <= self.source.top:
                blocks[i] = self.blocks[j] @ other.blocks[i]
        return GradedOperator(other.source, self.target, deg, blocks)

    def __pow__(self, k):
        if self.source is not self.target:
            raise ValueError("powers need an endomorphism")
        out = GradedOperator.identity(self.source)
        for _ in range(k):
            out = self @ out
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GradedOperator)
            and self.source is other.source
            and self.target is other.target
            and self.degree == other.degree
            and all(self.blocks[i] == other.blocks[i] for i in self.blocks)
        )

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.degree,
                     tuple(sorted((i, b) for i, b in self.blocks.items()))))

    def is_zero(self):
        return all(b.is_zero() for b in self.blocks.values())

    def transpose(self) -> "GradedOperator":
        """Pairing adjoint: <u x, y> = <x, (t u) y>.

        Maps H^j(target) -> H^(2 n_source - i)(source) where
        i = 2 n_target - j - degree; for an endomorphism this preserves the
        operator degree (e.g. the transpose of L is L).
        """
        a, b = self.source, self.target
        adj_degree = 2 * (a.n - b.n) + self.degree
        blocks = {}
        for j in range(b.top + 1):
            i = b.top - j - self.degree
            if not (0 <= i <= a.top):
                continue
            if a.dims[i] == 0:
                continue
            gb = b.pairing_matrix(i + self.degree)
            ga_inv = a.pairing_inverse(i)
            blocks[j] = ga_inv @ self.blocks[i].transpose() @ gb
        return GradedOperator(b, a, adj_degree, blocks)

    def full_matrix(self) -> Matrix:
        """Matrix on the concatenated graded coordinates (all degrees)."""
        ns, nt = self.source.total_dim, self.target.total_dim
        grid = [[Q(0)] * ns for _ in range(nt)]
        for i, blk in self.blocks.items():
            j = i + self.degree
            if not (0 <= j <= self.target.top):
                continue
            ro = self.target.degree_offset(j)
            co = self.source.degree_offset(i)
            for r in range(blk.rows):
                for c in range(blk.cols):
                    grid[ro + r][co + c] = blk.entries[r][c]
        return Matrix(grid, nt, ns)

    def __repr__(self):
        return (
            f"GradedOperator({self.source.name}->{self.target.name}, "
            f"degree={self.degree})"
        )


def pairing_adjoint(u: GradedOperator) -> GradedOperator:
    return u.transpose()


def operator_from_full(source: PoincareModel, target: PoincareModel,
                       degree, full: Matrix) -> GradedOperator:
    """Rebuild a graded operator from a total-space matrix.

    Raises ValueError if the matrix has entries outside the blocks of the
    stated degree (i.e. if it is not degree-homogeneous).
    """
    blocks = {}
    for i in range(source.top + 1):
        j = i + degree
        co = source.degree_offset(i)
        sd = source.dims[i]
        if not (0 <= j <= target.top):
            for r in range(target.total_dim):
                for c in range(co, co + sd):
                    if full.entries[r][c] != 0:
                        raise ValueError(
                            f"matrix not homogeneous of degree {degree}: "
                            f"entry at row {r}, source degree {i}")
            continue
        ro = target.degree_offset(j)
        td = target.dims[j]
        blocks[i] = Matrix(
            [[full.entries[ro + r][co + c] for c in range(sd)]
             for r in range(td)], td, sd)
        for r in range(target.total_dim):
            if ro <= r < ro + td:
                continue
            for c in range(co, co + sd):
                if full.entries[r][c] != 0:
                    raise ValueError(
                        f"matrix not homogeneous of degree {degree}: "
                        f"entry at row {r}, source degree {i}")
    return GradedOperator(source, target, degree, blocks)


def cup_with(model: PoincareModel, deg, cls) -> GradedOperator:
    """Cup product with a fixed class of degree ``deg`` as a GradedOperator."""
    blocks = {}
    for i in range(model.top + 1):
        j = i + deg
        if j > model.top or model.dims[i] == 0:
            continue
        cols = [
            model.mult_vec(deg, cls, i, model._basis_vec(i, a))
            for a in range(model.dims[i])
        ]
        blocks[i] = Matrix.from_cols([list(c) for c in cols], model.dims[j])
    return GradedOperator(model, model, deg, blocks)


def lefschetz_operator(model: PoincareModel) -> GradedOperator:
    return cup_with(model, 2, model.xi)


# -- model validation ------------------------------------------------------


def validate_model(model: PoincareModel) -> VerificationReport:
    """Check every PoincareModel invariant; failures carry witnesses."""
    rep = VerificationReport("validate", {"model": model.name})
    rep.add("unit-line", model.dims[0] == 1,
            {"dims[0]": str(model.dims[0])})
    rep.add(
        "betti-symmetry",
        all(model.dims[i] == model.dims[model.top - i]
            for i in range(model.top + 1)),
        {"dims": str(model.dims)},
    )

    ok = True
    wit = None
    for i in range(model.top + 1):
        for a in range(model.dims[i]):
            v = model._basis_vec(i, a)
            if model.mult_vec(0, model.unit(), i, v) != v:
                ok, wit = False, {"element": model.label(i, a)}
                break
    rep.add("unit-law", ok, wit)

    ok, wit = True, None
    for i in range(model.top + 1):
        for j in range(model.top + 1 - i):
            sign = Q(-1) if (i % 2 and j % 2) else Q(1)
            for a in range(model.dims[i]):
                for b in range(model.dims[j]):
                    xy = model.mult_basis(i, a, j, b)
                    yx = model.mult_basis(j, b, i, a)
                    if tuple(sign * c for c in yx) != tuple(xy):
                        ok = False
                        wit = {"x": model.label(i, a), "y": model.label(j, b)}
    rep.add("graded-commutativity", ok, wit)

    ok, wit = True, None
    for i in range(model.top + 1):
        for j in range(model.top + 1 - i):
            for k in range(model.top + 1 - i - j):
                for a in range(model.dims[i]):
                    for b in range(model.dims[j]):
                        xy = model.mult_basis(i, a, j, b)
                        for c in range(model.dims[k]):
                            yz = model.mult_basis(j, b, k, c)
                            lhs = model.mult_vec(
                                i + j, xy, k, model._basis_vec(k, c))
                            rhs = model.mult_vec(
                                i, model._basis_vec(i, a), j + k, yz)
                            if lhs != rhs:
                                ok = False
                                wit = {
                                    "x": model.label(i, a),
                                    "y": model.label(j, b),
                                    "z": model.label(k, c),
                                }
    rep.add("associativity", ok, wit)

    ok, wit = True, None
    for i in range(model.top + 1):
        if model.dims[i] != model.dims[model.top - i]:
            ok, wit = False, {"degree": str(i)}
            continue
        if model.dims[i] == 0:
            continue
        g = model.pairing_matrix(i)
        if rank(g) != model.dims[i]:
            ok, wit = False, {
                "degree": str(i),
                "pairing_rank": str(rank(g)),
                "expected": str(model.dims[i]),
            }
    rep.add("pairing-nondegenerate", ok, wit)

    lef = lefschetz_operator(model)
    ok, wit = True, None
    for i in range(model.n):
        power = lef ** (model.n - i)
        blk = power.block(i)
        if model.dims[i] != model.dims[model.top - i] or rank(blk) != model.dims[i]:
            ok, wit = False, {"degree": str(i), "rank": str(rank(blk))}
    rep.add("hard-lefschetz", ok, wit)
    return rep


# -- standard constructions ------------------------------------------------


def projective_space(n: int) -> PoincareModel:
    """Q[h] / h^(n+1): one line per even degree, trace(h^n) = 1, xi = h."""
    if n < 1:
        raise ValueError("n >= 1 required")
    dims = [1 if i % 2 == 0 else 0 for i in range(2 * n + 1)]
    labels = [(["1"] if i == 0 else [f"h^{i // 2}"]) if i % 2 == 0 else []
              for i in range(2 * n + 1)]
    mult = {}
    for i in range(0, 2 * n + 1, 2):
        for j in range(0, 2 * n + 1 - i, 2):
            mult[(i, 0, j, 0)] = (Q(1),)
    return PoincareModel(
        f"P{n}", n, dims, labels, mult, trace=(Q(1),), xi=(Q(1),)
    )


def point_model() -> PoincareModel:
    return PoincareModel("pt", 0, [1], [["1"]], {(0, 0, 0, 0): (Q(1),)},
                         trace=(Q(1),), xi=())


def kunneth_product(a: PoincareModel, b: PoincareModel,
                    name=None) -> PoincareModel:
    """Graded tensor product with Koszul signs; xi = xi_a (x) 1 + 1 (x) xi_b."""
    n = a.n + b.n
    top = 2 * n
    # basis of degree d: pairs (i, p, q) with i + j = d, ordered by i then p, q
    index = {d: [] for d in range(top + 1)}
    for d in range(top + 1):
        for i in range(min(d, a.top) + 1):
            j = d - i
            if j > b.top:
                continue
            for p in range(a.dims[i]):
                for q in range(b.dims[j]):
                    index[d].append((i, p, q))
    dims = [len(index[d]) for d in range(top + 1)]
    labels = [
        [f"{a.label(i, p)}*{b.label(d - i, q)}" for (i, p, q) in index[d]]
        for d in range(top + 1)
    ]
    pos = {d: {t: k for k, t in enumerate(index[d])} for d in range(top + 1)}

    mult = {}
    for d1 in range(top + 1):
        for k1, (i1, p1, q1) in enumerate(index[d1]):
            for d2 in range(top + 1 - d1):
                for k2, (i2, p2, q2) in enumerate(index[d2]):
                    j1, j2 = d1 - i1, d2 - i2
                    aa = a.mult_basis(i1, p1, i2, p2)
                    bb = b.mult_basis(j1, q1, j2, q2)
                    if not aa or not bb:
                        continue
                    sign = Q(-1) if (j1 % 2 and i2 % 2) else Q(1)
                    out = [Q(0)] * dims[d1 + d2]
                    nonzero = False
                    for p, ca in enumerate(aa):
                        if ca == 0:
                            continue
                        for q, cb in enumerate(bb):
                            if cb == 0:
                                continue
                            k = pos[d1 + d2][(i1 + i2, p, q)]
                            out[k] += sign * ca * cb
                            nonzero = True
                    if nonzero:
                        mult[(d1, k1, d2, k2)] = tuple(out)

    trace = [Q(0)] * dims[top]
    for k, (i, p, q) in enumerate(index[top]):
        if i == a.top:
            trace[k] = a.trace_vec[p] * b.trace_vec[q]

    xi = [Q(0)] * dims[2]
    for k, (i, p, q) in enumerate(index[2]):
        if i == 2 and q == 0 and b.dims[0] == 1:
            xi[k] += a.xi[p]
        if i == 0 and p == 0:
            xi[k] += b.xi[q]

    return PoincareModel(
        name or f"{a.name}x{b.name}", n, dims, labels, mult, trace, xi
    )


def with_xi(model: PoincareModel, xi, name=None) -> PoincareModel:
    """Same algebra, different polarization class."""
    return PoincareModel(
        name or model.name, model.n, model.dims, model.labels, model.mult,
        model.trace_vec, _tup(xi),
    )
