"""Exact linear algebra over the rationals.

Matrices are dense grids of ``fractions.Fraction``; subspaces are stored as
reduced row-echelon bases, so equality of subspaces is equality of data.
No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, rows=None, cols=None):
        if rows is None:
            rows = len(entries)
            cols = len(entries[0]) if rows else 0
        grid = tuple(tuple(_frac(x) for x in r) for r in entries)
        for r in grid:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        self.entries = grid
        self.rows = rows
        self.cols = cols

    @staticmethod
    def zeros(rows, cols):
        return Matrix([[0] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(n):
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def from_cols(cols_list, rows):
        cols = len(cols_list)
        return Matrix(
            [[cols_list[j][i] for j in range(cols)] for i in range(rows)], rows, cols
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.rows,
            self.cols,
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _frac(c)
        return Matrix(
            [[c * x for x in r] for r in self.entries], self.rows, self.cols
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: ({self.rows}x{self.cols}) @ ({other.rows}x{other.cols})"
            )
        if self.rows == 0 or self.cols == 0 or other.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        ot = list(zip(*other.entries)) if other.entries else []
        out = []
        for r in self.entries:
            row = []
            for c in range(other.cols):
                col = ot[c]
                row.append(sum((r[k] * col[k] for k in range(self.cols)), Q(0)))
            out.append(row)
        return Matrix(out, self.rows, other.cols)

    def __mul__(self, vec):
        """Apply to a coordinate vector (list/tuple), returning a tuple."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((r[k] * _frac(vec[k]) for k in range(self.cols)), Q(0))
            for r in self.entries
        )

    def transpose(self):
        return Matrix(
            [list(c) for c in zip(*self.entries)] if self.entries else [],
            self.cols,
            self.rows,
        )

    def is_zero(self):
        return all(x == 0 for r in self.entries for x in r)

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __repr__(self):
        return f"Matrix({[list(map(str, r)) for r in self.entries]})"


def rref(m: Matrix):
    """Reduced row-echelon form.

    Returns ``(R, pivots)`` with pivot columns strictly increasing; pivot
    selection is always the lowest-index nonzero row (deterministic).
    """
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    pivots = []
    pr = 0
    for pc in range(nc):
        pivot_row = None
        for i in range(pr, nr):
            if a[i][pc] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[pr], a[pivot_row] = a[pivot_row], a[pr]
        inv = Q(1) / a[pr][pc]
        a[pr] = [x * inv for x in a[pr]]
        for i in range(nr):
            if i != pr and a[i][pc] != 0:
                f = a[i][pc]
                a[i] = [x - f * y for x, y in zip(a[i], a[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nr:
            break
    return Matrix(a, nr, nc), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix) -> "Subspace":
    """Null space of ``m`` as a canonical Subspace of dimension cols - rank."""
    r, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * m.cols
        v[fc] = Q(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r.entries[i][fc]
        basis.append(v)
    return Subspace.from_vectors(m.cols, basis)


def solve(m: Matrix, b) -> "tuple | None":
    """One solution of m x = b, or None if inconsistent."""
    aug = Matrix([list(r) + [_frac(b[i])] for i, r in enumerate(m.entries)],
                 m.rows, m.cols + 1)
    r, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Q(0)] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = r.entries[i][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    aug = Matrix(
        [list(m.entries[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)],
        n,
        2 * n,
    )
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix([list(r.entries[i][n:]) for i in range(n)], n, n)


class Subspace:
    """Subspace of Q^n stored as a reduced-echelon basis (canonical form)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(_frac(x) for x in v) for v in basis)

    @staticmethod
    def from_vectors(ambient_dim, vectors) -> "Subspace":
        if not vectors:
            return Subspace(ambient_dim, ())
        r, pivots = rref(Matrix([list(v) for v in vectors]))
        return Subspace(ambient_dim, r.entries[: len(pivots)])

    @staticmethod
    def zero(ambient_dim) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim) -> "Subspace":
        return Subspace.from_vectors(
            ambient_dim, Matrix.identity(ambient_dim).entries
        )

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def contains(self, vector) -> bool:
        v = [_frac(x) for x in vector]
        for b in self.basis:
            lead = next((j for j, x in enumerate(b) if x != 0), None)
            if lead is not None and v[lead] != 0:
                c = v[lead]
                v = [x - c * y for x, y in zip(v, b)]
        return all(x == 0 for x in v)

    def contains_space(self, other) -> bool:
        return all(self.contains(v) for v in other.basis)

    def sum(self, other) -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other) -> "Subspace":
        # Zassenhaus: echelonize [A|A; B|0]; rows with zero left half carry
        # intersection vectors in the right half.
        self._check(other)
        n = self.ambient_dim
        block = [list(v) + list(v) for v in self.basis] + [
            list(v) + [Q(0)] * n for v in other.basis
        ]
        if not block:
            return Subspace.zero(n)
        r, pivots = rref(Matrix(block))
        vecs = []
        for i in range(len(pivots)):
            row = r.entries[i]
            if all(x == 0 for x in row[:n]):
                vecs.append(row[n:])
        return Subspace.from_vectors(n, vecs)

    def complement_within(self, bigger: "Subspace") -> "Subspace":
        """C with self (+) C = bigger, chosen greedily over bigger's echelon
        basis in index order."""
        self._check(bigger)
        if not bigger.contains_space(self):
            raise ValueError("complement_within requires self <= bigger")
        chosen = []
        current = self
        for v in bigger.basis:
            if not current.contains(v):
                chosen.append(v)
                current = current.sum(Subspace.from_vectors(self.ambient_dim, [v]))
        return Subspace.from_vectors(self.ambient_dim, chosen)

    def basis_matrix(self) -> Matrix:
        """Basis vectors as columns (ambient_dim x dim)."""
        return Matrix.from_cols([list(v) for v in self.basis], self.ambient_dim)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def image(m: Matrix) -> Subspace:
    """Column space of ``m`` as a Subspace of Q^rows."""
    return Subspace.from_vectors(m.rows, [m.col(j) for j in range(m.cols)])


def projector_onto(img: "Subspace", ker: "Subspace") -> Matrix:
    """Projector with the given image and kernel (must be complementary)."""
    if img.ambient_dim != ker.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = img.ambient_dim
    if img.dim + ker.dim != n:
        raise ValueError("subspaces are not complementary (dimension)")
    cols = [list(v) for v in img.basis] + [list(v) for v in ker.basis]
    cob = Matrix.from_cols(cols, n)
    inv = inverse(cob)
    sel = Matrix([list(inv.entries[r]) for r in range(img.dim)], img.dim, n)
    return img.basis_matrix() @ sel


def lagrange_projectors(t: Matrix, spectrum):
    """Primary projectors of a semisimple operator, by interpolation.

    Requires the minimal polynomial of ``t`` to divide prod(x - lam) over the
    given spectrum; raises ValueError (naming the residual) otherwise.  The
    returned projectors are idempotent, mutually orthogonal, sum to the
    identity and satisfy t = sum(lam_k P_k).
    """
    spectrum = [_frac(s) for s in spectrum]
    if len(set(spectrum)) != len(spectrum):
        raise ValueError("spectrum values must be distinct")
    n = t.rows
    ident = Matrix.identity(n)
    residual = ident
    for lam in spectrum:
        residual = residual @ (t - ident.scale(lam))
    if not residual.is_zero():
        raise ValueError(
            f"operator is not semisimple over the given spectrum; "
            f"prod(T - lambda) has a nonzero entry {residual.entries}"
        )
    projs = []
    for lam in spectrum:
        p = ident
        for mu in spectrum:
            if mu != lam:
                p = p @ (t - ident.scale(mu)).scale(Q(1) / (lam - mu))
        projs.append(p)
    return projs


def _poly_mul(a, b):
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_eval_matrix(coeffs, t: Matrix) -> Matrix:
    # Horner, lowest degree first in coeffs.
    n = t.rows
    out = Matrix.zeros(n, n)
    for c in reversed(coeffs):
        out = out @ t + Matrix.identity(n).scale(c)
    return out


def semisimple_part(t: Matrix, k: int) -> Matrix:
    """Semisimple part of an operator whose minimal polynomial divides
    P(x)^3 with P(x) = x * prod_{i=1..k} (x^2 - i^2).

    Uses the explicit partial-unity construction: with
    R_i(x) = prod_{j != i} (x - j)^3 over j in [-k, k] and quadratic a_i
    solving sum R_i a_i = 1, the semisimple part is
    S = sum_i i * a_i(T) R_i(T).
    """
    eigs = list(range(-k, k + 1))
    n = t.rows
    # precondition: P(T)^3 = 0
    p_of_t = t
    for i in range(1, k + 1):
        p_of_t = p_of_t @ (t @ t - Matrix.identity(n).scale(i * i))
    cube = p_of_t @ p_of_t @ p_of_t
    if not cube.is_zero():
        raise ValueError(
            "minimal polynomial does not divide P(x)^3 for the given k; "
            "P(T)^3 is nonzero"
        )
    r_polys = {}
    for i in eigs:
        poly = [Q(1)]
        for j in eigs:
            if j != i:
                cube_factor = _poly_mul(
                    _poly_mul([-Q(j), Q(1)], [-Q(j), Q(1)]), [-Q(j), Q(1)]
                )
                poly = _poly_mul(poly, cube_factor)
        r_polys[i] = poly
    # Solve sum_i R_i(x) a_i(x) = 1 with deg a_i <= 2: a square linear system
    # in the 3*(2k+1) coefficients of the a_i.
    deg_total = 3 * len(eigs)  # = deg(prod (x-j)^3) ; equations 0..deg_total-1
    cols = []
    for i in eigs:
        for s in range(3):
            shifted = [Q(0)] * s + r_polys[i]
            col = [shifted[d] if d < len(shifted) else Q(0) for d in range(deg_total)]
            cols.append(col)
    rhs = [Q(1)] + [Q(0)] * (deg_total - 1)
    sol = solve(Matrix.from_cols(cols, deg_total), rhs)
    if sol is None:
        raise ValueError("partial-unity system unsolvable (should not happen)")
    a_polys = {}
    for idx, i in enumerate(eigs):
        a_polys[i] = list(sol[3 * idx : 3 * idx + 3])
    s_mat = Matrix.zeros(n, n)
    for i in eigs:
        if i == 0:
            continue
        term = _poly_eval_matrix(_poly_mul(a_polys[i], r_polys[i]), t)
        s_mat = s_mat + term.scale(i)
    return s_mat


def nilpotent_order(m: Matrix) -> "int | None":
    """Smallest e >= 1 with m^e = 0, or None if m is not nilpotent."""
    power = m
    for e in range(1, m.rows + 2):
        if power.is_zero():
            return e
        power = power @ m
    return None
