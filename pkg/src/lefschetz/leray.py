"""Leray filtration of a pencil on the blown-up ambient space.

Builds the two-step filtration (kernel of the fibre restriction over the
image of the fibre Gysin map), a canonical splitting into three strands,
the fibrewise Kunneth projectors and weight operator, the lift map psi,
and the fibrewise sl2 structure, together with their verification suites.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Sl2Decomposition
from .frobenius import (
    GradedOperator,
    PoincareModel,
    cup_with,
    operator_from_full,
    pairing_adjoint,
)
from .models import BlowupData, vanishing_subspace
from .rational_linalg import (
    Matrix,
    Q,
    Subspace,
    image,
    kernel,
    lagrange_projectors,
    projector_onto,
    rank,
    semisimple_part,
    solve,
)
from .report import VerificationReport


def _cols_to_vectors(m: Matrix):
    return [[m.entries[r][c] for r in range(m.rows)] for c in range(m.cols)]


class LerayStructure:
    """Filtration, splitting projectors, and fibrewise Kunneth data."""

    def __init__(self, blowup: BlowupData):
        self.blowup = blowup
        p = blowup.pencil
        self.pencil = p
        xt = blowup.model
        self.model = xt
        n = p.x.n
        self.n = n

        # filtration subspaces per total degree
        self.F1 = {d: kernel(blowup.k_upper.block(d))
                   for d in range(xt.top + 1)}
        self.F2 = {}
        for d in range(xt.top + 1):
            if d >= 2:
                self.F2[d] = image(blowup.k_lower.block(d - 2))
            else:
                self.F2[d] = Subspace.zero(xt.dims[d])

        # three-way splitting of each degree d <= n
        x, y, dl = p.x, p.y, p.delta
        from .core import LefschetzContext

        self.ctx_x = LefschetzContext(x)
        self.ctx_y = LefschetzContext(y)
        self.A = {}
        self.B = {}
        self.C = {}
        for d in range(n + 1):
            xdim = x.dims[d]
            dim = xt.dims[d]
            b = self.F2[d]
            cvecs = []
            if d >= 2:
                for a in range(y.dims[d - 2]):
                    yb = y._basis_vec(d - 2, a)
                    up = p.iota_gysin.apply(d - 2, yb)
                    down = p.h_restrict.apply(d - 2, yb) \
                        if d - 2 <= dl.top else ()
                    v = [Q(0)] * dim
                    for k, c in enumerate(up):
                        v[k] = c
                    for k, c in enumerate(down):
                        v[xdim + k] = c
                    cvecs.append(v)
            c_space = Subspace.from_vectors(dim, cvecs)
            avecs = []
            prim = self.ctx_x.primitive_subspace(d)
            for v in prim.basis:
                avecs.append(list(v) + [Q(0)] * (dim - xdim))
            if d >= 2 and dl.dims[d - 2]:
                vd = kernel(p.h_gysin.block(d - 2))
                for v in vd.basis:
                    avecs.append([Q(0)] * xdim + list(v))
            a_space = Subspace.from_vectors(dim, avecs)
            if a_space.dim + b.dim + c_space.dim != dim or \
                    a_space.sum(b).sum(c_space).dim != dim:
                raise ValueError(
                    f"splitting of degree {d} is not direct")
            self.A[d], self.B[d], self.C[d] = a_space, b, c_space

        # splitting projectors pi[(i, eps)], each a degree-0 operator
        # supported on total degree i + eps
        self.pi = {}

        def put(i, eps, degree, block):
            self.pi[(i, eps)] = GradedOperator(
                xt, xt, 0, {degree: block})

        for d in range(n + 1):
            a, b, c = self.A[d], self.B[d], self.C[d]
            if d <= n - 1:
                put(d, 0, d, projector_onto(a.sum(c), b))
            else:
                put(n, 0, n, projector_onto(c, a.sum(b)))
                put(n - 1, 1, n, projector_onto(a, b.sum(c)))
            if d >= 2:
                put(d - 2, 2, d, projector_onto(b, a.sum(c)))
        for i in range(2 * n - 1):
            if (i, 0) not in self.pi:
                self.pi[(i, 0)] = pairing_adjoint(
                    self.pi[(2 * n - 2 - i, 2)])
            if (i, 2) not in self.pi:
                self.pi[(i, 2)] = pairing_adjoint(
                    self.pi[(2 * n - 2 - i, 0)])

        self._pi_rho = {}
        self._relative = None

    # -- fibrewise projectors and weight operator -------------------------

    def pi_eps(self, i, eps) -> GradedOperator:
        op = self.pi.get((i, eps))
        return op if op is not None else GradedOperator.zero(
            self.model, self.model, 0)

    def pi_rho(self, i) -> GradedOperator:
        if i not in self._pi_rho:
            acc = GradedOperator.zero(self.model, self.model, 0)
            for eps in (0, 1, 2):
                acc = acc + self.pi_eps(i, eps)
            self._pi_rho[i] = acc
        return self._pi_rho[i]

    def strand(self, eps) -> GradedOperator:
        acc = GradedOperator.zero(self.model, self.model, 0)
        for i in range(2 * self.n - 1):
            acc = acc + self.pi_eps(i, eps)
        return acc

    @property
    def h_rho(self) -> GradedOperator:
        acc = GradedOperator.zero(self.model, self.model, 0)
        for i in range(2 * self.n - 1):
            acc = acc + self.pi_rho(i).scale(self.n - 1 - i)
        return acc

    def psi(self, u: GradedOperator) -> GradedOperator:
        """Project an operator onto its fibrewise-graded part."""
        if u.degree % 2:
            raise ValueError("psi needs an even-degree operator")
        r = u.degree // 2
        acc = GradedOperator.zero(self.model, self.model, u.degree)
        for i in range(2 * self.n - 1):
            if 0 <= i + 2 * r <= 2 * self.n - 2:
                acc = acc + self.pi_rho(i + 2 * r) @ u @ self.pi_rho(i)
        return acc

    def filtration_part(self, u: GradedOperator, pairs) -> GradedOperator:
        """Sum of the strand-to-strand components named in ``pairs``."""
        acc = GradedOperator.zero(self.model, self.model, u.degree)
        for eps_from, eps_to in pairs:
            acc = acc + self.strand(eps_to) @ u @ self.strand(eps_from)
        return acc

    def strictly_raising_part(self, u):
        return self.filtration_part(
            u, [(0, 1), (0, 2), (1, 2)])

    def strictly_lowering_part(self, u):
        return self.filtration_part(
            u, [(1, 0), (2, 0), (2, 1)])

    def weight_preserving_drop(self, u: GradedOperator) -> GradedOperator:
        """Strictly filtration-lowering part of a degree -2 operator that
        keeps the fibrewise weight: the strand-2-to-strand-0 components
        matching fibre degrees.  Such a term is nilpotent and commutes
        with the weight operator."""
        if u.degree != -2:
            raise ValueError("expected a degree -2 operator")
        acc = GradedOperator.zero(self.model, self.model, -2)
        for i in range(2 * self.n - 1):
            acc = acc + self.pi_eps(i, 0) @ u @ self.pi_eps(i, 2)
        return acc

    @property
    def fibre_cup(self) -> GradedOperator:
        """Cup product with the pulled-back ambient polarization."""
        x, xt = self.pencil.x, self.model
        cls = self.blowup.f_upper.apply(2, x.xi)
        return cup_with(xt, 2, cls)

    @property
    def base_point_class(self):
        """The pull-back of a point of the base line, as a degree-2 class."""
        return self.blowup.k_lower.apply(0, self.pencil.y.unit())

    def exceptional_embed(self) -> GradedOperator:
        """H^(d)(base locus) -> H^(d+2)(blow-up), the exceptional summand."""
        dl, xt = self.pencil.delta, self.model
        blocks = {}
        for d in range(dl.top + 1):
            x_dim = self.pencil.x.dims[d + 2]
            rows = xt.dims[d + 2]
            grid = [[Q(0)] * dl.dims[d] for _ in range(rows)]
            for k in range(dl.dims[d]):
                grid[x_dim + k][k] = Q(1)
            blocks[d] = Matrix(grid, rows, dl.dims[d])
        return GradedOperator(dl, xt, 2, blocks)

    def relative(self) -> "RelativeSl2":
        if self._relative is None:
            self._relative = RelativeSl2(self)
        return self._relative


class RelativeSl2:
    """Fibrewise primitive decomposition and sl2 operators on the blow-up."""

    def __init__(self, s: LerayStructure):
        self.structure = s
        xt = s.model
        n = s.n
        self.m = n - 1
        N = xt.total_dim
        self.L_rho = s.psi(s.fibre_cup)
        l_full = self.L_rho.full_matrix()

        # abstract graded space over the fibre degree
        self.embed = {}
        self.retract = {}
        dims = []
        for i in range(2 * n - 1):
            full = s.pi_rho(i).full_matrix()
            img = Subspace.from_vectors(
                N, [full.col(c) for c in range(N)])
            e = img.basis_matrix()
            cols = []
            for c in range(N):
                sol = solve(e, full.col(c))
                if sol is None:
                    raise ValueError("projector image basis inconsistent")
                cols.append(list(sol))
            self.embed[i] = e
            self.retract[i] = Matrix.from_cols(cols, img.dim)
            dims.append(img.dim)
        self.dims = dims

        raising = {}
        for i in range(2 * n - 3):
            raising[i] = self.retract[i + 2] @ l_full @ self.embed[i]
        self.sl2 = Sl2Decomposition(self.m, dims, raising)

        self._ops = {}

    def _wrap(self, blocks_abs, shift) -> GradedOperator:
        """Pull abstract fibre-degree blocks back to the blow-up model."""
        s = self.structure
        xt = s.model
        N = xt.total_dim
        full = Matrix.zeros(N, N)
        for i, blk in blocks_abs.items():
            j = i + shift
            if not 0 <= j <= 2 * self.m:
                continue
            full = full + self.embed[j] @ blk @ self.retract[i]
        return operator_from_full(xt, xt, shift, full)

    @property
    def lam_rho(self) -> GradedOperator:
        if "lam" not in self._ops:
            self._ops["lam"] = self._wrap(self.sl2.lowering_blocks(), -2)
        return self._ops["lam"]

    @property
    def clam_rho(self) -> GradedOperator:
        if "clam" not in self._ops:
            self._ops["clam"] = self._wrap(
                self.sl2.normalized_lowering_blocks(), -2)
        return self._ops["clam"]

    @property
    def h_rho(self) -> GradedOperator:
        if "h" not in self._ops:
            self._ops["h"] = self._wrap(self.sl2.weight_blocks(), 0)
        return self._ops["h"]

    def p_rho(self, k) -> GradedOperator:
        key = ("p", k)
        if key not in self._ops:
            shift = 0 if k <= self.m else 2 * self.m - 2 * k
            self._ops[key] = self._wrap(
                self.sl2.primitive_projector_blocks(k), shift)
        return self._ops[key]


# -- deterministic test operators ------------------------------------------


def dense_test_operator(model: PoincareModel, degree) -> GradedOperator:
    """A fixed dense operator of the given degree, for exercising suites."""
    blocks = {}
    for i in range(model.top + 1):
        j = i + degree
        if not 0 <= j <= model.top:
            continue
        rows, cols = model.dims[j], model.dims[i]
        blocks[i] = Matrix(
            [[Fraction(1, r + c + i + 1) for c in range(cols)]
             for r in range(rows)], rows, cols)
    return GradedOperator(model, model, degree, blocks)


# -- suites ----------------------------------------------------------------


def _op_preserves(space_by_degree, w: GradedOperator):
    """Does w map each listed subspace into the one at the shifted degree?"""
    top = w.source.top
    for d, sub in space_by_degree.items():
        j = d + w.degree
        for v in sub.basis:
            img = w.apply(d, v)
            if not img:
                continue
            if 0 <= j <= top:
                if not space_by_degree[j].contains(list(img)):
                    return False, d
            elif any(c != 0 for c in img):
                return False, d
    return True, None


def leray_suite(s: LerayStructure) -> VerificationReport:
    """Filtration shape: inclusion, orthogonality, fibre-class facts."""
    xt, n, p = s.model, s.n, s.pencil
    rep = VerificationReport(
        "leray", {"pencil": p.name, "m": str(p.m)})
    b = s.blowup
    rep.add("fibre-restriction-kills-fibre-classes",
            (b.k_upper @ b.k_lower).is_zero())
    rep.add("second-step-inside-first",
            all(s.F1[d].contains_space(s.F2[d])
                for d in range(xt.top + 1)))

    ok, wit = True, None
    for d in range(xt.top + 1):
        g = xt.pairing_matrix(d)
        bm = s.F2[d].basis_matrix()
        orth = kernel(bm.transpose() @ g)
        if orth != s.F1[xt.top - d]:
            ok, wit = False, {"degree": str(d)}
    rep.add("filtration-steps-mutually-orthogonal", ok, wit)

    rho_t = s.base_point_class
    xi_drop = tuple(
        a - p.m * c for a, c in zip(
            xt.xi, b.f_upper.apply(2, p.x.xi)))
    rep.add("polarization-minus-fibre-multiple-is-base-point",
            xi_drop == rho_t)
    rep.add("base-point-class-squares-to-zero",
            all(c == 0 for c in xt.mult_vec(2, rho_t, 2, rho_t)))

    # the fibre Gysin map loses exactly the vanishing classes, which sit
    # in the middle fibre degree
    v_dim = vanishing_subspace(p.xy).dim
    ok, wit = True, None
    for d in range(2, xt.top + 1):
        expect = p.y.dims[d - 2] - (v_dim if d - 2 == n - 1 else 0)
        if s.F2[d].dim != expect:
            ok, wit = False, {"degree": str(d),
                              "dim": str(s.F2[d].dim),
                              "expected": str(expect)}
    rep.add("second-step-dimensions-match-fibre-coinvariants", ok, wit)
    return rep


def splitting_suite(s: LerayStructure) -> VerificationReport:
    """The three-strand system of projectors and its image descriptions."""
    xt, n, p = s.model, s.n, s.pencil
    rep = VerificationReport(
        "splitting", {"pencil": p.name, "m": str(p.m)})
    keys = sorted(s.pi.keys())
    total = GradedOperator.zero(xt, xt, 0)
    for k in keys:
        total = total + s.pi[k]
    rep.add("system-complete", total == GradedOperator.identity(xt))

    ok, wit = True, None
    for k1 in keys:
        for k2 in keys:
            prod = s.pi[k1] @ s.pi[k2]
            expect = s.pi[k1] if k1 == k2 else \
                GradedOperator.zero(xt, xt, 0)
            if prod != expect:
                ok, wit = False, {"left": str(k1), "right": str(k2)}
    rep.add("system-orthogonal-idempotents", ok, wit)

    ok, wit = True, None
    for i in range(xt.top + 1):
        acc = GradedOperator.zero(xt, xt, 0)
        for pair in ((i, 0), (i - 1, 1), (i - 2, 2)):
            if pair in s.pi:
                acc = acc + s.pi[pair]
        if acc.block(i) != Matrix.identity(xt.dims[i]):
            ok, wit = False, {"degree": str(i)}
    rep.add("strands-refine-grading", ok, wit)

    ok, wit = True, None
    for i in range(2 * n - 1):
        if pairing_adjoint(s.pi[(i, 0)]) != s.pi[(2 * n - 2 - i, 2)]:
            ok, wit = False, {"index": str(i)}
    rep.add("outer-strands-transpose-dual", ok, wit)
    rep.add("middle-strand-symmetric",
            pairing_adjoint(s.pi[(n - 1, 1)]) == s.pi[(n - 1, 1)])

    # image of the middle projector: ambient middle primitives plus the
    # vanishing classes of the base locus
    x = p.x
    mid = s.pi[(n - 1, 1)].block(n)
    expected = Subspace.from_vectors(
        xt.dims[n],
        [list(v) + [Q(0)] * (xt.dims[n] - x.dims[n])
         for v in s.ctx_x.primitive_subspace(n).basis]
        + [[Q(0)] * x.dims[n] + list(v)
           for v in kernel(p.h_gysin.block(n - 2)).basis])
    rep.add("middle-image-is-primitive-plus-vanishing",
            image(mid) == expected,
            {"rank": str(rank(mid)), "expected-dim": str(expected.dim)})
    rep.add("middle-rank-counts",
            rank(mid) == s.ctx_x.primitive_subspace(n).dim
            + vanishing_subspace(p.ydelta).dim)

    ok, wit = True, None
    for i in range(n):
        got = image(s.pi[(i, 0)].block(i))
        if got != s.A[i].sum(s.C[i]):
            ok, wit = False, {"index": str(i)}
    rep.add("low-zero-strand-images", ok, wit)
    rep.add("middle-zero-strand-image",
            image(s.pi[(n, 0)].block(n)) == s.C[n])

    hn_x = Subspace.from_vectors(
        xt.dims[n],
        [[Q(1) if k == a else Q(0) for k in range(xt.dims[n])]
         for a in range(x.dims[n])])
    pn0 = Subspace.from_vectors(
        xt.dims[n],
        [list(v) + [Q(0)] * (xt.dims[n] - x.dims[n])
         for v in s.ctx_x.primitive_subspace(n).basis])
    rep.add("ambient-middle-meets-filtration-in-primitives",
            hn_x.intersection(s.F1[n]) == pn0)

    # outer-strand ranks: below the middle the local system is constant of
    # rank b_i(X); above it, fibre duality caps the rank at b_{2n-2-i}(X)
    ok, wit = True, None
    for i in range(2 * n - 1):
        r0 = rank(s.pi[(i, 0)].block(i))
        r2 = rank(s.pi[(i, 2)].block(i + 2))
        expect = x.dims[min(i, 2 * n - 2 - i)]
        if not (r0 == expect == r2):
            ok, wit = False, {
                "index": str(i), "zero-strand-rank": str(r0),
                "two-strand-rank": str(r2),
                "expected": str(expect)}
    rep.add("outer-strand-ranks-are-ambient-betti", ok, wit)
    return rep


def relative_kunneth_suite(s: LerayStructure) -> VerificationReport:
    """Weight operator and fibrewise Kunneth projectors."""
    xt, n = s.model, s.n
    rep = VerificationReport(
        "relative-kunneth", {"pencil": s.pencil.name, "m": str(s.pencil.m)})
    h = s.h_rho
    rep.add("weight-antisymmetric", pairing_adjoint(h) == h.scale(-1))
    rep.add("projector-transpose-duality",
            all(pairing_adjoint(s.pi_rho(i)) == s.pi_rho(2 * n - 2 - i)
                for i in range(2 * n - 1)))

    hm = h.full_matrix()
    spectrum = [Q(n - 1 - i) for i in range(2 * n - 1)]
    try:
        projs = lagrange_projectors(hm, spectrum)
        ok, wit = True, None
        for i in range(2 * n - 1):
            if projs[i] != s.pi_rho(i).full_matrix():
                ok, wit = False, {"index": str(i)}
        rep.add("weight-interpolation-recovers-projectors", ok, wit)
    except ValueError as exc:
        rep.add("weight-interpolation-recovers-projectors", False,
                {"error": str(exc)})

    # a perturbed lifting has the same semisimple part; the perturbation
    # must strictly lower the filtration while fixing the fibrewise weight
    nu = s.weight_preserving_drop(dense_test_operator(xt, -2))
    rep.add("test-perturbation-is-nontrivial", not nu.is_zero())
    perturbed = hm + nu.full_matrix()
    try:
        ss = semisimple_part(perturbed, n - 1)
        rep.add("semisimple-part-of-lifting-is-weight", ss == hm)
    except ValueError as exc:
        rep.add("semisimple-part-of-lifting-is-weight", False,
                {"error": str(exc)})
    return rep


def psi_suite(s: LerayStructure) -> VerificationReport:
    """The lift map: projector properties and kernel description."""
    xt = s.model
    rep = VerificationReport(
        "psi", {"pencil": s.pencil.name, "m": str(s.pencil.m)})
    ident = GradedOperator.identity(xt)
    rep.add("identity-fixed", s.psi(ident) == ident)

    u0 = dense_test_operator(xt, 0)
    u2 = dense_test_operator(xt, 2)
    um2 = dense_test_operator(xt, -2)
    rep.add("idempotent",
            all(s.psi(s.psi(u)) == s.psi(u) for u in (u0, u2, um2)))
    rep.add("transpose-equivariant",
            all(s.psi(pairing_adjoint(u)) == pairing_adjoint(s.psi(u))
                for u in (u0, u2, um2)))
    a, b = s.psi(u2), s.psi(u0)
    rep.add("multiplicative-on-image", s.psi(a @ b) == a @ b)
    nu = s.strictly_raising_part(u0)
    rep.add("kernel-contains-graded-trivial-operators",
            s.psi(nu).is_zero())
    rep.add("kernel-contains-strictly-lowering-operators",
            s.psi(s.strictly_lowering_part(u0)).is_zero()
            and s.psi(s.weight_preserving_drop(um2)).is_zero())

    L_f = s.fibre_cup
    L_t = cup_with(xt, 2, xt.xi)
    rep.add("ample-cup-matches-fibre-cup-on-graded-pieces",
            s.psi(L_t - L_f.scale(s.pencil.m)).is_zero())
    L_rho = s.relative().L_rho
    rep.add("lift-of-fibre-cup", s.psi(L_f) == L_rho)
    ok, wit = True, None
    for d in range(xt.top + 1):
        for v in s.F2[d].basis:
            got = (L_rho - L_f).apply(d, list(v))
            if any(c != 0 for c in got):
                ok, wit = False, {"degree": str(d)}
    rep.add("lift-agrees-with-fibre-cup-on-second-step", ok, wit)
    return rep


def relative_suite(s: LerayStructure) -> VerificationReport:
    """Fibrewise sl2 triple, primitive projectors, filtration behavior."""
    xt, n = s.model, s.n
    rel = s.relative()
    rep = VerificationReport(
        "relative", {"pencil": s.pencil.name, "m": str(s.pencil.m)})
    L, lam, clam, h = rel.L_rho, rel.lam_rho, rel.clam_rho, rel.h_rho
    rep.add("weight-consistency", h == s.h_rho)
    rep.add("bracket-lowering-raising-is-weight",
            (clam @ L - L @ clam) == h)
    rep.add("bracket-weight-raising", (h @ L - L @ h) == L.scale(-2))
    rep.add("bracket-weight-lowering",
            (h @ clam - clam @ h) == clam.scale(2))
    rep.add("dual-lowering-symmetric", pairing_adjoint(lam) == lam)
    rep.add("normalized-lowering-symmetric",
            pairing_adjoint(clam) == clam)

    ok, wit = True, None
    for i in range(1, n):
        power = (L ** i).full_matrix()
        e = rel.embed[n - 1 - i]
        if rank(power @ e) != rel.dims[n - 1 - i] or \
                rel.dims[n - 1 - i] != rel.dims[n - 1 + i]:
            ok, wit = False, {"step": str(i)}
    rep.add("fibrewise-lefschetz-isomorphisms", ok, wit)

    acc = GradedOperator.zero(xt, xt, 0)
    for i in range(n):
        acc = acc + rel.p_rho(i)
    rep.add("raise-lower-defect-is-primitive-sum",
            L @ lam == GradedOperator.identity(xt) - acc)

    mu = s.strictly_raising_part(dense_test_operator(xt, -2))
    rep.add("lowering-lift-independent-of-choice",
            s.psi(clam + mu) == clam and not mu.is_zero())

    ok, wit = True, None
    for eps in (0, 2):
        for i in range(2 * n - 1):
            lhs = clam @ s.pi_eps(i, eps)
            rhs = s.pi_eps(i - 2, eps) @ clam if i >= 2 else \
                GradedOperator.zero(xt, xt, -2)
            if lhs != rhs:
                ok, wit = False, {"strand": str(eps), "index": str(i)}
    rep.add("lowering-commutes-with-outer-strands", ok, wit)

    ops = {"raising": L, "dual-lowering": lam,
           "normalized-lowering": clam, "weight": h}
    for k in range(2 * n - 1):
        ops[f"primitive-projector-{k}"] = rel.p_rho(k)
    ok, wit = True, None
    for name, w in ops.items():
        good1, d1 = _op_preserves(s.F1, w)
        good2, d2 = _op_preserves(s.F2, w)
        if not (good1 and good2):
            ok, wit = False, {"operator": name,
                              "degree": str(d1 if not good1 else d2)}
    rep.add("outputs-preserve-filtration", ok, wit)

    ok, wit = True, None
    for i in range(n - 1):
        blk = rel.p_rho(i).block(i + 1)
        if not blk.is_zero():
            ok, wit = False, {"index": str(i)}
    rep.add("low-projectors-vanish-one-above", ok, wit)

    rep.add("middle-strand-is-fibrewise-primitive",
            (lam @ s.pi_eps(n - 1, 1)).is_zero()
            and rel.p_rho(n - 1) @ s.pi_eps(n - 1, 1)
            == s.pi_eps(n - 1, 1))
    return rep


def tilde_power_suite(s: LerayStructure, r_max=None) -> VerificationReport:
    """Power formulas for the ample class on the blow-up."""
    xt, n, p = s.model, s.n, s.pencil
    b = s.blowup
    m = Q(p.m)
    if r_max is None:
        r_max = n
    rep = VerificationReport(
        "tilde-power",
        {"pencil": p.name, "m": str(p.m), "r_max": str(r_max)})
    L_t = cup_with(xt, 2, xt.xi)
    L_f = s.fibre_cup
    Lx = s.ctx_x.L
    Ly = s.ctx_y.L
    from .frobenius import lefschetz_operator

    Ld = lefschetz_operator(p.delta)
    emb = s.exceptional_embed()
    for r in range(1, r_max + 1):
        c1 = m ** (r - 1) * (m + r)
        c2 = Q(r) * m ** (r - 1)
        c3 = m ** (r - 1) * (m - r)
        rep.add(
            f"pullback-power-formula-r-{r}",
            (L_t ** r) @ b.f_upper
            == b.f_upper @ (Lx ** r).scale(c1)
            - (emb @ (Ld ** (r - 1)) @ p.j_restrict).scale(c2))
        rep.add(
            f"exceptional-power-formula-r-{r}",
            (L_t ** r) @ emb
            == (b.f_upper @ (Lx ** (r - 1)) @ p.j_gysin).scale(c2)
            + (emb @ (Ld ** r)).scale(c3))
        rep.add(
            f"power-difference-through-fibre-r-{r}",
            (L_t ** r) - (L_f ** r).scale(m ** r)
            == (b.k_lower @ (Ly ** (r - 1)) @ b.k_upper).scale(c2))
        rep.add(
            f"powers-fix-fibre-classes-r-{r}",
            (L_t ** r) @ b.k_lower == (b.k_lower @ (Ly ** r)).scale(m ** r)
            and (L_t ** r) @ b.k_lower
            == ((L_f ** r) @ b.k_lower).scale(m ** r))
        lhs = (L_t ** r).apply(0, xt.unit())
        xr = (Lx ** r).apply(0, p.x.unit())
        dr = (Ld ** (r - 1)).apply(0, p.delta.unit()) \
            if 2 * (r - 1) <= p.delta.top else ()
        expect = [Q(0)] * xt.dims[2 * r] if 2 * r <= xt.top else None
        if expect is not None:
            for k, c in enumerate(xr):
                expect[k] += c1 * c
            off = p.x.dims[2 * r]
            for k, c in enumerate(dr):
                expect[off + k] -= c2 * c
            rep.add(f"polarization-power-components-r-{r}",
                    lhs == tuple(expect))

    # primitive classes of the ambient stay primitive upstairs and their
    # top raising lands in the second filtration step
    for i in range(n):
        prim = s.ctx_x.primitive_subspace(i)
        if prim.dim == 0:
            continue
        up = [b.f_upper.apply(i, v) for v in prim.basis]
        top_ok = True
        disjoint_ok = True
        inside_ok = True
        for v in up:
            w = (L_t ** (n - i)).apply(i, v)
            if not s.F2[2 * n - i].contains(list(w)):
                inside_ok = False
        lifted = Subspace.from_vectors(xt.dims[i], [list(v) for v in up])
        if not blowup_primitive_subspace(s, i).contains_space(lifted):
            top_ok = False
        for j in range(n - i):
            raised = [(L_t ** j).apply(i, list(v)) for v in up]
            space = Subspace.from_vectors(
                xt.dims[i + 2 * j], [list(v) for v in raised])
            if space.intersection(s.F1[i + 2 * j]).dim != 0:
                disjoint_ok = False
        rep.add(f"ambient-primitives-stay-primitive-degree-{i}", top_ok)
        rep.add(f"raised-primitives-meet-filtration-trivially-degree-{i}",
                disjoint_ok)
        rep.add(f"top-raising-lands-in-second-step-degree-{i}", inside_ok)
    return rep


def blowup_primitive_subspace(s: LerayStructure, i) -> Subspace:
    """Primitive subspace of the blow-up model in degree i."""
    from .core import LefschetzContext

    if not hasattr(s, "_ctx_tilde"):
        s._ctx_tilde = LefschetzContext(s.model)
    return s._ctx_tilde.primitive_subspace(i)


def structural_suite(s: LerayStructure) -> VerificationReport:
    """Image formulas tying the splitting to the section geometry."""
    xt, n, p = s.model, s.n, s.pencil
    b = s.blowup
    rel = s.relative()
    rep = VerificationReport(
        "structural", {"pencil": p.name, "m": str(p.m)})
    x = p.x

    rho_op = cup_with(xt, 2, s.base_point_class)
    rep.add("base-point-cup-is-fibre-class-of-restriction",
            rho_op == b.k_lower @ b.k_upper)
    ok, wit = True, None
    for i in range(n):
        prim = s.ctx_x.primitive_subspace(i)
        up = [list(b.f_upper.apply(i, v)) for v in prim.basis]
        imgs = [list(rho_op.apply(i, v)) for v in up]
        got = Subspace.from_vectors(xt.dims[i + 2], imgs)
        prim_y = [list(p.iota_restrict.apply(i, v)) for v in prim.basis]
        expect = Subspace.from_vectors(
            xt.dims[i + 2],
            [list(b.k_lower.apply(i, v)) for v in prim_y])
        if got != expect or got.dim != prim.dim:
            ok, wit = False, {"degree": str(i)}
        prim_fibre = Subspace.from_vectors(
            xt.dims[i + 2],
            [list(b.k_lower.apply(i, v))
             for v in s.ctx_y.primitive_subspace(i).basis])
        if got != prim_fibre:
            ok, wit = False, {"degree": str(i), "side": "fibre-primitives"}
    rep.add("base-point-cup-embeds-primitives-into-fibre-classes", ok, wit)

    ctx_x = s.ctx_x
    f_up, f_low = b.f_upper, b.f_lower
    pn1x = ctx_x.p(n - 1)
    formula = f_up @ pn1x @ f_low + s.pi_eps(n - 1, 1) \
        + f_up @ pairing_adjoint(pn1x) @ f_low
    rep.add("middle-projector-formula", rel.p_rho(n - 1) == formula)
    rep.add("middle-projector-pushes-down",
            f_low @ rel.p_rho(n - 1) @ f_up
            == pn1x + ctx_x.p(n) + pairing_adjoint(pn1x))

    ok, wit = True, None
    for i in range(n - 1):
        lhs = rel.p_rho(i).block(i)
        rhs = (f_up @ ctx_x.p(i) @ f_low).block(i)
        if lhs != rhs:
            ok, wit = False, {"index": str(i)}
    rep.add("low-projectors-restrict-to-ambient", ok, wit)

    ok, wit = True, None
    for i in range(n - 1):
        blk = rel.p_rho(i).block(i + 2)
        prim_y = s.ctx_y.primitive_subspace(i)
        expect = Subspace.from_vectors(
            xt.dims[i + 2],
            [list(b.k_lower.apply(i, v)) for v in prim_y.basis])
        if image(blk) != expect:
            ok, wit = False, {"index": str(i)}
    rep.add("low-projector-top-images-are-fibre-primitives", ok, wit)

    rep.add("middle-strand-absorbed",
            s.pi_eps(n - 1, 1) @ rel.p_rho(n - 1) == s.pi_eps(n - 1, 1))
    return rep
