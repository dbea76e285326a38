"""Section and pencil data, Gysin maps by adjointness, and the blow-up model.

A :class:`SectionDatum` is a pair of models (ambient X, hyperplane section Y)
joined by the restriction ring map; the Gysin map is always derived as the
pairing adjoint of the restriction, never supplied.  A :class:`PencilDatum`
chains two sections (X over Y over the base locus Delta) and carries the
twisting integer ``m`` used to polarize the blow-up of X along Delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .frobenius import (
    GradedOperator,
    PoincareModel,
    cup_with,
    kunneth_product,
    lefschetz_operator,
    pairing_adjoint,
    projective_space,
    validate_model,
    with_xi,
)
from .rational_linalg import Matrix, Q, Subspace, rank
from .report import VerificationReport

# -- operator builders keyed by basis labels -------------------------------


def vec(model: PoincareModel, i, coeffs: dict):
    """Coordinate vector in degree ``i`` from a {label: coefficient} dict."""
    out = [Q(0)] * model.dims[i]
    for label, c in coeffs.items():
        out[model.labels[i].index(label)] = Q(c)
    return tuple(out)


def operator_from_images(source, target, degree, images) -> GradedOperator:
    """Build an operator from {source label: {target label: coeff}} per degree.

    ``images`` maps a source degree i to a dict sending each source basis
    label to a target coordinate dict in degree i + degree; labels omitted
    from a listed degree map to zero, unlisted degrees are zero blocks.
    """
    blocks = {}
    for i, img in images.items():
        j = i + degree
        if not 0 <= j <= target.top:
            continue
        cols = []
        for label in source.labels[i]:
            cols.append(list(vec(target, j, img.get(label, {}))))
        blocks[i] = Matrix.from_cols(cols, target.dims[j])
    return GradedOperator(source, target, degree, blocks)


# -- sections --------------------------------------------------------------


@dataclass
class SectionDatum:
    """Ambient model, section model, and the restriction ring map."""

    ambient: PoincareModel
    section: PoincareModel
    restrict: GradedOperator  # degree 0, ambient -> section

    def __post_init__(self):
        if self.section.n != self.ambient.n - 1:
            raise ValueError("section dimension must be ambient dimension - 1")
        self._gysin = None

    @property
    def gysin(self) -> GradedOperator:
        if self._gysin is None:
            self._gysin = pairing_adjoint(self.restrict)
        return self._gysin


def validate_section(d: SectionDatum) -> VerificationReport:
    """Check the restriction/Gysin axioms of a section pair."""
    x, y, r = d.ambient, d.section, d.restrict
    rep = VerificationReport(
        "section", {"ambient": x.name, "section": y.name})
    rep.add("restrict-unital", r.apply(0, x.unit()) == y.unit())

    ok, wit = True, None
    for i in range(x.top + 1):
        for a in range(x.dims[i]):
            xa = x._basis_vec(i, a)
            for j in range(x.top + 1 - i):
                for b in range(x.dims[j]):
                    xb = x._basis_vec(j, b)
                    prod = x.mult_basis(i, a, j, b)
                    lhs = r.apply(i + j, prod)
                    rhs = y.mult_vec(i, r.apply(i, xa), j, r.apply(j, xb))
                    if lhs != rhs:
                        ok, wit = False, {
                            "x": x.label(i, a), "y": x.label(j, b)}
    rep.add("restrict-ring-map", ok, wit)

    rep.add("restrict-xi", r.apply(2, x.xi) == y.xi,
            {"image": str(r.apply(2, x.xi))})

    g = d.gysin
    lx, ly = lefschetz_operator(x), lefschetz_operator(y)
    rep.add("gysin-then-restrict-is-ambient-lefschetz", g @ r == lx)
    rep.add("restrict-then-gysin-is-section-lefschetz", r @ g == ly)
    rep.add("gysin-of-unit-is-xi", g.apply(0, y.unit()) == x.xi,
            {"image": str(g.apply(0, y.unit()))})

    ok, wit = True, None
    for i in range(x.top + 1):
        for a in range(x.dims[i]):
            xa = x._basis_vec(i, a)
            rxa = r.apply(i, xa)
            for j in range(y.top + 1 - i):
                for b in range(y.dims[j]):
                    yb = y._basis_vec(j, b)
                    lhs = g.apply(i + j, y.mult_vec(i, rxa, j, yb))
                    rhs = x.mult_vec(i, xa, j + 2, g.apply(j, yb))
                    if lhs != rhs:
                        ok, wit = False, {
                            "x": x.label(i, a), "y": y.label(j, b)}
    rep.add("projection-formula", ok, wit)
    return rep


def vanishing_subspace(d: SectionDatum) -> Subspace:
    """Kernel of the Gysin map on the middle degree of the section."""
    mid = d.section.n
    from .rational_linalg import kernel

    return kernel(d.gysin.block(mid))


# -- pencils ---------------------------------------------------------------


@dataclass
class PencilDatum:
    """Ambient X, fibre Y, base locus Delta, restriction maps, and m."""

    name: str
    x: PoincareModel
    y: PoincareModel
    delta: PoincareModel
    iota_restrict: GradedOperator  # X -> Y, degree 0
    h_restrict: GradedOperator  # Y -> Delta, degree 0
    m: int = 1

    def __post_init__(self):
        self.xy = SectionDatum(self.x, self.y, self.iota_restrict)
        self.ydelta = SectionDatum(self.y, self.delta, self.h_restrict)
        self.j_restrict = self.h_restrict @ self.iota_restrict

    @property
    def iota_gysin(self):
        return self.xy.gysin

    @property
    def h_gysin(self):
        return self.ydelta.gysin

    @property
    def j_gysin(self):
        return self.iota_gysin @ self.h_gysin


def validate_pencil(p: PencilDatum) -> VerificationReport:
    rep = VerificationReport("pencil", {"pencil": p.name, "m": str(p.m)})
    for model in (p.x, p.y, p.delta):
        sub = validate_model(model)
        for c in sub.checks:
            rep.add(f"{model.name}:{c.name}", c.passed, c.witness)
    for d, tag in ((p.xy, "x/y"), (p.ydelta, "y/delta")):
        sub = validate_section(d)
        for c in sub.checks:
            rep.add(f"{tag}:{c.name}", c.passed, c.witness)
    rep.add("j-gysin-degree", p.j_gysin.degree == 4)
    return rep


def gysin_maps(p: PencilDatum) -> dict:
    """Gysin maps of the pencil, each the pairing adjoint of a restriction."""
    return {
        "iota_lower": p.iota_gysin,
        "h_lower": p.h_gysin,
        "j_lower": p.j_gysin,
    }


# -- blow-up model ---------------------------------------------------------


@dataclass
class BlowupData:
    """The blown-up ambient model and its four comparison maps."""

    pencil: PencilDatum
    model: PoincareModel
    f_upper: GradedOperator  # X -> Xtilde, degree 0 (pullback)
    f_lower: GradedOperator  # Xtilde -> X, degree 0 (pushforward)
    k_upper: GradedOperator  # Xtilde -> Y, degree 0 (fibre restriction)
    k_lower: GradedOperator  # Y -> Xtilde, degree +2 (fibre Gysin)

    @property
    def lefschetz(self):
        return lefschetz_operator(self.model)


def blowup_model(p: PencilDatum) -> BlowupData:
    """Model the blow-up of X along Delta.

    Degree d is H^d(X) + H^(d-2)(Delta); products follow the push-pull
    rules, the trace is trace_X minus trace_Delta, and the polarization is
    (m+1) xi_X on the X part and -1 on the exceptional unit line.
    """
    x, dl = p.x, p.delta
    jr, jg = p.j_restrict, p.j_gysin
    n = x.n
    top = 2 * n
    def edim(d):
        return dl.dims[d - 2] if 2 <= d <= dl.top + 2 else 0

    dims = [x.dims[d] + edim(d) for d in range(top + 1)]
    labels = [
        [f"x:{l}" for l in x.labels[d]]
        + ([f"e:{l}" for l in dl.labels[d - 2]] if edim(d) else [])
        for d in range(top + 1)
    ]

    def embed(d, xpart=None, epart=None):
        out = [Q(0)] * dims[d]
        if xpart is not None:
            for k, c in enumerate(xpart):
                out[k] = out[k] + c
        if epart is not None and d >= 2:
            off = x.dims[d]
            for k, c in enumerate(epart):
                out[off + k] = out[off + k] + c
        return tuple(out)

    mult = {}

    def put(d1, a, d2, b, v):
        if any(c != 0 for c in v):
            mult[(d1, a, d2, b)] = v

    xi_delta_cup = dl.xi
    for d1 in range(top + 1):
        for d2 in range(top + 1 - d1):
            d = d1 + d2
            # X part times X part
            for a in range(x.dims[d1]):
                xa = x._basis_vec(d1, a)
                for b in range(x.dims[d2]):
                    put(d1, a, d2, b,
                        embed(d, xpart=x.mult_basis(d1, a, d2, b)))
                # X part times exceptional part: j-restrict then multiply
                if edim(d2):
                    ja = jr.apply(d1, xa)
                    for b in range(dl.dims[d2 - 2]):
                        yb = dl._basis_vec(d2 - 2, b)
                        put(d1, a, d2, x.dims[d2] + b,
                            embed(d, epart=dl.mult_vec(d1, ja, d2 - 2, yb)))
            if edim(d1):
                for a in range(dl.dims[d1 - 2]):
                    ya = dl._basis_vec(d1 - 2, a)
                    # exceptional times X part (right multiply in Delta)
                    for b in range(x.dims[d2]):
                        jb = jr.apply(d2, x._basis_vec(d2, b))
                        put(d1, x.dims[d1] + a, d2, b,
                            embed(d, epart=dl.mult_vec(d1 - 2, ya, d2, jb)))
                    # exceptional times exceptional
                    if edim(d2):
                        for b in range(dl.dims[d2 - 2]):
                            yb = dl._basis_vec(d2 - 2, b)
                            prod = dl.mult_vec(d1 - 2, ya, d2 - 2, yb)
                            if d - 4 > dl.top:
                                continue
                            xpart = tuple(
                                -c for c in jg.apply(d - 4, prod))
                            epart = None
                            if d - 2 <= dl.top:
                                epart = tuple(
                                    2 * c for c in dl.mult_vec(
                                        2, xi_delta_cup, d - 4, prod))
                            put(d1, x.dims[d1] + a, d2, x.dims[d2] + b,
                                embed(d, xpart=xpart, epart=epart))

    # the top degree has no exceptional part (the base locus has dimension
    # n-2), so the trace is the ambient trace; the minus sign against the
    # base-locus pairing enters through the exceptional product rule.
    trace = list(embed(top, xpart=x.trace_vec))
    xi = embed(2, xpart=tuple((p.m + 1) * c for c in x.xi),
               epart=(Q(-1),))
    xt = PoincareModel(f"{p.name}~", n, dims, labels, mult, trace, xi)

    f_upper = GradedOperator(x, xt, 0, {
        d: Matrix([[Q(1) if r == c else Q(0) for c in range(x.dims[d])]
                   for r in range(dims[d])], dims[d], x.dims[d])
        for d in range(top + 1)
    })
    f_lower = GradedOperator(xt, x, 0, {
        d: Matrix([[Q(1) if r == c else Q(0) for c in range(dims[d])]
                   for r in range(x.dims[d])], x.dims[d], dims[d])
        for d in range(top + 1)
    })

    iota_r, h_low = p.iota_restrict, p.h_gysin
    k_blocks = {}
    for d in range(top + 1):
        j = d
        if j > p.y.top:
            k_blocks[d] = Matrix([], 0, dims[d])
            continue
        cols = []
        for a in range(x.dims[d]):
            cols.append(list(iota_r.apply(d, x._basis_vec(d, a))))
        if edim(d):
            for b in range(dl.dims[d - 2]):
                cols.append(list(h_low.apply(d - 2, dl._basis_vec(d - 2, b))))
        k_blocks[d] = Matrix.from_cols(cols, p.y.dims[j])
    k_upper = GradedOperator(xt, p.y, 0, k_blocks)

    iota_low, h_r = p.iota_gysin, p.h_restrict
    kl_blocks = {}
    for d in range(p.y.top + 1):
        cols = []
        for b in range(p.y.dims[d]):
            yb = p.y._basis_vec(d, b)
            xpart = iota_low.apply(d, yb)
            epart = tuple(-c for c in h_r.apply(d, yb)) if d <= dl.top else None
            cols.append(list(embed(d + 2, xpart=xpart, epart=epart)))
        kl_blocks[d] = Matrix.from_cols(cols, dims[d + 2])
    k_lower = GradedOperator(p.y, xt, 2, kl_blocks)

    return BlowupData(p, xt, f_upper, f_lower, k_upper, k_lower)


def validate_blowup(b: BlowupData) -> VerificationReport:
    """Model axioms of the blow-up plus the comparison-map identities."""
    rep = validate_model(b.model)
    rep.suite = "blowup"
    rep.metadata = {"pencil": b.pencil.name, "m": str(b.pencil.m)}
    x, y = b.pencil.x, b.pencil.y
    rep.add("pushforward-after-pullback-is-identity",
            b.f_lower @ b.f_upper == GradedOperator.identity(x))
    rep.add("fibre-restriction-of-pullback",
            b.k_upper @ b.f_upper == b.pencil.iota_restrict)
    rep.add("pushforward-of-fibre-class",
            b.f_lower @ b.k_lower == b.pencil.iota_gysin)
    rep.add("pullback-adjoint-is-pushforward",
            pairing_adjoint(b.f_upper) == b.f_lower)
    rep.add("fibre-restriction-adjoint-is-fibre-class",
            pairing_adjoint(b.k_upper) == b.k_lower)

    # fibre classes are isotropic for the blow-up pairing
    ok, wit = True, None
    xt = b.model
    for i in range(y.top + 1):
        j = y.top - i - 2
        if j < 0:
            continue
        for a in range(y.dims[i]):
            ka = b.k_lower.apply(i, y._basis_vec(i, a))
            for c in range(y.dims[j]):
                kc = b.k_lower.apply(j, y._basis_vec(j, c))
                if xt.pairing(i + 2, ka, kc) != 0:
                    ok, wit = False, {"a": y.label(i, a), "b": y.label(j, c)}
    rep.add("fibre-classes-isotropic", ok, wit)
    return rep


# -- builtin fixtures ------------------------------------------------------


def elliptic_curve(name, xi_scale) -> PoincareModel:
    """Genus-one curve: unit, a symplectic odd line pair, and a point class."""
    w = (Q(1),)
    mult = {
        (0, 0, 0, 0): (Q(1),),
        (0, 0, 1, 0): (Q(1), Q(0)),
        (0, 0, 1, 1): (Q(0), Q(1)),
        (1, 0, 0, 0): (Q(1), Q(0)),
        (1, 1, 0, 0): (Q(0), Q(1)),
        (0, 0, 2, 0): w,
        (2, 0, 0, 0): w,
        (1, 0, 1, 1): w,
        (1, 1, 1, 0): (Q(-1),),
    }
    return PoincareModel(
        name, 1, [1, 2, 1], [["1"], ["e", "f"], ["w"]], mult,
        trace=(Q(1),), xi=(Q(xi_scale),),
    )


def del_pezzo_6() -> PoincareModel:
    """Degree-six del Pezzo surface with intersection basis f1,f2,f3,E1."""
    names = ["f1", "f2", "f3", "E1"]
    gram = {
        ("f1", "f1"): 0, ("f1", "f2"): 1, ("f1", "f3"): 1, ("f1", "E1"): 1,
        ("f2", "f2"): 0, ("f2", "f3"): 1, ("f2", "E1"): 0,
        ("f3", "f3"): 0, ("f3", "E1"): 0,
        ("E1", "E1"): -1,
    }

    def pair(a, b):
        return Q(gram.get((a, b), gram.get((b, a), 0)))

    mult = {(0, 0, 0, 0): (Q(1),), (0, 0, 4, 0): (Q(1),),
            (4, 0, 0, 0): (Q(1),)}
    for a, la in enumerate(names):
        mult[(0, 0, 2, a)] = tuple(Q(1) if k == a else Q(0) for k in range(4))
        mult[(2, a, 0, 0)] = mult[(0, 0, 2, a)]
        for b, lb in enumerate(names):
            mult[(2, a, 2, b)] = (pair(la, lb),)
    return PoincareModel(
        "dP6", 2, [1, 0, 4, 0, 1], [["1"], [], names, [], ["pt"]],
        mult, trace=(Q(1),),
        xi=vec_from_names(names, {"f1": 1, "f2": 1, "f3": 1}),
    )


def vec_from_names(names, coeffs):
    return tuple(Q(coeffs.get(nm, 0)) for nm in names)


def hyperplane_pencil(m=1) -> PencilDatum:
    """Pencil of hyperplanes in three-space; base locus a line."""
    x = projective_space(3)
    y = with_xi(projective_space(2), (Q(1),), name="P2")
    dl = with_xi(projective_space(1), (Q(1),), name="P1")
    iota = operator_from_images(x, y, 0, {
        0: {"1": {"1": 1}},
        2: {"h^1": {"h^1": 1}},
        4: {"h^2": {"h^2": 1}},
        6: {},
    })
    h = operator_from_images(y, dl, 0, {
        0: {"1": {"1": 1}},
        2: {"h^1": {"h^1": 1}},
        4: {},
    })
    return PencilDatum("hyperplane-p3", x, y, dl, iota, h, m)


def quadric_pencil(m=1) -> PencilDatum:
    """Pencil of quadrics in three-space; base locus an elliptic quartic."""
    x = with_xi(projective_space(3), (Q(2),), name="P3(2h)")
    p1 = projective_space(1)
    y0 = kunneth_product(p1, p1, name="P1xP1")
    # degree-2 basis order is (1*h, h*1) = (h2, h1)
    y = with_xi(y0, (Q(2), Q(2)))
    dl = elliptic_curve("E8", 8)
    iota = operator_from_images(x, y, 0, {
        0: {"1": {"1*1": 1}},
        2: {"h^1": {"1*h^1": 1, "h^1*1": 1}},
        4: {"h^2": {"h^1*h^1": 2}},
        6: {},
    })
    h = operator_from_images(y, dl, 0, {
        0: {"1*1": {"1": 1}},
        2: {"1*h^1": {"w": 2}, "h^1*1": {"w": 2}},
        4: {},
    })
    return PencilDatum("quadric-p3", x, y, dl, iota, h, m)


def triple_p1_pencil(m=1) -> PencilDatum:
    """The (1,1,1) pencil on a triple product of lines; fibres are degree-six
    del Pezzo surfaces, base locus an elliptic curve."""
    p1 = projective_space(1)
    x = kunneth_product(kunneth_product(p1, p1, name="P1xP1"), p1,
                        name="P1^3")
    y = del_pezzo_6()
    dl = elliptic_curve("E6", 6)
    # degree-2 basis of x is (1*h (= h3), (1*h)*1 (= h2), (h*1)*1 (= h1))
    iota = operator_from_images(x, y, 0, {
        0: {"1*1*1": {"1": 1}},
        2: {"h^1*1*1": {"f1": 1}, "1*h^1*1": {"f2": 1}, "1*1*h^1": {"f3": 1}},
        4: {"h^1*h^1*1": {"pt": 1}, "h^1*1*h^1": {"pt": 1},
            "1*h^1*h^1": {"pt": 1}},
        6: {},
    })
    h = operator_from_images(y, dl, 0, {
        0: {"1": {"1": 1}},
        2: {"f1": {"w": 2}, "f2": {"w": 2}, "f3": {"w": 2}, "E1": {"w": 1}},
        4: {},
    })
    return PencilDatum("triple-p1", x, y, dl, iota, h, m)


BUILTIN_BUILDERS = {
    "hyperplane-p3": hyperplane_pencil,
    "quadric-p3": quadric_pencil,
    "triple-p1": triple_p1_pencil,
}


def builtin_pencils(m=None) -> list:
    """The three built-in pencil fixtures (optionally at a chosen m)."""
    out = []
    for name, build in BUILTIN_BUILDERS.items():
        out.append(build() if m is None else build(m))
    return out
