"""
The DY complex of a strict skeletal category inside a Hochschild complex.

Objects of a strict skeletal category form a semigroup S under the tensor
product.  The DY cochains of the identity functor embed into Hochschild
cochains of the semigroup algebra k[S] with coefficients in the sum of all
endomorphism spaces, where X.f = id_X (x) f and f.X = f (x) id_X.  This
module builds that dictionary, the extension of cochains by zero over an
adjoined unit, and the end-to-end unitalization check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dycomplex import (DYCochain, SquareMorphism, get_complex, induced_map_on_cohomology,
                        restrict_along_square)
from .errors import ConsistencyError, PreconditionError, StrictnessError
from .hochschild import (AlgebraPresentation, BimodulePresentation, HochCochain, hoch_differential,
                         normalize_cocycle, validate_algebra, validate_bimodule)
from .linalg import Matrix, in_span, kernel_basis
from .presentations import CatPresentation, inclusion_by_names, unitalize_category
from .reports import TheoremReport


@dataclass(frozen=True, eq=False)
class BridgeContext:
    category: CatPresentation
    algebra: AlgebraPresentation
    bimodule: BimodulePresentation
    offsets: tuple

    def object_to_basis(self, x):
        return x

    def basis_to_object(self, i):
        return i

    def block(self, x):
        """Slice of M holding End(x)."""
        return slice(self.offsets[x], self.offsets[x] + self.category.dim(x, x))


def build_bridge(c: CatPresentation) -> BridgeContext:
    """k[S] and M = sum of End(X) for a strict skeletal category."""
    if not c.is_strict:
        raise StrictnessError(f"{c.name} is not strict")
    field = c.field
    n = c.n_objects
    offsets, total = [], 0
    for x in range(n):
        offsets.append(total)
        total += c.dim(x, x)

    def e(i, d):
        return tuple(field.one if j == i else field.zero for j in range(d))

    mul = tuple(tuple(e(c.tensor(x, y), n) for y in range(n)) for x in range(n))
    unit = e(c.unit, n) if c.unit is not None else None
    alg = AlgebraPresentation(field, n, mul, unit, c.objects, f"k[{c.name}]")

    def place(x, v):
        out = [field.zero] * total
        out[offsets[x]:offsets[x] + len(v)] = v
        return tuple(out)

    left = [[None] * total for _ in range(n)]
    right = [[None] * n for _ in range(total)]
    for y in range(n):
        for j in range(c.dim(y, y)):
            f = c.basis(y, y, j)
            for x in range(n):
                xy, yx = c.tensor(x, y), c.tensor(y, x)
                left[x][offsets[y] + j] = place(xy, c.tensor_morphisms(x, x, y, y, c.identity(x), f))
                right[offsets[y] + j][x] = place(yx, c.tensor_morphisms(y, y, x, x, f, c.identity(x)))
    names = tuple(c.basis_name(x, x, j) for x in range(n) for j in range(c.dim(x, x)))
    mod = BimodulePresentation(alg, total, tuple(tuple(r) for r in left), tuple(tuple(r) for r in right),
                               names, f"End({c.name})")
    for rep in (validate_algebra(alg), validate_bimodule(mod)):
        if not rep.ok:
            raise ConsistencyError(f"bridge data for {c.name} violates {rep.axioms_violated()}")
    return BridgeContext(c, alg, mod, tuple(offsets))


def _require_identity(ctx, eta):
    f = eta.functor
    if f.source is not ctx.category or not f.is_identity:
        raise PreconditionError("only cochains of the identity functor of the bridged category embed")


def embed_dy_cochain(ctx: BridgeContext, eta: DYCochain) -> HochCochain:
    """Place eta_{X1..Xn} in the End(X1 (x) .. (x) Xn) block of M."""
    _require_identity(ctx, eta)
    c, m = ctx.category, ctx.bimodule
    z = m.zero()
    values = {}
    for t, v in eta.table.items():
        x = c.tensor_all(t)
        row = list(z)
        row[ctx.block(x)] = v
        values[t] = tuple(row)
    return HochCochain(m, eta.degree, values)


def embed_degree0(ctx: BridgeContext, f_endo) -> HochCochain:
    """An endomorphism of the unit as a degree-0 Hochschild cochain."""
    c, m = ctx.category, ctx.bimodule
    if c.unit is None:
        raise PreconditionError(f"{c.name} has no unit")
    row = list(m.zero())
    row[ctx.block(c.unit)] = f_endo
    return HochCochain(m, 0, {(): tuple(row)})


def embedding_matrix(ctx: BridgeContext, n: int) -> Matrix:
    """Columns: images of the canonical basis of C^n_DY (n = 0 uses End(1) when a unit exists)."""
    c = ctx.category
    size = c.n_objects ** n * ctx.bimodule.dim
    if n == 0:
        if c.unit is None:
            return Matrix.zeros(c.field, size, 0)
        d = c.dim(c.unit, c.unit)
        cols = [embed_degree0(ctx, c.basis(c.unit, c.unit, i)).vector() for i in range(d)]
    else:
        cols = [embed_dy_cochain(ctx, eta).vector() for eta in get_complex(c.identity_functor).basis(n)]
    if not cols:
        return Matrix.zeros(c.field, size, 0)
    return Matrix.from_columns(c.field, cols, nrows=size)


def extend_over_unit(c: CatPresentation, eta: DYCochain, cu: CatPresentation | None = None) -> DYCochain:
    """Extend a cochain of C by zero to every tuple of the unitalization that contains the unit."""
    if eta.functor.source is not c or not eta.functor.is_identity:
        raise PreconditionError("extend_over_unit expects a cochain of the identity functor of c")
    if cu is None:
        cu = unitalize_category(c)
    u = cu.unit
    if cu.unit_adjoined is False or cu.objects[:c.n_objects] != c.objects:
        raise PreconditionError(f"{cu.name} is not a unitalization of {c.name}")
    fu = cu.identity_functor
    cx = get_complex(fu)
    table = {}
    for t in cx.tuples(eta.degree):
        if u in t:
            p = cu.tensor_all(t)
            table[t] = cu.zero(p, p)
        else:
            table[t] = eta.table[t]
    out = DYCochain(fu, eta.degree, table)
    if not cx.is_natural(out):
        raise ConsistencyError("extension over the unit is not natural")
    return out


def unit_square(c: CatPresentation, cu: CatPresentation) -> SquareMorphism:
    """S = T = the inclusion of C into C^u, F = id_C, G = id_{C^u}."""
    iota = inclusion_by_names(c, cu, name=f"iota:{c.name}")
    return SquareMorphism(iota, iota, c.identity_functor, cu.identity_functor, name=f"iota[{c.name}]")


def check_category_unitalization(c: CatPresentation, max_degree=2, diagnostic=False) -> TheoremReport:
    """H^n(C^u) -> H^n(C) induced by the inclusion is bijective for 1 <= n <= max_degree.

    C^u is built afresh and its DY complex is assembled independently of that
    of C.  Each degree also checks that extension by zero lifts every class
    of C.  With ``diagnostic`` the kernel of the restriction on cocycles is
    pushed through the Hochschild normalization of k[S^u].
    """
    if not c.is_strict:
        raise StrictnessError(f"{c.name} is not strict")
    cu = unitalize_category(c)
    sq = unit_square(c, cu)
    cc, cxu = get_complex(c.identity_functor), get_complex(cu.identity_functor)
    report = TheoremReport("dy-unitalization", c.name, str(c.field),
                           notes=["End(1) = k.id in the unitalization"])
    ctx = build_bridge(cu) if diagnostic else None
    for n in range(1, max_degree + 1):
        h, hu = cc.cohomology(n), cxu.cohomology(n)
        ind = induced_map_on_cohomology(sq, n)
        lifts = all(cxu.differential(n, extend_over_unit(c, r, cu)).is_zero()
                    and restrict_along_square(sq, extend_over_unit(c, r, cu)) == r
                    for r in h.representatives)
        entry = {"degree": n, "dim_H_C": h.dim_H, "dim_H_Cu": hu.dim_H,
                 "dim_cochains_C": h.dim_cochains, "dim_cochains_Cu": hu.dim_cochains,
                 "rank_d_C": h.rank_d, "rank_d_Cu": hu.rank_d,
                 "convention_C": h.convention, "convention_Cu": hu.convention,
                 "matrix": ind.matrix.to_strings(), "injective": ind.injective,
                 "surjective": ind.surjective, "extension_lifts_classes": lifts,
                 "pass": ind.bijective and lifts}
        if diagnostic:
            entry["normalization_diagnostic"] = _normalization_diagnostic(c, cu, sq, ctx, n)
        report.entries.append(entry)
    return report


def restriction_kernel(sq: SquareMorphism, n: int):
    """Cocycles of G (as cochains) whose restriction along the square vanishes."""
    cg, cf = get_complex(sq.G), get_complex(sq.F)
    Z = kernel_basis(cg.differential_matrix(n))
    if not Z:
        return []
    cols = [cf.coordinates(restrict_along_square(sq, cg.from_coordinates(n, z))) for z in Z]
    R = Matrix.from_columns(cf.field, cols, nrows=cf.dim(n))
    norm = cf.field.norm
    out = []
    for k in kernel_basis(R):
        v = [0] * len(Z[0])
        for coef, z in zip(k, Z):
            if coef:
                for j, x in enumerate(z):
                    v[j] += coef * x
        out.append(cg.from_coordinates(n, tuple(norm(x) for x in v)))
    return out


def _drop_unit_tuples(f: HochCochain, u: int) -> HochCochain:
    """pi^* iota^* on k[S^u]: zero on every basis tuple containing the unit object."""
    z = f.module.zero()
    return HochCochain(f.module, f.degree, {t: (z if u in t else v) for t, v in f.values.items()})


def _normalization_diagnostic(c, cu, sq, ctx, n):
    """Normalize each restriction-kernel cocycle w inside the Hochschild complex.

    With zeta = W + s.dh normalized and W vanishing off the unit, zeta equals
    its own unit-free part, hence W = d(s.(P h - h)) where P drops every tuple
    containing the unit.  Both the membership of h in the DY image and that
    explicit primitive are checked.
    """
    emb_prev = embedding_matrix(ctx, n - 1)
    emb = embedding_matrix(ctx, n)
    u = cu.unit
    checked, h_in_dy, corrected_in_dy, primitive_ok = 0, True, True, True
    for w in restriction_kernel(sq, n):
        W = embed_dy_cochain(ctx, w)
        res = normalize_cocycle(ctx.bimodule, W)
        checked += 1
        if not in_span(emb_prev, res.h.vector()):
            h_in_dy = False
        if not in_span(emb, res.corrected.vector()):
            corrected_in_dy = False
        psi = (_drop_unit_tuples(res.h, u) - res.h).scale(res.sign)
        if hoch_differential(ctx.bimodule, psi) != W:
            primitive_ok = False
    return {"kernel_cocycles": checked, "h_in_dy_subcomplex": h_in_dy,
            "corrected_in_dy_subcomplex": corrected_in_dy, "explicit_primitive_verified": primitive_ok}


def bridge_cochain_map_check(c: CatPresentation, n: int) -> bool:
    """d_Hoch(embed eta) = embed(d_DY eta) for every basis cochain of degree n."""
    ctx = build_bridge(c)
    cx = get_complex(c.identity_functor)
    for eta in cx.basis(n):
        if hoch_differential(ctx.bimodule, embed_dy_cochain(ctx, eta)) != embed_dy_cochain(ctx, cx.differential(n, eta)):
            return False
    return True


def dy_image_subspaces(c: CatPresentation, degrees):
    """``(ctx, {n: [embedded basis cochains]})``: the literal image of the embedding."""
    ctx = build_bridge(c)
    cx = get_complex(c.identity_functor)
    return ctx, {n: [embed_dy_cochain(ctx, eta) for eta in cx.basis(n)] for n in degrees}


# -- the word-shape subcomplex ------------------------------------------------
#
# Evaluating a DY cochain at a fixed object b gives the family eta_{..,b,..},
# an endomorphism of X1 (x) .. (x) b (x) .. rather than of X1 (x) .. (x) X_{n-1}.
# The smallest stable subcomplex containing the DY image therefore consists of
# natural endomorphisms of "words" W0 X1 W1 .. Xm Wm with constant objects Wi
# (possibly empty) between the variables.


def _word(c, shape, t):
    """Object W0 X1 W1 .. Xm Wm; ``shape`` holds m+1 constants (None = empty)."""
    items = []
    for i, w in enumerate(shape):
        if w is not None:
            items.append(w)
        if i < len(t):
            items.append(t[i])
    return items


def _slot_mor(c, items, pos, y, f):
    """id (x) .. (x) f (x) .. (x) id on the word ``items`` with f at position pos."""
    left = items[:pos]
    right = items[pos + 1:]
    x = items[pos]
    src, tgt, mor = x, y, f
    if left:
        lo = c.tensor_all(left)
        mor = c.tensor_morphisms(lo, lo, x, y, c.identity(lo), mor)
        src, tgt = c.tensor(lo, x), c.tensor(lo, y)
    if right:
        ro = c.tensor_all(right)
        mor = c.tensor_morphisms(src, tgt, ro, ro, mor, c.identity(ro))
        src, tgt = c.tensor(src, ro), c.tensor(tgt, ro)
    return src, tgt, mor


def shape_cochains(ctx: BridgeContext, shape):
    """Basis of natural endomorphisms of the word functor, as Hochschild cochains."""
    from .linalg import SparseMatrix

    c, m = ctx.category, ctx.bimodule
    k = len(shape) - 1
    tups = list(itertools.product(range(c.n_objects), repeat=k))
    offsets, total = {}, 0
    for t in tups:
        p = c.tensor_all(_word(c, shape, t))
        offsets[t] = total
        total += c.dim(p, p)
    trip, row = [], 0
    for t in tups:
        items = _word(c, shape, t)
        p = c.tensor_all(items)
        for i in range(k):
            pos = sum(1 for w in shape[:i + 1] if w is not None) + i
            x = t[i]
            for y in range(c.n_objects):
                for b in range(c.dim(x, y)):
                    t2 = t[:i] + (y,) + t[i + 1:]
                    _, q, g = _slot_mor(c, items, pos, y, c.basis(x, y, b))
                    if not any(g):
                        continue
                    for a in range(c.dim(q, q)):
                        for r, v in enumerate(c.compose_mor(p, q, q, g, c.basis(q, q, a))):
                            if v:
                                trip.append((row + r, offsets[t2] + a, v))
                    for a in range(c.dim(p, p)):
                        for r, v in enumerate(c.compose_mor(p, p, q, c.basis(p, p, a), g)):
                            if v:
                                trip.append((row + r, offsets[t] + a, -v))
                    row += c.dim(p, q)
    kern = kernel_basis(SparseMatrix.from_triplets(c.field, row, total, trip))
    out = []
    for vec in kern:
        values = {}
        for t in tups:
            p = c.tensor_all(_word(c, shape, t))
            cell = list(m.zero())
            cell[ctx.block(p)] = vec[offsets[t]:offsets[t] + c.dim(p, p)]
            values[t] = tuple(cell)
        out.append(HochCochain(m, k, values))
    return out


def word_subcomplex(ctx: BridgeContext, degrees) -> dict:
    """``{n: basis}`` of the span of all word-shape natural families in degree n."""
    from .linalg import span_basis

    c = ctx.category
    consts = [None] + list(range(c.n_objects))
    out = {}
    for n in degrees:
        gens = []
        for shape in itertools.product(consts, repeat=n + 1):
            if n == 0 and shape[0] is None:
                continue
            gens.extend(shape_cochains(ctx, shape))
        size = c.n_objects ** n * ctx.bimodule.dim
        keep = span_basis([g.vector() for g in gens], c.field, size)
        out[n] = [gens[i] for i in keep]
    return out
