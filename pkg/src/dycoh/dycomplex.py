"""
Davydov-Yetter cochain complexes of strict k-linear semigroupal functors.

A degree-n cochain of ``F: C -> D`` is a table assigning to each n-tuple of
source objects an endomorphism of ``F(X1 (x) ... (x) Xn)``, natural in every
slot.  The cochain space is the kernel of a sparse naturality constraint
system (one block of equations per slot, basis morphism and tuple), and its
canonical kernel basis fixes every coordinate used downstream.

Tuples are enumerated lexicographically in object declaration order.
"""

from __future__ import annotations

import itertools
import os
import weakref
from dataclasses import dataclass

from .errors import (BudgetError, DimensionError, MonoidalityError, PreconditionError,
                     StrictnessError)
from .linalg import Matrix, SparseMatrix, augment, kernel_basis, quotient_basis, rank, rref, solve
from .reports import CohomologyEntry
from .presentations import CatPresentation, FunctorPresentation, compose_functors

DEFAULT_CAP = 4
#: Upper bound on the number of scalar unknowns of a single cochain space.
MAX_UNKNOWNS = 50_000

_DEBUG = os.environ.get("DYCOH_DEBUG") == "1"


class DYCochain:
    """Natural endomorphism of F^{(x)n}, stored as ``{tuple: coordinates}``."""

    __slots__ = ("functor", "degree", "table")

    def __init__(self, functor, degree, table):
        self.functor = functor
        self.degree = degree
        self.table = table

    def __getitem__(self, key):
        return self.table[key]

    def __eq__(self, other):
        if not isinstance(other, DYCochain):
            return NotImplemented
        return self.functor is other.functor and self.degree == other.degree and self.table == other.table

    __hash__ = None

    def __repr__(self):
        return f"DYCochain({self.functor.name}, degree={self.degree}, {len(self.table)} entries)"

    @property
    def field(self):
        return self.functor.target.field

    def is_zero(self):
        return all(not any(v) for v in self.table.values())

    def _combine(self, other, sign):
        if self.functor is not other.functor or self.degree != other.degree:
            raise DimensionError("cochains of different functors or degrees")
        norm = self.field.norm
        return DYCochain(self.functor, self.degree,
                         {k: tuple(norm(a + sign * b) for a, b in zip(v, other.table[k]))
                          for k, v in self.table.items()})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        norm = self.field.norm
        return DYCochain(self.functor, self.degree, {k: tuple(norm(c * a) for a in v)
                                                     for k, v in self.table.items()})

    def to_json(self):
        f = self.functor
        names = f.source.objects
        fmt = self.field.fmt
        return {",".join(names[x] for x in k): [fmt(a) for a in v]
                for k, v in self.table.items() if any(v)}


def _require_strict(f: FunctorPresentation):
    if not (f.is_strict and f.source.is_strict and f.target.is_strict):
        raise StrictnessError(f"DY complexes are computed for strict presentations only ({f.name} is not strict)")


class DYComplex:
    """Cached cochain spaces and differentials for one functor."""

    def __init__(self, functor: FunctorPresentation, cap=DEFAULT_CAP):
        _require_strict(functor)
        self.functor = functor
        self.cap = cap
        self.source = functor.source
        self.target = functor.target
        self.field = functor.target.field
        self._layouts = {}
        self._bases = {}
        self._dmats = {}
        self._cohom = {}

    # -- layout ----------------------------------------------------------

    def check_degree(self, n):
        if n < 1:
            raise PreconditionError("degree 0 has no cochain table; use degree0_differential")
        if n > self.cap:
            raise BudgetError(f"degree {n} exceeds the configured cap {self.cap}")

    def tuples(self, n):
        return list(itertools.product(range(self.source.n_objects), repeat=n))

    def image_object(self, t):
        return self.functor.obj(self.source.tensor_all(t))

    def layout(self, n):
        """``(tuples, offsets, dims, total)`` for the flat table vector."""
        lay = self._layouts.get(n)
        if lay is None:
            self.check_degree(n)
            tuples = self.tuples(n)
            offsets, dims = {}, {}
            total = 0
            D = self.target
            for t in tuples:
                p = self.image_object(t)
                d = D.dim(p, p)
                offsets[t] = total
                dims[t] = d
                total += d
                if total > MAX_UNKNOWNS:
                    raise BudgetError(f"degree {n} needs more than {MAX_UNKNOWNS} unknowns")
            lay = (tuples, offsets, dims, total)
            self._layouts[n] = lay
        return lay

    def to_vector(self, eta):
        tuples, offsets, dims, total = self.layout(eta.degree)
        out = []
        for t in tuples:
            v = eta.table[t]
            if len(v) != dims[t]:
                raise DimensionError(f"entry at {t} has length {len(v)}, expected {dims[t]}")
            out.extend(v)
        return tuple(out)

    def from_vector(self, n, vec):
        tuples, offsets, dims, total = self.layout(n)
        return DYCochain(self.functor, n, {t: tuple(vec[offsets[t]:offsets[t] + dims[t]]) for t in tuples})

    def zero(self, n):
        tuples, offsets, dims, total = self.layout(n)
        z = self.field.zero
        return DYCochain(self.functor, n, {t: (z,) * dims[t] for t in tuples})

    # -- naturality ------------------------------------------------------

    def slot_morphism(self, t, i, y, f):
        """``F(id (x) .. (x) f (x) .. (x) id)`` for f: t[i] -> y, as a morphism of D."""
        C = self.source
        x = t[i]
        src, mor = x, f
        tgt = y
        if i > 0:
            left = C.tensor_all(t[:i])
            mor = C.tensor_morphisms(left, left, x, y, C.identity(left), mor)
            src, tgt = C.tensor(left, x), C.tensor(left, y)
        if i < len(t) - 1:
            right = C.tensor_all(t[i + 1:])
            mor = C.tensor_morphisms(src, tgt, right, right, mor, C.identity(right))
            src, tgt = C.tensor(src, right), C.tensor(tgt, right)
        return self.functor.map_mor(src, tgt, mor)

    def constraint_matrix(self, n):
        """Sparse homogeneous system whose kernel is C^n_DY(F)."""
        tuples, offsets, dims, total = self.layout(n)
        C, D = self.source, self.target
        triplets = []
        row = 0
        nobj = C.n_objects
        for t in tuples:
            p = self.image_object(t)
            for i in range(n):
                x = t[i]
                for y in range(nobj):
                    for b in range(C.dim(x, y)):
                        t2 = t[:i] + (y,) + t[i + 1:]
                        q = self.image_object(t2)
                        g = self.slot_morphism(t, i, y, C.basis(x, y, b))
                        if not any(g):
                            continue
                        dq = D.dim(p, q)
                        # eta_{t2} o g  -  g o eta_t  == 0 in Hom(p, q)
                        for a in range(dims[t2]):
                            col = D.compose_mor(p, q, q, g, D.basis(q, q, a))
                            for k, v in enumerate(col):
                                if v:
                                    triplets.append((row + k, offsets[t2] + a, v))
                        for a in range(dims[t]):
                            col = D.compose_mor(p, p, q, D.basis(p, p, a), g)
                            for k, v in enumerate(col):
                                if v:
                                    triplets.append((row + k, offsets[t] + a, -v))
                        row += dq
        return SparseMatrix.from_triplets(self.field, row, total, triplets)

    def naturality_violations(self, eta):
        """Constraint rows violated by ``eta`` (empty list iff natural)."""
        m = self.constraint_matrix(eta.degree)
        v = self.to_vector(eta)
        norm = self.field.norm
        bad = []
        for i, r in enumerate(m.rows):
            if norm(sum(c * v[j] for j, c in r.items())):
                bad.append(i)
        return bad

    def is_natural(self, eta):
        return not self.naturality_violations(eta)

    # -- bases -----------------------------------------------------------

    def basis_vectors(self, n):
        """Canonical kernel basis and the free columns that give coordinates."""
        cached = self._bases.get(n)
        if cached is None:
            m = self.constraint_matrix(n)
            tuples, offsets, dims, total = self.layout(n)
            if m.nrows == 0:
                basis = [tuple(self.field.one if j == i else self.field.zero for j in range(total))
                         for i in range(total)]
                free = list(range(total))
            else:
                _, pivots = rref(m)
                pivset = set(pivots)
                free = [j for j in range(total) if j not in pivset]
                basis = kernel_basis(m)
            cached = (basis, free)
            self._bases[n] = cached
        return cached

    def basis(self, n):
        return [self.from_vector(n, v) for v in self.basis_vectors(n)[0]]

    def dim(self, n):
        return len(self.basis_vectors(n)[0])

    def coordinates(self, eta):
        """Coordinates of a natural cochain in the canonical basis."""
        basis, free = self.basis_vectors(eta.degree)
        vec = self.to_vector(eta)
        coords = tuple(vec[j] for j in free)
        if _DEBUG and self.from_coordinates(eta.degree, coords) != eta:
            raise PreconditionError("cochain is not natural")
        return coords

    def from_coordinates(self, n, coords):
        basis, free = self.basis_vectors(n)
        tuples, offsets, dims, total = self.layout(n)
        norm = self.field.norm
        acc = [0] * total
        for c, v in zip(coords, basis):
            if c:
                for j, a in enumerate(v):
                    if a:
                        acc[j] += c * a
        return self.from_vector(n, tuple(norm(a) for a in acc))

    # -- coface maps -----------------------------------------------------

    def coface(self, n, i, eta):
        if eta.functor is not self.functor:
            raise PreconditionError("cochain belongs to a different functor")
        if eta.degree != n:
            raise PreconditionError(f"expected a degree-{n} cochain, got degree {eta.degree}")
        if not 0 <= i <= n + 1:
            raise IndexError(f"coface index {i} outside 0..{n + 1}")
        C, D, F = self.source, self.target, self.functor
        table = {}
        for t in self.tuples(n + 1):
            if i == 0:
                a, b = F.obj(t[0]), self.image_object(t[1:])
                table[t] = D.tensor_morphisms(a, a, b, b, D.identity(a), eta.table[t[1:]])
                self._check_strict_image(a, b, t)
            elif i == n + 1:
                a, b = self.image_object(t[:n]), F.obj(t[n])
                table[t] = D.tensor_morphisms(a, a, b, b, eta.table[t[:n]], D.identity(b))
                self._check_strict_image(a, b, t)
            else:
                merged = t[:i - 1] + (C.tensor(t[i - 1], t[i]),) + t[i + 1:]
                table[t] = eta.table[merged]
        out = DYCochain(F, n + 1, table)
        if _DEBUG and not self.is_natural(out):
            raise PreconditionError(f"coface {i} produced a non-natural cochain")
        return out

    def _check_strict_image(self, a, b, t):
        if self.target.tensor(a, b) != self.image_object(t):
            raise StrictnessError("F(X) (x) F(Y) differs from F(X (x) Y) on objects")

    def differential(self, n, eta):
        norm = self.field.norm
        acc = None
        for i in range(n + 2):
            term = self.coface(n, i, eta)
            if acc is None:
                acc = {k: list(v) for k, v in term.table.items()}
                continue
            sign = -1 if i % 2 else 1
            for k, v in term.table.items():
                row = acc[k]
                for j, a in enumerate(v):
                    if a:
                        row[j] += sign * a
        return DYCochain(self.functor, n + 1, {k: tuple(norm(a) for a in v) for k, v in acc.items()})

    # -- degree 0 --------------------------------------------------------

    @property
    def is_monoidal(self):
        F, C, D = self.functor, self.source, self.target
        return C.unit is not None and D.unit is not None and F.obj(C.unit) == D.unit

    def degree0(self, f_endo):
        """``X -> id_{F X} (x) f - f (x) id_{F X}`` for f in End(1_D)."""
        D = self.target
        u = D.unit
        if u is None:
            raise MonoidalityError(f"{D.name} has no unit object")
        F = self.functor
        table = {}
        for x in range(self.source.n_objects):
            fx = F.obj(x)
            if D.tensor(fx, u) != fx or D.tensor(u, fx) != fx:
                raise MonoidalityError("degree-0 differential needs a strict unit")
            left = D.tensor_morphisms(fx, fx, u, u, D.identity(fx), f_endo)
            right = D.tensor_morphisms(u, u, fx, fx, f_endo, D.identity(fx))
            table[(x,)] = D.sub(left, right)
        return DYCochain(F, 1, table)

    # -- differentials in coordinates -------------------------------------

    def differential_matrix(self, n):
        """Matrix of d^n from C^n to C^{n+1} in canonical coordinates (n >= 0).

        For n = 0 the domain is End(1_D) when the functor is monoidal, otherwise
        the zero space (0 columns).
        """
        m = self._dmats.get(n)
        if m is None:
            self.check_degree(n + 1)
            cols = []
            if n == 0:
                if self.is_monoidal:
                    D = self.target
                    for a in range(D.dim(D.unit, D.unit)):
                        cols.append(self.coordinates(self.degree0(D.basis(D.unit, D.unit, a))))
            else:
                for eta in self.basis(n):
                    cols.append(self.coordinates(self.differential(n, eta)))
            rows = self.dim(n + 1)
            m = Matrix.from_columns(self.field, cols, nrows=rows) if cols else Matrix.zeros(self.field, rows, 0)
            self._dmats[n] = m
        return m

    def cohomology(self, n):
        entry = self._cohom.get(n)
        if entry is not None:
            return entry
        self.check_degree(n)
        if n + 1 > self.cap:
            raise BudgetError(f"H^{n} needs degree {n + 1} cochains but the cap is {self.cap}")
        dn = self.differential_matrix(n)
        dprev = self.differential_matrix(n - 1)
        cocycles = kernel_basis(dn)
        dim_c = self.dim(n)
        rank_d = dim_c - len(cocycles)
        # first cocycles independent modulo coboundaries, in canonical order
        rank_prev, chosen = quotient_basis(dprev, cocycles)
        reps = [cocycles[j] for j in chosen]
        if n == 1:
            convention = "d0" if self.is_monoidal else "zero-incoming"
        else:
            convention = "standard"
        entry = CohomologyEntry(
            kind="dy", subject=self.functor.name, degree=n, dim_cochains=dim_c, rank_d=rank_d,
            dim_cocycles=len(cocycles), dim_coboundaries=rank_prev, dim_H=len(reps),
            representative_coords=reps, representatives=[self.from_coordinates(n, r) for r in reps],
            convention=convention)
        self._cohom[n] = entry
        return entry

    def class_coordinates(self, n, coords):
        """Coordinates of the class of a cocycle in the chosen H^n basis."""
        entry = self.cohomology(n)
        dprev = self.differential_matrix(n - 1)
        if entry.dim_H == 0:
            return ()
        x = solve(augment(dprev, entry.representative_coords), coords)
        if x is None:
            raise PreconditionError("vector is not a cocycle")
        return x[dprev.ncols:]


_COMPLEXES = weakref.WeakKeyDictionary()


def get_complex(f: FunctorPresentation, cap=None) -> DYComplex:
    """Shared :class:`DYComplex` for ``f``; a larger cap rebuilds the cache."""
    cx = _COMPLEXES.get(f)
    if cx is None or (cap is not None and cap != cx.cap):
        cx = DYComplex(f, DEFAULT_CAP if cap is None else cap)
        _COMPLEXES[f] = cx
    return cx


def _as_functor(f):
    return f.identity_functor if isinstance(f, CatPresentation) else f


# -- module-level operations ----------------------------------------------------


def cochain_basis(f, n, cap=None):
    return get_complex(_as_functor(f), cap).basis(n)


def coface(f, n, i, eta):
    return get_complex(_as_functor(f)).coface(n, i, eta)


def differential(f, n, eta):
    return get_complex(_as_functor(f)).differential(n, eta)


def degree0_differential(c, f_endo):
    """d^0 for the identity functor of ``c`` (or for a monoidal functor)."""
    return get_complex(_as_functor(c)).degree0(tuple(f_endo))


def cohomology(f, n, cap=None):
    return get_complex(_as_functor(f), cap).cohomology(n)


def is_coboundary(f, n, eta):
    """``(True, zeta)`` with d zeta = eta, or ``(False, None)``.

    For n = 1 the preimage lives in End(1_D) and is returned as a coordinate
    tuple; it exists only if the functor is monoidal.
    """
    cx = get_complex(_as_functor(f))
    if eta.degree != n:
        raise PreconditionError(f"expected a degree-{n} cochain")
    if not cx.is_natural(eta):
        raise PreconditionError("input is not a natural cochain")
    if n + 1 <= cx.cap and not cx.differential(n, eta).is_zero():
        raise PreconditionError("input is not a cocycle")
    coords = cx.coordinates(eta)
    dprev = cx.differential_matrix(n - 1)
    if dprev.ncols == 0:
        ok = not any(coords)
        if not ok:
            return False, None
        return True, (cx.zero(n - 1) if n > 1 else ())
    x = solve(dprev, coords)
    if x is None:
        return False, None
    if n == 1:
        return True, x
    return True, cx.from_coordinates(n - 1, x)


def natural_cochain_dims(f, max_degree, cap=None):
    cx = get_complex(_as_functor(f), cap)
    return [cx.dim(n) for n in range(1, max_degree + 1)]


# -- functoriality ------------------------------------------------------------


@dataclass(eq=False)
class SquareMorphism:
    """Commutative square G.S = T.F with T fully faithful on endomorphisms.

    ``S: C1 -> C2`` (top), ``T: D1 -> D2`` (bottom), ``F: C1 -> D1`` (left),
    ``G: C2 -> D2`` (right).  The induced map goes from C(G) to C(F).
    """

    S: FunctorPresentation
    T: FunctorPresentation
    F: FunctorPresentation
    G: FunctorPresentation
    name: str = "square"

    def __post_init__(self):
        S, T, F, G = self.S, self.T, self.F, self.G
        if not (S.source is F.source and S.target is G.source and T.source is F.target
                and T.target is G.target):
            raise PreconditionError(f"{self.name}: functors do not form a square")
        for fn in (S, T, F, G):
            _require_strict(fn)
        C1 = F.source
        for x in range(C1.n_objects):
            if G.obj(S.obj(x)) != T.obj(F.obj(x)):
                raise PreconditionError(f"{self.name}: square does not commute on object {C1.objects[x]}")
        for x, y in itertools.product(range(C1.n_objects), repeat=2):
            gs = G.hom_maps[(S.obj(x), S.obj(y))] @ S.hom_maps[(x, y)]
            tf = T.hom_maps[(F.obj(x), F.obj(y))] @ F.hom_maps[(x, y)]
            if gs != tf:
                raise PreconditionError(f"{self.name}: square does not commute on "
                                        f"Hom({C1.objects[x]}, {C1.objects[y]})")
        D1 = T.source
        for p in range(D1.n_objects):
            m = T.hom_maps[(p, p)]
            if not m.is_square() or rank(m) != m.nrows:
                raise PreconditionError(f"{self.name}: T is not fully faithful on End({D1.objects[p]})")


def identity_square(f: FunctorPresentation):
    return SquareMorphism(f.source.identity_functor, f.target.identity_functor, f, f, name=f"id[{f.name}]")


def compose_squares(sq1: SquareMorphism, sq2: SquareMorphism, name=None):
    """Place ``sq2`` to the right of ``sq1`` (sq1.G must be sq2.F)."""
    if sq1.G is not sq2.F:
        raise PreconditionError("squares are not horizontally composable")
    S = compose_functors(sq1.S, sq2.S)
    T = compose_functors(sq1.T, sq2.T)
    return SquareMorphism(S, T, sq1.F, sq2.G, name=name or f"{sq2.name}.{sq1.name}")


def restrict_along_square(sq: SquareMorphism, eta: DYCochain) -> DYCochain:
    """``(phi eta)_{X1..Xn} = T^{-1}(eta_{S X1, .., S Xn})``."""
    if eta.functor is not sq.G:
        raise PreconditionError("cochain does not belong to the right-hand functor of the square")
    S, T, F = sq.S, sq.T, sq.F
    C1 = F.source
    n = eta.degree
    table = {}
    for t in itertools.product(range(C1.n_objects), repeat=n):
        p = F.obj(C1.tensor_all(t))
        st = tuple(S.obj(x) for x in t)
        x = solve(T.hom_maps[(p, p)], eta.table[st])
        if x is None:
            raise PreconditionError(f"T is not surjective on End({T.source.objects[p]})")
        table[t] = x
    out = DYCochain(F, n, table)
    if _DEBUG and not get_complex(F).is_natural(out):
        raise PreconditionError("restriction produced a non-natural cochain")
    return out


def cochain_map_matrix(sq: SquareMorphism, n):
    """Matrix of phi on C^n in canonical coordinates (columns: basis of C^n(G))."""
    cf, cg = get_complex(sq.F), get_complex(sq.G)
    cols = [cf.coordinates(restrict_along_square(sq, eta)) for eta in cg.basis(n)]
    rows = cf.dim(n)
    return Matrix.from_columns(cf.field, cols, nrows=rows) if cols else Matrix.zeros(cf.field, rows, 0)


@dataclass
class InducedMap:
    degree: int
    matrix: Matrix
    injective: bool
    surjective: bool

    @property
    def bijective(self):
        return self.injective and self.surjective

    def to_json(self):
        return {"degree": self.degree, "matrix": self.matrix.to_strings(), "rows": self.matrix.nrows,
                "cols": self.matrix.ncols, "injective": self.injective, "surjective": self.surjective}


def induced_map_on_cohomology(sq: SquareMorphism, n) -> InducedMap:
    cf, cg = get_complex(sq.F), get_complex(sq.G)
    hg = cg.cohomology(n)
    hf = cf.cohomology(n)
    cols = []
    for rep in hg.representatives:
        z = cf.coordinates(restrict_along_square(sq, rep))
        cols.append(cf.class_coordinates(n, z))
    field = cf.field
    m = Matrix.from_columns(field, cols, nrows=hf.dim_H) if cols else Matrix.zeros(field, hf.dim_H, 0)
    r = rank(m) if m.nrows and m.ncols else 0
    return InducedMap(n, m, injective=(r == m.ncols), surjective=(r == m.nrows))
