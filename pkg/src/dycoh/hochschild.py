"""
Hochschild cochains of finite-dimensional algebras with bimodule coefficients.

Algebras need not be unital, and even when they are, the unit need not act as
the identity on the bimodule.  A degree-n cochain is stored as its values on
basis n-tuples of the algebra (lexicographic order), which determines it by
multilinearity.  The differential is

    (df)(a0, .., an) = a0.f(a1, .., an) + sum_i (-1)^i f(.., a_{i-1} a_i, ..)
                       + (-1)^{n+1} f(a0, .., a_{n-1}).an

and in degree 0, (dh)(a) = a.h - h.a.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import (BudgetError, ConsistencyError, DimensionError, PreconditionError,
                     StructuralError, UnitalizationError)
from .linalg import FieldSpec, Matrix, SparseMatrix, augment, kernel_basis, quotient_basis, solve
from .presentations import ValidationReport, _Recorder, _bilinear, _basis, _zero
from .reports import CohomologyEntry, TheoremReport

HOCH_CAP = 3
MAX_UNKNOWNS = 50_000


# -- presentations --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """Algebra by structure constants: ``mul[i][j]`` is the coordinate vector of e_i e_j."""

    field: FieldSpec
    dim: int
    mul: tuple
    unit_coords: tuple | None = None
    names: tuple = ()
    name: str = "A"
    adjoined_from: "AlgebraPresentation | None" = None

    @property
    def is_unital(self):
        return self.unit_coords is not None

    def basis(self, i):
        return _basis(self.field, self.dim, i)

    def zero(self):
        return _zero(self.field, self.dim)

    def product(self, x, y):
        return _bilinear(self.field, self.mul, x, y, self.dim)

    @property
    def embedding(self):
        """Matrix of a -> (a, 0) from the original algebra when this is a unitalization."""
        if self.adjoined_from is None:
            return None
        d = self.adjoined_from.dim
        return Matrix.from_rows(self.field, [[1 if i == j else 0 for j in range(d)] for i in range(self.dim)])


@dataclass(frozen=True, eq=False)
class BimodulePresentation:
    """Bimodule by structure constants: ``left[a][m]`` and ``right[m][a]``."""

    algebra: AlgebraPresentation
    dim: int
    left: tuple
    right: tuple
    names: tuple = ()
    name: str = "M"
    hom_of: "BimodulePresentation | None" = None
    extended_from: "BimodulePresentation | None" = None
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def field(self):
        return self.algebra.field

    def act_left(self, a, m):
        return _bilinear(self.field, self.left, a, m, self.dim)

    def act_right(self, m, a):
        return _bilinear(self.field, self.right, m, a, self.dim)

    def zero(self):
        return _zero(self.field, self.dim)


def _coerce_table(field, table, d1, d2, dout, what):
    """Dense ``[i][j] -> coords`` from a dict ``{(i, j): coords}`` or nested sequences."""
    z = _zero(field, dout)
    if isinstance(table, dict):
        out = [[z] * d2 for _ in range(d1)]
        for (i, j), v in table.items():
            if not (0 <= i < d1 and 0 <= j < d2):
                raise StructuralError(what, f"entry ({i}, {j}) outside {d1}x{d2}")
            if len(v) != dout:
                raise StructuralError(what, f"entry ({i}, {j}) has length {len(v)}, expected {dout}")
            out[i][j] = tuple(field(x) for x in v)
        return tuple(tuple(r) for r in out)
    if len(table) != d1 or any(len(r) != d2 for r in table):
        raise StructuralError(what, f"expected a {d1}x{d2} table")
    rows = []
    for i, r in enumerate(table):
        row = []
        for j, v in enumerate(r):
            if len(v) != dout:
                raise StructuralError(what, f"entry ({i}, {j}) has length {len(v)}, expected {dout}")
            row.append(tuple(field(x) for x in v))
        rows.append(tuple(row))
    return tuple(rows)


def build_algebra(field, names, mul, unit=None, name="A"):
    """Algebra on basis ``names``; ``mul`` maps index pairs to coordinates (omitted = 0)."""
    names = tuple(names)
    d = len(names)
    if len(set(names)) != d:
        raise StructuralError("basis", "duplicate basis names")
    table = _coerce_table(field, mul, d, d, d, "mul")
    if unit is not None:
        if len(unit) != d:
            raise StructuralError("unit", f"unit has length {len(unit)}, expected {d}")
        unit = tuple(field(x) for x in unit)
    return AlgebraPresentation(field, d, table, unit, names, name)


def build_bimodule(algebra, names, left, right, name="M"):
    names = tuple(names)
    d = len(names)
    if len(set(names)) != d:
        raise StructuralError("basis", "duplicate basis names")
    f = algebra.field
    return BimodulePresentation(algebra, d, _coerce_table(f, left, algebra.dim, d, d, "left"),
                                _coerce_table(f, right, d, algebra.dim, d, "right"), names, name)


def regular_bimodule(a: AlgebraPresentation, name=None):
    """``A`` as a bimodule over itself."""
    return BimodulePresentation(a, a.dim, a.mul, a.mul, a.names, name or a.name)


# -- validation -----------------------------------------------------------------


def validate_algebra(a: AlgebraPresentation, limit=20) -> ValidationReport:
    rep = ValidationReport("algebra", a.name, a.field)
    rec = _Recorder(rep, limit)
    d = a.dim
    names = a.names or tuple(str(i) for i in range(d))
    for i, j, k in itertools.product(range(d), repeat=3):
        x, y, z = a.basis(i), a.basis(j), a.basis(k)
        rec.check("associativity", a.product(a.product(x, y), z), a.product(x, a.product(y, z)),
                  (), (names[i], names[j], names[k]))
    if a.unit_coords is not None:
        u = a.unit_coords
        for i in range(d):
            x = a.basis(i)
            rec.check("unit_left", a.product(u, x), x, (), (names[i],))
            rec.check("unit_right", a.product(x, u), x, (), (names[i],))
    return rep


def validate_bimodule(m: BimodulePresentation, limit=20) -> ValidationReport:
    rep = ValidationReport("bimodule", m.name, m.field)
    rec = _Recorder(rep, limit)
    a = m.algebra
    an = a.names or tuple(str(i) for i in range(a.dim))
    mn = m.names or tuple(str(i) for i in range(m.dim))
    for i, j, k in itertools.product(range(a.dim), range(a.dim), range(m.dim)):
        x, y, v = a.basis(i), a.basis(j), m.zero()[:k] + (m.field.one,) + m.zero()[k + 1:]
        rec.check("left_associativity", m.act_left(a.product(x, y), v), m.act_left(x, m.act_left(y, v)),
                  (), (an[i], an[j], mn[k]))
        rec.check("right_associativity", m.act_right(v, a.product(x, y)), m.act_right(m.act_right(v, x), y),
                  (), (mn[k], an[i], an[j]))
        rec.check("middle_associativity", m.act_right(m.act_left(x, v), y), m.act_left(x, m.act_right(v, y)),
                  (), (an[i], mn[k], an[j]))
    return rep


# -- cochains -------------------------------------------------------------------


class HochCochain:
    """Values of a multilinear map A^n -> M on basis tuples."""

    __slots__ = ("module", "degree", "values")

    def __init__(self, module, degree, values):
        self.module = module
        self.degree = degree
        self.values = values

    def __getitem__(self, key):
        return self.values[key]

    def __eq__(self, other):
        if not isinstance(other, HochCochain):
            return NotImplemented
        return self.module is other.module and self.degree == other.degree and self.values == other.values

    __hash__ = None

    def __repr__(self):
        return f"HochCochain({self.module.name}, degree={self.degree})"

    @property
    def field(self):
        return self.module.field

    def is_zero(self):
        return all(not any(v) for v in self.values.values())

    def _combine(self, other, c):
        if self.module is not other.module or self.degree != other.degree:
            raise DimensionError("cochains of different bimodules or degrees")
        norm = self.field.norm
        return HochCochain(self.module, self.degree,
                           {k: tuple(norm(a + c * b) for a, b in zip(v, other.values[k]))
                            for k, v in self.values.items()})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        norm = self.field.norm
        return HochCochain(self.module, self.degree,
                           {k: tuple(norm(c * a) for a in v) for k, v in self.values.items()})

    def vector(self):
        out = []
        for t in tuples(self.module.algebra, self.degree):
            out.extend(self.values[t])
        return tuple(out)

    def evaluate(self, *args):
        """Multilinear extension at coordinate vectors ``args``."""
        if len(args) != self.degree:
            raise DimensionError(f"expected {self.degree} arguments, got {len(args)}")
        m = self.module
        acc = [0] * m.dim
        supports = [[(i, x) for i, x in enumerate(a) if x] for a in args]
        for combo in itertools.product(*supports):
            c = 1
            for _, x in combo:
                c *= x
            val = self.values[tuple(i for i, _ in combo)]
            for j, v in enumerate(val):
                if v:
                    acc[j] += c * v
        norm = self.field.norm
        return tuple(norm(x) for x in acc)

    def to_json(self):
        a, m = self.module.algebra, self.module
        an = a.names or tuple(str(i) for i in range(a.dim))
        fmt = self.field.fmt
        return {",".join(an[i] for i in k): [fmt(x) for x in v] for k, v in self.values.items() if any(v)}


def tuples(a: AlgebraPresentation, n):
    return list(itertools.product(range(a.dim), repeat=n))


def _check_size(m, n):
    size = m.algebra.dim ** n * m.dim
    if size > MAX_UNKNOWNS:
        raise BudgetError(f"degree-{n} cochains of {m.name} need {size} > {MAX_UNKNOWNS} unknowns")


def zero_cochain(m, n):
    _check_size(m, n)
    z = m.zero()
    return HochCochain(m, n, {t: z for t in tuples(m.algebra, n)})


def cochain_from_vector(m, n, vec):
    _check_size(m, n)
    d = m.dim
    if len(vec) != m.algebra.dim ** n * d:
        raise DimensionError("vector length does not match the cochain space")
    return HochCochain(m, n, {t: tuple(vec[k * d:(k + 1) * d]) for k, t in enumerate(tuples(m.algebra, n))})


def cochain_from_function(m, n, fn):
    """Cochain whose value at a basis tuple is ``fn(tuple)`` (coerced to M)."""
    f = m.field
    return HochCochain(m, n, {t: tuple(f(x) for x in fn(t)) for t in tuples(m.algebra, n)})


def cochain_basis(m, n):
    size = m.algebra.dim ** n * m.dim
    one, z = m.field.one, m.field.zero
    return [cochain_from_vector(m, n, tuple(one if i == k else z for i in range(size))) for k in range(size)]


# -- differential ---------------------------------------------------------------


def hoch_differential(m: BimodulePresentation, f: HochCochain) -> HochCochain:
    """Evaluate the three-term formula on every basis (n+1)-tuple."""
    if f.module is not m:
        raise DimensionError("cochain is not over this bimodule")
    a = m.algebra
    n = f.degree
    norm = m.field.norm
    out = {}
    for t in tuples(a, n + 1):
        args = [a.basis(i) for i in t]
        acc = list(m.act_left(args[0], f.values[t[1:]]))
        for i in range(1, n + 1):
            merged = args[:i - 1] + [a.product(args[i - 1], args[i])] + args[i + 1:]
            val = f.evaluate(*merged)
            s = -1 if i % 2 else 1
            for j, v in enumerate(val):
                acc[j] += s * v
        last = m.act_right(f.values[t[:n]], args[n])
        s = -1 if (n + 1) % 2 else 1
        for j, v in enumerate(last):
            acc[j] += s * v
        out[t] = tuple(norm(x) for x in acc)
    return HochCochain(m, n + 1, out)


def differential_matrix(m: BimodulePresentation, n: int) -> SparseMatrix:
    """Sparse matrix of d^n on flat value tables, assembled term by term."""
    cached = m._cache.get(("d", n))
    if cached is not None:
        return cached
    _check_size(m, n + 1)
    a = m.algebra
    dA, dM = a.dim, m.dim
    field = m.field

    def index(t):
        k = 0
        for i in t:
            k = k * dA + i
        return k * dM

    trip = []
    for t in tuples(a, n + 1):
        row0 = index(t)
        src = index(t[1:])
        for jp in range(dM):
            for j, v in enumerate(m.left[t[0]][jp]):
                if v:
                    trip.append((row0 + j, src + jp, v))
        for i in range(1, n + 1):
            s = -1 if i % 2 else 1
            prod = a.mul[t[i - 1]][t[i]]
            for c, v in enumerate(prod):
                if v:
                    col = index(t[:i - 1] + (c,) + t[i + 1:])
                    for j in range(dM):
                        trip.append((row0 + j, col + j, s * v))
        s = -1 if (n + 1) % 2 else 1
        src = index(t[:n])
        for jp in range(dM):
            for j, v in enumerate(m.right[jp][t[n]]):
                if v:
                    trip.append((row0 + j, src + jp, s * v))
    mat = SparseMatrix.from_triplets(field, dA ** (n + 1) * dM, dA ** n * dM, trip)
    m._cache[("d", n)] = mat
    return mat


def _apply_sparse(mat, vec):
    norm = mat.field.norm
    return tuple(norm(sum(c * vec[j] for j, c in r.items())) for r in mat.rows)


def is_cocycle(m, f):
    return not any(_apply_sparse(differential_matrix(m, f.degree), f.vector()))


# -- cohomology -----------------------------------------------------------------


def _cocycle_basis(m, n):
    key = ("Z", n)
    if key not in m._cache:
        m._cache[key] = kernel_basis(differential_matrix(m, n))
    return m._cache[key]


def hoch_cohomology(m: BimodulePresentation, n: int, cap=HOCH_CAP) -> CohomologyEntry:
    """dim H^n = dim ker d^n - rank d^{n-1}; H^0 = ker d^0."""
    if n < 0:
        raise PreconditionError("degree must be non-negative")
    if n > cap:
        raise BudgetError(f"degree {n} exceeds the Hochschild cap {cap}")
    key = ("H", n)
    if key in m._cache:
        return m._cache[key]
    dim_c = m.algebra.dim ** n * m.dim
    cocycles = _cocycle_basis(m, n)
    if n == 0:
        dprev = SparseMatrix(m.field, dim_c, 0, [dict() for _ in range(dim_c)])
    else:
        dprev = differential_matrix(m, n - 1)
    rank_prev, chosen = quotient_basis(dprev, cocycles)
    reps = [cocycles[j] for j in chosen]
    entry = CohomologyEntry(
        kind="hochschild", subject=m.name, degree=n, dim_cochains=dim_c, rank_d=dim_c - len(cocycles),
        dim_cocycles=len(cocycles), dim_coboundaries=rank_prev, dim_H=len(reps),
        representative_coords=reps, representatives=[cochain_from_vector(m, n, r) for r in reps],
        convention="ker-d0" if n == 0 else "standard")
    m._cache[key] = entry
    return entry


def class_coordinates(m, n, vec):
    """Coordinates of the class of the cocycle ``vec`` in the chosen H^n basis."""
    entry = hoch_cohomology(m, n, cap=max(n, HOCH_CAP))
    if n == 0:
        dprev = SparseMatrix(m.field, len(vec), 0, [dict() for _ in vec])
    else:
        dprev = differential_matrix(m, n - 1)
    x = solve(augment(dprev, entry.representative_coords), vec)
    if x is None:
        raise PreconditionError("vector is not a cocycle")
    return x[dprev.ncols:]


def is_coboundary(m, f: HochCochain):
    """``(True, g)`` with d g = f, or ``(False, None)``."""
    if f.degree == 0:
        return (f.is_zero(), None)
    x = solve(differential_matrix(m, f.degree - 1), f.vector())
    if x is None:
        return False, None
    return True, cochain_from_vector(m, f.degree - 1, x)


# -- Hom(A, M) and currying -----------------------------------------------------


def hom_bimodule(m: BimodulePresentation) -> BimodulePresentation:
    """Hom_k(A, M) with (a.g)(b) = a.g(b) and (g.a)(b) = g(ab) - g(a).b.

    Basis element (c, j) at index c*dim M + j is the map e_c -> m_j, other
    basis elements -> 0.  The result is cached so that currying always lands
    in the same presentation.
    """
    hm = m._cache.get("hom")
    if hm is not None:
        return hm
    a = m.algebra
    dA, dM = a.dim, m.dim
    field = m.field
    D = dA * dM
    left = []
    for x in range(dA):
        row = []
        for c, j in itertools.product(range(dA), range(dM)):
            v = [0] * D
            for jp, coef in enumerate(m.left[x][j]):
                if coef:
                    v[c * dM + jp] = coef
            row.append(tuple(field.norm(t) for t in v))
        left.append(tuple(row))
    right = []
    for c, j in itertools.product(range(dA), range(dM)):
        row = []
        for x in range(dA):
            v = [0] * D
            # (E_cj . x)(b) = (x b)[c] m_j - delta_{xc} m_j . b
            for b in range(dA):
                coef = a.mul[x][b][c]
                if coef:
                    v[b * dM + j] += coef
                if x == c:
                    for jp, r in enumerate(m.right[j][b]):
                        if r:
                            v[b * dM + jp] -= r
            row.append(tuple(field.norm(t) for t in v))
        right.append(tuple(row))
    an = a.names or tuple(str(i) for i in range(dA))
    mn = m.names or tuple(str(i) for i in range(dM))
    names = tuple(f"{an[c]}->{mn[j]}" for c, j in itertools.product(range(dA), range(dM)))
    hm = BimodulePresentation(a, D, tuple(left), tuple(right), names, f"Hom({a.name},{m.name})", hom_of=m)
    m._cache["hom"] = hm
    return hm


def curry(m: BimodulePresentation, f: HochCochain) -> HochCochain:
    """Gamma(f)(a1..a_{n-1})(b) = f(a1..a_{n-1}, b)."""
    if f.degree < 1:
        raise PreconditionError("currying needs degree >= 1")
    if f.module is not m:
        raise DimensionError("cochain is not over this bimodule")
    hm = hom_bimodule(m)
    a = m.algebra
    out = {}
    for t in tuples(a, f.degree - 1):
        v = []
        for b in range(a.dim):
            v.extend(f.values[t + (b,)])
        out[t] = tuple(v)
    return HochCochain(hm, f.degree - 1, out)


def uncurry(hm: BimodulePresentation, p: HochCochain) -> HochCochain:
    """Inverse of :func:`curry`: a degree-k cochain of Hom(A, M) to degree k+1 of M."""
    m = hm.hom_of
    if m is None:
        raise PreconditionError(f"{hm.name} is not a Hom(A, M) bimodule")
    if p.module is not hm:
        raise DimensionError("cochain is not over this bimodule")
    dM = m.dim
    out = {}
    for t, v in p.values.items():
        for b in range(m.algebra.dim):
            out[t + (b,)] = tuple(v[b * dM:(b + 1) * dM])
    return HochCochain(m, p.degree + 1, {t: out[t] for t in tuples(m.algebra, p.degree + 1)})


# -- normalization --------------------------------------------------------------


@dataclass
class Normalization:
    """``corrected = f + sign * d(h)`` vanishes whenever an argument is the unit."""

    h: HochCochain
    sign: int
    corrected: HochCochain

    def to_json(self):
        return {"degree": self.corrected.degree, "sign": self.sign, "h": self.h.to_json(),
                "corrected": self.corrected.to_json()}


def _unit_slots_vanish(f: HochCochain):
    a = f.module.algebra
    u = a.unit_coords
    n = f.degree
    for i in range(n):
        for rest in itertools.product(range(a.dim), repeat=n - 1):
            args = [a.basis(r) for r in rest]
            args.insert(i, u)
            if any(f.evaluate(*args)):
                return False, (i, rest)
    return True, None


def _normalizer(m, f):
    """g with f + d g vanishing at unit arguments (recursion through currying)."""
    a = m.algebra
    u = a.unit_coords
    n = f.degree
    if n == 1:
        f1 = f.evaluate(u)
        # g = f(1).1 - 1.f(1)
        g = tuple(m.field.norm(x - y) for x, y in zip(m.act_right(f1, u), m.act_left(u, f1)))
        return HochCochain(m, 0, {(): g})
    hm = hom_bimodule(m)
    p = _normalizer(hm, curry(m, f))
    g = uncurry(hm, p)
    f1 = f + hoch_differential(m, g)
    norm = m.field.norm
    gp = {}
    for t in tuples(a, n - 1):
        v = f1.evaluate(*[a.basis(i) for i in t], u)
        w = m.act_right(v, u)
        gp[t] = tuple(norm(x - 2 * y) for x, y in zip(v, w))
    sign = 1 if n % 2 == 0 else -1
    return g + HochCochain(m, n - 1, gp).scale(sign)


def normalize_cocycle(m: BimodulePresentation, f: HochCochain) -> Normalization:
    """Find h and a sign s with f + s.dh vanishing whenever some argument is 1.

    The returned h is the negative of the internal f + dg normalizer, so that in
    degree 1 it equals 1.f(1) - f(1).1; the sign is then fixed by evaluating
    both candidates (s = -1 tried first) and the winner is re-verified.
    """
    a = m.algebra
    if not a.is_unital:
        raise PreconditionError(f"{a.name} has no unit")
    if f.module is not m:
        raise DimensionError("cochain is not over this bimodule")
    if f.degree < 1:
        raise PreconditionError("normalization needs degree >= 1")
    if not is_cocycle(m, f):
        raise PreconditionError("input is not a cocycle")
    h = _normalizer(m, f).scale(-1)
    dh = hoch_differential(m, h)
    for s in (-1, 1):
        corrected = f + dh.scale(s)
        ok, _ = _unit_slots_vanish(corrected)
        if ok:
            if not is_cocycle(m, corrected):
                raise ConsistencyError("normalized cochain is not a cocycle")
            return Normalization(h, s, corrected)
    _, witness = _unit_slots_vanish(f - dh)
    raise ConsistencyError(f"normalization failed to vanish at unit slot {witness[0]} (other args {witness[1]})")


# -- unitalization --------------------------------------------------------------


def _fresh_name(names, base="1"):
    name = base
    while name in names:
        name += "'"
    return name


def unitalize_algebra(a: AlgebraPresentation, name=None) -> AlgebraPresentation:
    """A + k with (a, l)(b, m) = (ab + l b + m a, l m); the new unit is the last basis vector."""
    d = a.dim
    field = a.field
    one = field.one

    def e(i):
        return _basis(field, d + 1, i)

    mul = []
    for i in range(d + 1):
        row = []
        for j in range(d + 1):
            if i < d and j < d:
                row.append(tuple(a.mul[i][j]) + (field.zero,))
            elif i == d and j == d:
                row.append(e(d))
            else:
                row.append(e(j if i == d else i))
        mul.append(tuple(row))
    names = (a.names or tuple(str(i) for i in range(d)))
    names = names + (_fresh_name(names),)
    unit = _zero(field, d) + (one,)
    return AlgebraPresentation(field, d + 1, tuple(mul), unit, names, name or f"{a.name}^u", adjoined_from=a)


def extend_bimodule(m: BimodulePresentation, au: AlgebraPresentation) -> BimodulePresentation:
    """M over A^u, the new unit acting as the identity on both sides."""
    if au.adjoined_from is not m.algebra:
        raise UnitalizationError(f"{au.name} is not the unitalization of {m.algebra.name}")
    d = m.algebra.dim
    field = m.field

    def e(j):
        return _basis(field, m.dim, j)

    left = tuple(tuple(m.left[i]) for i in range(d)) + (tuple(e(j) for j in range(m.dim)),)
    right = tuple(tuple(m.right[j]) + (e(j),) for j in range(m.dim))
    return BimodulePresentation(au, m.dim, left, right, m.names, f"{m.name}^u", extended_from=m)


def unitalize_pair(m: BimodulePresentation):
    """``(A^u, M over A^u)``."""
    au = unitalize_algebra(m.algebra)
    return au, extend_bimodule(m, au)


def iota_pullback(f: HochCochain, m: BimodulePresentation) -> HochCochain:
    """Restrict a cochain over A^u to old basis tuples."""
    mu = f.module
    if mu.extended_from is not m:
        raise DimensionError("cochain is not over the unitalized bimodule of m")
    return HochCochain(m, f.degree, {t: f.values[t] for t in tuples(m.algebra, f.degree)})


def pi_pullback(f: HochCochain, mu: BimodulePresentation) -> HochCochain:
    """Precompose with the projection A^u -> A: zero whenever the new unit appears."""
    if mu.extended_from is not f.module:
        raise DimensionError("target bimodule does not extend the cochain's bimodule")
    d = f.module.algebra.dim
    z = mu.zero()
    return HochCochain(mu, f.degree, {t: (z if any(i == d for i in t) else f.values[t])
                                      for t in tuples(mu.algebra, f.degree)})


def _class_matrix(m_from, m_to, n, map_cochain):
    """Matrix (in chosen cohomology bases) of a chain map given on cochains."""
    h_from = hoch_cohomology(m_from, n, cap=max(n, HOCH_CAP))
    h_to = hoch_cohomology(m_to, n, cap=max(n, HOCH_CAP))
    cols = [class_coordinates(m_to, n, map_cochain(r).vector()) for r in h_from.representatives]
    field = m_from.field
    if not cols:
        return Matrix.zeros(field, h_to.dim_H, 0)
    return Matrix.from_columns(field, cols, nrows=h_to.dim_H)


def check_algebra_unitalization(m: BimodulePresentation, max_degree=2) -> TheoremReport:
    """iota^*: H^n(A^u, M) -> H^n(A, M) is bijective for 1 <= n <= max_degree.

    Both cohomologies are computed from their own differentials.  Besides the
    rank verdict, each degree records two constructive checks: pi^* lifts every
    class (surjectivity), and every cocycle over A^u that restricts to zero is
    an explicit coboundary built from its normalization (injectivity).
    """
    from .linalg import rank

    au, mu = unitalize_pair(m)
    report = TheoremReport("hochschild-unitalization", f"{m.algebra.name};{m.name}", str(m.field))
    for n in range(1, max_degree + 1):
        hA = hoch_cohomology(m, n, cap=max(n, HOCH_CAP))
        hU = hoch_cohomology(mu, n, cap=max(n, HOCH_CAP))
        mat = _class_matrix(mu, m, n, lambda f: iota_pullback(f, m))
        r = rank(mat) if mat.nrows and mat.ncols else 0
        injective, surjective = r == mat.ncols, r == mat.nrows
        lift_ok = True
        for z in hA.representatives:
            lifted = pi_pullback(z, mu)
            if not is_cocycle(mu, lifted) or iota_pullback(lifted, m) != z:
                lift_ok = False
        kernel_ok = _constructive_injectivity(m, mu, n)
        report.entries.append({
            "degree": n, "dim_H_A": hA.dim_H, "dim_H_Au": hU.dim_H,
            "dim_cochains_A": hA.dim_cochains, "dim_cochains_Au": hU.dim_cochains,
            "rank_d_A": hA.rank_d, "rank_d_Au": hU.rank_d,
            "matrix": mat.to_strings(), "injective": injective, "surjective": surjective,
            "pi_lifts_classes": lift_ok, "kernel_cocycles_are_coboundaries": kernel_ok,
            "pass": injective and surjective and lift_ok and kernel_ok})
    return report


def restriction_kernel(m, mu, n):
    """Basis of cocycles over A^u whose restriction to A vanishes."""
    Z = _cocycle_basis(mu, n)
    if not Z:
        return []
    rows = [iota_pullback(cochain_from_vector(mu, n, z), m).vector() for z in Z]
    # columns of R are the restrictions; kernel of R gives combinations of Z
    R = Matrix.from_columns(m.field, rows, nrows=len(rows[0]))
    norm = m.field.norm
    out = []
    for c in kernel_basis(R):
        v = [0] * len(Z[0])
        for coef, z in zip(c, Z):
            if coef:
                for j, x in enumerate(z):
                    v[j] += coef * x
        out.append(tuple(norm(x) for x in v))
    return out


def _constructive_injectivity(m, mu, n):
    """For each cocycle w over A^u with iota^* w = 0, normalize w to zeta =
    w + s.dh, check zeta = pi^* iota^* zeta, and verify the explicit primitive
    psi = s.(pi^* iota^* h - h) satisfies d psi = w."""
    for vec in restriction_kernel(m, mu, n):
        w = cochain_from_vector(mu, n, vec)
        res = normalize_cocycle(mu, w)
        zeta = res.corrected
        if pi_pullback(iota_pullback(zeta, m), mu) != zeta:
            return False
        h = res.h
        psi = (pi_pullback(iota_pullback(h, m), mu) - h).scale(res.sign)
        if hoch_differential(mu, psi) != w:
            return False
    return True


# -- stability ------------------------------------------------------------------


@dataclass
class StabilityVerdict:
    stable: bool
    condition: str | None = None
    degree: int | None = None
    witness: dict | None = None

    def to_json(self):
        return {"stable": self.stable, "condition": self.condition, "degree": self.degree,
                "witness": self.witness}


def _derived(f: HochCochain, kind, i=None, b=None):
    """The four constructions of the stability condition applied to f."""
    m = f.module
    a = m.algebra
    n = f.degree
    norm = m.field.norm
    if kind == "evaluation":
        out = {}
        for t in tuples(a, n - 1):
            out[t] = f.values[t[:i] + (b,) + t[i:]]
        return HochCochain(m, n - 1, out)
    out = {}
    for t in tuples(a, n + 1):
        if kind == "merge":
            args = [a.basis(x) for x in t]
            merged = args[:i] + [a.product(args[i], args[i + 1])] + args[i + 2:]
            out[t] = f.evaluate(*merged)
        elif kind == "left":
            out[t] = m.act_left(a.basis(t[0]), f.values[t[1:]])
        else:
            out[t] = m.act_right(f.values[t[:n]], a.basis(t[n]))
        out[t] = tuple(norm(x) for x in out[t])
    return HochCochain(m, n + 1, out)


def check_stability(subspace: dict, m: BimodulePresentation) -> StabilityVerdict:
    """Closure of ``{degree: [cochains]}`` under evaluation, merge and the two
    multiplications.  A construction is checked only when its target degree
    is present in ``subspace``."""
    from .linalg import in_span

    def spanned(k):
        vecs = [g.vector() for g in subspace[k]]
        size = m.algebra.dim ** k * m.dim
        if not vecs:
            return Matrix.zeros(m.field, size, 0)
        return Matrix.from_columns(m.field, vecs, nrows=size)

    spans = {k: spanned(k) for k in subspace}
    a = m.algebra
    for n in sorted(subspace):
        for idx, f in enumerate(subspace[n]):
            cands = []
            if n - 1 in spans and n >= 1:
                for i in range(n):
                    for b in range(a.dim):
                        cands.append(("evaluation", n - 1, {"slot": i + 1, "b": b}, _derived(f, "evaluation", i, b)))
            if n + 1 in spans:
                for i in range(n):
                    cands.append(("merge", n + 1, {"slot": i + 1}, _derived(f, "merge", i)))
                cands.append(("left", n + 1, {}, _derived(f, "left")))
                cands.append(("right", n + 1, {}, _derived(f, "right")))
            for cond, k, info, g in cands:
                if not in_span(spans[k], g.vector()):
                    info = dict(info, cochain_degree=n, cochain_index=idx)
                    return StabilityVerdict(False, cond, k, info)
    return StabilityVerdict(True)
