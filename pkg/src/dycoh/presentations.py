"""
Finite k-linear semigroupal categories and functors given by structure constants.

A :class:`CatPresentation` lists objects, the object product, hom-space
dimensions, coordinates of identities, and the structure constants of
composition and of the tensor product of morphisms.  Morphisms are coordinate
tuples in the chosen hom bases.  All axiom checks enumerate basis tuples; by
multilinearity of composition and tensor product this is complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import (ClosureError, FieldMismatchError, GroupTableError, StrictnessError,
                     StructuralError, UnitalizationError)
from .linalg import FieldSpec, Matrix, solve

UNIT_NAME = "1"


def _zero(field, n):
    return (field.zero,) * n


def _basis(field, n, i):
    z, o = field.zero, field.one
    return tuple(o if j == i else z for j in range(n))


def _bilinear(field, table, f, g, out_dim):
    """Evaluate structure constants ``table[i][j]`` on coordinate vectors f, g."""
    if table is None:
        return _zero(field, out_dim)
    acc = [0] * out_dim
    for i, a in enumerate(f):
        if not a:
            continue
        row = table[i]
        for j, b in enumerate(g):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(row[j]):
                if c:
                    acc[k] += ab * c
    norm = field.norm
    return tuple(norm(v) for v in acc)


@dataclass(frozen=True, eq=False)
class CatPresentation:
    """A finite k-linear semigroupal category.

    ``compose[(x, y, z)][i][j]`` holds the coordinates of ``g_j o f_i`` in
    Hom(x, z) for basis ``f_i`` of Hom(x, y) and ``g_j`` of Hom(y, z).
    ``tensor_mor[(x, x2, y, y2)][i][j]`` holds ``f_i (x) g_j`` in
    Hom(x (x) y, x2 (x) y2).  Missing keys mean all-zero constants.
    """

    field: FieldSpec
    objects: tuple
    tensor_table: tuple
    hom_dim: tuple
    identity_coords: tuple
    compose: dict
    tensor_mor: dict
    associator: dict | None = None
    unit: int | None = None
    unit_adjoined: bool = False
    name: str = "C"
    hom_names: dict = dc_field(default_factory=dict)

    # -- basic accessors ------------------------------------------------

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def is_strict(self):
        return self.associator is None

    def index(self, name):
        try:
            return self.objects.index(name)
        except ValueError:
            raise KeyError(f"{self.name}: no object named {name!r}") from None

    def dim(self, x, y):
        return self.hom_dim[x][y]

    def tensor(self, x, y):
        return self.tensor_table[x][y]

    def tensor_all(self, xs):
        """Left-folded object product; for strict input the bracketing is irrelevant."""
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.tensor_table[acc][x]
        return acc

    def identity(self, x):
        return self.identity_coords[x]

    def zero(self, x, y):
        return _zero(self.field, self.hom_dim[x][y])

    def basis(self, x, y, i):
        return _basis(self.field, self.hom_dim[x][y], i)

    def basis_name(self, x, y, i):
        names = self.hom_names.get((x, y))
        if names:
            return names[i]
        return f"{self.objects[x]}->{self.objects[y]}#{i}"

    def compose_mor(self, x, y, z, f, g):
        """``g o f`` for f in Hom(x, y), g in Hom(y, z)."""
        return _bilinear(self.field, self.compose.get((x, y, z)), f, g, self.hom_dim[x][z])

    def tensor_morphisms(self, x, x2, y, y2, f, g):
        """``f (x) g`` for f in Hom(x, x2), g in Hom(y, y2)."""
        out = self.hom_dim[self.tensor_table[x][y]][self.tensor_table[x2][y2]]
        return _bilinear(self.field, self.tensor_mor.get((x, x2, y, y2)), f, g, out)

    def add(self, f, g):
        norm = self.field.norm
        return tuple(norm(a + b) for a, b in zip(f, g))

    def sub(self, f, g):
        norm = self.field.norm
        return tuple(norm(a - b) for a, b in zip(f, g))

    def scale(self, c, f):
        norm = self.field.norm
        return tuple(norm(c * a) for a in f)

    def assoc(self, x, y, z):
        """Associator component Hom(x(yz), (xy)z); identity coordinates when strict."""
        if self.associator is None:
            return self.identity(self.tensor_all((x, y, z)))
        return self.associator[(x, y, z)]

    @cached_property
    def identity_functor(self):
        n = self.n_objects
        maps = {(x, y): Matrix.identity(self.field, self.hom_dim[x][y])
                for x in range(n) for y in range(n)}
        return FunctorPresentation(self, self, tuple(range(n)), maps, None, name=f"id:{self.name}")

    def describe(self):
        return {"name": self.name, "field": str(self.field), "objects": list(self.objects),
                "strict": self.is_strict,
                "unit": None if self.unit is None else self.objects[self.unit],
                "unit_adjoined": self.unit_adjoined}


@dataclass(frozen=True, eq=False)
class FunctorPresentation:
    """A k-linear semigroupal functor; ``phi`` absent means strict."""

    source: CatPresentation
    target: CatPresentation
    object_map: tuple
    hom_maps: dict
    phi: dict | None = None
    name: str = "F"

    @property
    def is_strict(self):
        return self.phi is None

    @cached_property
    def is_identity(self):
        return (self.source is self.target and self.phi is None
                and self.object_map == tuple(range(self.source.n_objects))
                and all(m == Matrix.identity(self.source.field, m.nrows)
                        for m in self.hom_maps.values()))

    def obj(self, x):
        return self.object_map[x]

    def map_mor(self, x, y, f):
        return self.hom_maps[(x, y)].apply(f)

    def phi_at(self, x, y):
        """Structure isomorphism F(x) (x) F(y) -> F(x (x) y); identity when strict."""
        if self.phi is None:
            return self.target.identity(self.object_map[self.source.tensor(x, y)])
        return self.phi[(x, y)]


# -- validation reports -------------------------------------------------------


@dataclass
class Violation:
    axiom: str
    objects: tuple
    morphisms: tuple
    lhs: tuple
    rhs: tuple

    def to_json(self, field):
        return {"axiom": self.axiom, "objects": list(self.objects), "morphisms": list(self.morphisms),
                "lhs": [_fmt(field, x) for x in self.lhs], "rhs": [_fmt(field, x) for x in self.rhs]}


def _fmt(field, x):
    return x if isinstance(x, str) else field.fmt(x)


@dataclass
class ValidationReport:
    kind: str
    subject: str
    field: FieldSpec
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def axioms_violated(self):
        return sorted({v.axiom for v in self.violations})

    def to_json(self):
        return {"kind": self.kind, "subject": self.subject, "valid": self.ok,
                "violations": [v.to_json(self.field) for v in self.violations]}


class _Recorder:
    """Collects violations, keeping at most ``limit`` witnesses per axiom."""

    def __init__(self, report, limit):
        self.report = report
        self.limit = limit
        self.counts = {}

    def check(self, axiom, lhs, rhs, objects, morphisms):
        if lhs == rhs:
            return True
        n = self.counts.get(axiom, 0)
        if self.limit is None or n < self.limit:
            self.report.violations.append(Violation(axiom, tuple(objects), tuple(morphisms), lhs, rhs))
        self.counts[axiom] = n + 1
        return False


# -- structural checks --------------------------------------------------------


def check_structure(c: CatPresentation):
    """Raise :class:`StructuralError` naming the first malformed table."""
    n = c.n_objects
    if len(set(c.objects)) != n:
        raise StructuralError("objects", "duplicate object identifiers")
    if len(c.tensor_table) != n or any(len(r) != n for r in c.tensor_table):
        raise StructuralError("tensor_table", f"expected a {n}x{n} table")
    if any(not (0 <= v < n) for r in c.tensor_table for v in r):
        raise StructuralError("tensor_table", "entry outside the object range")
    if len(c.hom_dim) != n or any(len(r) != n for r in c.hom_dim):
        raise StructuralError("hom_dim", f"expected a {n}x{n} table")
    if any(d < 0 for r in c.hom_dim for d in r):
        raise StructuralError("hom_dim", "negative dimension")
    if len(c.identity_coords) != n:
        raise StructuralError("identity_coords", "one identity per object required")
    for x in range(n):
        if len(c.identity_coords[x]) != c.hom_dim[x][x]:
            raise StructuralError("identity_coords", f"identity of {c.objects[x]!r} has wrong length")
    for (x, y, z), tab in c.compose.items():
        if len(tab) != c.hom_dim[x][y] or any(len(r) != c.hom_dim[y][z] for r in tab) or any(
                len(v) != c.hom_dim[x][z] for r in tab for v in r):
            raise StructuralError("compose", f"entry {c.objects[x]},{c.objects[y]},{c.objects[z]} has wrong shape")
    for (x, x2, y, y2), tab in c.tensor_mor.items():
        out = c.hom_dim[c.tensor(x, y)][c.tensor(x2, y2)]
        if len(tab) != c.hom_dim[x][x2] or any(len(r) != c.hom_dim[y][y2] for r in tab) or any(
                len(v) != out for r in tab for v in r):
            raise StructuralError("tensor_mor", f"entry for {c.objects[x]}->{c.objects[x2]} (x) "
                                                f"{c.objects[y]}->{c.objects[y2]} has wrong shape")
    if c.associator is not None:
        for x, y, z in itertools.product(range(n), repeat=3):
            a = c.associator.get((x, y, z))
            src = c.tensor(x, c.tensor(y, z))
            tgt = c.tensor(c.tensor(x, y), z)
            if a is None or len(a) != c.hom_dim[src][tgt]:
                raise StructuralError("associator", f"missing or misshapen component at "
                                                    f"{c.objects[x]},{c.objects[y]},{c.objects[z]}")
    if c.unit is not None and not (0 <= c.unit < n):
        raise StructuralError("unit", "unit index outside the object range")


def _check_functor_structure(f: FunctorPresentation):
    s, t = f.source, f.target
    if len(f.object_map) != s.n_objects or any(not (0 <= v < t.n_objects) for v in f.object_map):
        raise StructuralError("object_map", "must send every source object to a target object")
    for x in range(s.n_objects):
        for y in range(s.n_objects):
            m = f.hom_maps.get((x, y))
            want = (t.dim(f.obj(x), f.obj(y)), s.dim(x, y))
            if m is None or m.shape != want:
                raise StructuralError("hom_maps", f"map on Hom({s.objects[x]}, {s.objects[y]}) must be "
                                                  f"{want[0]}x{want[1]}")
            if m.field != s.field:
                raise FieldMismatchError("hom map over a different field")
    if f.phi is not None:
        for x in range(s.n_objects):
            for y in range(s.n_objects):
                p = f.phi.get((x, y))
                d = t.dim(t.tensor(f.obj(x), f.obj(y)), f.obj(s.tensor(x, y)))
                if p is None or len(p) != d:
                    raise StructuralError("phi", f"missing or misshapen component at "
                                                 f"{s.objects[x]},{s.objects[y]}")


def _invertible_morphism(c, x, y, a):
    """Whether a in Hom(x, y) has a two-sided inverse (solved as a linear system)."""
    dyx = c.dim(y, x)
    if dyx == 0:
        return c.dim(x, x) == 0 and c.dim(y, y) == 0
    cols = []
    for i in range(dyx):
        b = c.basis(y, x, i)
        cols.append(c.compose_mor(y, x, y, b, a) + c.compose_mor(x, y, x, a, b))
    rhs = c.identity(y) + c.identity(x)
    m = Matrix.from_columns(c.field, cols, nrows=len(rhs))
    return solve(m, rhs) is not None


# -- category validation ------------------------------------------------------


def validate_category(c: CatPresentation, limit=20) -> ValidationReport:
    """Check composition, bifunctoriality, associativity/pentagon and unit axioms.

    Each violation carries the object tuple, basis morphism names and both
    sides' coordinates.  At most ``limit`` witnesses per axiom are kept.
    """
    check_structure(c)
    report = ValidationReport("category", c.name, c.field)
    rec = _Recorder(report, limit)
    n = c.n_objects
    objs = c.objects
    D = c.hom_dim
    rng = range(n)
    bname = c.basis_name

    for w, x, y, z in itertools.product(rng, repeat=4):
        if not (D[w][x] and D[x][y] and D[y][z]):
            continue
        for i in range(D[w][x]):
            f = c.basis(w, x, i)
            for j in range(D[x][y]):
                g = c.basis(x, y, j)
                gf = c.compose_mor(w, x, y, f, g)
                for k in range(D[y][z]):
                    h = c.basis(y, z, k)
                    lhs = c.compose_mor(w, y, z, gf, h)
                    rhs = c.compose_mor(w, x, z, f, c.compose_mor(x, y, z, g, h))
                    rec.check("composition_associativity", lhs, rhs, (objs[w], objs[x], objs[y], objs[z]),
                              (bname(w, x, i), bname(x, y, j), bname(y, z, k)))

    for x, y in itertools.product(rng, repeat=2):
        for i in range(D[x][y]):
            f = c.basis(x, y, i)
            rec.check("identity_left", c.compose_mor(x, y, y, f, c.identity(y)), f, (objs[x], objs[y]),
                      (bname(x, y, i),))
            rec.check("identity_right", c.compose_mor(x, x, y, c.identity(x), f), f, (objs[x], objs[y]),
                      (bname(x, y, i),))

    for x, y in itertools.product(rng, repeat=2):
        xy = c.tensor(x, y)
        lhs = c.tensor_morphisms(x, x, y, y, c.identity(x), c.identity(y))
        rec.check("tensor_identity", lhs, c.identity(xy), (objs[x], objs[y]), ("id", "id"))

    _check_interchange(c, rec)

    if c.is_strict:
        _check_strict_associativity(c, rec)
    else:
        _check_associator(c, rec)

    if c.unit is not None and c.is_strict:
        u = c.unit
        for x in rng:
            rec.check("unit_objects", (objs[c.tensor(u, x)], objs[c.tensor(x, u)]), (objs[x], objs[x]),
                      (objs[u], objs[x]), ())
        for x, y in itertools.product(rng, repeat=2):
            if c.tensor(u, x) != x or c.tensor(u, y) != y or c.tensor(x, u) != x or c.tensor(y, u) != y:
                continue
            for i in range(D[x][y]):
                f = c.basis(x, y, i)
                rec.check("unit_morphisms", c.tensor_morphisms(u, u, x, y, c.identity(u), f), f,
                          (objs[u], objs[x], objs[y]), ("id", bname(x, y, i)))
                rec.check("unit_morphisms", c.tensor_morphisms(x, y, u, u, f, c.identity(u)), f,
                          (objs[x], objs[y], objs[u]), (bname(x, y, i), "id"))
    return report


def _check_interchange(c, rec):
    n, D, objs, bname = c.n_objects, c.hom_dim, c.objects, c.basis_name
    pairs = [(x, x2) for x in range(n) for x2 in range(n) if D[x][x2]]
    chains = [(x, x2, x3) for (x, x2) in pairs for x3 in range(n) if D[x2][x3]]
    for (x, x1, x2), (y, y1, y2) in itertools.product(chains, repeat=2):
        for i, j in itertools.product(range(D[x][x1]), range(D[x1][x2])):
            f, f2 = c.basis(x, x1, i), c.basis(x1, x2, j)
            ff = c.compose_mor(x, x1, x2, f, f2)
            for k, l in itertools.product(range(D[y][y1]), range(D[y1][y2])):
                g, g2 = c.basis(y, y1, k), c.basis(y1, y2, l)
                gg = c.compose_mor(y, y1, y2, g, g2)
                lhs = c.tensor_morphisms(x, x2, y, y2, ff, gg)
                a = c.tensor_morphisms(x, x1, y, y1, f, g)
                b = c.tensor_morphisms(x1, x2, y1, y2, f2, g2)
                rhs = c.compose_mor(c.tensor(x, y), c.tensor(x1, y1), c.tensor(x2, y2), a, b)
                rec.check("interchange", lhs, rhs,
                          (objs[x], objs[x1], objs[x2], objs[y], objs[y1], objs[y2]),
                          (bname(x, x1, i), bname(x1, x2, j), bname(y, y1, k), bname(y1, y2, l)))


def _check_strict_associativity(c, rec):
    n, D, objs, bname = c.n_objects, c.hom_dim, c.objects, c.basis_name
    T = c.tensor
    bad = set()
    for x, y, z in itertools.product(range(n), repeat=3):
        lhs, rhs = T(T(x, y), z), T(x, T(y, z))
        if not rec.check("associativity", (objs[lhs],), (objs[rhs],), (objs[x], objs[y], objs[z]), ()):
            bad.add((x, y, z))
    # with a = id, naturality of the associator is associativity of (x) on morphisms
    pairs = [(x, x2) for x in range(n) for x2 in range(n) if D[x][x2]]
    for (x, x2), (y, y2), (z, z2) in itertools.product(pairs, repeat=3):
        if (x, y, z) in bad or (x2, y2, z2) in bad:
            continue
        for i, j, k in itertools.product(range(D[x][x2]), range(D[y][y2]), range(D[z][z2])):
            f, g, h = c.basis(x, x2, i), c.basis(y, y2, j), c.basis(z, z2, k)
            lhs = c.tensor_morphisms(T(x, y), T(x2, y2), z, z2, c.tensor_morphisms(x, x2, y, y2, f, g), h)
            rhs = c.tensor_morphisms(x, x2, T(y, z), T(y2, z2), f, c.tensor_morphisms(y, y2, z, z2, g, h))
            rec.check("associativity_morphisms", lhs, rhs, (objs[x], objs[y], objs[z]),
                      (bname(x, x2, i), bname(y, y2, j), bname(z, z2, k)))


def _check_associator(c, rec):
    n, D, objs, bname = c.n_objects, c.hom_dim, c.objects, c.basis_name
    T = c.tensor
    for x, y, z in itertools.product(range(n), repeat=3):
        src, tgt = T(x, T(y, z)), T(T(x, y), z)
        if not _invertible_morphism(c, src, tgt, c.assoc(x, y, z)):
            rec.check("associator_invertible", ("singular",), ("invertible",), (objs[x], objs[y], objs[z]), ())
    pairs = [(x, x2) for x in range(n) for x2 in range(n) if D[x][x2]]
    for (x, x2), (y, y2), (z, z2) in itertools.product(pairs, repeat=3):
        for i, j, k in itertools.product(range(D[x][x2]), range(D[y][y2]), range(D[z][z2])):
            f, g, h = c.basis(x, x2, i), c.basis(y, y2, j), c.basis(z, z2, k)
            f_gh = c.tensor_morphisms(x, x2, T(y, z), T(y2, z2), f, c.tensor_morphisms(y, y2, z, z2, g, h))
            fg_h = c.tensor_morphisms(T(x, y), T(x2, y2), z, z2, c.tensor_morphisms(x, x2, y, y2, f, g), h)
            lhs = c.compose_mor(T(x, T(y, z)), T(x2, T(y2, z2)), T(T(x2, y2), z2), f_gh, c.assoc(x2, y2, z2))
            rhs = c.compose_mor(T(x, T(y, z)), T(T(x, y), z), T(T(x2, y2), z2), c.assoc(x, y, z), fg_h)
            rec.check("associator_naturality", lhs, rhs, (objs[x], objs[y], objs[z]),
                      (bname(x, x2, i), bname(y, y2, j), bname(z, z2, k)))
    for w, x, y, z in itertools.product(range(n), repeat=4):
        # a_{wx,y,z} o a_{w,x,yz}  ==  (a_{w,x,y} (x) id_z) o a_{w,xy,z} o (id_w (x) a_{x,y,z})
        s0 = T(w, T(x, T(y, z)))
        m1 = T(T(w, x), T(y, z))
        t0 = T(T(T(w, x), y), z)
        lhs = c.compose_mor(s0, m1, t0, c.assoc(w, x, T(y, z)), c.assoc(T(w, x), y, z))
        r1 = c.tensor_morphisms(w, w, T(x, T(y, z)), T(T(x, y), z), c.identity(w), c.assoc(x, y, z))
        m2 = T(w, T(T(x, y), z))
        m3 = T(T(w, T(x, y)), z)
        r2 = c.compose_mor(s0, m2, m3, r1, c.assoc(w, T(x, y), z))
        r3 = c.tensor_morphisms(T(w, T(x, y)), T(T(w, x), y), z, z, c.assoc(w, x, y), c.identity(z))
        rhs = c.compose_mor(s0, m3, t0, r2, r3)
        rec.check("pentagon", lhs, rhs, (objs[w], objs[x], objs[y], objs[z]), ())


# -- functor validation -------------------------------------------------------


def validate_functor(f: FunctorPresentation, limit=20) -> ValidationReport:
    """Check identities, composition, tensor compatibility (or naturality of
    the structure isomorphism together with the hexagon axiom)."""
    s, t = f.source, f.target
    if s.field != t.field:
        raise FieldMismatchError(f"functor {f.name}: source over {s.field}, target over {t.field}")
    check_structure(s)
    check_structure(t)
    _check_functor_structure(f)
    report = ValidationReport("functor", f.name, s.field)
    rec = _Recorder(report, limit)
    n = s.n_objects
    D, objs, bname = s.hom_dim, s.objects, s.basis_name
    F = f.obj

    for x in range(n):
        rec.check("preserves_identity", f.map_mor(x, x, s.identity(x)), t.identity(F(x)), (objs[x],), ("id",))

    for x, y, z in itertools.product(range(n), repeat=3):
        if not (D[x][y] and D[y][z]):
            continue
        for i, j in itertools.product(range(D[x][y]), range(D[y][z])):
            a, b = s.basis(x, y, i), s.basis(y, z, j)
            lhs = f.map_mor(x, z, s.compose_mor(x, y, z, a, b))
            rhs = t.compose_mor(F(x), F(y), F(z), f.map_mor(x, y, a), f.map_mor(y, z, b))
            rec.check("preserves_composition", lhs, rhs, (objs[x], objs[y], objs[z]),
                      (bname(x, y, i), bname(y, z, j)))

    pairs = [(x, x2) for x in range(n) for x2 in range(n) if D[x][x2]]
    if f.is_strict:
        homomorphic = set()
        for x, y in itertools.product(range(n), repeat=2):
            lhs, rhs = F(s.tensor(x, y)), t.tensor(F(x), F(y))
            if rec.check("strict_objects", (t.objects[lhs],), (t.objects[rhs],), (objs[x], objs[y]), ()):
                homomorphic.add((x, y))
        for (x, x2), (y, y2) in itertools.product(pairs, repeat=2):
            if (x, y) not in homomorphic or (x2, y2) not in homomorphic:
                continue
            for i, j in itertools.product(range(D[x][x2]), range(D[y][y2])):
                a, b = s.basis(x, x2, i), s.basis(y, y2, j)
                lhs = f.map_mor(s.tensor(x, y), s.tensor(x2, y2), s.tensor_morphisms(x, x2, y, y2, a, b))
                rhs = t.tensor_morphisms(F(x), F(x2), F(y), F(y2), f.map_mor(x, x2, a), f.map_mor(y, y2, b))
                rec.check("strict_tensor", lhs, rhs, (objs[x], objs[y]), (bname(x, x2, i), bname(y, y2, j)))
        return report

    T, Tt = s.tensor, t.tensor
    for x, y in itertools.product(range(n), repeat=2):
        if not _invertible_morphism(t, Tt(F(x), F(y)), F(T(x, y)), f.phi_at(x, y)):
            rec.check("phi_invertible", ("singular",), ("invertible",), (objs[x], objs[y]), ())
    for (x, x2), (y, y2) in itertools.product(pairs, repeat=2):
        for i, j in itertools.product(range(D[x][x2]), range(D[y][y2])):
            a, b = s.basis(x, x2, i), s.basis(y, y2, j)
            FaFb = t.tensor_morphisms(F(x), F(x2), F(y), F(y2), f.map_mor(x, x2, a), f.map_mor(y, y2, b))
            Fab = f.map_mor(T(x, y), T(x2, y2), s.tensor_morphisms(x, x2, y, y2, a, b))
            lhs = t.compose_mor(Tt(F(x), F(y)), Tt(F(x2), F(y2)), F(T(x2, y2)), FaFb, f.phi_at(x2, y2))
            rhs = t.compose_mor(Tt(F(x), F(y)), F(T(x, y)), F(T(x2, y2)), f.phi_at(x, y), Fab)
            rec.check("phi_naturality", lhs, rhs, (objs[x], objs[y]), (bname(x, x2, i), bname(y, y2, j)))
    for x, y, z in itertools.product(range(n), repeat=3):
        # F(a) o phi_{x,yz} o (id (x) phi_{y,z})  ==  phi_{xy,z} o (phi_{x,y} (x) id) o b
        fx, fy, fz = F(x), F(y), F(z)
        s0 = Tt(fx, Tt(fy, fz))
        l1 = t.tensor_morphisms(fx, fx, Tt(fy, fz), F(T(y, z)), t.identity(fx), f.phi_at(y, z))
        m1 = Tt(fx, F(T(y, z)))
        l2 = t.compose_mor(s0, m1, F(T(x, T(y, z))), l1, f.phi_at(x, T(y, z)))
        Fa = f.map_mor(T(x, T(y, z)), T(T(x, y), z), s.assoc(x, y, z))
        lhs = t.compose_mor(s0, F(T(x, T(y, z))), F(T(T(x, y), z)), l2, Fa)
        m2 = Tt(Tt(fx, fy), fz)
        r1 = t.tensor_morphisms(Tt(fx, fy), F(T(x, y)), fz, fz, f.phi_at(x, y), t.identity(fz))
        m3 = Tt(F(T(x, y)), fz)
        r2 = t.compose_mor(s0, m2, m3, t.assoc(fx, fy, fz), r1)
        rhs = t.compose_mor(s0, m3, F(T(T(x, y), z)), r2, f.phi_at(T(x, y), z))
        rec.check("hexagon", lhs, rhs, (objs[x], objs[y], objs[z]), ())
    return report


# -- constructors -------------------------------------------------------------


def build_category(field, objects, tensor_table, hom_dim, identity_coords, compose=None, tensor_mor=None,
                   associator=None, unit=None, unit_adjoined=False, name="C", hom_names=None):
    """Assemble a presentation, coercing every scalar into ``field``.

    ``compose`` / ``tensor_mor`` may be sparse: ``{key: {(i, j): coords}}``
    dictionaries are expanded to dense tables with zero defaults.
    """
    objects = tuple(objects)
    n = len(objects)
    hom_dim = tuple(tuple(r) for r in hom_dim)
    tensor_table = tuple(tuple(r) for r in tensor_table)

    def dense(table, d1, d2, dout):
        if isinstance(table, dict):
            z = _zero(field, dout)
            rows = [[z] * d2 for _ in range(d1)]
            for (i, j), v in table.items():
                rows[i][j] = field.vector(v)
            return tuple(tuple(r) for r in rows)
        return tuple(tuple(field.vector(v) for v in r) for r in table)

    comp = {}
    for (x, y, z), tab in (compose or {}).items():
        comp[(x, y, z)] = dense(tab, hom_dim[x][y], hom_dim[y][z], hom_dim[x][z])
    tens = {}
    for (x, x2, y, y2), tab in (tensor_mor or {}).items():
        out = hom_dim[tensor_table[x][y]][tensor_table[x2][y2]]
        tens[(x, x2, y, y2)] = dense(tab, hom_dim[x][x2], hom_dim[y][y2], out)
    assoc = None
    if associator is not None:
        assoc = {k: field.vector(v) for k, v in associator.items()}
    c = CatPresentation(field, objects, tensor_table, hom_dim, tuple(field.vector(v) for v in identity_coords),
                        comp, tens, assoc, unit, unit_adjoined, name, dict(hom_names or {}))
    check_structure(c)
    return c


def check_group_table(table):
    """Validate a finite group multiplication table; return the identity index."""
    n = len(table)
    if n == 0 or any(len(r) != n for r in table) or any(not (0 <= v < n) for r in table for v in r):
        raise GroupTableError("group table must be a square table of element indices")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupTableError(f"not associative at ({a}, {b}, {c})")
    units = [e for e in range(n) if all(table[e][a] == a and table[a][e] == a for a in range(n))]
    if not units:
        raise GroupTableError("no identity element")
    e = units[0]
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise GroupTableError(f"element {a} has no inverse")
    return e


def cyclic_group_table(n):
    return tuple(tuple((a + b) % n for b in range(n)) for a in range(n))


def product_group_table(t1, t2):
    n1, n2 = len(t1), len(t2)
    idx = lambda a, b: a * n2 + b  # noqa: E731
    return tuple(tuple(idx(t1[a1][b1], t2[a2][b2]) for b1 in range(n1) for b2 in range(n2))
                 for a1 in range(n1) for a2 in range(n2))


def make_group_category(group_table, field, names=None, name=None):
    """Skeletal strict presentation of Vec_G: one object per group element,
    End(x) = k.id, no other morphisms, tensor = group product."""
    check_group_table(group_table)
    n = len(group_table)
    names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
    one = (field.one,)
    hom_dim = [[1 if x == y else 0 for y in range(n)] for x in range(n)]
    compose = {(x, x, x): ((one,),) for x in range(n)}
    tensor_mor = {(x, x, y, y): ((one,),) for x in range(n) for y in range(n)}
    return build_category(field, names, group_table, hom_dim, [one] * n, compose, tensor_mor,
                          name=name or f"Vec[{n}]", hom_names={(x, x): (f"id_{names[x]}",) for x in range(n)})


def _unit_name(objects):
    name = UNIT_NAME
    while name in objects:
        name += "'"
    return name


def unitalize_category(c: CatPresentation, name=None) -> CatPresentation:
    """Freely adjoin a strict unit object with End = k.id and zero homs to and from it."""
    if c.unit_adjoined:
        raise UnitalizationError(f"{c.name} already has a freely adjoined unit; refusing to unitalize twice")
    if not c.is_strict:
        raise StrictnessError("unitalization is implemented for strict presentations only")
    n = c.n_objects
    u = n
    objects = c.objects + (_unit_name(c.objects),)
    tensor = [list(r) + [x] for x, r in enumerate(c.tensor_table)]
    tensor.append(list(range(n)) + [u])
    hom_dim = [list(r) + [0] for r in c.hom_dim] + [[0] * n + [1]]
    one = (c.field.one,)
    ident = list(c.identity_coords) + [one]
    compose = dict(c.compose)
    compose[(u, u, u)] = ((one,),)
    tensor_mor = dict(c.tensor_mor)
    for x, x2 in itertools.product(range(n), repeat=2):
        d = c.dim(x, x2)
        if not d:
            continue
        # id_1 (x) f = f = f (x) id_1
        eye = tuple(c.basis(x, x2, i) for i in range(d))
        tensor_mor[(u, u, x, x2)] = (eye,)
        tensor_mor[(x, x2, u, u)] = tuple((e,) for e in eye)
    tensor_mor[(u, u, u, u)] = ((one,),)
    hom_names = dict(c.hom_names)
    hom_names[(u, u)] = (f"id_{objects[u]}",)
    return build_category(c.field, objects, tensor, hom_dim, ident, compose, tensor_mor, None, u, True,
                          name or f"{c.name}^u", hom_names)


def full_subcategory(c: CatPresentation, subset, name=None):
    """Full subcategory on ``subset`` (indices), keeping declaration order."""
    keep = sorted(set(subset))
    pos = {x: i for i, x in enumerate(keep)}
    for x, y in itertools.product(keep, repeat=2):
        if c.tensor(x, y) not in pos:
            raise ClosureError(f"{c.objects[x]} (x) {c.objects[y]} = {c.objects[c.tensor(x, y)]} "
                               f"is outside the subset", witness=(c.objects[x], c.objects[y]))
    objects = tuple(c.objects[x] for x in keep)
    tensor = [[pos[c.tensor(x, y)] for y in keep] for x in keep]
    hom_dim = [[c.dim(x, y) for y in keep] for x in keep]
    compose = {(pos[x], pos[y], pos[z]): t for (x, y, z), t in c.compose.items()
               if x in pos and y in pos and z in pos}
    tensor_mor = {(pos[a], pos[b], pos[d], pos[e]): t for (a, b, d, e), t in c.tensor_mor.items()
                  if a in pos and b in pos and d in pos and e in pos}
    unit = pos.get(c.unit) if c.unit is not None else None
    hom_names = {(pos[x], pos[y]): v for (x, y), v in c.hom_names.items() if x in pos and y in pos}
    return CatPresentation(c.field, objects, tuple(tuple(r) for r in tensor), tuple(tuple(r) for r in hom_dim),
                           tuple(c.identity_coords[x] for x in keep), compose, tensor_mor, None, unit,
                           False, name or f"{c.name}|{{{','.join(objects)}}}", hom_names)


def inclusion_functor(c: CatPresentation, subset, name=None) -> FunctorPresentation:
    """Strict inclusion of the full subcategory on ``subset`` (indices or names)."""
    if not c.is_strict:
        raise StrictnessError("inclusion functors are built for strict presentations")
    idx = sorted({c.index(s) if isinstance(s, str) else s for s in subset})
    if idx == list(range(c.n_objects)):
        return c.identity_functor
    sub = full_subcategory(c, idx)
    maps = {}
    for i, x in enumerate(idx):
        for j, y in enumerate(idx):
            maps[(i, j)] = Matrix.identity(c.field, c.dim(x, y))
    return FunctorPresentation(sub, c, tuple(idx), maps, None, name=name or f"incl:{sub.name}")


def inclusion_by_names(source: CatPresentation, target: CatPresentation, name="incl"):
    """Strict functor sending each source object to the same-named target object
    with identity hom maps; used for C into its unitalization."""
    if source.field != target.field:
        raise FieldMismatchError("inclusion between categories over different fields")
    omap = tuple(target.index(o) for o in source.objects)
    maps = {}
    for x, y in itertools.product(range(source.n_objects), repeat=2):
        d = source.dim(x, y)
        if target.dim(omap[x], omap[y]) != d:
            raise StructuralError("hom_maps", f"Hom({source.objects[x]}, {source.objects[y]}) differs in "
                                              f"dimension between {source.name} and {target.name}")
        maps[(x, y)] = Matrix.identity(source.field, d)
    return FunctorPresentation(source, target, omap, maps, None, name=name)


def compose_functors(f: FunctorPresentation, g: FunctorPresentation, name=None) -> FunctorPresentation:
    """The composite ``g o f``."""
    if f.target is not g.source:
        raise StructuralError("functor", f"{g.name} does not start where {f.name} ends")
    s = f.source
    omap = tuple(g.obj(f.obj(x)) for x in range(s.n_objects))
    maps = {(x, y): g.hom_maps[(f.obj(x), f.obj(y))] @ f.hom_maps[(x, y)]
            for x in range(s.n_objects) for y in range(s.n_objects)}
    phi = None
    if not (f.is_strict and g.is_strict):
        t = g.target
        phi = {}
        for x, y in itertools.product(range(s.n_objects), repeat=2):
            fx, fy = f.obj(x), f.obj(y)
            gphi = g.phi_at(fx, fy)
            gfphi = g.map_mor(f.target.tensor(fx, fy), f.obj(s.tensor(x, y)), f.phi_at(x, y))
            phi[(x, y)] = t.compose_mor(t.tensor(g.obj(fx), g.obj(fy)), g.obj(f.target.tensor(fx, fy)),
                                        omap[s.tensor(x, y)], gphi, gfphi)
    return FunctorPresentation(s, g.target, omap, maps, phi, name=name or f"{g.name}.{f.name}")
