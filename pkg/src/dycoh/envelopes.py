"""
Extension of DY cochains to Karoubi and additive envelope objects.

The envelopes are never built as categories.  Their objects are evaluated on
demand: a Karoubi object is a pair (X, e) with e idempotent, and an additive
object is a finite list of summands.  A cochain of C extends uniquely to
tuples of such objects.  ``verify_envelope_invariance`` checks four things
against a generating set of envelope morphisms, by exact evaluation at
sampled tuples:

* restriction recovers the cochain;
* the extension is natural;
* the extension is the only natural solution;
* the extension commutes with the differential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dycomplex import DYCochain, get_complex
from .errors import BudgetError, ConsistencyError, DimensionError, PreconditionError, StrictnessError
from .linalg import Matrix, kernel_basis, rank, solve
from .presentations import CatPresentation
from .reports import TheoremReport

#: Above this many tuples the default sampler switches from exhaustive to cyclic.
EXHAUSTIVE_LIMIT = 64


@dataclass(frozen=True)
class KaroubiObject:
    base: int
    idem: tuple

    def label(self, c):
        return f"({c.objects[self.base]},[{' '.join(c.field.fmt(x) for x in self.idem)}])"


@dataclass(frozen=True)
class AdditiveObject:
    summands: tuple

    def __post_init__(self):
        if not self.summands:
            raise DimensionError("an additive object needs at least one summand")

    def label(self, c):
        return "[" + ",".join(c.objects[x] for x in self.summands) + "]"


def _compose(c, x, y, z, f, g):
    return c.compose_mor(x, y, z, f, g)


def _identity_cochain(eta):
    f = eta.functor
    if not f.is_identity:
        raise PreconditionError("envelope extensions are defined for cochains of an identity functor")
    if not f.source.is_strict:
        raise StrictnessError("envelope extensions need a strict presentation")
    return f.source


# -- Karoubi envelope ---------------------------------------------------------


def karoubi_object(c: CatPresentation, x, idem):
    idem = tuple(c.field(v) for v in idem)
    if len(idem) != c.dim(x, x):
        raise DimensionError("idempotent has the wrong length")
    if _compose(c, x, x, x, idem, idem) != idem:
        raise PreconditionError(f"{idem} is not idempotent in End({c.objects[x]})")
    return KaroubiObject(x, idem)


def karoubi_tensor(c: CatPresentation, x: KaroubiObject, y: KaroubiObject) -> KaroubiObject:
    """(X (x) Y, e_x (x) e_y)."""
    b = c.tensor(x.base, y.base)
    e = c.tensor_morphisms(x.base, x.base, y.base, y.base, x.idem, y.idem)
    if _compose(c, b, b, b, e, e) != e:
        raise ConsistencyError("tensor of idempotents is not idempotent; the interchange law fails upstream")
    return KaroubiObject(b, e)


def _karoubi_word(c, tup):
    acc = tup[0]
    for k in tup[1:]:
        acc = karoubi_tensor(c, acc, k)
    return acc


def extend_to_karoubi(eta: DYCochain, tup) -> tuple:
    """E o eta_{X1..Xn} o E with E = e1 (x) .. (x) en, checked equal to eta o E."""
    c = _identity_cochain(eta)
    if len(tup) != eta.degree:
        raise DimensionError(f"expected {eta.degree} Karoubi objects, got {len(tup)}")
    w = _karoubi_word(c, tup)
    p, E = w.base, w.idem
    v = eta.table[tuple(k.base for k in tup)]
    out = _compose(c, p, p, p, E, _compose(c, p, p, p, v, E))
    if out != _compose(c, p, p, p, E, v) or out != _compose(c, p, p, p, v, E):
        raise ConsistencyError("conjugation by the idempotent differs from one-sided composition")
    return out


def idempotents(c: CatPresentation, x, brute_force_limit=4096):
    """All idempotents of End(x) when feasible, else ``[0, id]``.

    Prime fields are searched exhaustively up to ``brute_force_limit``
    elements.  Over Q, two-dimensional endomorphism algebras k.id + k.t with
    t^2 = p.id + q.t are solved in closed form; larger ones return 0 and id.
    """
    field = c.field
    d = c.dim(x, x)
    zero, ident = c.zero(x, x), c.identity(x)
    if d == 0:
        return [zero]
    if field.is_prime_field and field.modulus ** d <= brute_force_limit:
        return [v for v in itertools.product(field.elements(), repeat=d)
                if _compose(c, x, x, x, v, v) == v]
    if d == 1 or d > 2:
        return [zero, ident]
    # two-dimensional: pick t outside k.id and write t^2 in the basis (id, t)
    t = next(c.basis(x, x, i) for i in range(d) if rank(Matrix.from_columns(field, [ident, c.basis(x, x, i)])) == 2)
    tt = _compose(c, x, x, x, t, t)
    pq = solve(Matrix.from_columns(field, [ident, t]), tt)
    if pq is None:
        return [zero, ident]
    p, q = pq
    out = [zero, ident]
    disc = q * q + 4 * p
    root = _rational_sqrt(disc)
    if disc and root is not None:
        for b in (1 / root, -1 / root):
            b = field(b)
            a = (1 - b * q) / 2
            out.append(tuple(field.norm(a * i + b * j) for i, j in zip(ident, t)))
    return sorted(set(out), key=out.index)


def _rational_sqrt(q):
    from fractions import Fraction
    from math import isqrt

    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def karoubi_pool(c: CatPresentation):
    return [KaroubiObject(x, e) for x in range(c.n_objects) for e in idempotents(c, x)]


# -- additive envelope --------------------------------------------------------


@dataclass(frozen=True)
class AddMor:
    """Morphism between additive objects; ``blocks[(i, j)]`` lies in Hom(src[i], tgt[j])."""

    src: tuple
    tgt: tuple
    blocks: tuple  # sorted ((i, j), coords) pairs with nonzero coords

    @staticmethod
    def make(src, tgt, blocks):
        return AddMor(tuple(src), tuple(tgt), tuple(sorted((k, v) for k, v in blocks.items() if any(v))))

    def block_dict(self):
        return dict(self.blocks)


def add_identity(c, obj):
    return AddMor.make(obj, obj, {(i, i): c.identity(x) for i, x in enumerate(obj)})


def add_compose(c, f: AddMor, g: AddMor) -> AddMor:
    """g o f."""
    if f.tgt != g.src:
        raise DimensionError("additive morphisms are not composable")
    norm = c.field.norm
    acc = {}
    gb = g.block_dict()
    for (i, j), fv in f.blocks:
        for k in range(len(g.tgt)):
            gv = gb.get((j, k))
            if gv is None:
                continue
            x, y, z = f.src[i], f.tgt[j], g.tgt[k]
            h = c.compose_mor(x, y, z, fv, gv)
            old = acc.get((i, k))
            acc[(i, k)] = h if old is None else tuple(norm(a + b) for a, b in zip(old, h))
    return AddMor.make(f.src, g.tgt, acc)


def add_tensor_obj(c, a, b):
    return tuple(c.tensor(x, y) for x in a for y in b)


def add_tensor(c, f: AddMor, g: AddMor) -> AddMor:
    """f (x) g with lexicographic distribution of summands."""
    nb, nb2 = len(g.src), len(g.tgt)
    out = {}
    for (i, i2), fv in f.blocks:
        for (j, j2), gv in g.blocks:
            v = c.tensor_morphisms(f.src[i], f.tgt[i2], g.src[j], g.tgt[j2], fv, gv)
            out[(i * nb + j, i2 * nb2 + j2)] = v
    return AddMor.make(add_tensor_obj(c, f.src, g.src), add_tensor_obj(c, f.tgt, g.tgt), out)


def _add_word(c, objs):
    acc = tuple(objs[0])
    for o in objs[1:]:
        acc = add_tensor_obj(c, acc, o)
    return acc


def extend_to_additive(eta: DYCochain, tup) -> AddMor:
    """Block-diagonal endomorphism with blocks eta at each summand tuple (lexicographic)."""
    c = _identity_cochain(eta)
    if len(tup) != eta.degree:
        raise DimensionError(f"expected {eta.degree} additive objects, got {len(tup)}")
    lists = [a.summands for a in tup]
    obj = _add_word(c, lists)
    blocks = {}
    for k, idx in enumerate(itertools.product(*[range(len(s)) for s in lists])):
        blocks[(k, k)] = eta.table[tuple(s[i] for s, i in zip(lists, idx))]
    return AddMor.make(obj, obj, blocks)


def additive_pool(c: CatPresentation, max_len=2):
    out = []
    for n in range(1, max_len + 1):
        out.extend(AdditiveObject(s) for s in itertools.product(range(c.n_objects), repeat=n))
    return out


# -- sampling -----------------------------------------------------------------


def default_samples(pool, n, limit=EXHAUSTIVE_LIMIT):
    """All n-tuples from the pool if there are at most ``limit``; otherwise each
    pool element in each slot with the other slots filled cyclically, plus the
    diagonal tuples."""
    if len(pool) ** n <= limit:
        return [tuple(t) for t in itertools.product(pool, repeat=n)]
    seen, out = set(), []
    for k, x in enumerate(pool):
        for slot in range(n):
            t = tuple(x if s == slot else pool[(k + s + 1) % len(pool)] for s in range(n))
            if t not in seen:
                seen.add(t)
                out.append(t)
        d = (x,) * n
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


# -- the check ----------------------------------------------------------------


def _karoubi_slot_morphism(c, tup, i, target, f):
    """e (x) .. (x) (e_y f e_x) (x) .. (x) e as a morphism between base words."""
    x = tup[i]
    phi = _compose(c, x.base, target.base, target.base, _compose(c, x.base, x.base, target.base, x.idem, f),
                   target.idem)
    src, tgt, mor = None, None, None
    for s, k in enumerate(tup):
        a, b, m = (x.base, target.base, phi) if s == i else (k.base, k.base, k.idem)
        if mor is None:
            src, tgt, mor = a, b, m
        else:
            mor = c.tensor_morphisms(src, tgt, a, b, mor, m)
            src, tgt = c.tensor(src, a), c.tensor(tgt, b)
    return src, tgt, mor


def _karoubi_checks(eta, samples, pool):
    c = eta.functor.source
    n = eta.degree
    issues = []
    for tup in samples:
        ext = extend_to_karoubi(eta, tup)
        p = _karoubi_word(c, tup).base
        for i in range(n):
            for y in pool:
                for b in range(c.dim(tup[i].base, y.base)):
                    t2 = tup[:i] + (y,) + tup[i + 1:]
                    src, tgt, g = _karoubi_slot_morphism(c, tup, i, y, c.basis(tup[i].base, y.base, b))
                    ext2 = extend_to_karoubi(eta, t2)
                    if _compose(c, src, tgt, tgt, g, ext2) != _compose(c, src, src, tgt, ext, g):
                        issues.append(("naturality", tup, i))
        if not _karoubi_unique(c, eta, tup, ext, p):
            issues.append(("uniqueness", tup, None))
    return issues


def _karoubi_unique(c, eta, tup, ext, p):
    """Solve x = E x E and x o E = E o eta for x in End(P); expect exactly ``ext``."""
    E = _karoubi_word(c, tup).idem
    v = eta.table[tuple(k.base for k in tup)]
    d = c.dim(p, p)
    field = c.field
    cols = []
    for a in range(d):
        x = c.basis(p, p, a)
        r1 = c.sub(x, _compose(c, p, p, p, E, _compose(c, p, p, p, x, E)))
        r2 = _compose(c, p, p, p, E, x)  # x o E
        cols.append(r1 + r2)
    rhs = c.zero(p, p) + _compose(c, p, p, p, v, E)  # E o eta
    if d == 0:
        return True
    A = Matrix.from_columns(field, cols, nrows=2 * d)
    sol = solve(A, rhs)
    return sol is not None and rank(A) == d and tuple(sol) == tuple(ext)


def _add_slot_morphism(c, tup, i, phi: AddMor):
    mor = None
    for s, k in enumerate(tup):
        m = phi if s == i else add_identity(c, k.summands)
        mor = m if mor is None else add_tensor(c, mor, m)
    return mor


def _additive_checks(eta, samples, pool):
    c = eta.functor.source
    n = eta.degree
    issues = []
    for tup in samples:
        ext = extend_to_additive(eta, tup)
        for i in range(n):
            a = tup[i].summands
            for y in pool:
                bsum = y.summands
                for r, s in itertools.product(range(len(a)), range(len(bsum))):
                    for b in range(c.dim(a[r], bsum[s])):
                        phi = AddMor.make(a, bsum, {(r, s): c.basis(a[r], bsum[s], b)})
                        g = _add_slot_morphism(c, tup, i, phi)
                        ext2 = extend_to_additive(eta, tup[:i] + (y,) + tup[i + 1:])
                        if add_compose(c, g, ext2) != add_compose(c, ext, g):
                            issues.append(("naturality", tup, i))
        if not _additive_unique(c, eta, tup, ext):
            issues.append(("uniqueness", tup, None))
    return issues


def _additive_unique(c, eta, tup, ext):
    """Solve X o iota_p = iota_p o eta_p over all summand tuples p."""
    lists = [a.summands for a in tup]
    obj = _add_word(c, lists)
    field = c.field
    keys = [(i, j) for i in range(len(obj)) for j in range(len(obj))]
    offs, total = {}, 0
    for k in keys:
        offs[k] = total
        total += c.dim(obj[k[0]], obj[k[1]])
    idx_tuples = list(itertools.product(*[range(len(s)) for s in lists]))
    rows_rhs = []
    cols = [[] for _ in range(total)]
    for pnum, idx in enumerate(idx_tuples):
        P = obj[pnum]
        inj = AddMor.make((P,), obj, {(0, pnum): c.identity(P)})
        val = eta.table[tuple(s[i] for s, i in zip(lists, idx))]
        target = add_compose(c, AddMor.make((P,), (P,), {(0, 0): val}), inj).block_dict()
        for j in range(len(obj)):
            rows_rhs.extend(target.get((0, j), c.zero(P, obj[j])))
            for u, k in enumerate(keys):
                for a in range(c.dim(obj[k[0]], obj[k[1]])):
                    X = AddMor.make(obj, obj, {k: c.basis(obj[k[0]], obj[k[1]], a)})
                    got = add_compose(c, inj, X).block_dict().get((0, j), c.zero(P, obj[j]))
                    cols[offs[k] + a].extend(got)
    if total == 0:
        return True
    A = Matrix.from_columns(field, cols, nrows=len(rows_rhs))
    sol = solve(A, rows_rhs)
    if sol is None or rank(A) != total:
        return False
    blocks = {k: tuple(sol[offs[k]:offs[k] + c.dim(obj[k[0]], obj[k[1]])]) for k in keys}
    return AddMor.make(obj, obj, blocks) == ext


def _karoubi_differential(eta, deta, tup):
    """Differential of the extension at tup versus the extension of d eta."""
    c = eta.functor.source
    n = eta.degree
    norm = c.field.norm
    acc = None
    target = extend_to_karoubi(deta, tup)
    for i in range(n + 2):
        if i == 0:
            rest = _karoubi_word(c, tup[1:])
            term = c.tensor_morphisms(tup[0].base, tup[0].base, rest.base, rest.base, tup[0].idem,
                                      extend_to_karoubi(eta, tup[1:]))
        elif i == n + 1:
            rest = _karoubi_word(c, tup[:n])
            term = c.tensor_morphisms(rest.base, rest.base, tup[n].base, tup[n].base,
                                      extend_to_karoubi(eta, tup[:n]), tup[n].idem)
        else:
            merged = tup[:i - 1] + (karoubi_tensor(c, tup[i - 1], tup[i]),) + tup[i + 1:]
            term = extend_to_karoubi(eta, merged)
        s = -1 if i % 2 else 1
        acc = [s * v for v in term] if acc is None else [a + s * v for a, v in zip(acc, term)]
    return tuple(norm(a) for a in acc) == target


def _additive_differential(eta, deta, tup):
    c = eta.functor.source
    n = eta.degree
    norm = c.field.norm
    target = extend_to_additive(deta, tup)
    terms = []
    for i in range(n + 2):
        if i == 0:
            term = add_tensor(c, add_identity(c, tup[0].summands), extend_to_additive(eta, tup[1:]))
        elif i == n + 1:
            term = add_tensor(c, extend_to_additive(eta, tup[:n]), add_identity(c, tup[n].summands))
        else:
            merged = AdditiveObject(add_tensor_obj(c, tup[i - 1].summands, tup[i].summands))
            term = extend_to_additive(eta, tup[:i - 1] + (merged,) + tup[i + 1:])
        terms.append((-1 if i % 2 else 1, term))
    acc = {}
    for s, t in terms:
        for k, v in t.blocks:
            old = acc.get(k)
            acc[k] = tuple(s * x for x in v) if old is None else tuple(a + s * x for a, x in zip(old, v))
    out = AddMor.make(target.src, target.tgt, {k: tuple(norm(x) for x in v) for k, v in acc.items()})
    return out == target


def _differential_samples(kind, c, pool, n, max_summands=3):
    """Degree-(n+1) tuples whose total summand count is at most ``max_summands``."""
    if kind == "karoubi":
        return default_samples(pool, n + 1)
    out = []
    for t in itertools.product(pool, repeat=n + 1):
        if sum(len(a.summands) for a in t) <= max_summands:
            out.append(t)
    return out


def verify_envelope_invariance(c: CatPresentation, kind: str, n: int, samples=None, pool=None) -> TheoremReport:
    """Section, naturality, uniqueness and differential checks for every basis cochain of degree n."""
    if kind not in ("karoubi", "additive"):
        raise PreconditionError(f"unknown envelope kind {kind!r}")
    if not c.is_strict:
        raise StrictnessError(f"{c.name} is not strict")
    cx = get_complex(c.identity_functor)
    if n + 1 > cx.cap:
        raise BudgetError(f"degree {n + 1} exceeds the cap {cx.cap}")
    if pool is None:
        pool = karoubi_pool(c) if kind == "karoubi" else additive_pool(c)
    if samples is None:
        samples = default_samples(pool, n)
    for t in samples:
        if len(t) != n:
            raise DimensionError("sample tuple length differs from the degree")
    dsamples = _differential_samples(kind, c, pool, n)
    report = TheoremReport(f"envelope-{kind}", c.name, str(c.field),
                           notes=[f"pool size {len(pool)}", f"{len(samples)} sampled tuples",
                                  f"{len(dsamples)} differential tuples"])
    basis = cx.basis(n)
    section = naturality = unique = diff = True
    witnesses = []
    for k, eta in enumerate(basis):
        for t in cx.tuples(n):
            if kind == "karoubi":
                got = extend_to_karoubi(eta, tuple(KaroubiObject(x, c.identity(x)) for x in t))
                ok = got == eta.table[t]
            else:
                blk = extend_to_additive(eta, tuple(AdditiveObject((x,)) for x in t)).block_dict()
                ok = blk.get((0, 0), c.zero(c.tensor_all(t), c.tensor_all(t))) == eta.table[t]
            if not ok:
                section = False
                witnesses.append({"check": "section", "basis": k, "tuple": [c.objects[x] for x in t]})
        checks = _karoubi_checks(eta, samples, pool) if kind == "karoubi" else _additive_checks(eta, samples, pool)
        for what, tup, slot in checks:
            if what == "naturality":
                naturality = False
            else:
                unique = False
            witnesses.append({"check": what, "basis": k, "tuple": [o.label(c) for o in tup], "slot": slot})
        deta = cx.differential(n, eta)
        for tup in dsamples:
            ok = _karoubi_differential(eta, deta, tup) if kind == "karoubi" else _additive_differential(eta, deta, tup)
            if not ok:
                diff = False
                witnesses.append({"check": "differential", "basis": k, "tuple": [o.label(c) for o in tup]})
    report.entries.append({"degree": n, "basis_size": len(basis), "samples": len(samples),
                           "differential_samples": len(dsamples),
                           "section": section, "naturality": naturality, "uniqueness": unique,
                           "differential": diff, "witnesses": witnesses[:20],
                           "pass": section and naturality and unique and diff})
    return report
