"""Desk-scale acceptance run.

Run as ``python tests/test_acceptance.py`` for one PASS/FAIL line per criterion,
or through pytest where each criterion is a test.
"""
import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dycoh import fixtures as fx  # noqa: E402
from dycoh.bridge import check_category_unitalization  # noqa: E402
from dycoh.cli import try_parse  # noqa: E402
from dycoh.dycomplex import (SquareMorphism, cochain_map_matrix, cohomology, compose_squares,  # noqa: E402
                             get_complex, induced_map_on_cohomology, restrict_along_square)
from dycoh.envelopes import verify_envelope_invariance  # noqa: E402
from dycoh.hochschild import (check_algebra_unitalization, hoch_cohomology, hoch_differential,  # noqa: E402
                              cochain_from_vector, is_coboundary, is_cocycle, normalize_cocycle, unitalize_pair)
from dycoh.linalg import Matrix  # noqa: E402
from dycoh.presentations import (FunctorPresentation, inclusion_by_names, make_group_category,  # noqa: E402
                                 unitalize_category)

from conftest import DATA  # noqa: E402
from oracles import cyclic, group_cohomology_dim, hochschild_dims, product  # noqa: E402

CATEGORIES = fx.strict_skeletal_fixtures()
ALL_CATEGORIES = fx.strict_skeletal_fixtures(include_extra=True)


# -- criterion 1: complex axioms ---------------------------------------------------


def complex_axioms():
    checked = 0
    for label, c in CATEGORIES:
        for cat in (c, unitalize_category(c)):
            cx = get_complex(cat.identity_functor)
            for n in (1, 2):
                for eta in cx.basis(n):
                    if not cx.differential(n + 1, cx.differential(n, eta)).is_zero():
                        return False, f"d^2 != 0 on {label} degree {n}"
                    for j in range(n + 3):
                        for i in range(j):
                            lhs = cx.coface(n + 1, j, cx.coface(n, i, eta))
                            rhs = cx.coface(n + 1, i, cx.coface(n, j - 1, eta))
                            if lhs != rhs:
                                return False, f"coface relation ({i},{j}) fails on {label} degree {n}"
                    checked += 1
    return True, f"{checked} basis cochains"


# -- criterion 2: group cohomology ---------------------------------------------------

GROUPS = [("Z2", cyclic(2)), ("Z3", cyclic(3)), ("Z2xZ2", product(cyclic(2), cyclic(2)))]
FIELDS = [(0, fx.QQ), (2, fx.F2), (3, fx.F3)]


def group_cohomology():
    rows = []
    for (gname, table), (p, field) in itertools.product(GROUPS, FIELDS):
        c = make_group_category(table, field)
        got = [cohomology(c.identity_functor, n).dim_H for n in (1, 2, 3)]
        want = [group_cohomology_dim(table, n, p) for n in (1, 2, 3)]
        if got != want:
            return False, f"{gname}/{field}: {got} != {want}"
        rows.append(f"{gname}/{field}={''.join(map(str, got))}")
    return True, " ".join(rows)


# -- criterion 3: Hochschild unitalization ------------------------------------------


def as_ints(table):
    return [[list(v) for v in row] for row in table]


def hochschild_unitalization():
    count = 0
    for label, m in fx.non_unital_fixtures():
        rep = check_algebra_unitalization(m, max_degree=2)
        if not rep.passed:
            return False, f"{label}: iota^* not bijective"
        _, mu = unitalize_pair(m)
        p = m.field.characteristic
        dims_a = hochschild_dims(as_ints(m.algebra.mul), as_ints(m.left), as_ints(m.right), m.dim, 2, p)
        dims_u = hochschild_dims(as_ints(mu.algebra.mul), as_ints(mu.left), as_ints(mu.right), mu.dim, 2, p)
        if dims_a[1:] != dims_u[1:] or [e["dim_H_A"] for e in rep.entries] != dims_a[1:]:
            return False, f"{label}: dims {dims_a} vs {dims_u}"
        count += 1
    return True, f"{count} bimodules"


# -- criterion 4: normalization ------------------------------------------------------


def vanishes_at_unit(f):
    # on a basis containing the unit, a multilinear map vanishes whenever some
    # argument is the unit iff it does so on basis tuples through the unit slot
    a = f.module.algebra
    u = a.unit_coords
    zero = tuple(0 for _ in range(f.module.dim))
    for i in range(f.degree):
        for rest in itertools.product(range(a.dim), repeat=f.degree - 1):
            acc = [0] * f.module.dim
            for k, coeff in enumerate(u):
                if coeff:
                    v = f.values[rest[:i] + (k,) + rest[i:]]
                    acc = [x + coeff * y for x, y in zip(acc, v)]
            if tuple(f.module.field.norm(x) for x in acc) != zero:
                return False
    return True


def normalization(per_fixture=20):
    total = 0
    for label, m in fx.unital_fixtures():
        rng = random.Random(label)
        for n in (1, 2, 3):
            reps = hoch_cohomology(m, n).representatives
            for _ in range(per_fixture):
                size = m.algebra.dim ** (n - 1) * m.dim
                g = cochain_from_vector(m, n - 1, tuple(m.field(rng.randint(-3, 3)) for _ in range(size)))
                f = hoch_differential(m, g)
                for r in reps:
                    f = f + r.scale(rng.randint(-2, 2))
                res = normalize_cocycle(m, f)
                if not (vanishes_at_unit(res.corrected) and is_cocycle(m, res.corrected)):
                    return False, f"{label} degree {n}: corrected cocycle does not vanish at the unit"
                if not is_coboundary(m, res.corrected - f)[0]:
                    return False, f"{label} degree {n}: correction is not a coboundary"
                total += 1
    return True, f"{total} cocycles"


# -- criterion 5: category unitalization --------------------------------------------


def category_unitalization():
    for label, c in ALL_CATEGORIES:
        rep = check_category_unitalization(c, max_degree=2)
        if not rep.passed:
            return False, f"{label}: {rep.entries}"
    # independent pipeline: the bar-resolution oracle on both sides for Vec_G
    for (gname, table), (p, field) in itertools.product(GROUPS, FIELDS):
        c = make_group_category(table, field)
        rep = check_category_unitalization(c, max_degree=2)
        want = [group_cohomology_dim(table, n, p) for n in (1, 2)]
        if [e["dim_H_Cu"] for e in rep.entries] != want or not rep.passed:
            return False, f"{gname}/{field} disagrees with the bar oracle"
    return True, f"{len(ALL_CATEGORIES) + len(GROUPS) * len(FIELDS)} categories"


# -- criterion 6: envelopes -------------------------------------------------------------


def envelope_invariance():
    count = 0
    for label, c in ALL_CATEGORIES:
        for kind in ("karoubi", "additive"):
            for n in (1, 2):
                rep = verify_envelope_invariance(c, kind, n)
                if not rep.passed:
                    return False, f"{label} {kind} degree {n}"
                count += 1
    return True, f"{count} checks"


# -- criterion 7: functoriality --------------------------------------------------------


def unit_square(c):
    cu = unitalize_category(c)
    incl = inclusion_by_names(c, cu)
    return SquareMorphism(incl, incl, c.identity_functor, cu.identity_functor, name="unit")


def inversion_square(c):
    ident = {k: Matrix.identity(c.field, m.nrows) for k, m in c.identity_functor.hom_maps.items()}
    perm = (0, 2, 1)
    inv = FunctorPresentation(c, c, perm, {(perm[x], perm[y]): m for (x, y), m in ident.items()}, None, name="inv")
    return SquareMorphism(inv, inv, c.identity_functor, c.identity_functor, name="inv")


def functoriality():
    for label, c in ALL_CATEGORIES:
        sq = unit_square(c)
        cg, cf = get_complex(sq.G), get_complex(sq.F)
        for n in (1, 2):
            for eta in cg.basis(n):
                if restrict_along_square(sq, cg.differential(n, eta)) != cf.differential(n, restrict_along_square(sq, eta)):
                    return False, f"{label}: restriction is not a chain map in degree {n}"
    for field in (fx.QQ, fx.F3):
        c = fx.vec_z3(field)
        sq1, sq2 = inversion_square(c), unit_square(c)
        comp = compose_squares(sq1, sq2)
        for n in (1, 2):
            if cochain_map_matrix(comp, n) != cochain_map_matrix(sq1, n) @ cochain_map_matrix(sq2, n):
                return False, f"composite cochain map differs in degree {n}"
            lhs = induced_map_on_cohomology(comp, n).matrix
            rhs = induced_map_on_cohomology(sq1, n).matrix @ induced_map_on_cohomology(sq2, n).matrix
            if lhs != rhs:
                return False, f"composite map on H^{n} differs"
    return True, f"{len(ALL_CATEGORIES)} unit squares, 2 composites"


# -- criterion 8: determinism and parser totality ------------------------------------

GOLDEN = [
    ["dy", "vec_z2.cat", "--functor", "id", "--max-degree", "3"],
    ["invariance", "vec_z2.cat", "--kind", "unit", "--max-degree", "2"],
    ["validate", "broken_pentagon.cat"],
    ["hochschild", "dual.cat", "--bimodule", "reg"],
    ["invariance", "eps.cat", "--kind", "additive", "--max-degree", "1"],
]

FUZZ_TOKENS = ["field", "Q", "F", "2", "3", "category", "end", "objects", "hom", ":", "=", ".", "+", "identity",
               "tensor", "compose", "assoc", "unit", "functor", "algebra", "basis", "mul", "bimodule", "left",
               "right", "cochain", "degree", "value", "square", "->", "e", "g", "id_e", "id_g", "1", "0", "-1",
               "1/2", "1/0", "#", "\n", " ", "\t", "\x00", "é"]


def report_bytes(argv, seed):
    cmd = [sys.executable, "-m", "dycoh.cli", argv[0], str(DATA / argv[1]), *argv[2:]]
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run(cmd, capture_output=True, env=env, cwd=DATA).stdout


def fuzz_inputs(count, seed=0):
    rng = random.Random(seed)
    corpus = [p.read_text() for p in sorted(DATA.glob("*.cat"))]
    for k in range(count):
        mode = k % 4
        if mode == 0:
            yield " ".join(rng.choice(FUZZ_TOKENS) for _ in range(rng.randint(0, 60)))
        elif mode == 1:
            text = rng.choice(corpus)
            pos = rng.randint(0, len(text))
            insert = "".join(rng.choice(FUZZ_TOKENS) for _ in range(rng.randint(0, 3)))
            yield text[:pos] + insert + text[pos + rng.randint(0, 15):]
        elif mode == 2:
            lines = rng.choice(corpus).splitlines()
            yield "\n".join(rng.choice(lines) for _ in range(rng.randint(0, len(lines))))
        else:
            yield bytes(rng.randrange(256) for _ in range(rng.randint(0, 120)))


def determinism_and_totality(fuzz_count=10_000):
    for argv in GOLDEN:
        first, second = report_bytes(argv, 1), report_bytes(argv, 2)
        if not first or first != second:
            return False, f"report for {' '.join(argv)} is not byte-stable"
    for text in fuzz_inputs(fuzz_count):
        try:
            f, diags = try_parse(text)
        except Exception as exc:  # any escape is a totality failure
            return False, f"parser raised {type(exc).__name__} on {text[:40]!r}"
        if not diags and f is None:
            return False, f"no result and no diagnostics for {text[:40]!r}"
    return True, f"{len(GOLDEN)} golden reports, {fuzz_count} fuzz inputs"


# -- driver ----------------------------------------------------------------------

CRITERIA = [
    (1, "complex axioms", complex_axioms, 30),
    (2, "group cohomology oracle", group_cohomology, 120),
    (3, "Hochschild unitalization", hochschild_unitalization, 60),
    (4, "normalization of cocycles", normalization, 60),
    (5, "category unitalization", category_unitalization, 120),
    (6, "envelope invariance", envelope_invariance, 120),
    (7, "functoriality", functoriality, 30),
    (8, "determinism and parser totality", determinism_and_totality, 120),
]


def evaluate(fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok, detail = False, f"{detail}; over budget"
    return ok, f"{detail} ({elapsed:.1f}s of {budget}s)"


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, budget):
    ok, detail = evaluate(fn, budget)
    print(f"{'PASS' if ok else 'FAIL'} {number} {title}: {detail}")
    assert ok, detail


def main():
    failed = 0
    for number, title, fn, budget in CRITERIA:
        ok, detail = evaluate(fn, budget)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {number} {title}: {detail}", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
