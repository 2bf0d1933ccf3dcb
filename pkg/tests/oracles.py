"""
Independent reference computations for the test suite.

Nothing here imports the package's linear algebra or complexes.  Each oracle
carries its own elimination over Q or F_p, so a bug in the engine cannot
confirm itself.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def rank_mod(rows, p):
    """Rank of a list of integer rows over F_p (p = 0 means Q)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    if p:
        rows = [[x % p for x in r] for r in rows]
    else:
        rows = [[Fraction(x) for x in r] for r in rows]
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p) if p else 1 / rows[r][c]
        rows[r] = [(x * inv) % p if p else x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [((a - f * b) % p) if p else a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def _dims_from_ranks(dims, ranks, n):
    # dim H^n = dim C^n - rank d^n - rank d^{n-1}
    return dims[n] - ranks[n] - (ranks[n - 1] if n > 0 else 0)


# -- group cohomology with trivial coefficients -------------------------------------


def cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def product(t1, t2):
    n2 = len(t2)
    n = len(t1) * n2
    return [[t1[a // n2][b // n2] * n2 + t2[a % n2][b % n2] for b in range(n)] for a in range(n)]


def bar_differential(table, n):
    """Rows of d^n : C^n(G, k) -> C^{n+1}(G, k), inhomogeneous bar cochains, trivial action."""
    g = len(table)
    src = list(itertools.product(range(g), repeat=n))
    idx = {t: i for i, t in enumerate(src)}
    rows = []
    for t in itertools.product(range(g), repeat=n + 1):
        row = [0] * len(src)
        # (df)(g1..g_{n+1}) = f(g2..) + sum (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g1..g_n)
        row[idx[t[1:]]] += 1
        for i in range(n):
            merged = t[:i] + (table[t[i]][t[i + 1]],) + t[i + 2:]
            row[idx[merged]] += (-1) ** (i + 1)
        row[idx[t[:n]]] += (-1) ** (n + 1)
        rows.append(row)
    return rows


def group_cohomology_dim(table, n, p):
    """dim H^n(G; k) for k = F_p (p prime) or Q (p = 0)."""
    g = len(table)
    r_n = rank_mod(bar_differential(table, n), p)
    r_prev = rank_mod(bar_differential(table, n - 1), p) if n > 0 else 0
    return g ** n - r_n - r_prev


# -- Hochschild cohomology straight from the formula --------------------------------


def hochschild_dims(mul, left, right, dim_m, max_degree, p):
    """dims of HH^n(A, M) for n = 0..max_degree from integer structure constants.

    ``mul[i][j]``, ``left[i][m]``, ``right[m][i]`` are coordinate lists.
    """
    d = len(mul)

    def act(table, i, vec, side):
        out = [0] * dim_m
        for m, c in enumerate(vec):
            if c:
                v = table[i][m] if side == "left" else table[m][i]
                for k, x in enumerate(v):
                    out[k] += c * x
        return out

    def diff(n):
        src = list(itertools.product(range(d), repeat=n))
        cols = len(src) * dim_m
        pos = {t: i for i, t in enumerate(src)}
        rows = []
        for t in itertools.product(range(d), repeat=n + 1):
            block = [[0] * cols for _ in range(dim_m)]
            # a1 . f(a2..)
            for m in range(dim_m):
                unit = [0] * dim_m
                unit[m] = 1
                v = act(left, t[0], unit, "left")
                for k, x in enumerate(v):
                    block[k][pos[t[1:]] * dim_m + m] += x
            for i in range(n):
                prod = mul[t[i]][t[i + 1]]
                for c_idx, c in enumerate(prod):
                    if c:
                        key = t[:i] + (c_idx,) + t[i + 2:]
                        for m in range(dim_m):
                            block[m][pos[key] * dim_m + m] += (-1) ** (i + 1) * c
            for m in range(dim_m):
                unit = [0] * dim_m
                unit[m] = 1
                v = act(right, t[n], unit, "right")
                for k, x in enumerate(v):
                    block[k][pos[t[:n]] * dim_m + m] += (-1) ** (n + 1) * x
            rows.extend(block)
        return rows, cols

    dims, ranks = {}, {}
    for n in range(max_degree + 1):
        rows, cols = diff(n)
        dims[n] = cols
        ranks[n] = rank_mod(rows, p)
    return [_dims_from_ranks(dims, ranks, n) for n in range(max_degree + 1)]


# -- pentagon on a scalar associator --------------------------------------------


def pentagon_failures(table, omega, p=0):
    """Quadruples where omega(g2,g3,g4) omega(g1,g2g3,g4) omega(g1,g2,g3) != omega(g1g2,g3,g4) omega(g1,g2,g3g4)."""
    g = len(table)
    bad = []
    for a, b, c, d in itertools.product(range(g), repeat=4):
        lhs = omega[(b, c, d)] * omega[(a, table[b][c], d)] * omega[(a, b, c)]
        rhs = omega[(table[a][b], c, d)] * omega[(a, b, table[c][d])]
        if (lhs - rhs) % p if p else lhs != rhs:
            bad.append((a, b, c, d))
    return bad
