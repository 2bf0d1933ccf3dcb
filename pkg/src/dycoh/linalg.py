"""
Exact linear algebra over the rationals and prime fields.

Scalars are plain Python numbers: :class:`fractions.Fraction` (or ``int``) for
the rationals, ``int`` residues in ``[0, p)`` for ``F_p``.  Every routine is
deterministic and reduces to the canonical reduced row echelon form, so kernel
bases and particular solutions are reproducible bit-for-bit.

Two elimination backends share one contract: a dense Gauss-Jordan for small
systems and a dict-of-rows sparse elimination above :data:`DENSE_CAP` entries.
Both return the (unique) reduced echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, FieldMismatchError

#: Above this many entries (rows * cols) elimination uses the sparse backend.
DENSE_CAP = 40_000


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``FieldSpec("Q")`` or ``FieldSpec("F", p)``."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.modulus is not None:
                raise ValueError("the rationals carry no modulus")
        elif self.kind == "F":
            if self.modulus is None or not _is_prime(self.modulus):
                raise ValueError(f"prime field modulus must be a prime, got {self.modulus!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def prime(cls, p):
        return cls("F", p)

    @property
    def is_prime_field(self):
        return self.kind == "F"

    @property
    def characteristic(self):
        return self.modulus if self.kind == "F" else 0

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F{self.modulus}"

    # -- scalar handling -------------------------------------------------

    def __call__(self, x):
        """Coerce an int, Fraction or ``"p/q"`` string into a canonical scalar."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Q":
            return Fraction(x)
        p = self.modulus
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"{x} has no image in F{p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def norm(self, x):
        """Reduce the result of ring arithmetic back to canonical form."""
        if self.kind == "F":
            return x % self.modulus
        return x

    def inv(self, x):
        if self.kind == "F":
            return pow(x, -1, self.modulus)
        return 1 / Fraction(x)

    def neg(self, x):
        return self.norm(-x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def fmt(self, x):
        """Canonical string: ``p/q`` in lowest terms (``/1`` omitted) or a residue."""
        if self.kind == "F":
            return str(int(x) % self.modulus)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def elements(self):
        if self.kind != "F":
            raise ValueError("only prime fields can be enumerated")
        return range(self.modulus)

    def vector(self, values):
        return tuple(self(v) for v in values)


QQ = FieldSpec.rationals()


def _check_same_field(*fields):
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"field mismatch: {first} vs {f}")


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    field: FieldSpec
    nrows: int
    ncols: int
    data: tuple

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionError(f"ragged matrix: row of length {len(r)}, expected {ncols}")
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, field, columns, nrows=None):
        columns = [tuple(c) for c in columns]
        if nrows is None:
            if not columns:
                raise DimensionError("cannot infer row count of an empty column list")
            nrows = len(columns[0])
        for c in columns:
            if len(c) != nrows:
                raise DimensionError("columns of unequal length")
        rows = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
        return cls.from_rows(field, rows, ncols=len(columns))

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_triplets(cls, field, nrows, ncols, triplets):
        return SparseMatrix.from_triplets(field, nrows, ncols, triplets).to_dense()

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        """Row-major flat tuple of entries."""
        return tuple(x for r in self.data for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        if self.nrows == 0:
            return Matrix(self.field, self.ncols, 0, ((),) * self.ncols)
        return Matrix(self.field, self.ncols, self.nrows, tuple(zip(*self.data)))

    def is_zero(self):
        return all(x == 0 for r in self.data for x in r)

    def is_square(self):
        return self.nrows == self.ncols

    def apply(self, v):
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} against {self.ncols} columns")
        f = self.field
        return tuple(f.norm(sum(a * b for a, b in zip(r, v) if a and b)) for r in self.data)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            _check_same_field(self.field, other.field)
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            rows = tuple(tuple(self.field.norm(sum(a * b for a, b in zip(r, c) if a and b)) for c in cols)
                         for r in self.data)
            return Matrix(self.field, self.nrows, other.ncols, rows)
        return self.apply(other)

    def __add__(self, other):
        _check_same_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(f.norm(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def scale(self, c):
        f = self.field
        c = f(c)
        return Matrix(f, self.nrows, self.ncols, tuple(tuple(f.norm(c * a) for a in r) for r in self.data))

    def hstack(self, other):
        _check_same_field(self.field, other.field)
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other):
        _check_same_field(self.field, other.field)
        if self.ncols != other.ncols:
            raise DimensionError("vstack needs equal column counts")
        return Matrix(self.field, self.nrows + other.nrows, self.ncols, self.data + other.data)

    def to_strings(self):
        return [[self.field.fmt(x) for x in r] for r in self.data]


class SparseMatrix:
    """Dict-of-rows matrix used to assemble constraint systems."""

    def __init__(self, field, nrows, ncols, rows):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_triplets(cls, field, nrows, ncols, triplets):
        """Assemble from ``(row, col, value)`` triplets; duplicates are summed."""
        rows = [dict() for _ in range(nrows)]
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise DimensionError(f"triplet ({i}, {j}) outside {nrows}x{ncols}")
            r = rows[i]
            r[j] = field.norm(r.get(j, 0) + v)
        for r in rows:
            for j in [j for j, v in r.items() if v == 0]:
                del r[j]
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_dense(cls, m):
        return cls(m.field, m.nrows, m.ncols, [{j: x for j, x in enumerate(r) if x} for r in m.data])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nonzero_rows(self):
        return [r for r in self.rows if r]

    def to_dense(self):
        z = self.field.zero
        data = []
        for r in self.rows:
            row = [z] * self.ncols
            for j, v in r.items():
                row[j] = v
            data.append(tuple(row))
        return Matrix(self.field, self.nrows, self.ncols, tuple(data))


# -- elimination backends ----------------------------------------------------


def _rref_dense(field, rows, ncols):
    """Gauss-Jordan on a list of mutable lists. Returns (nonzero rows, pivots)."""
    m = [list(r) for r in rows]
    pivots = []
    prow = 0
    nrows = len(m)
    norm = field.norm
    for c in range(ncols):
        if prow == nrows:
            break
        sel = None
        for i in range(prow, nrows):
            if m[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        pr = m[prow]
        inv = field.inv(pr[c])
        if pr[c] != 1:
            for j in range(c, ncols):
                if pr[j]:
                    pr[j] = norm(pr[j] * inv)
        for i in range(nrows):
            if i == prow:
                continue
            r = m[i]
            a = r[c]
            if a:
                for j in range(c, ncols):
                    if pr[j]:
                        r[j] = norm(r[j] - a * pr[j])
        pivots.append(c)
        prow += 1
    return [tuple(r) for r in m[:prow]], pivots


def _rref_sparse(field, rows, ncols):
    """Incremental sparse elimination keeping pivot rows fully reduced."""
    norm = field.norm
    pivot_rows = {}  # pivot column -> row dict (leading entry 1)
    for src in rows:
        r = dict(src)
        for c in sorted(c for c in r if c in pivot_rows):
            a = r.get(c)
            if not a:
                continue
            for j, v in pivot_rows[c].items():
                w = norm(r.get(j, 0) - a * v)
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        if not r:
            continue
        c = min(r)
        inv = field.inv(r[c])
        r = {j: norm(v * inv) for j, v in r.items()}
        for pc, pr in pivot_rows.items():
            a = pr.get(c)
            if a:
                for j, v in r.items():
                    w = norm(pr.get(j, 0) - a * v)
                    if w:
                        pr[j] = w
                    else:
                        pr.pop(j, None)
        pivot_rows[c] = r
    pivots = sorted(pivot_rows)
    z = field.zero
    out = []
    for c in pivots:
        row = [z] * ncols
        for j, v in pivot_rows[c].items():
            row[j] = v
        out.append(tuple(row))
    return out, pivots


def rref(m, backend=None):
    """Reduced row echelon form: ``(nonzero rows, pivot columns)``.

    ``backend`` forces ``"dense"`` or ``"sparse"``; by default the size cap decides.
    """
    if isinstance(m, SparseMatrix):
        if backend is None:
            backend = "sparse" if m.nrows * m.ncols > DENSE_CAP else "dense"
        if backend == "dense":
            return _rref_dense(m.field, m.to_dense().data, m.ncols)
        return _rref_sparse(m.field, m.nonzero_rows(), m.ncols)
    if backend is None:
        backend = "sparse" if m.nrows * m.ncols > DENSE_CAP else "dense"
    if backend == "sparse":
        return _rref_sparse(m.field, SparseMatrix.from_dense(m).nonzero_rows(), m.ncols)
    return _rref_dense(m.field, m.data, m.ncols)


def rank(m):
    return len(rref(m)[1])


def kernel_basis(m):
    """Canonical null-space basis, one vector per free column in ascending order.

    The vector for free column ``j`` has a 1 at ``j``, zeros at every other
    free column, and ``-R[i][j]`` at the pivot column of echelon row ``i``.
    """
    field = m.field
    rows, pivots = rref(m)
    pivset = set(pivots)
    z, o = field.zero, field.one
    basis = []
    for j in range(m.ncols):
        if j in pivset:
            continue
        v = [z] * m.ncols
        v[j] = o
        for r, pc in zip(rows, pivots):
            if r[j]:
                v[pc] = field.neg(r[j])
        basis.append(tuple(v))
    return basis


def free_columns(m):
    pivset = set(rref(m)[1])
    return [j for j in range(m.ncols) if j not in pivset]


def solve(a, b):
    """Canonical solution of ``a x = b`` (free variables set to 0) or ``None``."""
    if len(b) != a.nrows:
        raise DimensionError(f"right-hand side of length {len(b)} against {a.nrows} rows")
    field = a.field
    b = [field(x) for x in b]
    if isinstance(a, SparseMatrix):
        rows = []
        for r, v in zip(a.rows, b):
            r = dict(r)
            if v:
                r[a.ncols] = v
            rows.append(r)
        aug = SparseMatrix(field, a.nrows, a.ncols + 1, rows)
    else:
        aug = Matrix(field, a.nrows, a.ncols + 1, tuple(r + (v,) for r, v in zip(a.data, b)))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [field.zero] * a.ncols
    for r, pc in zip(rows, pivots):
        x[pc] = r[a.ncols]
    return tuple(x)


def in_span(columns, v):
    """True iff ``v`` lies in the column span of ``columns``."""
    if len(v) != columns.nrows:
        raise DimensionError(f"vector of length {len(v)} against {columns.nrows} rows")
    if columns.ncols == 0:
        return all(x == 0 for x in v)
    return solve(columns, v) is not None


def is_invertible(m):
    return m.is_square() and rank(m) == m.nrows


def inverse(m):
    if not m.is_square():
        raise DimensionError("only square matrices are invertible")
    n = m.nrows
    aug = m.hstack(Matrix.identity(m.field, n))
    rows, pivots = rref(aug, backend="dense")
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return Matrix(m.field, n, n, tuple(r[n:] for r in rows[:n]))


def span_basis(vectors: Iterable[Sequence], field, dim):
    """Indices of a maximal independent prefix-greedy subset of ``vectors``."""
    vectors = list(vectors)
    if not vectors:
        return []
    mat = Matrix.from_columns(field, vectors, nrows=dim)
    return rref(mat)[1]


def fmt_vector(field, v):
    return [field.fmt(x) for x in v]


def augment(a, columns):
    """Sparse ``[a | columns]`` where ``a`` is a (sparse or dense) matrix and
    ``columns`` a list of coordinate vectors of length ``a.nrows``."""
    if isinstance(a, Matrix):
        a = SparseMatrix.from_dense(a)
    rows = [dict(r) for r in a.rows]
    base = a.ncols
    for k, v in enumerate(columns):
        if len(v) != a.nrows:
            raise DimensionError(f"column of length {len(v)} against {a.nrows} rows")
        for i, x in enumerate(v):
            if x:
                rows[i][base + k] = x
    return SparseMatrix(a.field, a.nrows, base + len(columns), rows)


def quotient_basis(boundaries, cycles):
    """Split ``cycles`` modulo the column span of ``boundaries``.

    Returns ``(rank of boundaries, indices of the cycles chosen)``: the chosen
    cycles are the first ones, in order, independent of the boundaries and of
    each other.
    """
    nb = boundaries.ncols
    _, pivots = rref(augment(boundaries, cycles))
    return sum(1 for p in pivots if p < nb), [p - nb for p in pivots if p >= nb]
