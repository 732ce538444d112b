"""Exact scalars and the sparse linear-system kernel.

Two ground fields are supported: the rationals (``fractions.Fraction``) and
prime fields F_p (:class:`Mod`).  Every homotopy question in the package is
eventually a call to :func:`solve` or :func:`kernel_basis` below.

Elimination is Gauss-Jordan with pivots chosen column by column, taking the
first available row.  The reduced row echelon form is unique, so the dense
path (small systems) and the sparse path (large systems) return identical
answers; solutions set every free variable to zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError

DENSE_LIMIT = 64


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


class Mod:
    """An element of F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise UsageError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise ZeroDivisionError("0 has no inverse")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Mod(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``FieldSpec()`` is Q, ``FieldSpec(p)`` is F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise UsageError(f"{self.p} is not prime")

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime-field"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x):
        """Coerce an int, Fraction, Mod or string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            if isinstance(x, Mod):
                raise UsageError("cannot coerce an F_p element into Q")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise UsageError(f"cannot coerce F_{x.p} element into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return Mod(x.numerator, self.p) / x.denominator
        return Mod(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, s: str):
        s = s.strip()
        if self.p is None:
            return Fraction(s)
        if "/" in s:
            a, b = s.split("/")
            return Mod(int(a), self.p) / int(b)
        return Mod(int(s), self.p)

    def format(self, x) -> str:
        x = self(x)
        if self.p is None:
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(x.v)

    def elements(self):
        """All elements; only meaningful for prime fields."""
        if self.p is None:
            raise UsageError("Q is infinite")
        return [Mod(v, self.p) for v in range(self.p)]

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    @classmethod
    def from_string(cls, s: str) -> "FieldSpec":
        """Parse ``q`` or ``fp:P``."""
        s = s.strip().lower()
        if s in ("q", "qq", "rationals"):
            return cls()
        if s.startswith("fp:"):
            return cls(int(s[3:]))
        raise UsageError(f"unknown field {s!r}; expected 'q' or 'fp:P'")

    def to_string(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"


QQ = FieldSpec()


class Matrix:
    """Immutable sparse matrix over a :class:`FieldSpec`.

    Entries live in a dict keyed by ``(row, col)``; absent entries are zero.
    """

    __slots__ = ("rows", "cols", "field", "_e")

    def __init__(self, rows: int, cols: int, field: FieldSpec, entries=None):
        if rows < 0 or cols < 0:
            raise UsageError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        self.field = field
        e = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise UsageError(f"entry ({r}, {c}) outside {rows}x{cols}")
                v = field(v)
                if v:
                    e[(r, c)] = v
        self._e = e

    @classmethod
    def _raw(cls, rows, cols, field, e):
        m = cls.__new__(cls)
        m.rows, m.cols, m.field, m._e = rows, cols, field, e
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "Matrix":
        return cls._raw(rows, cols, field, {})

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Matrix":
        one = field.one
        return cls._raw(n, n, field, {(i, i): one for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldSpec, cols: int | None = None) -> "Matrix":
        nrows = len(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        e = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise UsageError("ragged rows")
            for j, v in enumerate(row):
                v = field(v)
                if v:
                    e[(i, j)] = v
        return cls._raw(nrows, ncols, field, e)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: FieldSpec, rows: int | None = None) -> "Matrix":
        nrows = rows if rows is not None else (len(columns[0]) if columns else 0)
        e = {}
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise UsageError("ragged columns")
            for i, v in enumerate(col):
                v = field(v)
                if v:
                    e[(i, j)] = v
        return cls._raw(nrows, len(columns), field, e)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entries(self) -> dict:
        return dict(self._e)

    def items(self):
        return self._e.items()

    def nnz(self) -> int:
        return len(self._e)

    def __getitem__(self, rc):
        return self._e.get(rc, self.field.zero)

    def to_rows(self) -> list[list]:
        z = self.field.zero
        out = [[z] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._e.items():
            out[r][c] = v
        return out

    def column(self, j: int) -> list:
        z = self.field.zero
        col = [z] * self.rows
        for (r, c), v in self._e.items():
            if c == j:
                col[r] = v
        return col

    def is_zero(self) -> bool:
        return not self._e

    def _check_same(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise UsageError("expected a Matrix")
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.field != other.field:
            raise UsageError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        e = dict(self._e)
        for k, v in other._e.items():
            s = e.get(k)
            s = v if s is None else s + v
            if s:
                e[k] = s
            else:
                e.pop(k, None)
        return Matrix._raw(self.rows, self.cols, self.field, e)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, self.field, {k: -v for k, v in self._e.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, s) -> "Matrix":
        s = self.field(s)
        if not s:
            return Matrix.zeros(self.rows, self.cols, self.field)
        return Matrix._raw(self.rows, self.cols, self.field, {k: s * v for k, v in self._e.items()})

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        if self.field != other.field:
            raise UsageError("field mismatch")
        by_row = {}
        for (r, c), v in other._e.items():
            by_row.setdefault(r, []).append((c, v))
        e = {}
        for (i, k), a in self._e.items():
            for j, b in by_row.get(k, ()):
                s = e.get((i, j))
                e[(i, j)] = a * b if s is None else s + a * b
        e = {k: v for k, v in e.items() if v}
        return Matrix._raw(self.rows, other.cols, self.field, e)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise UsageError("vector length mismatch")
        out = [self.field.zero] * self.rows
        for (r, c), v in self._e.items():
            if vec[c]:
                out[r] = out[r] + v * vec[c]
        return out

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, self.field, {(c, r): v for (r, c), v in self._e.items()})

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: j for j, c in enumerate(cols)}
        e = {}
        for (r, c), v in self._e.items():
            if r in rpos and c in cpos:
                e[(rpos[r], cpos[c])] = v
        return Matrix._raw(len(rows), len(cols), self.field, e)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self._e == other._e

    def __hash__(self):
        return hash((self.shape, frozenset(self._e.items())))

    def __repr__(self):
        rows = ["[" + " ".join(self.field.format(x) for x in row) + "]" for row in self.to_rows()]
        return f"Matrix({self.rows}x{self.cols}; " + " ".join(rows) + ")"

    @staticmethod
    def block(blocks: Sequence[Sequence["Matrix | None"]], row_sizes: Sequence[int],
              col_sizes: Sequence[int], field: FieldSpec) -> "Matrix":
        """Assemble a block matrix; ``None`` blocks are zero."""
        e = {}
        r0 = 0
        for bi, brow in enumerate(blocks):
            c0 = 0
            for bj, b in enumerate(brow):
                if b is not None:
                    if b.shape != (row_sizes[bi], col_sizes[bj]):
                        raise UsageError(
                            f"block ({bi},{bj}) has shape {b.shape}, expected "
                            f"{(row_sizes[bi], col_sizes[bj])}")
                    for (r, c), v in b._e.items():
                        e[(r0 + r, c0 + c)] = v
                c0 += col_sizes[bj]
            r0 += row_sizes[bi]
        return Matrix._raw(sum(row_sizes), sum(col_sizes), field, e)


def matrix(rows, field: FieldSpec = QQ) -> Matrix:
    """Shorthand for :meth:`Matrix.from_rows`."""
    return Matrix.from_rows(rows, field)


# ---------------------------------------------------------------------------
# elimination


def _rref_dense(rows: list[list], ncols: int, pivot_limit: int):
    """In-place Gauss-Jordan on a list of dense rows.  Returns pivot columns."""
    pivots = []
    r = 0
    m = len(rows)
    for c in range(min(ncols, pivot_limit)):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        prow = [x * inv for x in rows[r]]
        rows[r] = prow
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                row = rows[i]
                rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


def _rref_sparse(rows: list[dict], pivot_limit: int):
    """Gauss-Jordan on rows stored as ``{col: value}`` dicts."""
    pivots = []
    r = 0
    m = len(rows)
    cols_present = sorted({c for row in rows for c in row if c < pivot_limit})
    for c in cols_present:
        piv = None
        for i in range(r, m):
            if c in rows[i]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        prow = {k: v * inv for k, v in rows[r].items()}
        rows[r] = prow
        for i in range(m):
            if i != r and c in rows[i]:
                f = rows[i][c]
                row = rows[i]
                for k, v in prow.items():
                    s = row.get(k)
                    s = -f * v if s is None else s - f * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


def _reduce(A: Matrix, extra: Sequence[Sequence] = (), pivot_limit: int | None = None):
    """RREF of ``[A | extra columns]``.

    Returns (rows as dicts, pivots).  Pivots are restricted to the first
    ``pivot_limit`` columns (default: the columns of A).
    """
    ncols = A.cols + len(extra)
    limit = A.cols if pivot_limit is None else pivot_limit
    if A.rows <= DENSE_LIMIT and ncols <= DENSE_LIMIT:
        dense = A.to_rows()
        for j, col in enumerate(extra):
            for i in range(A.rows):
                dense[i].append(A.field(col[i]))
        pivots = _rref_dense(dense, ncols, limit)
        rows = [{j: v for j, v in enumerate(row) if v} for row in dense]
    else:
        rows = [dict() for _ in range(A.rows)]
        for (r, c), v in A.items():
            rows[r][c] = v
        for j, col in enumerate(extra):
            for i in range(A.rows):
                v = A.field(col[i])
                if v:
                    rows[i][A.cols + j] = v
        pivots = _rref_sparse(rows, limit)
    return rows, pivots


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    rows, pivots = _reduce(A)
    e = {(i, j): v for i, row in enumerate(rows) for j, v in row.items()}
    return Matrix._raw(A.rows, A.cols, A.field, e), pivots


def rank(A: Matrix) -> int:
    if A.is_zero():
        return 0
    return len(_reduce(A)[1])


def kernel_basis(A: Matrix) -> list[list]:
    """A basis of ``{x : A x = 0}`` as column vectors (lists)."""
    rows, pivots = _reduce(A)
    piv_set = set(pivots)
    zero, one = A.field.zero, A.field.one
    basis = []
    for f in range(A.cols):
        if f in piv_set:
            continue
        v = [zero] * A.cols
        v[f] = one
        for r, pc in enumerate(pivots):
            x = rows[r].get(f)
            if x:
                v[pc] = -x
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence) -> list | None:
    """Some x with ``A x = b``, or None if the system is inconsistent.

    Free variables are set to zero, so the answer is canonical.
    """
    if len(b) != A.rows:
        raise UsageError(f"right-hand side has length {len(b)}, expected {A.rows}")
    rows, pivots = _reduce(A, [b], pivot_limit=A.cols + 1)
    if A.cols in pivots:
        return None
    zero = A.field.zero
    x = [zero] * A.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r].get(A.cols, zero)
    return x


def inconsistency_certificate(A: Matrix, b: Sequence) -> list | None:
    """A row vector y with ``y A = 0`` and ``y b = 1``, or None if A x = b is solvable."""
    if len(b) != A.rows:
        raise UsageError(f"right-hand side has length {len(b)}, expected {A.rows}")
    field = A.field
    zero, one = field.zero, field.one
    extra = [b] + [[one if i == j else zero for i in range(A.rows)] for j in range(A.rows)]
    rows, pivots = _reduce(A, extra, pivot_limit=A.cols + 1)
    if A.cols not in pivots:
        return None
    r = pivots.index(A.cols)
    return [rows[r].get(A.cols + 1 + j, zero) for j in range(A.rows)]


def inverse(A: Matrix) -> Matrix | None:
    if A.rows != A.cols:
        return None
    n = A.rows
    if n == 0:
        return Matrix.zeros(0, 0, A.field)
    field = A.field
    zero, one = field.zero, field.one
    extra = [[one if i == j else zero for i in range(n)] for j in range(n)]
    rows, pivots = _reduce(A, extra)
    if len(pivots) < n:
        return None
    e = {}
    for i in range(n):
        for j in range(n):
            v = rows[i].get(n + j)
            if v:
                e[(i, j)] = v
    return Matrix._raw(n, n, field, e)


def is_invertible(A: Matrix) -> bool:
    return A.rows == A.cols and rank(A) == A.rows


def column_space_basis(A: Matrix) -> list[int]:
    """Indices of a maximal independent set of columns (the pivot columns)."""
    return _reduce(A)[1]


def in_span(columns: Sequence[Sequence], v: Sequence, field: FieldSpec) -> list | None:
    """Coefficients expressing v in terms of ``columns``, or None."""
    n = len(v)
    if not columns:
        return [] if all(not field(x) for x in v) else None
    A = Matrix.from_columns(columns, field, rows=n)
    return solve(A, v)


def vec(values: Iterable, field: FieldSpec) -> list:
    return [field(x) for x in values]
