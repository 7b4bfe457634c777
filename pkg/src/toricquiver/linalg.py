"""Exact integer and rational matrices.

Scalars are Python ints and :class:`fractions.Fraction` (normalized, unbounded).
Matrices are immutable, row-major, and may have zero rows or columns so that
zero-dimensional vector spaces compose like any other.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class SingularError(ArithmeticError):
    """A square matrix has no inverse."""


def to_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction. Floats are rejected."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if not text or any(c in text for c in ".eE_ ") or text.count("/") > 1:
            raise ValueError(f"not an exact rational: {x!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator: {x!r}") from None
    raise TypeError(f"not an exact rational: {x!r}")


def rational_to_json(x: Fraction) -> Union[int, str]:
    x = to_rational(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


class _Matrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(self._coerce(e) for e in entries)
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape {rows}x{cols}")
        if len(entries) != rows * cols:
            raise DimensionError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @staticmethod
    def _coerce(e):
        raise NotImplementedError

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        if any(len(c) != rows for c in columns):
            raise DimensionError("ragged columns")
        return cls(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return type(self).from_columns([self.row(i) for i in range(self.rows)], rows=self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return type(self)(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def __eq__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(e) for e in self.row(i)) + "]" for i in range(self.rows))
        return f"{type(self).__name__}({self.rows}x{self.cols}: [{body}])"

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def _result_type(self, other):
        return MatQ if isinstance(self, MatQ) or isinstance(other, MatQ) else type(self)

    def __add__(self, other):
        self._same_shape(other)
        return self._result_type(other)(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return self._result_type(other)(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return type(self)(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c):
        cls = MatQ if isinstance(c, Fraction) else type(self)
        return cls(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other):
        return mat_mul(self, other)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)


class MatZ(_Matrix):
    """Integer matrix."""

    __slots__ = ()

    @staticmethod
    def _coerce(e):
        if isinstance(e, bool):
            raise TypeError("booleans are not integers")
        if isinstance(e, Fraction):
            if e.denominator != 1:
                raise ValueError(f"non-integer entry {e}")
            return e.numerator
        if not isinstance(e, int):
            raise TypeError(f"non-integer entry {e!r}")
        return e

    def to_q(self) -> MatQ:
        return MatQ(self.rows, self.cols, self.entries)


class MatQ(_Matrix):
    """Rational matrix."""

    __slots__ = ()

    _coerce = staticmethod(to_rational)

    def to_z(self) -> MatZ:
        return MatZ(self.rows, self.cols, self.entries)

    def to_json(self) -> list[list]:
        return [[rational_to_json(e) for e in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data, rows: int | None = None, cols: int | None = None) -> MatQ:
        """Parse a row-major array of arrays; ``rows``/``cols`` pin the shape of empty matrices."""
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("matrix must be an array of arrays")
        if rows is not None and len(data) != rows:
            raise DimensionError(f"expected {rows} rows, got {len(data)}")
        if data:
            if cols is not None and len(data[0]) != cols:
                raise DimensionError(f"expected {cols} columns, got {len(data[0])}")
            cols = len(data[0])
        return cls.from_rows(data, cols=cols or 0)


def mat_mul(a: _Matrix, b: _Matrix):
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    cls = a._result_type(b)
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        out.extend(sum((x * y for x, y in zip(r, c)), 0) for c in bcols)
    return cls(a.rows, b.cols, out)


def mat_pow(a: MatQ, k: int) -> MatQ:
    """Integer power; negative exponents go through the exact inverse."""
    if not a.is_square:
        raise DimensionError("power of a non-square matrix")
    if k < 0:
        a, k = mat_inverse(a), -k
    result = type(a).identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# Rational elimination


def rref(a: _Matrix) -> tuple[MatQ, tuple[int, ...]]:
    """Reduced row echelon form over Q and the pivot columns.

    Pivots are chosen as the first nonzero entry in the column; magnitude is
    irrelevant in exact arithmetic.
    """
    m = [[to_rational(e) for e in a.row(i)] for i in range(a.rows)]
    pivots = []
    r = 0
    for c in range(a.cols):
        if r == a.rows:
            break
        pr = next((i for i in range(r, a.rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(a.rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return MatQ.from_rows(m, cols=a.cols), tuple(pivots)


def rank(a: _Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: _Matrix) -> tuple[int, list[MatQ]]:
    """Kernel of ``a`` as (dimension, basis of column vectors)."""
    r, pivots = rref(a)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row, f]
        basis.append(MatQ(a.cols, 1, v))
    return len(basis), basis


def mat_inverse(a: _Matrix) -> MatQ:
    if not a.is_square:
        raise DimensionError("inverse of a non-square matrix")
    n = a.rows
    aug = MatQ.from_rows([list(a.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)], cols=2 * n)
    r, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise SingularError(f"matrix of size {n} has rank {rank(a)}")
    return r.submatrix(range(n), range(n, 2 * n))


def is_invertible(a: _Matrix) -> bool:
    return a.is_square and rank(a) == a.rows


def solve(a: _Matrix, b: _Matrix) -> MatQ | None:
    """One solution ``x`` of ``a x = b`` (``b`` a column), or None when inconsistent."""
    aug = MatQ.from_rows([list(a.row(i)) + [b[i, 0]] for i in range(a.rows)], cols=a.cols + 1)
    r, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [Fraction(0)] * a.cols
    for row, pc in enumerate(pivots):
        x[pc] = r[row, a.cols]
    return MatQ(a.cols, 1, x)


# ---------------------------------------------------------------------------
# Integer normal forms


def det(a: _Matrix):
    """Exact determinant (Bareiss fraction-free elimination for integer input)."""
    if not a.is_square:
        raise DimensionError("determinant of a non-square matrix")
    n = a.rows
    m = [list(a.row(i)) for i in range(n)]
    integral = isinstance(a, MatZ)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if integral else num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def _bezout(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _combine_rows(m: list[list[int]], i: int, k: int, c: int) -> None:
    """Replace rows i, k by a unimodular combination that zeroes m[k][c]."""
    a, b = m[i][c], m[k][c]
    g, x, y = _bezout(a, b)
    p, q = a // g, b // g
    ri, rk = m[i], m[k]
    m[i] = [x * s + y * t for s, t in zip(ri, rk)]
    m[k] = [-q * s + p * t for s, t in zip(ri, rk)]


def hnf(a: MatZ) -> tuple[MatZ, MatZ]:
    """Row-style Hermite normal form: returns ``(h, u)`` with ``u @ a == h``.

    ``u`` is unimodular. In ``h`` the pivots are positive, everything below a
    pivot is zero, entries above a pivot lie in ``[0, pivot)``, and zero rows
    come last.
    """
    rows, cols = a.rows, a.cols
    # augmented [a | I]; the right block accumulates u
    m = [list(a.row(i)) + [1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for k in range(r + 1, rows):
            if m[k][c] != 0:
                _combine_rows(m, r, k, c)
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        piv = m[r][c]
        for i in range(r):
            q = m[i][c] // piv
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    h = MatZ.from_rows([row[:cols] for row in m], cols=cols)
    u = MatZ.from_rows([row[cols:] for row in m], cols=rows)
    return h, u


def snf(a: MatZ) -> tuple[MatZ, MatZ, MatZ]:
    """Smith normal form: returns ``(s, u, v)`` with ``u @ a @ v == s``.

    ``u`` and ``v`` are unimodular; ``s`` is diagonal with nonnegative entries
    ``d1 | d2 | ...``.
    """
    rows, cols = a.rows, a.cols
    s = [list(a.row(i)) for i in range(rows)]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, k):
        s[i], s[k] = s[k], s[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in s:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, f):  # row dst += f * row src
        s[dst] = [x + f * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):  # col dst += f * col src
        for row in s:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(s[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if s[i][j] != 0]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            piv = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = s[i][t] // piv
                if q:
                    add_row(i, t, -q)
                dirty |= s[i][t] != 0
            for j in range(t + 1, cols):
                q = s[t][j] // piv
                if q:
                    add_col(j, t, -q)
                dirty |= s[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if s[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return (
        MatZ.from_rows(s, cols=cols),
        MatZ.from_rows(u, cols=rows),
        MatZ.from_rows(v, cols=cols),
    )


def snf_diagonal(a: MatZ) -> tuple[int, ...]:
    s = snf(a)[0]
    return tuple(s[i, i] for i in range(min(s.rows, s.cols)))


def unimodular_inverse(a: MatZ) -> MatZ:
    """Integer inverse of a matrix with determinant +-1."""
    if abs(det(a)) != 1:
        raise SingularError("matrix is not unimodular")
    return mat_inverse(a).to_z()


def is_primitive(vector: Sequence[int]) -> bool:
    g = 0
    for x in vector:
        g = gcd(g, x)
    return g == 1
