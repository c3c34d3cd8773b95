"""Exact integer matrices and the Smith normal form.

Matrices are immutable and carry an explicit shape, so that matrices with
zero rows or zero columns are first-class values denoting zero maps into or
out of the zero group.  Homomorphisms act on column vectors.

>>> A = IntMatrix.from_rows([[2, 4], [6, 8]])
>>> U, D, V = smith_normal_form(A)
>>> D.diagonal()
[2, 4]
>>> U @ A @ V == D
True
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

Rows = list[list[int]]


@dataclass(frozen=True)
class IntMatrix:
    """A rows x cols matrix of Python integers stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if nrows == 0:
            return cls(0, cols or 0, ())
        ncols = len(rows[0])
        if cols is not None and cols != ncols:
            raise ValueError("column count mismatch")
        flat: list[int] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        """Build a matrix whose columns are the given vectors of length ``rows``."""
        ncols = len(columns)
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length mismatch")
        return cls(rows, ncols, tuple(int(columns[j][i]) for i in range(rows) for j in range(ncols)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        r = len(values) if rows is None else rows
        c = len(values) if cols is None else cols
        data = [[0] * c for _ in range(r)]
        for i, v in enumerate(values):
            data[i][i] = int(v)
        return cls.from_rows(data, c)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def to_rows(self) -> Rows:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic -------------------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(mat_mul(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.to_rows(), self.cols) if self.rows else IntMatrix(self.cols, 0, ())

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        c = self.cols
        e = self.entries
        return [sum(e[i * c + j] * vec[j] for j in range(c) if vec[j]) for i in range(self.rows)]

    def power(self, k: int) -> "IntMatrix":
        if self.rows != self.cols or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        rows = self.to_rows()
        return IntMatrix.from_rows([rows[i] for i in idx], self.cols)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([[r[j] for j in idx] for r in self.to_rows()], len(idx))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_rows()})"


def mat_mul(a: Rows, b: Rows, bcols: int) -> Rows:
    """Multiply list-of-rows matrices; ``bcols`` fixes the width when ``b`` is empty."""
    out: Rows = []
    for arow in a:
        acc = [0] * bcols
        for k, x in enumerate(arow):
            if x:
                brow = b[k]
                for j in range(bcols):
                    if brow[j]:
                        acc[j] += x * brow[j]
        out.append(acc)
    return out


def hstack(blocks: Sequence[IntMatrix], rows: int) -> IntMatrix:
    """Concatenate matrices side by side (all with ``rows`` rows)."""
    data: Rows = [[] for _ in range(rows)]
    cols = 0
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row mismatch in hstack")
        for i, r in enumerate(b.to_rows()):
            data[i].extend(r)
        cols += b.cols
    return IntMatrix.from_rows(data, cols) if rows else IntMatrix(0, cols, ())


def vstack(blocks: Sequence[IntMatrix], cols: int) -> IntMatrix:
    data: Rows = []
    for b in blocks:
        if b.cols != cols:
            raise ValueError("column mismatch in vstack")
        data.extend(b.to_rows())
    return IntMatrix.from_rows(data, cols) if data else IntMatrix(0, cols, ())


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, r in enumerate(b.to_rows()):
            data[r0 + i][c0:c0 + b.cols] = r
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(data, cols) if rows else IntMatrix(0, cols, ())


def kronecker(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product with row/column index (i, k) -> i * b.dim + k."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    ar, br = a.to_rows(), b.to_rows()
    data = [[0] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = ar[i][j]
            if not x:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    data[i * b.rows + k][j * b.cols + l] = x * br[k][l]
    return IntMatrix.from_rows(data, cols) if rows else IntMatrix(0, cols, ())


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """Smith decomposition ``D = U A V`` together with the inverses of U and V."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def invariants(self) -> list[int]:
        """Nonzero diagonal entries of D (the nonzero invariant factors)."""
        return [d for d in self.D.diagonal() if d != 0]


def smith_decomposition(a: IntMatrix) -> SmithForm:
    """Compute the Smith normal form with unimodular witnesses and their inverses."""
    m, n = a.rows, a.cols
    D = a.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i: int, j: int, c: int) -> None:
        # row_i += c * row_j
        Di, Dj = D[i], D[j]
        for k in range(n):
            if Dj[k]:
                Di[k] += c * Dj[k]
        Uii, Ujj = U[i], U[j]
        for k in range(m):
            if Ujj[k]:
                Uii[k] += c * Ujj[k]
        for row in Ui:
            if row[i]:
                row[j] -= c * row[i]

    def row_swap(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_neg(i: int) -> None:
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_add(j: int, i: int, c: int) -> None:
        # col_j += c * col_i
        for row in D:
            if row[i]:
                row[j] += c * row[i]
        for row in V:
            if row[i]:
                row[j] += c * row[i]
        Vii, Vjj = Vi[i], Vi[j]
        for k in range(n):
            if Vjj[k]:
                Vii[k] -= c * Vjj[k]

    def col_swap(i: int, j: int) -> None:
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Di = D[i]
                for j in range(t, n):
                    x = Di[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            clean = True
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // piv))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // piv))
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                if any(D[i][j] % piv for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            row_neg(t)
        if D[t][t] == 0:
            break

    mk = IntMatrix.from_rows
    return SmithForm(
        mk(U, m) if m else IntMatrix(0, 0, ()),
        mk(D, n) if m else IntMatrix(0, n, ()),
        mk(V, n) if n else IntMatrix(0, 0, ()),
        mk(Ui, m) if m else IntMatrix(0, 0, ()),
        mk(Vi, n) if n else IntMatrix(0, 0, ()),
    )


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``D = U @ a @ V`` diagonal, U and V unimodular,
    and the diagonal forming a divisibility chain."""
    s = smith_decomposition(a)
    return s.U, s.D, s.V


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice ``{x in Z^n : a x = 0}``."""
    s = smith_decomposition(a)
    r = len(s.invariants)
    return s.V.select_columns(range(r, a.cols))


def solve_integer(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """Return one integer X with ``a X = b``, or None when no solution exists."""
    if a.rows != b.rows:
        raise ValueError("row mismatch")
    s = smith_decomposition(a)
    ub = (s.U @ b).to_rows()
    diag = s.D.diagonal()
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        d = diag[i] if i < len(diag) else 0
        for j in range(b.cols):
            v = ub[i][j]
            if d == 0:
                if v != 0:
                    return None
            else:
                if v % d:
                    return None
                y[i][j] = v // d
    Y = IntMatrix.from_rows(y, b.cols) if a.cols else IntMatrix(0, b.cols, ())
    return s.V @ Y


def vector_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
