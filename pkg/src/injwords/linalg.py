"""Exact sparse integer matrices and Smith normal form.

Everything here uses Python ints, so intermediate coefficient growth is
never truncated.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence


class SparseIntMatrix:
    """A ``rows x cols`` integer matrix stored as ``{(row, col): value}``.

    Zero values are never stored.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        if entries:
            if isinstance(entries, dict):
                items = entries.items()
            else:
                items = (((i, j), v) for i, j, v in entries)
            for (i, j), v in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry {(i, j)} outside {rows}x{cols}")
                if v:
                    self.entries[i, j] = self.entries.get((i, j), 0) + v
                    if not self.entries[i, j]:
                        del self.entries[i, j]

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "SparseIntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    m.entries[i, j] = int(v)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def is_zero(self) -> bool:
        return not self.entries

    def triplets(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def row_dicts(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "SparseIntMatrix":
        rmap = {r: k for k, r in enumerate(row_idx)}
        cmap = {c: k for k, c in enumerate(col_idx)}
        out = SparseIntMatrix(len(row_idx), len(col_idx))
        for (i, j), v in self.entries.items():
            if i in rmap and j in cmap:
                out.entries[rmap[i], cmap[j]] = v
        return out

    def __add__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = SparseIntMatrix(self.rows, self.cols)
        out.entries = dict(self.entries)
        for k, v in other.entries.items():
            s = out.entries.get(k, 0) + v
            if s:
                out.entries[k] = s
            else:
                out.entries.pop(k, None)
        return out

    def __neg__(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return self + (-other)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right_rows = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in right_rows[k].items():
                acc[i, j] = acc.get((i, j), 0) + a * b
        out = SparseIntMatrix(self.rows, other.cols)
        out.entries = {k: v for k, v in acc.items() if v}
        return out

    def matvec(self, vec: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector ``{index: value}``."""
        cols = self.columns()
        out: dict[int, int] = {}
        for j, x in vec.items():
            for i, a in cols[j].items():
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v}


@dataclass
class SmithForm:
    """Invariant factors of a matrix, optionally with ``U @ M @ V == diag``.

    ``U_inv`` and ``V_inv`` are carried alongside so that coordinates with
    respect to the new bases can be computed exactly.
    """

    diag: tuple[int, ...]
    shape: tuple[int, int]
    U: Optional[SparseIntMatrix] = None
    V: Optional[SparseIntMatrix] = None
    U_inv: Optional[SparseIntMatrix] = field(default=None, repr=False)
    V_inv: Optional[SparseIntMatrix] = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.diag)

    def diagonal_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix(*self.shape, {(i, i): d for i, d in enumerate(self.diag)})

    def divisibility_ok(self) -> bool:
        return all(d > 0 for d in self.diag) and all(
            b % a == 0 for a, b in zip(self.diag, self.diag[1:])
        )


def normalize_diagonal(values: Iterable[int]) -> tuple[int, ...]:
    """Turn any nonzero diagonal into the equivalent divisibility chain.

    ``diag(a, b)`` is equivalent to ``diag(gcd, lcm)``; sweeping that over all
    pairs produces invariant factors.
    """
    d = sorted(abs(v) for v in values if v)
    ones = [v for v in d if v == 1]
    rest = [v for v in d if v != 1]
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    return tuple(ones + sorted(rest))


def smith_normal_form(m: SparseIntMatrix, want_transforms: bool = False) -> SmithForm:
    if want_transforms:
        return _dense_snf(m)
    return SmithForm(diag=_sparse_invariant_factors(m), shape=m.shape)


def _sparse_invariant_factors(m: SparseIntMatrix) -> tuple[int, ...]:
    """Sparse elimination keeping only the diagonal.

    Pivot is a nonzero entry of minimal absolute value, ties broken by the
    smallest row and then the smallest column. Unit pivots are eliminated
    with row operations only; the column operations they would need touch
    nothing but the pivot row, which is dropped.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    active = sorted(rows)
    diag: list[int] = []

    def drop_row(i):
        for j in rows.pop(i):
            s = cols[j]
            s.discard(i)
            if not s:
                del cols[j]
        del active[bisect_left(active, i)]

    def axpy(k, i, q):
        # row_k -= q * row_i
        rk = rows[k]
        for j, v in rows[i].items():
            nv = rk.get(j, 0) - q * v
            if nv:
                if j not in rk:
                    cols.setdefault(j, set()).add(k)
                rk[j] = nv
            elif j in rk:
                del rk[j]
                s = cols[j]
                s.discard(k)
                if not s:
                    del cols[j]
        if not rk:
            del rows[k]
            del active[bisect_left(active, k)]

    def find_pivot():
        for i in active:
            best = None
            for j, v in rows[i].items():
                if (v == 1 or v == -1) and (best is None or j < best):
                    best = j
            if best is not None:
                return i, best
        best_key = None
        for i in active:
            for j, v in rows[i].items():
                key = (abs(v), i, j)
                if best_key is None or key < best_key:
                    best_key = key
        return best_key[1], best_key[2]

    while active:
        i, j = find_pivot()
        p = rows[i][j]
        if p == 1 or p == -1:
            for k in sorted(cols[j] - {i}):
                axpy(k, i, rows[k][j] * p)
            diag.append(1)
            drop_row(i)
            continue
        # non-unit pivot: reduce by remainders until the cross is clear
        for k in sorted(cols[j] - {i}):
            axpy(k, i, rows[k][j] // p)
        for c in sorted(set(rows[i]) - {j}):
            q = rows[i][c] // p
            for k in list(cols[j]):
                rk = rows[k]
                nv = rk.get(c, 0) - q * rk[j]
                if nv:
                    if c not in rk:
                        cols.setdefault(c, set()).add(k)
                    rk[c] = nv
                elif c in rk:
                    del rk[c]
                    s = cols[c]
                    s.discard(k)
                    if not s:
                        del cols[c]
        if cols[j] == {i} and len(rows[i]) == 1:
            diag.append(abs(p))
            drop_row(i)
        # otherwise a smaller remainder exists; pick again
    return normalize_diagonal(diag)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _dense_snf(m: SparseIntMatrix) -> SmithForm:
    """Dense Smith normal form with unimodular transforms and their inverses.

    Row operations on ``A`` are mirrored on ``U`` (left) and ``U_inv``
    (right, inverse operation); column operations likewise on ``V``/``V_inv``.
    """
    nr, nc = m.shape
    A = m.to_dense()
    U, Ui = _identity(nr), _identity(nr)
    V, Vi = _identity(nc), _identity(nc)

    def row_swap(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]
        for row in Ui:
            row[a], row[b] = row[b], row[a]

    def col_swap(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    def row_add(dst, src, q):
        # row_dst += q * row_src
        if not q:
            return
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= q * row[dst]

    def col_add(dst, src, q):
        # col_dst += q * col_src
        if not q:
            return
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def row_neg(a):
        A[a] = [-x for x in A[a]]
        U[a] = [-x for x in U[a]]
        for row in Ui:
            row[a] = -row[a]

    diag = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for k in range(t + 1, nr):
                if A[k][t]:
                    row_add(k, t, -(A[k][t] // p))
                    if A[k][t]:
                        dirty = True
            for k in range(t + 1, nc):
                if A[t][k]:
                    col_add(k, t, -(A[t][k] // p))
                    if A[t][k]:
                        dirty = True
            if dirty:
                best = None
                for k in range(t, nr):
                    if A[k][t] and (best is None or abs(A[k][t]) < best[0]):
                        best = (abs(A[k][t]), k, "r")
                for k in range(t, nc):
                    if A[t][k] and (best is None or abs(A[t][k]) < best[0]):
                        best = (abs(A[t][k]), k, "c")
                if best[2] == "r":
                    row_swap(t, best[1])
                else:
                    col_swap(t, best[1])
                continue
            # cross is clear; enforce divisibility of the remaining block
            bad = next(
                (k for k in range(t + 1, nr) if any(A[k][c] % p for c in range(t + 1, nc))),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
        t += 1

    return SmithForm(
        diag=tuple(diag),
        shape=m.shape,
        U=SparseIntMatrix.from_dense(U, nr),
        V=SparseIntMatrix.from_dense(V, nc),
        U_inv=SparseIntMatrix.from_dense(Ui, nr),
        V_inv=SparseIntMatrix.from_dense(Vi, nc),
    )


def kernel_basis(m: SparseIntMatrix) -> tuple[SparseIntMatrix, SmithForm]:
    """A lattice basis of ``ker m`` as the columns of a ``cols x k`` matrix."""
    snf = _dense_snf(m)
    return snf.V.submatrix(range(m.cols), range(snf.rank, m.cols)), snf


def determinant(m: SparseIntMatrix) -> int:
    """Bareiss fraction-free determinant of a square matrix."""
    n = m.rows
    if n != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = m.to_dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
