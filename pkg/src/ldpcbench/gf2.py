"""Dense GF(2) matrices packed into Python integers, one integer per row.

Bit ``j`` of a row integer holds column ``j``. Row operations are single
integer XORs, which keeps elimination on the short codes handled here cheap.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import DomainError


class BitMatrix:
    """Immutable binary matrix.

    ``rows`` may be zero (e.g. the kernel basis of a full-rank square matrix);
    ``cols`` must be positive.
    """

    __slots__ = ("_rows", "_ncols", "_hash")

    def __init__(self, rows: Iterable[int], ncols: int):
        if ncols < 1:
            raise DomainError("BitMatrix needs at least one column")
        mask = (1 << ncols) - 1
        rows = tuple(int(r) for r in rows)
        for r in rows:
            if r < 0 or r & ~mask:
                raise DomainError(f"row {r:#x} does not fit in {ncols} columns")
        self._rows = rows
        self._ncols = ncols
        self._hash = None

    @classmethod
    def from_array(cls, a) -> BitMatrix:
        a = np.asarray(a)
        if a.ndim != 2:
            raise DomainError("expected a 2-D array")
        return cls((pack(row) for row in a.tolist()), a.shape[1])

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], ncols: int) -> BitMatrix:
        rows = []
        for s in supports:
            v = 0
            for j in s:
                v |= 1 << j
            rows.append(v)
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls((1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls([0] * nrows, ncols)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    @property
    def row_ints(self) -> tuple[int, ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self._ncols):
            raise IndexError(ij)
        return (self._rows[i] >> j) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self._ncols})"

    def __str__(self) -> str:
        return "\n".join(
            "".join("1" if (r >> j) & 1 else "0" for j in range(self._ncols)) for r in self._rows
        )

    def to_array(self, dtype=np.uint8) -> np.ndarray:
        out = np.zeros((self.nrows, self._ncols), dtype=dtype)
        for i, r in enumerate(self._rows):
            for j in support(r):
                out[i, j] = 1
        return out

    def row_support(self, i: int) -> list[int]:
        return support(self._rows[i])

    def column_ints(self) -> list[int]:
        """Columns packed as integers over the row index."""
        cols = [0] * self._ncols
        for i, r in enumerate(self._rows):
            for j in support(r):
                cols[j] |= 1 << i
        return cols

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def column_weights(self) -> list[int]:
        return [c.bit_count() for c in self.column_ints()]

    def count_ones(self) -> int:
        return sum(r.bit_count() for r in self._rows)

    def transpose(self) -> BitMatrix:
        if self.nrows == 0:
            raise DomainError("cannot transpose a matrix with no rows")
        return BitMatrix(self.column_ints(), self.nrows)

    def vstack(self, other: BitMatrix | Sequence[int]) -> BitMatrix:
        extra = other.row_ints if isinstance(other, BitMatrix) else tuple(other)
        if isinstance(other, BitMatrix) and other.ncols != self._ncols:
            raise DomainError("column count mismatch")
        return BitMatrix(self._rows + tuple(extra), self._ncols)

    def select_columns(self, cols: Sequence[int]) -> BitMatrix:
        rows = []
        for r in self._rows:
            v = 0
            for t, j in enumerate(cols):
                if (r >> j) & 1:
                    v |= 1 << t
            rows.append(v)
        return BitMatrix(rows, len(cols))

    def mul_vec(self, x: int) -> int:
        """Syndrome ``M x^T`` of a packed vector, packed over the row index."""
        s = 0
        for i, r in enumerate(self._rows):
            if (r & x).bit_count() & 1:
                s |= 1 << i
        return s

    def matmul(self, other: BitMatrix) -> BitMatrix:
        if self._ncols != other.nrows:
            raise DomainError("inner dimensions differ")
        out = []
        orows = other.row_ints
        for r in self._rows:
            acc = 0
            for j in support(r):
                acc ^= orows[j]
            out.append(acc)
        return BitMatrix(out, other.ncols)


def support(x: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def pack(bits: Iterable[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b:
            v |= 1 << j
    return v


def unpack(x: int, n: int) -> np.ndarray:
    return np.array([(x >> j) & 1 for j in range(n)], dtype=np.uint8)


def rank_and_rref(m: BitMatrix) -> tuple[int, BitMatrix, list[int]]:
    """Reduced row-echelon form by Gauss-Jordan elimination.

    The pivot for each column is the first row at or below the current
    position holding a one, so the result is deterministic.
    Returns ``(rank, R, pivot_cols)``; ``R`` has the same shape as ``m``.
    """
    rows = list(m.row_ints)
    nr = len(rows)
    pivots: list[int] = []
    top = 0
    for col in range(m.ncols):
        if top == nr:
            break
        bit = 1 << col
        for i in range(top, nr):
            if rows[i] & bit:
                break
        else:
            continue
        rows[top], rows[i] = rows[i], rows[top]
        p = rows[top]
        for i in range(nr):
            if i != top and rows[i] & bit:
                rows[i] ^= p
        pivots.append(col)
        top += 1
    return top, BitMatrix(rows, m.ncols), pivots


def rank(m: BitMatrix) -> int:
    return rank_of_ints(m.row_ints)


def rank_of_ints(vectors: Iterable[int]) -> int:
    """Rank of packed vectors via an XOR basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            lead = v.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                basis[lead] = v
                break
            v ^= b
    return len(basis)


def row_basis(m: BitMatrix) -> BitMatrix:
    """Nonzero rows of the RREF, i.e. a basis of the row space."""
    r, R, _ = rank_and_rref(m)
    return BitMatrix(R.row_ints[:r], m.ncols)


def null_space_basis(m: BitMatrix) -> BitMatrix:
    """Rows spanning ``{x : m x^T = 0}``, one per free column of the RREF."""
    r, R, pivots = rank_and_rref(m)
    pivot_set = set(pivots)
    rrows = R.row_ints
    out = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, p in enumerate(pivots):
            if (rrows[i] >> f) & 1:
                v |= 1 << p
        out.append(v)
    return BitMatrix(out, m.ncols)


def in_row_space(m: BitMatrix, v: int) -> bool:
    return rank_of_ints(m.row_ints + (v,)) == rank(m)


def same_row_space(a: BitMatrix, b: BitMatrix) -> bool:
    ra = rank(a)
    return ra == rank(b) and rank_of_ints(a.row_ints + b.row_ints) == ra
