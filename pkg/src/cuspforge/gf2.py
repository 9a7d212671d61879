"""GF(2) linear algebra on int bitsets.

A matrix is a list of rows; each row is a Python int whose bit j is the
entry in column j.  Pivots are always chosen at the lowest set bit, so
every routine is deterministic for a fixed input ordering.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np


def lowbit(x: int) -> int:
    """Index of the lowest set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


class GF2Matrix:
    """Immutable bit-packed matrix over GF(2)."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = list(rows)
        self.ncols = ncols

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "GF2Matrix":
        ncols = len(entries[0]) if entries else 0
        rows = []
        for r in entries:
            acc = 0
            for j, v in enumerate(r):
                if v & 1:
                    acc |= 1 << j
            rows.append(acc)
        return cls(rows, ncols)

    def to_dense(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return len(reduce_rows(self.rows))

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix(transpose_rows(self.rows, self.ncols), len(self.rows))

    def mul_vector(self, x: int) -> int:
        """Matrix times column vector: bit i of the result is <row_i, x>."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out


def reduce_rows(rows: Iterable[int]) -> Dict[int, int]:
    """Row reduce; returns {pivot column: reduced row}."""
    pivots: Dict[int, int] = {}
    for row in rows:
        row = reduce_vector(row, pivots)
        if row:
            pivots[lowbit(row)] = row
    return pivots


def reduce_vector(v: int, pivots: Dict[int, int]) -> int:
    """Reduce v against a pivot dict (lowest-bit pivots)."""
    while v:
        p = lowbit(v)
        row = pivots.get(p)
        if row is None:
            return v
        v ^= row
    return v


def rref_pivots(pivots: Dict[int, int]) -> Dict[int, int]:
    """Inter-reduce pivot rows so each pivot bit appears in one row only."""
    out: Dict[int, int] = {}
    for p in sorted(pivots, reverse=True):
        row = pivots[p]
        for q in sorted(out):
            if q != p and (row >> q) & 1:
                row ^= out[q]
        out[p] = row
    return out


def normal_form(v: int, rref: Dict[int, int]) -> int:
    """Canonical representative of v modulo the row space (rref rows)."""
    for q in rref:
        if (v >> q) & 1:
            v ^= rref[q]
    return v


def rank_of_rows(rows: Iterable[int]) -> int:
    return len(reduce_rows(rows))


def span_dimension(vectors: Iterable[int]) -> int:
    return rank_of_rows(vectors)


def in_span(v: int, pivots: Dict[int, int]) -> bool:
    return reduce_vector(v, pivots) == 0


def left_kernel_basis(rows: Sequence[int]) -> List[int]:
    """Basis of {x : sum of rows selected by x is 0}, one bitmask per vector."""
    n = len(rows)
    pivots: Dict[int, Tuple[int, int]] = {}  # pivot col -> (row, tag)
    kernel: List[int] = []
    for i, row in enumerate(rows):
        tag = 1 << i
        while row:
            p = lowbit(row)
            hit = pivots.get(p)
            if hit is None:
                break
            row ^= hit[0]
            tag ^= hit[1]
        if row:
            pivots[lowbit(row)] = (row, tag)
        else:
            kernel.append(tag)
    return kernel


def right_kernel_basis(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of {x : M x = 0} for the row-matrix M."""
    return left_kernel_basis(transpose_rows(rows, ncols))


def solve_rows(rows: Sequence[int], target: int) -> Optional[int]:
    """Find x (bitmask over rows) with xor of selected rows == target, or None."""
    pivots: Dict[int, Tuple[int, int]] = {}
    for i, row in enumerate(rows):
        tag = 1 << i
        while row:
            p = lowbit(row)
            hit = pivots.get(p)
            if hit is None:
                break
            row ^= hit[0]
            tag ^= hit[1]
        if row:
            pivots[lowbit(row)] = (row, tag)
    x = 0
    while target:
        p = lowbit(target)
        hit = pivots.get(p)
        if hit is None:
            return None
        target ^= hit[0]
        x ^= hit[1]
    return x


def quotient_basis(vectors: Sequence[int], subspace_rows: Sequence[int]) -> List[int]:
    """Representatives of a basis of span(vectors) / span(subspace_rows)."""
    pivots = reduce_rows(subspace_rows)
    reps: List[int] = []
    for v in vectors:
        red = reduce_vector(v, pivots)
        if red:
            pivots[lowbit(red)] = red
            reps.append(v)
    return reps


def transpose_rows(rows: Sequence[int], ncols: int) -> List[int]:
    """Transpose a bit-row matrix; numpy-packed for anything non-tiny."""
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [0] * ncols
    if nrows * ncols <= 4096:
        out = [0] * ncols
        for i, r in enumerate(rows):
            while r:
                j = lowbit(r)
                out[j] |= 1 << i
                r &= r - 1
        return out
    nbytes = (ncols + 7) // 8
    buf = np.frombuffer(
        b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8
    ).reshape(nrows, nbytes)
    bits = np.unpackbits(buf, axis=1, bitorder="little")[:, :ncols]
    packed = np.packbits(bits.T, axis=1, bitorder="little")
    return [int.from_bytes(packed[j].tobytes(), "little") for j in range(ncols)]


def identity_rows(n: int) -> List[int]:
    return [1 << i for i in range(n)]


def vector_from_indices(indices: Iterable[int]) -> int:
    acc = 0
    for i in indices:
        acc |= 1 << i
    return acc


def indices_of_vector(v: int) -> List[int]:
    out = []
    while v:
        out.append(lowbit(v))
        v &= v - 1
    return out
