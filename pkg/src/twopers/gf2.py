"""Column-sparse GF(2) matrices as Python-int bitmasks.

Rows and columns are 1-based, matching the index sets [m_j] used by the
boundary-matrix conventions.  Column j is an int whose bit (r - 1) holds the
entry in row r; the pivot of a nonzero column is therefore `int.bit_length()`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantError


def mask_from_rows(rows) -> int:
    m = 0
    for r in rows:
        m |= 1 << (r - 1)
    return m


def rows_from_mask(mask: int) -> list[int]:
    out = []
    r = 1
    while mask:
        if mask & 1:
            out.append(r)
        mask >>= 1
        r += 1
    return out


@dataclass
class GF2Matrix:
    """rows x cols matrix over GF(2), stored column-sparse."""

    rows: int
    cols: int
    columns: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.columns:
            self.columns = [0] * self.cols
        if len(self.columns) != self.cols:
            raise InvariantError("column count mismatch")
        limit = 1 << self.rows
        if any(c >= limit or c < 0 for c in self.columns):
            raise InvariantError("row index out of range")

    @classmethod
    def from_row_lists(cls, rows: int, row_lists: list[list[int]]) -> "GF2Matrix":
        return cls(rows, len(row_lists), [mask_from_rows(rs) for rs in row_lists])

    def column(self, j: int) -> int:
        return self.columns[j - 1]

    def column_rows(self, j: int) -> list[int]:
        """Strictly sorted row indices of the 1-entries in column j."""
        return rows_from_mask(self.columns[j - 1])

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j - 1] >> (i - 1)) & 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.columns)

    def copy(self) -> "GF2Matrix":
        return GF2Matrix(self.rows, self.cols, list(self.columns))

    def matmul(self, other: "GF2Matrix") -> "GF2Matrix":
        """self @ other over GF(2); requires self.cols == other.rows."""
        if self.cols != other.rows:
            raise InvariantError("dimension mismatch in GF(2) product")
        out = []
        for c in other.columns:
            acc = 0
            k = 0
            while c:
                if c & 1:
                    acc ^= self.columns[k]
                c >>= 1
                k += 1
            out.append(acc)
        return GF2Matrix(self.rows, other.cols, out)

    def transpose(self) -> "GF2Matrix":
        cols = [0] * self.rows
        for j, c in enumerate(self.columns):
            r = 0
            while c:
                if c & 1:
                    cols[r] |= 1 << j
                c >>= 1
                r += 1
        return GF2Matrix(self.cols, self.rows, cols)

    def permute_columns(self, col_at: list[int]) -> "GF2Matrix":
        """New matrix whose column p is old column col_at[p-1] (1-based values)."""
        return GF2Matrix(self.rows, self.cols, [self.columns[c - 1] for c in col_at])

    def permute_rows(self, pos_of: list[int]) -> "GF2Matrix":
        """New matrix with old row k moved to row pos_of[k-1] (1-based values)."""
        out = []
        for c in self.columns:
            acc = 0
            k = 0
            while c:
                if c & 1:
                    acc |= 1 << (pos_of[k] - 1)
                c >>= 1
                k += 1
            out.append(acc)
        return GF2Matrix(self.rows, self.cols, out)

    def swap_columns(self, k: int) -> None:
        """Swap columns k and k+1 in place."""
        self.columns[k - 1], self.columns[k] = self.columns[k], self.columns[k - 1]

    def swap_rows(self, k: int) -> None:
        """Swap rows k and k+1 in place."""
        pair = 0b11 << (k - 1)
        for j, c in enumerate(self.columns):
            b = (c >> (k - 1)) & 0b11
            if b == 0b01 or b == 0b10:
                self.columns[j] = c ^ pair


def rank(columns) -> int:
    """GF(2) rank of a span given as int bitmask vectors."""
    echelon: dict[int, int] = {}
    r = 0
    for v in columns:
        v = reduce_vector(v, echelon)
        if v:
            echelon[v.bit_length()] = v
            r += 1
    return r


def reduce_vector(v: int, echelon: dict[int, int]) -> int:
    """Reduce v against an echelon {pivot: vector} until its pivot is free."""
    while v:
        p = v.bit_length()
        if p not in echelon:
            break
        v ^= echelon[p]
    return v


class Echelon:
    """Incremental GF(2) column echelon (pivot -> reduced vector)."""

    __slots__ = ("by_pivot",)

    def __init__(self, vectors=()) -> None:
        self.by_pivot: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def add(self, v: int) -> bool:
        """Insert v's reduction; returns True if it enlarged the span."""
        v = reduce_vector(v, self.by_pivot)
        if v:
            self.by_pivot[v.bit_length()] = v
            return True
        return False

    def contains(self, v: int) -> bool:
        return reduce_vector(v, self.by_pivot) == 0

    @property
    def dim(self) -> int:
        return len(self.by_pivot)

    def vectors(self) -> list[int]:
        return list(self.by_pivot.values())

    def copy(self) -> "Echelon":
        e = Echelon()
        e.by_pivot = dict(self.by_pivot)
        return e
