"""Boundary-matrix reduction, RU-decompositions, and vineyard transpositions.

The reduction is the standard left-to-right column algorithm.  A decomposition
is kept as D = R * U with R reduced (distinct pivots) and U unit
upper-triangular.  U is stored explicitly, row-major (one bitmask int per
row), so that both the column operations of the reduction and the vineyard
fix-ups are single-int XORs.

Vineyard updates repair a decomposition after transposing two adjacent
columns (D -> D*P) or rows (D -> P*D) in time linear in the matrix size:

* column swap: if U[k,k+1] = 1 it is first cleared by R[:,k+1] += R[:,k] and
  U[k,:] += U[k+1,:]; then R's columns and U's rows and columns are swapped;
  if the two swapped columns of R now share a pivot, one more column addition
  (earlier into later) restores reducedness.
* row swap: R's rows are swapped; the only possible pivot collision is between
  the former pivot-k column and a pivot-(k+1) column that also contains row k,
  and adding the earlier column into the later one resolves it.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantError
from .gf2 import Echelon, GF2Matrix


@dataclass
class RuPair:
    """R reduced, U unit upper-triangular, with D = R * U."""

    R: GF2Matrix
    U_rows: list[int] | None  # row i (0-based list) -> bitmask over columns
    pivot_owner: dict[int, int]  # pivot row -> owning column (both 1-based)

    @property
    def n(self) -> int:
        return self.R.cols

    def low(self, j: int) -> int | None:
        c = self.R.column(j)
        return c.bit_length() if c else None

    def u_entry(self, i: int, j: int) -> int:
        if self.U_rows is None:
            raise InvariantError("U was not recorded for this reduction")
        return (self.U_rows[i - 1] >> (j - 1)) & 1

    def u_matrix(self) -> GF2Matrix:
        """U as an explicit column-sparse matrix (for checks and tests)."""
        n = self.n
        cols = [0] * n
        for i in range(n):
            row = self.U_rows[i]
            j = 0
            while row:
                if row & 1:
                    cols[j] |= 1 << i
                row >>= 1
                j += 1
        return GF2Matrix(n, n, cols)

    def reconstruct(self) -> GF2Matrix:
        """R * U, which must equal the (permuted) matrix being decomposed."""
        return self.R.matmul(self.u_matrix())

    def check(self, D: GF2Matrix | None = None) -> None:
        """Assert R reduced, U unit upper-triangular, and optionally D = R*U."""
        seen: set[int] = set()
        for j in range(1, self.n + 1):
            p = self.low(j)
            if p is not None:
                if p in seen:
                    raise InvariantError(f"duplicate pivot {p} in reduced matrix")
                seen.add(p)
                if self.pivot_owner.get(p) != j:
                    raise InvariantError("pivot owner table out of date")
        if set(self.pivot_owner) != seen:
            raise InvariantError("pivot owner table has stale entries")
        if self.U_rows is not None:
            n = self.n
            for i in range(n):
                row = self.U_rows[i]
                if (row >> i) & 1 != 1:
                    raise InvariantError("U diagonal entry is zero")
                if row & ((1 << i) - 1):
                    raise InvariantError("U is not upper-triangular")
            if D is not None and self.reconstruct().columns != D.columns:
                raise InvariantError("D = R*U reconstruction failed")

    def copy(self) -> "RuPair":
        return RuPair(
            self.R.copy(),
            None if self.U_rows is None else list(self.U_rows),
            dict(self.pivot_owner),
        )


def reduce_matrix(D: GF2Matrix, record_ops: bool = True) -> RuPair:
    """Left-to-right column reduction; O(rows * cols^2) worst case."""
    R = D.copy()
    n = R.cols
    U_rows = [1 << i for i in range(n)] if record_ops else None
    owner: dict[int, int] = {}
    cols = R.columns
    for j in range(n):
        c = cols[j]
        while c:
            p = c.bit_length()
            l = owner.get(p)
            if l is None:
                owner[p] = j + 1
                break
            c ^= cols[l - 1]
            if U_rows is not None:
                U_rows[l - 1] ^= U_rows[j]
        cols[j] = c
    return RuPair(R, U_rows, owner)


def _add_column(pair: RuPair, src: int, dst: int) -> None:
    """R[:,dst] += R[:,src] and the matching U row operation (src < dst)."""
    pair.R.columns[dst - 1] ^= pair.R.columns[src - 1]
    if pair.U_rows is not None:
        pair.U_rows[src - 1] ^= pair.U_rows[dst - 1]


def transpose_cols(pair: RuPair, k: int) -> None:
    """Repair the decomposition for D -> D * P(k, k+1)."""
    if not 1 <= k < pair.n:
        raise InvariantError(f"column transposition index {k} out of range")
    if pair.U_rows is None:
        raise InvariantError("vineyard update requires a recorded U")
    for j in (k, k + 1):
        p = pair.low(j)
        if p is not None:
            del pair.pivot_owner[p]
    did_clear = pair.u_entry(k, k + 1) == 1
    if did_clear:
        _add_column(pair, k, k + 1)
    pair.R.swap_columns(k)
    pair.U_rows[k - 1], pair.U_rows[k] = pair.U_rows[k], pair.U_rows[k - 1]
    pair_mask = 0b11 << (k - 1)
    for i in range(pair.n):
        b = (pair.U_rows[i] >> (k - 1)) & 0b11
        if b == 0b01 or b == 0b10:
            pair.U_rows[i] ^= pair_mask
    ck, ck1 = pair.R.columns[k - 1], pair.R.columns[k]
    if did_clear and ck and ck1 and ck.bit_length() == ck1.bit_length():
        _add_column(pair, k, k + 1)
    for j in (k, k + 1):
        c = pair.R.column(j)
        if c:
            p = c.bit_length()
            if p in pair.pivot_owner:
                raise InvariantError("column transposition left duplicate pivots")
            pair.pivot_owner[p] = j


def transpose_rows(pair: RuPair, k: int) -> None:
    """Repair the decomposition for D -> P(k, k+1) * D."""
    if pair.U_rows is None:
        raise InvariantError("vineyard update requires a recorded U")
    a = pair.pivot_owner.get(k)
    b = pair.pivot_owner.get(k + 1)
    b_had_k = b is not None and pair.R.entry(k, b) == 1
    pair.R.swap_rows(k)
    if a is not None and b is not None and b_had_k:
        p, q = min(a, b), max(a, b)
        _add_column(pair, p, q)
        pair.pivot_owner[k + 1] = p
        pair.pivot_owner[k] = q
        if pair.R.column(q).bit_length() != k or pair.R.column(p).bit_length() != k + 1:
            raise InvariantError("row transposition produced unexpected pivots")
    elif a is not None and b is not None:
        pair.pivot_owner[k + 1] = a
        pair.pivot_owner[k] = b
    elif a is not None:
        pair.pivot_owner[k + 1] = a
        del pair.pivot_owner[k]
    elif b is not None and not b_had_k:
        pair.pivot_owner[k] = b
        del pair.pivot_owner[k + 1]


@dataclass
class RuState:
    """A pair of RU-decompositions for the two matrices of a 1-D FI-rep."""

    ru1: RuPair
    ru2: RuPair

    @classmethod
    def reduce(cls, D1: GF2Matrix, D2: GF2Matrix, record_ops: bool = True) -> "RuState":
        return cls(reduce_matrix(D1, record_ops), reduce_matrix(D2, record_ops))

    def transpose_left(self, k: int) -> None:
        """Transpose positions k, k+1 of [m1]: D1 columns and D2 rows."""
        transpose_cols(self.ru1, k)
        transpose_rows(self.ru2, k)

    def transpose_right(self, k: int) -> None:
        """Transpose positions k, k+1 of [m2]: D2 columns."""
        transpose_cols(self.ru2, k)

    def check(self, D1: GF2Matrix | None = None, D2: GF2Matrix | None = None) -> None:
        self.ru1.check(D1)
        self.ru2.check(D2)


def pairs_ess(state: RuState, m1: int) -> tuple[set[tuple[int, int]], set[int]]:
    """Persistence pairs {(pivot row, column)} of R2 and essential [m1] indices."""
    pairs = set()
    paired_rows = set()
    for j in range(1, state.ru2.n + 1):
        p = state.ru2.low(j)
        if p is not None:
            pairs.add((p, j))
            paired_rows.add(p)
    ess = {
        i
        for i in range(1, m1 + 1)
        if state.ru1.R.column(i) == 0 and i not in paired_rows
    }
    return pairs, ess


def barcode_from_ru(grades1, grades2, state: RuState):
    """Intervals [gr1(j), gr2(k)) per pair plus [gr1(j), inf) per essential.

    Grade lists must be non-decreasing.  Empty intervals (birth == death) are
    retained; callers filter them per their own theorems.
    """
    for g in (grades1, grades2):
        if any(a > b for a, b in zip(g, g[1:])):
            raise InvariantError("grade lists must be non-decreasing")
    pairs, ess = pairs_ess(state, len(grades1))
    bars = [(grades1[j - 1], grades2[k - 1]) for (j, k) in pairs]
    bars.extend((grades1[j - 1], None) for j in ess)
    return sorted(bars, key=lambda b: (b[0], b[1] is None, b[1] if b[1] is not None else 0))


def barcode_by_rank(grades1, grades2, D1: GF2Matrix, D2: GF2Matrix):
    """Ground-truth 1-D barcode from the rank function, by inclusion-exclusion.

    Independent of the reduction path: dimensions and ranks of all induced
    maps M_s -> M_t are computed from cycle/boundary spans directly.  Only
    intended for small instances.
    """
    values = sorted(set(grades1) | set(grades2))
    if not values:
        return []
    m1 = len(grades1)

    # cycle span of D1-columns with grade <= v, and boundary span of D2-columns
    kernels: list[list[int]] = []
    boundaries: list[Echelon] = []
    ech = Echelon()
    combos: dict[int, int] = {}  # pivot -> combination mask over [m1]
    kern: list[int] = []
    order1 = sorted(range(1, m1 + 1), key=lambda j: grades1[j - 1])
    order2 = sorted(range(1, D2.cols + 1), key=lambda j: grades2[j - 1])
    i1 = i2 = 0
    bech = Echelon()
    for v in values:
        while i1 < m1 and grades1[order1[i1] - 1] <= v:
            j = order1[i1]
            c = D1.column(j)
            combo = 1 << (j - 1)
            while c:
                p = c.bit_length()
                if p not in combos:
                    combos[p] = combo
                    ech.by_pivot[p] = c
                    break
                c ^= ech.by_pivot[p]
                combo ^= combos[p]
            else:
                kern.append(combo)
            i1 += 1
        while i2 < D2.cols and grades2[order2[i2] - 1] <= v:
            bech.add(D2.column(order2[i2]))
            i2 += 1
        kernels.append(list(kern))
        boundaries.append(bech.copy())

    def rank_map(si: int, ti: int) -> int:
        """Rank of M(values[si] -> values[ti]) = dim (Z_s + B_t) - dim B_t."""
        if si < 0:
            return 0
        b = boundaries[ti].copy()
        base = b.dim
        for z in kernels[si]:
            b.add(z)
        return b.dim - base

    n = len(values)
    bars = []
    for i in range(n):
        for j in range(i + 1, n):
            mult = (
                rank_map(i, j - 1)
                - rank_map(i - 1, j - 1)
                - rank_map(i, j)
                + rank_map(i - 1, j)
            )
            bars.extend([(values[i], values[j])] * mult)
        live = rank_map(i, n - 1) - rank_map(i - 1, n - 1)
        bars.extend([(values[i], None)] * live)
    return sorted(bars, key=lambda b: (b[0], b[1] is None, b[1] if b[1] is not None else 0))
