"""Sparse grid of template points: supports, anchors, and per-point lift lists.

Everything here lives in 1-based grid-index space.  An anchor is the least
upper bound of a weakly incomparable pair of support points; the sweep below
finds all anchors and builds the linked sparse matrix in one lexicographic
pass, testing anchor-ness in constant time via the running row/column
pointers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantError

GridPoint = tuple[int, int]


@dataclass
class XiEntry:
    point: GridPoint
    left: GridPoint | None
    down: GridPoint | None
    low1: list[int] = field(default_factory=list)
    low2: list[int] = field(default_factory=list)

    def low(self, side: int) -> list[int]:
        return self.low1 if side == 1 else self.low2

    def set_low(self, side: int, values: list[int]) -> None:
        if side == 1:
            self.low1 = values
        else:
            self.low2 = values


@dataclass
class XiSupportMatrix:
    """Entries indexed by grid point, with left/down links and row pointers."""

    nx: int
    ny: int
    entries: dict[GridPoint, XiEntry]
    rows: list[GridPoint | None]  # 1-based by y: rightmost entry per row

    def entry(self, p: GridPoint) -> XiEntry:
        return self.entries[p]

    def left_of(self, p: GridPoint) -> GridPoint | None:
        return self.entries[p].left

    def below(self, p: GridPoint) -> GridPoint | None:
        return self.entries[p].down

    def rightmost_in_row(self, y: int) -> GridPoint | None:
        return self.rows[y]

    def clear_lows(self) -> None:
        for e in self.entries.values():
            e.low1 = []
            e.low2 = []

    def check_links(self) -> None:
        for p, e in self.entries.items():
            if e.left is not None:
                if e.left[1] != p[1] or e.left[0] >= p[0]:
                    raise InvariantError(f"bad left link at {p}")
                between = [
                    q for q in self.entries if q[1] == p[1] and e.left[0] < q[0] < p[0]
                ]
                if between:
                    raise InvariantError(f"left link at {p} skips {between}")
            if e.down is not None:
                if e.down[0] != p[0] or e.down[1] >= p[1]:
                    raise InvariantError(f"bad down link at {p}")
                between = [
                    q for q in self.entries if q[0] == p[0] and e.down[1] < q[1] < p[1]
                ]
                if between:
                    raise InvariantError(f"down link at {p} skips {between}")


def anchors_and_xi_matrix(
    support: list[GridPoint], nx: int, ny: int
) -> tuple[XiSupportMatrix, list[GridPoint]]:
    """One lexicographic sweep computing the anchors and the sparse matrix.

    A grid point u is an anchor iff, when the sweep reaches u, either both the
    row and column pointers are non-null, or u is a support point and one of
    them is.
    """
    sset = set(support)
    rows: list[GridPoint | None] = [None] * (ny + 1)
    columns: list[GridPoint | None] = [None] * (nx + 1)
    entries: dict[GridPoint, XiEntry] = {}
    anchors: list[GridPoint] = []
    for x in range(1, nx + 1):
        for y in range(1, ny + 1):
            u = (x, y)
            row_ptr, col_ptr = rows[y], columns[x]
            in_support = u in sset
            is_anchor = (row_ptr is not None and col_ptr is not None) or (
                in_support and (row_ptr is not None or col_ptr is not None)
            )
            if is_anchor:
                anchors.append(u)
            if in_support or is_anchor:
                entries[u] = XiEntry(u, row_ptr, col_ptr)
                rows[y] = u
                columns[x] = u
    return XiSupportMatrix(nx, ny, entries, rows), anchors


def anchors_brute_force(support: list[GridPoint]) -> set[GridPoint]:
    """Reference: lubs of weakly incomparable pairs, by enumeration."""
    out = set()
    for i, u in enumerate(support):
        for v in support[:i]:
            if u == v:
                continue
            incomp = not (
                (u[0] <= v[0] and u[1] <= v[1]) or (v[0] <= u[0] and v[1] <= u[1])
            )
            if incomp or u[0] == v[0] or u[1] == v[1]:
                out.add((max(u[0], v[0]), max(u[1], v[1])))
    return out
