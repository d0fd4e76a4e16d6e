"""Dimension function and bigraded Betti numbers over the discretized grid.

For each grid point a we track two GF(2) spans inside the free module on the
[m1] generators: the cycle space Z_a (kernel of D1 restricted to columns with
grade <= a) and the boundary space B_a (column span of D2 restricted the same
way).  Then dim M_a = dim Z_a - dim B_a, and the three Betti numbers at z are
homology dimensions of the square

    M_{z-(1,1)} -> M_{z-(1,0)} (+) M_{z-(0,1)} -> M_z

computed by rank arithmetic on those spans: the rank of the middle-to-right
map is dim((Z_10 + Z_01 + B_z)/B_z), the kernel of the left map is
(B_10 ^ B_01)/B_11, and out-of-grid indices contribute the zero space.

Everything is evaluated by row-wise incremental sweeps, inserting each matrix
column once per grid row; worst case O(|grid| m^3) bit operations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantError
from .gf2 import Echelon
from .grades import Bigrade, Grid2, colex_key
from .model import FIRep, discretize


@dataclass
class DimGrid:
    """dim M at every grid point; constant on half-open boxes between values."""

    grid: Grid2
    dims: list[list[int]]  # dims[i-1][j-1] at 1-based grid index (i, j)

    def at(self, i: int, j: int) -> int:
        if i < 1 or j < 1:
            return 0
        i, j = min(i, self.grid.nx), min(j, self.grid.ny)
        return self.dims[i - 1][j - 1]

    def at_value(self, g: Bigrade) -> int:
        """Continuous extension: dimension at an arbitrary point of the plane."""
        i = _floor_pos(self.grid.xs, g.x)
        j = _floor_pos(self.grid.ys, g.y)
        return self.at(i, j)


def _floor_pos(axis, v: Fraction) -> int:
    lo, hi = 0, len(axis)
    while lo < hi:
        mid = (lo + hi) // 2
        if axis[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo  # number of axis values <= v, i.e. 1-based floor index or 0


@dataclass
class BettiTable:
    """Sparse xi_0, xi_1, xi_2 supports over the grid (values >= 1)."""

    grid: Grid2
    xi0: dict[tuple[int, int], int]
    xi1: dict[tuple[int, int], int]
    xi2: dict[tuple[int, int], int]

    def tables(self):
        return (self.xi0, self.xi1, self.xi2)

    def check_hilbert(self, dims: DimGrid) -> None:
        """Sum_{b <= a} (xi0 - xi1 + xi2)(b) must equal dim M_a everywhere."""
        nx, ny = self.grid.nx, self.grid.ny
        acc = [[0] * (ny + 1) for _ in range(nx + 1)]
        for i in range(1, nx + 1):
            for j in range(1, ny + 1):
                point = (
                    self.xi0.get((i, j), 0)
                    - self.xi1.get((i, j), 0)
                    + self.xi2.get((i, j), 0)
                )
                acc[i][j] = point + acc[i - 1][j] + acc[i][j - 1] - acc[i - 1][j - 1]
                if acc[i][j] != dims.at(i, j):
                    raise InvariantError(
                        f"Hilbert identity fails at grid point ({i},{j}): "
                        f"{acc[i][j]} != {dims.at(i, j)}"
                    )


@dataclass
class SliceBasis:
    """Rank data of M_a: cycle vectors and the boundary echelon at a."""

    dim: int
    cycles: list[int]
    boundaries: Echelon


class _GradeSpans:
    """Z and B spans at every grid point of a discretized FI-rep."""

    def __init__(self, rep: FIRep, nx: int, ny: int):
        self.nx, self.ny = nx, ny
        cols1 = _bucket_by_x(rep.gr1, nx)
        cols2 = _bucket_by_x(rep.gr2, nx)
        self.kernels: dict[tuple[int, int], list[int]] = {}
        self.bounds: dict[tuple[int, int], Echelon] = {}
        for j in range(1, ny + 1):
            ech: dict[int, int] = {}
            combos: dict[int, int] = {}
            kern: list[int] = []
            bech = Echelon()
            for i in range(1, nx + 1):
                for k in cols1[i]:
                    if rep.gr1.grade(k).y <= j:
                        _insert_with_combo(rep.D1.column(k), 1 << (k - 1), ech, combos, kern)
                for k in cols2[i]:
                    if rep.gr2.grade(k).y <= j:
                        bech.add(rep.D2.column(k))
                self.kernels[(i, j)] = list(kern)
                self.bounds[(i, j)] = bech.copy()

    def cycles(self, i: int, j: int) -> list[int]:
        if i < 1 or j < 1:
            return []
        return self.kernels[(min(i, self.nx), min(j, self.ny))]

    def boundary(self, i: int, j: int) -> Echelon:
        if i < 1 or j < 1:
            return Echelon()
        return self.bounds[(min(i, self.nx), min(j, self.ny))]

    def dim(self, i: int, j: int) -> int:
        return len(self.cycles(i, j)) - self.boundary(i, j).dim


def _bucket_by_x(graded, nx: int) -> list[list[int]]:
    buckets: list[list[int]] = [[] for _ in range(nx + 1)]
    for k in range(1, graded.size + 1):
        buckets[int(graded.grade(k).x)].append(k)
    return buckets


def _insert_with_combo(col: int, combo: int, ech: dict[int, int], combos: dict[int, int], kern: list[int]) -> None:
    """Insert a D1 column into the reduction; a zero reduction emits its combo."""
    while col:
        p = col.bit_length()
        if p not in ech:
            ech[p] = col
            combos[p] = combo
            return
        col ^= ech[p]
        combo ^= combos[p]
    kern.append(combo)


def _require_discrete(rep: FIRep, grid: Grid2 | None) -> tuple[FIRep, Grid2]:
    if grid is None:
        return discretize(rep)
    return rep, grid


def grade_slice_basis(rep: FIRep, a: Bigrade) -> SliceBasis:
    """Basis data of M_a for one grade, computed directly (no sweep reuse)."""
    ech: dict[int, int] = {}
    combos: dict[int, int] = {}
    kern: list[int] = []
    for k in range(1, rep.m1 + 1):
        if rep.gr1.grade(k).leq(a):
            _insert_with_combo(rep.D1.column(k), 1 << (k - 1), ech, combos, kern)
    bech = Echelon()
    for k in range(1, rep.m2 + 1):
        if rep.gr2.grade(k).leq(a):
            bech.add(rep.D2.column(k))
    return SliceBasis(len(kern) - bech.dim, kern, bech)


def dimension_function(rep: FIRep, grid: Grid2 | None = None) -> DimGrid:
    """dim M at every grid point of the discretized module."""
    rep, grid = _require_discrete(rep, grid)
    spans = _GradeSpans(rep, grid.nx, grid.ny)
    dims = [[spans.dim(i, j) for j in range(1, grid.ny + 1)] for i in range(1, grid.nx + 1)]
    return DimGrid(grid, dims)


def betti_numbers(rep: FIRep, grid: Grid2 | None = None) -> tuple[BettiTable, DimGrid]:
    """xi_0, xi_1, xi_2 over the grid, plus the dimension function.

    The two are computed from the same spans; callers cross-check them with
    BettiTable.check_hilbert.
    """
    rep, grid = _require_discrete(rep, grid)
    spans = _GradeSpans(rep, grid.nx, grid.ny)
    xi0: dict[tuple[int, int], int] = {}
    xi1: dict[tuple[int, int], int] = {}
    xi2: dict[tuple[int, int], int] = {}
    for i in range(1, grid.nx + 1):
        for j in range(1, grid.ny + 1):
            z = (i, j)
            k_z = spans.cycles(i, j)
            b_z = spans.boundary(i, j)
            k_10 = spans.cycles(i - 1, j)
            k_01 = spans.cycles(i, j - 1)
            b_10 = spans.boundary(i - 1, j)
            b_01 = spans.boundary(i, j - 1)
            b_11 = spans.boundary(i - 1, j - 1)

            merged = b_z.copy()
            for v in k_10:
                merged.add(v)
            for v in k_01:
                merged.add(v)
            x0 = len(k_z) - merged.dim
            rank_second = merged.dim - b_z.dim

            both = b_10.copy()
            for v in b_01.vectors():
                both.add(v)
            inter_dim = b_10.dim + b_01.dim - both.dim
            x2 = inter_dim - b_11.dim

            d10 = len(k_10) - b_10.dim
            d01 = len(k_01) - b_01.dim
            d11 = len(spans.cycles(i - 1, j - 1)) - b_11.dim
            rank_first = d11 - x2
            x1 = (d10 + d01 - rank_second) - rank_first

            if x0 < 0 or x1 < 0 or x2 < 0:
                raise InvariantError(f"negative Betti number at {z}")
            if x0:
                xi0[z] = x0
            if x1:
                xi1[z] = x1
            if x2:
                xi2[z] = x2
    dims = [[spans.dim(i, j) for j in range(1, grid.ny + 1)] for i in range(1, grid.nx + 1)]
    return BettiTable(grid, xi0, xi1, xi2), DimGrid(grid, dims)


@dataclass(frozen=True)
class SupportSet:
    """supp xi0 union supp xi1 in rational coordinates, colex-sorted.

    x_shift is the translation applied so every point has non-negative x;
    the same shift must be applied to the module before dualizing.
    """

    points: tuple[Bigrade, ...]
    x_shift: Fraction

    @property
    def kappa(self) -> int:
        kx = len({p.x for p in self.points})
        ky = len({p.y for p in self.points})
        return kx * ky

    def lub(self) -> Bigrade | None:
        return Bigrade.join(*self.points) if self.points else None


def support_set(betti: BettiTable) -> SupportSet:
    """Union of the xi0 and xi1 supports as shifted rational bigrades."""
    idx = sorted(set(betti.xi0) | set(betti.xi1))
    points = [betti.grid.value(i, j) for (i, j) in idx]
    shift = Fraction(0)
    if points:
        min_x = min(p.x for p in points)
        if min_x < 0:
            shift = -min_x
            points = [Bigrade(p.x + shift, p.y) for p in points]
    points.sort(key=colex_key)
    return SupportSet(tuple(points), shift)
