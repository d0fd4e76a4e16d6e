"""Building the augmented arrangement: a barcode template at every 2-cell.

The traveling state carries, per matrix side j, the current lift of every
column's grade (a template point of the current cell), the permutation
putting columns in lift order, the permuted matrices, and (when maintained)
their RU-decompositions.  Crossing into an adjacent cell redistributes the
lifts around the crossed anchor, then restores sortedness with a stable
insertion sort on the two-valued lift keys, performing one vineyard update
per adjacent transposition.

At each cell the template is read from pairs/ess, which are obtained by one
of three strategies: vineyard updates (C), a fresh full reduction (B), or a
fresh pairs-only reduction without operation recording (A).  The choice per
cell is a globally optimal assignment under the chain constraint
"A cannot precede C", found by a two-state dynamic program over the path.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import (
    Dcel,
    DualGraph,
    DualGraphEdge,
    Locator,
    VerticalLookup,
    build_dcel,
    dual_graph,
    topmost_face,
)
from .betti import BettiTable, DimGrid, betti_numbers, support_set
from .errors import InvariantError
from .gf2 import GF2Matrix
from .grades import Bigrade
from .model import FIRep, discretize, trim
from .reduction import RuState, pairs_ess, reduce_matrix
from .ximatrix import GridPoint, XiSupportMatrix, anchors_and_xi_matrix


@dataclass(frozen=True)
class BarcodeTemplate:
    """Multiset of (birth, death-or-None, multiplicity) template-point pairs."""

    entries: tuple[tuple[Bigrade, Bigrade | None, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.entries)


@dataclass
class WalkStats:
    transpositions: list[int] = field(default_factory=lambda: [0, 0, 0])  # [_,m1,m2]
    path_weight: Fraction = Fraction(0)
    mst_weight: Fraction = Fraction(0)
    strategy_counts: dict[str, int] = field(default_factory=dict)
    cost_a: float = 0.0
    cost_b: float = 0.0
    cost_vine: tuple[float, float] = (0.0, 0.0)
    line_weights: dict[Bigrade, Fraction] = field(default_factory=dict)

    @property
    def total_transpositions(self) -> int:
        return self.transpositions[1] + self.transpositions[2]


@dataclass
class AugmentedArrangement:
    """The queryable product: arrangement, search structures, templates."""

    dcel: Dcel
    locator: Locator
    vlookup: VerticalLookup
    templates: dict[int, BarcodeTemplate]
    betti: BettiTable
    dims: DimGrid
    bounds: tuple[Bigrade, Bigrade] | None
    x_shift: Fraction
    anchors: tuple[Bigrade, ...]
    kappa: int
    m1: int
    stats: WalkStats

    def template_at(self, face: int) -> BarcodeTemplate:
        return self.templates[face]

    @property
    def cell_count(self) -> int:
        return len(self.dcel.interior_faces())

    def max_slope(self) -> Fraction:
        return max((a.x for a in self.anchors), default=Fraction(0))


# ---------------------------------------------------------------------------
# the traveling state


@dataclass
class TemplateState:
    """Permutations, lifts, permuted matrices, and the RU pair for one cell.

    D2's row order is tracked by a lazy permutation (row_pos/row_at between
    storage rows and current positions) so that a transposition is O(1); the
    physical matrix is materialized only when a reduction or check needs it.
    """

    m: tuple[int, int]  # (m1, m2)
    gx: tuple[list[int], list[int]]  # 1-based per side: grid x of original column
    gy: tuple[list[int], list[int]]
    xi: XiSupportMatrix
    lift: tuple[list[GridPoint | None], list[GridPoint | None]]  # per original col
    sig: tuple[list[int], list[int]]  # original -> position
    siginv: tuple[list[int], list[int]]  # position -> original
    D1: GF2Matrix  # position space
    D2: GF2Matrix  # position space up to the pending row permutation
    row_pos: list[int] | None = None  # storage row -> current position (1-based)
    row_at: list[int] | None = None  # current position -> storage row
    ru: RuState | None = None
    stats: WalkStats = field(default_factory=WalkStats)

    def _ensure_row_maps(self) -> None:
        if self.row_pos is None:
            self.row_pos = [0] + list(range(1, self.m[0] + 1))
            self.row_at = [0] + list(range(1, self.m[0] + 1))

    def swap_d2_rows(self, p: int) -> None:
        self._ensure_row_maps()
        a, b = self.row_at[p], self.row_at[p + 1]
        self.row_at[p], self.row_at[p + 1] = b, a
        self.row_pos[a], self.row_pos[b] = p + 1, p

    def d2_current(self) -> GF2Matrix:
        """Materialize the pending row permutation and rebase on it."""
        if self.row_pos is not None and self.row_pos != [0] + list(
            range(1, self.m[0] + 1)
        ):
            self.D2 = self.D2.permute_rows(self.row_pos[1:])
            self.row_pos = None
            self.row_at = None
            self._ensure_row_maps()
        return self.D2

    def check_permutations(self) -> None:
        for side in (1, 2):
            s, si = self.sig[side - 1], self.siginv[side - 1]
            for k in range(1, self.m[side - 1] + 1):
                if si[s[k]] != k or s[si[k]] != k:
                    raise InvariantError("sig and siginv are not mutually inverse")

    def check_sorted(self) -> None:
        """Lifts must be non-decreasing along positions, in colex order."""
        for side in (1, 2):
            lifts = [self.lift[side - 1][self.siginv[side - 1][p]] for p in range(1, self.m[side - 1] + 1)]
            keys = [(q[1], q[0]) for q in lifts]
            if keys != sorted(keys):
                raise InvariantError(f"lift order violated on side {side}")

    def check_lists(self) -> None:
        """Low lists must partition [m_j] by lift, sorted by position."""
        for side in (1, 2):
            seen: set[int] = set()
            for p, e in self.xi.entries.items():
                lst = e.low(side)
                positions = [self.sig[side - 1][k] for k in lst]
                if positions != sorted(positions):
                    raise InvariantError("a lift list is out of position order")
                for k in lst:
                    if self.lift[side - 1][k] != p or k in seen:
                        raise InvariantError("lift lists disagree with lift array")
                    seen.add(k)
            if len(seen) != self.m[side - 1]:
                raise InvariantError("lift lists do not partition the column set")

    def pairs_ess_current(self) -> tuple[set, set]:
        if self.ru is None:
            raise InvariantError("no RU-decomposition is currently valid")
        return pairs_ess(self.ru, self.m[0])

    def low_lists(self, side: int) -> dict[GridPoint, list[int]]:
        return {
            p: list(e.low(side)) for p, e in self.xi.entries.items() if e.low(side)
        }


def _transpose(state: TemplateState, side: int, p: int, apply_ru: bool) -> None:
    """Swap positions p, p+1 on the given side, everywhere it is represented."""
    si = state.siginv[side - 1]
    sg = state.sig[side - 1]
    a, b = si[p], si[p + 1]
    si[p], si[p + 1] = b, a
    sg[a], sg[b] = p + 1, p
    if side == 1:
        state.D1.swap_columns(p)
        state.swap_d2_rows(p)
        if apply_ru:
            state.ru.transpose_left(p)
    else:
        state.D2.swap_columns(p)
        if apply_ru:
            state.ru.transpose_right(p)
    state.stats.transpositions[side] += 1


# ---------------------------------------------------------------------------
# initial cell: the frontier sweep


def _frontier_targets(xi: XiSupportMatrix) -> list[tuple[int, list[GridPoint]]]:
    """Per grid row (top to bottom), the frontier staircase at that row."""
    frontier: list[GridPoint] = []
    out = []
    for s in range(xi.ny, 0, -1):
        u = xi.rightmost_in_row(s)
        if u is not None:
            if frontier and frontier[-1][0] == u[0]:
                frontier.pop()
            frontier.append(u)
        out.append((s, list(frontier)))
    return out


def init_lift_lists(state: TemplateState) -> None:
    """Frontier sweep: set every column's initial lift and the Low lists.

    Requires the grade arrays to be colexicographically sorted in the
    original index order (guaranteed by the FI-rep constructors).
    """
    xi = state.xi
    xi.clear_lows()
    by_row: tuple[dict[int, list[int]], dict[int, list[int]]] = ({}, {})
    for side in (1, 2):
        for k in range(1, state.m[side - 1] + 1):
            by_row[side - 1].setdefault(state.gy[side - 1][k], []).append(k)
    for s, frontier in _frontier_targets(xi):
        for side in (1, 2):
            for k in by_row[side - 1].get(s, ()):
                r = state.gx[side - 1][k]
                target = None
                for idx, u in enumerate(frontier):
                    nxt = frontier[idx + 1] if idx + 1 < len(frontier) else None
                    if r <= u[0] and (nxt is None or r > nxt[0]):
                        target = u
                        break
                if target is None:
                    raise InvariantError(
                        f"grade ({r},{s}) has no lift on the frontier; FI-rep not trimmed?"
                    )
                xi.entry(target).low(side).append(k)
                state.lift[side - 1][k] = target
    for e in xi.entries.values():
        e.low1.sort()
        e.low2.sort()


def init_cell(state: TemplateState) -> None:
    """Set lifts, permutations, and permuted matrices for the initial cell."""
    init_lift_lists(state)
    xi = state.xi
    for side in (1, 2):
        nonempty = [
            (p, e) for p, e in xi.entries.items() if e.low(side)
        ]
        nonempty.sort(key=lambda pe: pe[0][1])  # increasing y, which is unique
        order: list[int] = []
        for _, e in nonempty:
            order.extend(e.low(side))
        m = state.m[side - 1]
        if len(order) != m:
            raise InvariantError("lift lists do not partition the column set")
        si = state.siginv[side - 1]
        sg = state.sig[side - 1]
        for p, k in enumerate(order, start=1):
            si[p] = k
            sg[k] = p
    state.D1 = state.D1.permute_columns(state.siginv[0][1:])
    state.D2 = state.D2.permute_rows(state.sig[0][1:]).permute_columns(state.siginv[1][1:])


# ---------------------------------------------------------------------------
# cell crossings


def cross_edge(
    state: TemplateState,
    anchor: GridPoint,
    upward: bool,
    apply_ru: bool,
    update_positions: bool = True,
) -> None:
    """Update lifts, lists, permutations, matrices across one anchor line.

    Crossing upward, lifts in {u, anchor} redistribute to {v, anchor};
    downward mirrors the roles, with v entering and u leaving the cell.
    update_positions=False maintains only the lift lists (the stripped-down
    variant used by the edge-weight pass).
    """
    xi = state.xi
    entry = xi.entry(anchor)
    u = xi.left_of(anchor)
    v = xi.below(anchor)
    for side in (1, 2):
        gyv = state.gy[side - 1]
        gxv = state.gx[side - 1]
        if upward:
            donor = xi.entry(u).low(side) if u is not None else []
            window = donor + entry.low(side)
            moves = (
                [k for k in window if v is not None and gyv[k] <= v[1]]
                if window
                else []
            )
            stay = [k for k in window if not (v is not None and gyv[k] <= v[1])]
            new_first, new_second = (v, moves), (anchor, stay)
            if u is not None:
                xi.entry(u).set_low(side, [])
        else:
            donor = xi.entry(v).low(side) if v is not None else []
            window = donor + entry.low(side)
            moves = [k for k in window if u is not None and gxv[k] <= u[0]]
            stay = [k for k in window if not (u is not None and gxv[k] <= u[0])]
            new_first, new_second = (u, moves), (anchor, stay)
            if v is not None:
                xi.entry(v).set_low(side, [])
        target_first, members_first = new_first
        if members_first:
            if target_first is None:
                raise InvariantError("columns moved toward a missing neighbour")
            xi.entry(target_first).set_low(side, members_first)
            for k in members_first:
                state.lift[side - 1][k] = target_first
        entry.set_low(side, new_second[1])
        for k in new_second[1]:
            state.lift[side - 1][k] = anchor

        if not window or not update_positions:
            continue
        sg = state.sig[side - 1]
        positions = sorted(sg[k] for k in window)
        if positions != list(range(positions[0], positions[-1] + 1)):
            raise InvariantError("crossing window is not contiguous in positions")
        start = positions[0]
        move_set = set(members_first)
        keys = [0 if state.siginv[side - 1][p] in move_set else 1 for p in positions]
        # stable insertion sort on 0/1 keys; one vineyard update per swap
        for idx in range(1, len(keys)):
            j = idx
            while j > 0 and keys[j - 1] > keys[j]:
                _transpose(state, side, start + j - 1, apply_ru)
                keys[j - 1], keys[j] = keys[j], keys[j - 1]
                j -= 1


# ---------------------------------------------------------------------------
# reading templates


def read_template(
    state: TemplateState,
    pe: tuple[set, set],
    to_rational,
) -> BarcodeTemplate:
    """Evaluate the template map on pairs/ess and aggregate multiplicities."""
    pairs, ess = pe
    agg: dict[tuple[Bigrade, Bigrade | None], int] = {}
    for p, q in pairs:
        birth = state.lift[0][state.siginv[0][p]]
        death = state.lift[1][state.siginv[1][q]]
        if birth == death:
            continue  # an empty interval of the discrete module
        key = (to_rational(birth), to_rational(death))
        agg[key] = agg.get(key, 0) + 1
    for p in ess:
        birth = state.lift[0][state.siginv[0][p]]
        key = (to_rational(birth), None)
        agg[key] = agg.get(key, 0) + 1
    entries = tuple(
        (b, d, m)
        for (b, d), m in sorted(
            agg.items(),
            key=lambda kv: (
                (kv[0][0][1], kv[0][0][0]),
                kv[0][1] is None,
                (kv[0][1][1], kv[0][1][0]) if kv[0][1] is not None else (0, 0),
            ),
        )
    )
    return BarcodeTemplate(entries)


# ---------------------------------------------------------------------------
# path and strategy


def compute_path(
    graph: DualGraph, weights: dict[Bigrade, Fraction], start: int
) -> tuple[list[int], list[DualGraphEdge | None], Fraction, Fraction]:
    """MST + depth-first walk from the start cell; weight <= 2x MST weight."""
    for e in graph.edges:
        e.weight = weights.get(e.anchor, Fraction(0))
    parent = {f: f for f in graph.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mst_edges: list[int] = []
    mst_weight = Fraction(0)
    for idx in sorted(range(len(graph.edges)), key=lambda i: (graph.edges[i].weight, i)):
        a, b = graph.edges[idx].faces
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            mst_edges.append(idx)
            mst_weight += graph.edges[idx].weight
    if len(mst_edges) != len(graph.nodes) - 1:
        raise InvariantError("dual graph is not connected")

    tree: dict[int, list[tuple[int, int]]] = {f: [] for f in graph.nodes}
    for idx in mst_edges:
        a, b = graph.edges[idx].faces
        tree[a].append((b, idx))
        tree[b].append((a, idx))
    for f in tree:
        tree[f].sort()

    path = [start]
    crossed: list[DualGraphEdge | None] = [None]
    seen = {start}
    pw = Fraction(0)

    def visit(node: int):
        nonlocal pw
        for nb, idx in tree[node]:
            if nb in seen:
                continue
            seen.add(nb)
            path.append(nb)
            crossed.append(graph.edges[idx])
            pw += graph.edges[idx].weight
            visit(nb)
            path.append(node)
            crossed.append(graph.edges[idx])
            pw += graph.edges[idx].weight

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(graph.nodes) + 100))
    try:
        visit(start)
    finally:
        sys.setrecursionlimit(old_limit)
    # drop the tail of pure returns after the final first visit
    last_new = 0
    seen2: set[int] = set()
    for i, f in enumerate(path):
        if f not in seen2:
            seen2.add(f)
            last_new = i
    path = path[: last_new + 1]
    crossed = crossed[: last_new + 1]
    pw = sum((e.weight for e in crossed[1:]), Fraction(0))
    return path, crossed, pw, mst_weight


def plan_strategy(path: list[int], costs: list[dict[str, float]]) -> list[str]:
    """Optimal A/B/C per cell under: X_i = A forbids X_{i+1} = C; X_0 != C."""
    n = len(path)
    INF = float("inf")
    best_a = [INF] * n
    best_bc = [INF] * n
    choice_bc: list[str] = [""] * n
    back_a: list[str] = [""] * n
    back_bc: list[str] = [""] * n
    best_a[0] = costs[0]["A"]
    best_bc[0] = costs[0]["B"]
    choice_bc[0] = "B"
    for i in range(1, n):
        prev_any = min(best_a[i - 1], best_bc[i - 1])
        best_a[i] = costs[i]["A"] + prev_any
        back_a[i] = "A" if best_a[i - 1] <= best_bc[i - 1] else "BC"
        b_cost = costs[i]["B"] + prev_any
        c_cost = costs[i]["C"] + best_bc[i - 1]
        if b_cost <= c_cost:
            best_bc[i] = b_cost
            choice_bc[i] = "B"
            back_bc[i] = "A" if best_a[i - 1] <= best_bc[i - 1] else "BC"
        else:
            best_bc[i] = c_cost
            choice_bc[i] = "C"
            back_bc[i] = "BC"
    out = [""] * n
    state = "A" if best_a[n - 1] <= best_bc[n - 1] else "BC"
    for i in range(n - 1, -1, -1):
        if state == "A":
            out[i] = "A"
            state = back_a[i] if i > 0 else ""
        else:
            out[i] = choice_bc[i]
            state = back_bc[i] if i > 0 else ""
    return out


# ---------------------------------------------------------------------------
# edge weights: the stripped-down rightmost-cells pass


def edge_weights(
    state: TemplateState,
    dcel: Dcel,
    locator: Locator,
    grid_index_of: dict[Bigrade, GridPoint],
) -> dict[Bigrade, tuple[int, int, int, int]]:
    """Switch and separation counts (sw1, sep1, sw2, sep2) per anchor line.

    Walks the rightmost cells from the topmost cell downward, crossing every
    anchor line exactly once, and classifies the affected columns into the
    four quadrants cut by x = u_x and y = v_y.
    """
    init_lift_lists(state)
    xi = state.xi
    last_slab = locator.slab_edges[-1]
    crossings = []
    for h in last_slab:
        anchor = dcel.half_edges[h].anchor
        if anchor is not None:
            crossings.append(anchor)
    # top to bottom: larger value at the slab midpoint first
    crossings.reverse()
    out: dict[Bigrade, tuple[int, int, int, int]] = {}
    for anchor in crossings:
        ap = grid_index_of[anchor]
        u = xi.left_of(ap)
        v = xi.below(ap)
        counts = []
        for side in (1, 2):
            gxv, gyv = state.gx[side - 1], state.gy[side - 1]
            upper = xi.entry(ap).low(side)
            lower = xi.entry(v).low(side) if v is not None else []
            n1 = sum(1 for k in lower if u is not None and gxv[k] <= u[0])
            n3 = len(lower) - n1
            n2 = sum(1 for k in upper if u is not None and gxv[k] <= u[0])
            n4 = len(upper) - n2
            sw = n2 * n3
            sep = n1 * n2 + n1 * n3 + n2 * n4 + n3 * n4
            counts.extend((sw, sep))
        out[anchor] = tuple(counts)  # type: ignore[assignment]
        cross_edge(state, ap, upward=False, apply_ru=False, update_positions=False)
    return out


def weight_of(counts: tuple[int, int, int, int]) -> Fraction:
    sw1, sep1, sw2, sep2 = counts
    return Fraction(sw1 + sw2) + Fraction(sep1 + sep2, 4)


# ---------------------------------------------------------------------------
# the full pipeline


def compute_augmented_arrangement(
    rep: FIRep,
    verify: bool = False,
    calibration_updates: int = 2000,
    rng_seed: int = 0,
) -> AugmentedArrangement:
    """Betti -> support -> trim -> anchors -> arrangement -> walk -> templates.

    With verify=True the walk uses vineyard updates at every cell and asserts,
    after every transition, the RU invariants and agreement of pairs/ess with
    a from-scratch reduction.
    """
    rep.validate()
    bounds = rep.bounds()
    betti, dims = betti_numbers(rep)
    sup = support_set(betti)

    if not sup.points:
        dcel = build_dcel([])
        locator = Locator.build(dcel)
        face = dcel.interior_faces()[0]
        return AugmentedArrangement(
            dcel,
            locator,
            VerticalLookup.build(dcel),
            {face: BarcodeTemplate(())},
            betti,
            dims,
            bounds,
            sup.x_shift,
            (),
            sup.kappa,
            rep.m1,
            WalkStats(),
        )

    shifted = rep.shift_x(sup.x_shift)
    disc, grid = discretize(shifted)
    support_idx = sorted(grid.index_of(p) for p in sup.points)
    lub_idx = (
        max(p[0] for p in support_idx),
        max(p[1] for p in support_idx),
    )
    trimmed = trim(
        disc, Bigrade(Fraction(lub_idx[0]), Fraction(lub_idx[1]))
    )

    xi, anchor_idx = anchors_and_xi_matrix(support_idx, grid.nx, grid.ny)
    anchors = tuple(grid.value(i, j) for (i, j) in anchor_idx)
    grid_index_of = {grid.value(i, j): (i, j) for (i, j) in anchor_idx}
    dcel = build_dcel(list(anchors))
    locator = Locator.build(dcel)
    vlookup = VerticalLookup.build(dcel)
    graph = dual_graph(dcel)
    start = topmost_face(dcel)

    def fresh_state() -> TemplateState:
        m1, m2 = trimmed.m1, trimmed.m2
        return TemplateState(
            (m1, m2),
            (
                [0] + [int(g.x) for g in trimmed.gr1],
                [0] + [int(g.x) for g in trimmed.gr2],
            ),
            (
                [0] + [int(g.y) for g in trimmed.gr1],
                [0] + [int(g.y) for g in trimmed.gr2],
            ),
            xi,
            ([None] * (m1 + 1), [None] * (m2 + 1)),
            ([0] + list(range(1, m1 + 1)), [0] + list(range(1, m2 + 1))),
            ([0] + list(range(1, m1 + 1)), [0] + list(range(1, m2 + 1))),
            trimmed.D1.copy(),
            trimmed.D2.copy(),
        )

    # stripped-down weight pass over the rightmost cells
    wstate = fresh_state()
    line_counts = edge_weights(wstate, dcel, locator, grid_index_of)
    weights = {a: weight_of(c) for a, c in line_counts.items()}

    path, crossed, path_weight, mst_weight = compute_path(graph, weights, start)

    # the real walk
    state = fresh_state()
    init_cell(state)
    stats = state.stats
    stats.path_weight = path_weight
    stats.mst_weight = mst_weight
    stats.line_weights = dict(weights)

    t0 = time.perf_counter()
    ru = RuState.reduce(state.D1, state.d2_current())
    cost_b = time.perf_counter() - t0
    t0 = time.perf_counter()
    reduce_matrix(state.D1, record_ops=False)
    reduce_matrix(state.d2_current(), record_ops=False)
    cost_a = time.perf_counter() - t0
    state.ru = ru

    cost_vine = [0.0, 0.0]
    if not verify and len(path) > 1 and (state.m[0] > 1 or state.m[1] > 1):
        rng = random.Random(rng_seed)
        scratch = RuState(ru.ru1.copy(), ru.ru2.copy())
        for side in (1, 2):
            m = state.m[side - 1]
            if m < 2:
                continue
            # target count, capped by a work budget on large matrices
            n = max(16, min(calibration_updates // 2, 100_000 // (m + 1)))
            t0 = time.perf_counter()
            for _ in range(n):
                k = rng.randrange(1, m)
                if side == 1:
                    scratch.transpose_left(k)
                else:
                    scratch.transpose_right(k)
            cost_vine[side - 1] = (time.perf_counter() - t0) / n
    stats.cost_a, stats.cost_b, stats.cost_vine = cost_a, cost_b, tuple(cost_vine)

    costs: list[dict[str, float]] = []
    seen_costs: set[int] = set()
    for i, face in enumerate(path):
        c_a = 0.0 if face in seen_costs else cost_a
        seen_costs.add(face)
        if i == 0:
            costs.append({"A": c_a, "B": cost_b, "C": float("inf")})
            continue
        cts = line_counts.get(crossed[i].anchor, (0, 0, 0, 0))
        c_c = cost_vine[0] * (cts[0] + cts[1] / 4) + cost_vine[1] * (cts[2] + cts[3] / 4)
        costs.append({"A": c_a, "B": cost_b, "C": c_c})
    if verify:
        strategies = ["B"] + ["C"] * (len(path) - 1)
    else:
        strategies = plan_strategy(path, costs)

    grid_value_cache: dict[GridPoint, Bigrade] = {}

    def to_rational(p: GridPoint) -> Bigrade:
        if p not in grid_value_cache:
            grid_value_cache[p] = grid.value(p[0], p[1])
        return grid_value_cache[p]

    templates: dict[int, BarcodeTemplate] = {}
    face_above_cache: dict[int, bool] = {}

    def is_upward(step: int) -> bool:
        """True when step i lands in the cell above the crossed anchor line."""
        a = crossed[step].anchor
        sample = dcel.face_sample_point(path[step])
        return sample[1] > a.x * sample[0] - a.y

    pe = state.pairs_ess_current()
    if strategies[0] == "A":
        state.ru = None  # option A at the start: drop the recorded U
    templates[path[0]] = read_template(state, pe, to_rational)
    stats.strategy_counts[strategies[0]] = stats.strategy_counts.get(strategies[0], 0) + 1

    for i in range(1, len(path)):
        strat = strategies[i]
        edge = crossed[i]
        apply_ru = strat == "C"
        if apply_ru and state.ru is None:
            raise InvariantError("strategy C scheduled without a valid RU state")
        if not apply_ru:
            state.ru = None
        cross_edge(
            state,
            grid_index_of[edge.anchor],
            upward=is_upward(i),
            apply_ru=apply_ru,
        )
        stats.strategy_counts[strat] = stats.strategy_counts.get(strat, 0) + 1
        face = path[i]
        if verify:
            state.check_permutations()
            state.check_sorted()
            state.check_lists()
            state.ru.check(state.D1, state.d2_current())
            fresh = RuState.reduce(state.D1, state.d2_current())
            if pairs_ess(fresh, state.m[0]) != state.pairs_ess_current():
                raise InvariantError("vineyard pairs/ess diverged from scratch")
        if face in templates:
            continue
        if strat == "C":
            pe = state.pairs_ess_current()
        elif strat == "B":
            state.ru = RuState.reduce(state.D1, state.d2_current())
            pe = state.pairs_ess_current()
        else:  # A: pairs-only, no U recorded
            r1 = reduce_matrix(state.D1, record_ops=False)
            r2 = reduce_matrix(state.d2_current(), record_ops=False)
            pe = pairs_ess(RuState(r1, r2), state.m[0])
        templates[face] = read_template(state, pe, to_rational)

    for face in dcel.interior_faces():
        if face not in templates:
            raise InvariantError(f"no template computed for cell {face}")

    return AugmentedArrangement(
        dcel,
        locator,
        vlookup,
        templates,
        betti,
        dims,
        bounds,
        sup.x_shift,
        anchors,
        sup.kappa,
        rep.m1,
        stats,
    )
