"""Template computation: init sweep, crossings, path, strategy, full walks."""
import itertools
import random
from fractions import Fraction

import pytest

from twopers.arrangement import DualGraph, DualGraphEdge
from twopers.errors import InvariantError
from twopers.gf2 import GF2Matrix
from twopers.grades import bigrade
from twopers.model import firep_from_bifiltration, parse_firep
from twopers.query import LineSpec, query_barcode, slice_oracle
from twopers.templates import (
    TemplateState,
    compute_augmented_arrangement,
    compute_path,
    init_lift_lists,
    plan_strategy,
)
from twopers.ximatrix import XiEntry, XiSupportMatrix

from conftest import random_bifiltration
from test_betti import MODULE_CORNER, MODULE_M, MODULE_N


def make_state(points, gx1, gy1, nx, ny):
    """Bare state over a hand-built template point set (m2 = 0)."""
    entries = {p: XiEntry(p, None, None) for p in points}
    rows: list = [None] * (ny + 1)
    for p in sorted(points):
        rows[p[1]] = p if rows[p[1]] is None or p[0] > rows[p[1]][0] else rows[p[1]]
    xi = XiSupportMatrix(nx, ny, entries, rows)
    m1 = len(gx1)
    return TemplateState(
        (m1, 0),
        ([0] + gx1, [0]),
        ([0] + gy1, [0]),
        xi,
        ([None] * (m1 + 1), [None]),
        ([0] + list(range(1, m1 + 1)), [0]),
        ([0] + list(range(1, m1 + 1)), [0]),
        GF2Matrix(0, m1),
        GF2Matrix(m1, 0),
    )


class TestInitialLifts:
    def test_staircase_pick(self):
        # template points (3,3) and (1,2); a column at (2,2) lifts to (3,3)
        state = make_state([(3, 3), (1, 2)], [2], [2], 3, 3)
        init_lift_lists(state)
        assert state.lift[0][1] == (3, 3)

    def test_single_template_point(self):
        state = make_state([(2, 2)], [1, 2, 1], [1, 1, 2], 2, 2)
        init_lift_lists(state)
        assert all(state.lift[0][k] == (2, 2) for k in (1, 2, 3))
        assert state.xi.entry((2, 2)).low1 == [1, 2, 3]

    def test_untrimmed_grade_rejected(self):
        state = make_state([(1, 1)], [2], [1], 2, 2)
        with pytest.raises(InvariantError, match="no lift"):
            init_lift_lists(state)


class TestComputePath:
    def test_two_nodes(self):
        g = DualGraph([0, 1], [DualGraphEdge((0, 1), bigrade(1, 1))])
        path, crossed, pw, mw = compute_path(g, {bigrade(1, 1): Fraction(1)}, 0)
        assert path == [0, 1]
        assert pw == mw == 1

    def test_star_walk_weight(self):
        # start at a leaf of a unit-weight star with three leaves
        anchors = [bigrade(1, i) for i in (1, 2, 3)]
        g = DualGraph(
            [0, 1, 2, 3],
            [DualGraphEdge((0, i + 1), anchors[i]) for i in range(3)],
        )
        weights = {a: Fraction(1) for a in anchors}
        path, _, pw, mw = compute_path(g, weights, 1)
        assert set(path) == {0, 1, 2, 3}
        assert mw == 3
        assert pw <= 2 * mw
        assert pw == 4  # one edge in, then tour the remaining two leaves

    def test_path_graph_is_traversed_linearly(self):
        anchors = [bigrade(1, i) for i in (1, 2)]
        g = DualGraph(
            [0, 1, 2],
            [
                DualGraphEdge((0, 1), anchors[0]),
                DualGraphEdge((1, 2), anchors[1]),
            ],
        )
        path, _, pw, mw = compute_path(g, {a: Fraction(1) for a in anchors}, 0)
        assert path == [0, 1, 2]
        assert pw == mw == 2


def brute_force_strategy(costs):
    best = None
    n = len(costs)
    for choice in itertools.product("ABC", repeat=n):
        if choice[0] == "C":
            continue
        if any(choice[i] == "A" and choice[i + 1] == "C" for i in range(n - 1)):
            continue
        total = sum(costs[i][c] for i, c in enumerate(choice))
        if best is None or total < best[0]:
            best = (total, choice)
    return best


class TestPlanStrategy:
    def test_spec_example(self):
        costs = [
            {"A": 5.0, "B": 10.0, "C": 1.0},
            {"A": 5.0, "B": 10.0, "C": 1.0},
            {"A": 5.0, "B": 10.0, "C": 1.0},
        ]
        plan = plan_strategy([0, 1, 2], costs)
        assert plan == ["B", "C", "C"]
        assert sum(costs[i][c] for i, c in enumerate(plan)) == 12.0

    def test_c_never_chosen_when_expensive(self):
        costs = [{"A": 2.0, "B": 3.0, "C": 100.0} for _ in range(4)]
        plan = plan_strategy([0, 1, 2, 3], costs)
        assert "C" not in plan

    def test_repeat_gets_free_a(self):
        costs = [
            {"A": 1.0, "B": 5.0, "C": 100.0},
            {"A": 0.0, "B": 5.0, "C": 100.0},  # repeated cell
        ]
        plan = plan_strategy([0, 0], costs)
        assert plan[1] == "A"

    def test_matches_brute_force(self):
        rng = random.Random(61)
        for _ in range(500):
            n = rng.randrange(1, 13)
            costs = [
                {
                    "A": rng.randrange(0, 20) * 1.0,
                    "B": rng.randrange(0, 20) * 1.0,
                    "C": rng.randrange(0, 20) * 1.0 if i else float("inf"),
                }
                for i in range(n)
            ]
            plan = plan_strategy(list(range(n)), costs)
            got = sum(costs[i][c] for i, c in enumerate(plan))
            want = brute_force_strategy(costs)[0]
            assert got == want


class TestEdgeWeights:
    def test_single_switching_pair(self):
        aug = compute_augmented_arrangement(parse_firep(MODULE_N))
        assert aug.stats.line_weights == {bigrade(1, 1): Fraction(1)}

    def test_no_anchor_lines(self):
        aug = compute_augmented_arrangement(parse_firep("firep\n0 1 0\n0 0 ; \n"))
        assert aug.stats.line_weights == {}

    def test_shared_coordinate_pair_separates(self):
        # generators at (0,0) and (0,1) share x; relation grades force support
        # {(0,0),(0,1)}: anchor (0,1); crossing it separates but never switches
        rep = parse_firep("firep\n0 2 0\n0 0 ; \n0 1 ; \n")
        aug = compute_augmented_arrangement(rep)
        assert aug.stats.line_weights == {bigrade(0, 1): Fraction(1, 4)}


class TestWorkedPipelines:
    def test_zero_module(self):
        aug = compute_augmented_arrangement(parse_firep("firep\n0 0 0\n"))
        assert aug.cell_count == 1
        assert aug.template_at(aug.dcel.interior_faces()[0]).entries == ()

    def test_corner_module_templates(self):
        # Cells whose lines pass below or above the whole support see a module
        # whose generator and killing relation share a template point, so their
        # templates are empty; the two middle cells each carry one entry.
        rep = parse_firep(MODULE_CORNER)
        aug = compute_augmented_arrangement(rep, verify=True)
        deaths = set()
        nonempty = 0
        for face in aug.dcel.interior_faces():
            entries = aug.template_at(face).entries
            assert len(entries) <= 1
            if entries:
                nonempty += 1
                birth, death, mult = entries[0]
                assert birth == bigrade(0, 0) and mult == 1
                deaths.add(death)
        assert nonempty == 2
        assert deaths == {bigrade(1, 0), bigrade(0, 1)}
        # the worked query answers, reproduced through the chosen cells
        diag = LineSpec.finite(1, 0)
        assert query_barcode(aug, diag).entries == (
            (bigrade(0, 0), bigrade(1, 1), 1),
        )
        horiz = LineSpec.finite(0, 0)
        assert query_barcode(aug, horiz).entries == (
            (bigrade(0, 0), bigrade(1, 0), 1),
        )
        rng = random.Random(3)
        for _ in range(20):
            slope = Fraction(rng.randrange(0, 30), rng.randrange(1, 10))
            intercept = Fraction(rng.randrange(-30, 30), rng.randrange(1, 10))
            line = LineSpec.finite(slope, intercept)
            assert query_barcode(aug, line).entries == slice_oracle(rep, line).entries

    def test_worked_module_anchors_and_queries(self):
        rep = parse_firep(MODULE_M)
        aug = compute_augmented_arrangement(rep, verify=True)
        assert bigrade(1, 1) in aug.anchors
        rng = random.Random(67)
        for _ in range(20):
            slope = Fraction(rng.randrange(0, 30), rng.randrange(1, 10))
            intercept = Fraction(rng.randrange(-30, 30), rng.randrange(1, 10))
            line = LineSpec.finite(slope, intercept)
            assert query_barcode(aug, line).entries == slice_oracle(rep, line).entries

    def test_template_multiplicity_bound(self):
        rng = random.Random(71)
        for _ in range(10):
            rep = firep_from_bifiltration(random_bifiltration(rng), 1)
            aug = compute_augmented_arrangement(rep)
            for face in aug.dcel.interior_faces():
                assert aug.template_at(face).total_multiplicity <= rep.m1


class TestVerifiedWalks:
    def test_random_walks_all_invariants(self):
        # verify=True asserts, at every transition: D = R*U, R reduced, U unit
        # upper-triangular, pairs/ess equal to a from-scratch reduction, the
        # permutation arrays mutually inverse, and the lift order sorted.
        rng = random.Random(73)
        for _ in range(15):
            rep = firep_from_bifiltration(random_bifiltration(rng), rng.randrange(0, 2))
            aug = compute_augmented_arrangement(rep, verify=True)
            kappa = aug.kappa
            m1, m2 = rep.m1, rep.m2
            assert aug.stats.total_transpositions <= 2 * (m1 * m1 + m2 * m2) * max(
                kappa, 1
            )
            assert aug.stats.path_weight <= 2 * aug.stats.mst_weight or (
                aug.stats.mst_weight == 0 and aug.stats.path_weight == 0
            )
            assert len(aug.anchors) <= kappa
            assert aug.cell_count <= max(kappa * kappa, 1)
