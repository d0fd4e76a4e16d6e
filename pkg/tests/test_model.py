"""Core model: parsing, Rips construction, boundary matrices, grid surgery."""
from fractions import Fraction

import pytest

from twopers.errors import InputError, ParseError
from twopers.grades import Bigrade, Grid2, bigrade, rational_sqrt
from twopers.model import (
    coarsen,
    discretize,
    firep_from_bifiltration,
    parse_bifiltration,
    parse_firep,
    parse_input,
    rips_bifiltration,
    trim,
    uniform_grid,
)


class TestParseBifiltration:
    def test_two_vertices_one_edge(self):
        bif = parse_bifiltration("bifiltration\n0 ; 0 0\n1 ; 0 0\n0 1 ; 1 2\n")
        assert bif.simplices == [
            ((0,), bigrade(0, 0)),
            ((1,), bigrade(0, 0)),
            ((0, 1), bigrade(1, 2)),
        ]

    def test_non_monotone_grade_rejected(self):
        text = "bifiltration\n0 ; 0 0\n1 ; 1 0\n0 1 ; 0 0\n"
        with pytest.raises(InputError, match="not <="):
            parse_bifiltration(text)

    def test_decimal_parsed_exactly(self):
        bif = parse_bifiltration("bifiltration\n0 ; 0.5 1/3\n")
        assert bif.simplices[0][1] == Bigrade(Fraction(1, 2), Fraction(1, 3))

    def test_missing_face(self):
        with pytest.raises(InputError, match="missing face"):
            parse_bifiltration("bifiltration\n0 ; 0 0\n0 1 ; 1 1\n")

    def test_duplicate_simplex_rejected(self):
        with pytest.raises(InputError, match="1-critical"):
            parse_bifiltration("bifiltration\n0 ; 0 0\n0 ; 1 1\n")

    def test_labels_and_comments(self):
        bif = parse_bifiltration(
            "# a comment\nbifiltration\n--xlabel density --ylabel radius\n0 ; 0 0 # trailing\n"
        )
        assert (bif.xlabel, bif.ylabel) == ("density", "radius")

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_bifiltration("bifiltration\n0 ; 0 0\n0 1 ; bad 0\n")


class TestParseFirep:
    def test_round_trip_small(self):
        text = "firep\n0 2 1\n1 0 ; \n0 1 ; \n1 1 ; 1 2\n"
        rep = parse_firep(text)
        assert rep.m0 == 0 and rep.m1 == 2 and rep.m2 == 1
        assert rep.D2.column_rows(1) == [1, 2]
        assert parse_input(text).m1 == 2

    def test_bad_row_index(self):
        with pytest.raises(ParseError, match="out of range"):
            parse_firep("firep\n0 1 1\n0 0 ; \n1 1 ; 2\n")


class TestRips:
    def test_two_points_distance_two(self):
        bif = rips_bifiltration([(0, 0), (2, 0)], [0, 0], 2)
        edge = [sg for sg in bif.simplices if len(sg[0]) == 2]
        assert edge == [((0, 1), bigrade(0, 1))]

    def test_single_point(self):
        bif = rips_bifiltration([(3, 4)], [5], 1)
        assert bif.simplices == [((0,), bigrade(5, 0))]

    def test_three_collinear_points(self):
        bif = rips_bifiltration([(0, 0), (1, 0), (2, 0)], [0, 0, 0], 10)
        tri = [sg for sg in bif.simplices if len(sg[0]) == 3]
        assert tri == [((0, 1, 2), bigrade(0, 1))]

    def test_scale_cap_prunes(self):
        bif = rips_bifiltration([(0, 0), (2, 0)], [0, 0], Fraction(1, 2))
        assert all(len(v) == 1 for v, _ in bif.simplices)

    def test_empty_point_set(self):
        with pytest.raises(InputError):
            rips_bifiltration([], [], 1)

    def test_rational_sqrt_exact_on_squares(self):
        assert rational_sqrt(Fraction(4)) == 2
        assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        approx = rational_sqrt(Fraction(2))
        assert abs(approx * approx - 2) < Fraction(1, 10**13)


def triangle_bifiltration():
    text = (
        "bifiltration\n"
        "0 ; 0 0\n1 ; 0 0\n2 ; 0 0\n"
        "0 1 ; 1 1\n0 2 ; 1 1\n1 2 ; 1 1\n"
        "0 1 2 ; 2 2\n"
    )
    return parse_bifiltration(text)


class TestFIRepFromBifiltration:
    def test_triangle_boundary_degree_one(self):
        rep = firep_from_bifiltration(triangle_bifiltration(), 1)
        assert (rep.m0, rep.m1, rep.m2) == (3, 3, 1)
        assert rep.D2.column_rows(1) == [1, 2, 3]
        rep.validate()

    def test_single_vertex_degree_zero(self):
        rep = firep_from_bifiltration(
            parse_bifiltration("bifiltration\n0 ; 0 0\n"), 0
        )
        assert (rep.m0, rep.m1, rep.m2) == (0, 1, 0)

    def test_degree_beyond_complex_is_zero_module(self):
        rep = firep_from_bifiltration(triangle_bifiltration(), 5)
        assert (rep.m0, rep.m1, rep.m2) == (0, 0, 0)

    def test_colex_ordering_of_grades(self):
        rep = firep_from_bifiltration(triangle_bifiltration(), 0)
        keys = [(g.y, g.x) for g in rep.gr1]
        assert keys == sorted(keys)


class TestTrim:
    def test_relation_beyond_box_removed(self):
        rep = parse_firep(
            "firep\n0 2 3\n1 0 ; \n0 1 ; \n1 1 ; 1 2\n1 1 ; 1 2\n2 2 ; \n"
        )
        trimmed = trim(rep, bigrade(1, 1))
        assert trimmed.m2 == 2 and trimmed.m1 == 2

    def test_identity_when_inside_box(self):
        rep = parse_firep("firep\n0 2 1\n1 0 ; \n0 1 ; \n1 1 ; 1 2\n")
        trimmed = trim(rep, bigrade(1, 1))
        assert trimmed.D2.columns == rep.D2.columns
        assert tuple(trimmed.gr1) == tuple(rep.gr1)

    def test_generator_beyond_box_removed_with_rows(self):
        rep = parse_firep(
            "firep\n0 3 1\n1 0 ; \n0 1 ; \n5 5 ; \n1 1 ; 1 2\n"
        )
        trimmed = trim(rep, bigrade(1, 1))
        assert trimmed.m1 == 2
        assert trimmed.D2.column_rows(1) == [1, 2]


class TestGrids:
    def test_coarsen_ceiling(self):
        grid = Grid2(tuple(map(Fraction, [0, 1, 2])), tuple(map(Fraction, [0, 1, 2])))
        rep = parse_firep("firep\n0 1 0\n0.3 1.7 ; \n")
        snapped = coarsen(rep, grid)
        assert snapped.gr1.grade(1) == bigrade(1, 2)

    def test_coarsen_on_grid_is_identity(self):
        grid = Grid2(tuple(map(Fraction, [0, 1])), tuple(map(Fraction, [0, 1])))
        rep = parse_firep("firep\n0 1 0\n1 0 ; \n")
        assert coarsen(rep, grid).gr1.grade(1) == bigrade(1, 0)

    def test_coarsen_beyond_extent_rejected(self):
        grid = Grid2((Fraction(0),), (Fraction(0),))
        rep = parse_firep("firep\n0 1 0\n1 0 ; \n")
        with pytest.raises(InputError, match="exceeds grid"):
            coarsen(rep, grid)

    def test_coarsen_bounds_unique_coordinates(self):
        rep = firep_from_bifiltration(
            rips_bifiltration(
                [(0, 0), (1, 0), (0, 1), (3, 3), (4, 3)], [3, 2, 1, 5, 4], 3
            ),
            1,
        )
        grid = uniform_grid(rep.bounds(), 4, 4)
        snapped = coarsen(rep, grid)
        xs = {g.x for g in snapped.all_grades()}
        ys = {g.y for g in snapped.all_grades()}
        assert len(xs) <= 4 and len(ys) <= 4
        # identity grid: coarsening onto the module's own coordinates is a no-op
        own = discretize(rep)[1]
        assert [tuple(g) for g in coarsen(rep, own).gr1] == [tuple(g) for g in rep.gr1]

    def test_discretize_rank_transform(self):
        rep = parse_firep("firep\n0 3 0\n0 0 ; \n1 0 ; \n1 1 ; \n")
        disc, grid = discretize(rep)
        assert [tuple(map(int, g)) for g in disc.gr1] == [(1, 1), (2, 1), (2, 2)]
        assert grid.xs == (0, 1) and grid.ys == (0, 1)

    def test_discretize_round_trip(self):
        rep = parse_firep(
            "firep\n0 2 1\n1/3 0 ; \n0 5/7 ; \n1/3 5/7 ; 1 2\n"
        )
        disc, grid = discretize(rep)
        back = [grid.value(int(g.x), int(g.y)) for g in disc.all_grades()]
        assert back == rep.all_grades()

    def test_discretize_singleton(self):
        rep = parse_firep("firep\n0 1 0\n2 3 ; \n")
        disc, grid = discretize(rep)
        assert tuple(map(int, disc.gr1.grade(1))) == (1, 1)
        assert grid.value(1, 1) == bigrade(2, 3)
