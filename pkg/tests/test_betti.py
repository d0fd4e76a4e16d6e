"""Dimension function and Betti numbers: worked examples and oracles."""
import random
from fractions import Fraction

from twopers.betti import (
    betti_numbers,
    dimension_function,
    grade_slice_basis,
    support_set,
)
from twopers.gf2 import Echelon, rank
from twopers.grades import Bigrade, bigrade
from twopers.model import FIRep, GradedSet, parse_firep

from conftest import random_presentation

# the three worked presentation examples used throughout the tests
MODULE_M = "firep\n0 3 1\n1 0 ; \n0 1 ; \n1 1 ; \n1 1 ; 1 2\n"
MODULE_N = "firep\n0 2 0\n1 0 ; \n0 1 ; \n"
MODULE_CORNER = "firep\n0 1 2\n0 0 ; \n1 0 ; 1\n0 1 ; 1\n"


def sparse_table(betti, which):
    table = betti.tables()[which]
    return {betti.grid.value(i, j): v for (i, j), v in table.items()}


class TestWorkedExamples:
    def test_module_m(self):
        betti, dims = betti_numbers(parse_firep(MODULE_M))
        assert sparse_table(betti, 0) == {
            bigrade(1, 0): 1,
            bigrade(0, 1): 1,
            bigrade(1, 1): 1,
        }
        assert sparse_table(betti, 1) == {bigrade(1, 1): 1}
        assert sparse_table(betti, 2) == {}
        betti.check_hilbert(dims)

    def test_module_n(self):
        betti, dims = betti_numbers(parse_firep(MODULE_N))
        assert sparse_table(betti, 0) == {bigrade(1, 0): 1, bigrade(0, 1): 1}
        assert sparse_table(betti, 1) == {}
        assert sparse_table(betti, 2) == {}
        betti.check_hilbert(dims)

    def test_corner_module(self):
        betti, dims = betti_numbers(parse_firep(MODULE_CORNER))
        assert sparse_table(betti, 0) == {bigrade(0, 0): 1}
        assert sparse_table(betti, 1) == {bigrade(1, 0): 1, bigrade(0, 1): 1}
        assert sparse_table(betti, 2) == {bigrade(1, 1): 1}
        betti.check_hilbert(dims)


class TestDimensionFunction:
    def test_module_m_dims(self):
        dims = dimension_function(parse_firep(MODULE_M))
        assert dims.at_value(bigrade(1, 1)) == 2
        assert dims.at_value(bigrade(1, 0)) == 1
        assert dims.at_value(bigrade(0, 0)) == 0
        # constant on half-open boxes between grid values
        assert dims.at_value(Bigrade(Fraction(3, 2), Fraction(3, 2))) == 2

    def test_zero_module(self):
        rep = FIRep(
            GradedSet(()), GradedSet(()), 0,
            parse_firep("firep\n0 0 0\n").D1, parse_firep("firep\n0 0 0\n").D2,
        )
        dims = dimension_function(rep)
        assert all(v == 0 for row in dims.dims for v in row)

    def test_grade_slice_basis_examples(self):
        rep = parse_firep(MODULE_CORNER)
        assert grade_slice_basis(rep, Bigrade(Fraction(1, 2), Fraction(1, 2))).dim == 1
        assert grade_slice_basis(rep, bigrade(1, 1)).dim == 0
        assert grade_slice_basis(parse_firep("firep\n0 0 0\n"), bigrade(0, 0)).dim == 0


class TestSupportSet:
    def test_module_m_support(self):
        betti, _ = betti_numbers(parse_firep(MODULE_M))
        sup = support_set(betti)
        assert set(sup.points) == {bigrade(1, 0), bigrade(0, 1), bigrade(1, 1)}
        assert sup.x_shift == 0
        assert sup.kappa == 4

    def test_module_n_support(self):
        betti, _ = betti_numbers(parse_firep(MODULE_N))
        assert set(support_set(betti).points) == {bigrade(1, 0), bigrade(0, 1)}

    def test_zero_module_support_empty(self):
        betti, _ = betti_numbers(parse_firep("firep\n0 0 0\n"))
        sup = support_set(betti)
        assert sup.points == ()
        assert sup.lub() is None

    def test_negative_x_shifted(self):
        betti, _ = betti_numbers(parse_firep("firep\n0 1 0\n-2 0 ; \n"))
        sup = support_set(betti)
        assert sup.x_shift == 2
        assert sup.points == (bigrade(0, 0),)


# ---------------------------------------------------------------------------
# explicit-Koszul oracle: literal quotient bases and induced-map matrices


def quotient_basis(basis):
    """(representatives, coordinate echelon) of cycles / boundaries."""
    reps = []
    ech = {}

    def reduce_coords(v):
        w = v
        combo = 0
        while w:
            p = w.bit_length()
            if p in basis.boundaries.by_pivot:
                w ^= basis.boundaries.by_pivot[p]
            elif p in ech:
                w2, c2 = ech[p]
                w ^= w2
                combo ^= c2
            else:
                return w, combo
        return 0, combo

    for v in basis.cycles:
        w, combo = reduce_coords(v)
        if w:
            ech[w.bit_length()] = (w, combo | (1 << len(reps)))
            reps.append(v)
    return reps, reduce_coords


def induced_matrix(src_reps, dst_coords):
    """Columns = coordinates of source basis vectors in the target basis."""
    cols = []
    for v in src_reps:
        w, combo = dst_coords(v)
        assert w == 0, "cycle class fell outside the target module"
        cols.append(combo)
    return cols


def betti_by_explicit_koszul(rep: FIRep, z: Bigrade, step: Bigrade):
    """xi_i at z from literal Koszul matrices; step = one grid cell down-left."""
    z10 = Bigrade(z.x - step.x, z.y)
    z01 = Bigrade(z.x, z.y - step.y)
    z11 = Bigrade(z.x - step.x, z.y - step.y)
    spaces = {}
    for name, g in (("z", z), ("10", z10), ("01", z01), ("11", z11)):
        basis = grade_slice_basis(rep, g)
        spaces[name] = (basis.dim, *quotient_basis(basis))
    dz, _, coords_z = spaces["z"]
    d10, reps10, coords10 = spaces["10"]
    d01, reps01, coords01 = spaces["01"]
    d11, reps11, _ = spaces["11"]
    second = [c for c in induced_matrix(reps10, coords_z)]
    second += [c for c in induced_matrix(reps01, coords_z)]
    rank2 = rank(second)
    first = []
    for a, b in zip(induced_matrix(reps11, coords10), induced_matrix(reps11, coords01)):
        first.append(a | (b << d10))
    rank1 = rank(first)
    xi0 = dz - rank2
    xi2 = d11 - rank1
    xi1 = (d10 + d01 - rank2) - rank1
    return xi0, xi1, xi2


class TestAgainstExplicitKoszul:
    def test_random_presentations(self):
        rng = random.Random(3)
        step = bigrade(1, 1)
        for _ in range(40):
            rep = random_presentation(rng)
            from twopers.model import discretize

            disc, grid = discretize(rep)
            betti, dims = betti_numbers(disc, grid)
            betti.check_hilbert(dims)
            for i in range(1, grid.nx + 1):
                for j in range(1, grid.ny + 1):
                    want = betti_by_explicit_koszul(disc, bigrade(i, j), step)
                    got = (
                        betti.xi0.get((i, j), 0),
                        betti.xi1.get((i, j), 0),
                        betti.xi2.get((i, j), 0),
                    )
                    assert got == want, f"mismatch at ({i},{j})"


def is_minimal_presentation(rep: FIRep) -> bool:
    """Brute-force minimality: no redundant generator, no redundant relation."""
    if rep.m0 != 0:
        return False
    for i in range(1, rep.m1 + 1):
        gi = rep.gr1.grade(i)
        span = Echelon(
            rep.D2.column(j)
            for j in range(1, rep.m2 + 1)
            if rep.gr2.grade(j).leq(gi)
        )
        if any((v >> (i - 1)) & 1 for v in span.vectors()):
            return False
    for j in range(1, rep.m2 + 1):
        gj = rep.gr2.grade(j)
        others = Echelon(
            rep.D2.column(l)
            for l in range(1, rep.m2 + 1)
            if l != j and rep.gr2.grade(l).leq(gj)
        )
        if others.contains(rep.D2.column(j)):
            return False
    return True


class TestMinimalPresentationCounts:
    def test_xi0_xi1_count_generators_and_relations(self):
        rng = random.Random(9)
        checked = 0
        while checked < 25:
            rep = random_presentation(rng)
            if not is_minimal_presentation(rep):
                continue
            checked += 1
            betti, _ = betti_numbers(rep)
            xi0 = sparse_table(betti, 0)
            xi1 = sparse_table(betti, 1)
            from collections import Counter

            assert xi0 == dict(Counter(rep.gr1))
            assert xi1 == dict(Counter(rep.gr2))


class TestHilbertOnRandomInstances:
    def test_hilbert_identity(self):
        rng = random.Random(13)
        for _ in range(30):
            rep = random_presentation(rng)
            betti, dims = betti_numbers(rep)
            betti.check_hilbert(dims)
