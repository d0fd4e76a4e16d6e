"""Shared generators for randomized desk-scale instances."""
import itertools
import random
from fractions import Fraction

from twopers.gf2 import GF2Matrix, mask_from_rows
from twopers.grades import Bigrade
from twopers.model import Bifiltration, FIRep, GradedSet


def random_bifiltration(rng: random.Random, max_vertices: int = 7, grid: int = 5) -> Bifiltration:
    """Random 1-critical bifiltration with grades on a grid x grid lattice."""
    n = rng.randrange(2, max_vertices + 1)

    def bump(lo: Bigrade) -> Bigrade:
        x = int(lo.x) + (rng.randrange(grid - int(lo.x)) if int(lo.x) < grid - 1 else 0)
        y = int(lo.y) + (rng.randrange(grid - int(lo.y)) if int(lo.y) < grid - 1 else 0)
        return Bigrade(Fraction(x), Fraction(y))

    simplices = {}
    for v in range(n):
        simplices[(v,)] = Bigrade(Fraction(rng.randrange(grid)), Fraction(rng.randrange(grid)))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < 0.7:
            simplices[(u, v)] = bump(Bigrade.join(simplices[(u,)], simplices[(v,)]))
    for tri in itertools.combinations(range(n), 3):
        edges = [tri[:2], tri[1:], (tri[0], tri[2])]
        if all(e in simplices for e in edges) and rng.random() < 0.6:
            simplices[tri] = bump(Bigrade.join(*(simplices[e] for e in edges)))
    bif = Bifiltration([(v, g) for v, g in simplices.items()])
    bif.validate()
    return bif


def random_presentation(rng: random.Random, grid: int = 4) -> FIRep:
    """Random presentation (m0 = 0) with monotone relation grades, colex-sorted."""
    m1 = rng.randrange(1, 6)
    gens = sorted(
        (
            Bigrade(Fraction(rng.randrange(grid)), Fraction(rng.randrange(grid)))
            for _ in range(m1)
        ),
        key=lambda g: (g.y, g.x),
    )
    rels = []
    for _ in range(rng.randrange(0, 6)):
        g = Bigrade(Fraction(rng.randrange(grid)), Fraction(rng.randrange(grid)))
        alive = [i + 1 for i in range(m1) if gens[i].leq(g)]
        if not alive:
            continue
        pick = [i for i in alive if rng.random() < 0.6] or [rng.choice(alive)]
        rels.append((g, mask_from_rows(pick)))
    rels.sort(key=lambda rg: (rg[0].y, rg[0].x))
    rep = FIRep(
        GradedSet(tuple(gens)),
        GradedSet(tuple(g for g, _ in rels)),
        0,
        GF2Matrix(0, m1),
        GF2Matrix(m1, len(rels), [c for _, c in rels]),
    )
    rep.validate()
    return rep


def sample_lines(rng: random.Random, aug, count: int = 25):
    """Line specs of every flavour the query contract names."""
    from twopers.query import LineSpec

    lines = []

    def rat(lo, hi, den=8):
        return Fraction(rng.randrange(lo * den, hi * den + 1), den)

    n_each = max(2, count // 5)
    for _ in range(n_each):
        lines.append(LineSpec.finite(rat(0, 6), rat(-8, 8)))
    for _ in range(n_each):
        lines.append(LineSpec.finite(0, rat(-8, 8)))
    for _ in range(n_each):
        lines.append(LineSpec.from_vertical(rat(-8, 8)))
    anchors = list(aug.anchors)
    for _ in range(n_each):
        if not anchors:
            break
        a = rng.choice(anchors)
        ax = a.x - aug.x_shift
        slope = rat(0, 6)
        lines.append(LineSpec.finite(slope, a.y - slope * ax))
    vertices = [
        p
        for i, p in enumerate(aug.dcel.vertices)
        if not aug.dcel.vertex_synthetic[i]
    ]
    while len(lines) < count and vertices:
        c, d = rng.choice(vertices)
        # the dual line of an arrangement 0-cell, mapped back to data coords
        internal = LineSpec.finite(c, -d)
        lines.append(internal.shift_x(-aug.x_shift))
    while len(lines) < count:
        lines.append(LineSpec.finite(rat(0, 6), rat(-8, 8)))
    return lines[:count]
