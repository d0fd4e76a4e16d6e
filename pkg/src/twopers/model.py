"""Bifiltrations, free implicit representations, and their ingestion.

A free implicit representation (FI-rep) presents a two-parameter persistence
module as ker D1 / im D2 between free bigraded modules; it is the unit of
currency for every downstream computation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InvariantError, ParseError
from .gf2 import GF2Matrix, mask_from_rows
from .grades import Bigrade, Grid2, colex_key, parse_rational, rational_sqrt, unique_sorted


@dataclass(frozen=True)
class GradedSet:
    """An ordered finite set of bigrades; index set is 1-based [m]."""

    grades: tuple[Bigrade, ...]

    @property
    def size(self) -> int:
        return len(self.grades)

    def grade(self, i: int) -> Bigrade:
        return self.grades[i - 1]

    def __iter__(self):
        return iter(self.grades)


@dataclass
class FIRep:
    """Free implicit representation (gr1, gr2, D1, D2) over GF(2)."""

    gr1: GradedSet
    gr2: GradedSet
    m0: int
    D1: GF2Matrix  # m0 x m1
    D2: GF2Matrix  # m1 x m2

    @property
    def m1(self) -> int:
        return self.gr1.size

    @property
    def m2(self) -> int:
        return self.gr2.size

    def __post_init__(self):
        if self.D1.rows != self.m0 or self.D1.cols != self.m1:
            raise InvariantError("D1 dimensions disagree with (m0, m1)")
        if self.D2.rows != self.m1 or self.D2.cols != self.m2:
            raise InvariantError("D2 dimensions disagree with (m1, m2)")

    def validate(self) -> None:
        """Check D1*D2 = 0 and grade monotonicity of D2 entries."""
        if not self.D1.matmul(self.D2).is_zero():
            raise InvariantError("D1 * D2 != 0 over GF(2)")
        for j in range(1, self.m2 + 1):
            gj = self.gr2.grade(j)
            for i in self.D2.column_rows(j):
                if not self.gr1.grade(i).leq(gj):
                    raise InvariantError(
                        f"D2 entry ({i},{j}) violates grade monotonicity"
                    )

    def all_grades(self) -> list[Bigrade]:
        return list(self.gr1) + list(self.gr2)

    def bounds(self) -> tuple[Bigrade, Bigrade] | None:
        """(glb, lub) of im gr1 and im gr2, or None for the zero module."""
        grades = self.all_grades()
        if not grades:
            return None
        return Bigrade.meet(*grades), Bigrade.join(*grades)

    def copy(self) -> "FIRep":
        return FIRep(self.gr1, self.gr2, self.m0, self.D1.copy(), self.D2.copy())

    def with_grades(self, gr1: GradedSet, gr2: GradedSet) -> "FIRep":
        return FIRep(gr1, gr2, self.m0, self.D1, self.D2)

    def shift_x(self, delta: Fraction) -> "FIRep":
        """Translate every grade by (delta, 0); the module is unchanged up to shift."""
        if delta == 0:
            return self
        return self.with_grades(
            GradedSet(tuple(Bigrade(g.x + delta, g.y) for g in self.gr1)),
            GradedSet(tuple(Bigrade(g.x + delta, g.y) for g in self.gr2)),
        )


@dataclass
class Bifiltration:
    """A 1-critical bifiltration: each simplex with its unique grade of appearance."""

    simplices: list[tuple[tuple[int, ...], Bigrade]]
    xlabel: str = "x"
    ylabel: str = "y"

    def validate(self) -> None:
        seen: dict[tuple[int, ...], Bigrade] = {}
        for verts, grade in self.simplices:
            if list(verts) != sorted(set(verts)):
                raise InputError(f"simplex {verts} is not strictly ascending")
            if verts in seen:
                raise InputError(
                    f"simplex {verts} appears more than once; only 1-critical "
                    "bifiltrations are supported"
                )
            seen[verts] = grade
        for verts, grade in self.simplices:
            if len(verts) == 1:
                continue
            for face in faces_of(verts):
                fg = seen.get(face)
                if fg is None:
                    raise InputError(f"missing face {face} of simplex {verts}")
                if not fg.leq(grade):
                    raise InputError(
                        f"grade of face {face} = {fg} is not <= grade of {verts} = {grade}"
                    )

    def by_dimension(self, dim: int) -> list[tuple[tuple[int, ...], Bigrade]]:
        return [(v, g) for (v, g) in self.simplices if len(v) - 1 == dim]


def faces_of(verts: tuple[int, ...]):
    for i in range(len(verts)):
        yield verts[:i] + verts[i + 1 :]


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    """Yield (line_number, content) with comments stripped and blanks skipped."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line


def parse_bifiltration(text: str) -> Bifiltration:
    """Parse the bifiltration text format; validates all invariants."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "bifiltration":
        raise ParseError("expected literal 'bifiltration' header", lines[0][0] if lines else 1)
    body = lines[1:]
    xlabel, ylabel = "x", "y"
    if body and body[0][1].startswith("--xlabel"):
        ln, line = body[0]
        tokens = line.split()
        try:
            xlabel = tokens[tokens.index("--xlabel") + 1]
            ylabel = tokens[tokens.index("--ylabel") + 1]
        except (ValueError, IndexError) as exc:
            raise ParseError("malformed label line", ln) from exc
        body = body[1:]
    simplices = []
    for ln, line in body:
        if ";" not in line:
            raise ParseError("expected '<vertices> ; <grade> <grade>'", ln)
        left, right = line.split(";", 1)
        try:
            verts = tuple(sorted(int(t) for t in left.split()))
        except ValueError as exc:
            raise ParseError(f"bad vertex list {left.strip()!r}", ln) from exc
        if not verts:
            raise ParseError("empty vertex list", ln)
        gtokens = right.split()
        if len(gtokens) != 2:
            raise ParseError("expected exactly two grade literals", ln)
        try:
            grade = Bigrade(parse_rational(gtokens[0]), parse_rational(gtokens[1]))
        except InputError as exc:
            raise ParseError(str(exc), ln) from exc
        simplices.append((verts, grade))
    bif = Bifiltration(simplices, xlabel, ylabel)
    bif.validate()
    return bif


def parse_firep(text: str) -> FIRep:
    """Parse the FI-rep text format."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "firep":
        raise ParseError("expected literal 'firep' header", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise ParseError("missing dimension line 'm0 m1 m2'", lines[0][0])
    ln, dims = lines[1]
    try:
        m0, m1, m2 = (int(t) for t in dims.split())
    except ValueError as exc:
        raise ParseError("expected 'm0 m1 m2'", ln) from exc
    body = lines[2:]
    if len(body) != m1 + m2:
        raise ParseError(
            f"expected {m1 + m2} column lines, found {len(body)}",
            body[-1][0] if body else ln,
        )

    def read_columns(rows, entries):
        grades, cols = [], []
        for lnum, line in entries:
            if ";" not in line:
                raise ParseError("expected '<x> <y> ; <rows>'", lnum)
            left, right = line.split(";", 1)
            gtokens = left.split()
            if len(gtokens) != 2:
                raise ParseError("expected two grade literals before ';'", lnum)
            grades.append(Bigrade(parse_rational(gtokens[0]), parse_rational(gtokens[1])))
            try:
                rlist = [int(t) for t in right.split()]
            except ValueError as exc:
                raise ParseError("bad row index", lnum) from exc
            if any(not 1 <= r <= rows for r in rlist):
                raise ParseError(f"row index out of range [1, {rows}]", lnum)
            cols.append(mask_from_rows(rlist))
        return grades, cols

    grades1, cols1 = read_columns(m0, body[:m1])
    grades2, cols2 = read_columns(m1, body[m1:])
    rep = FIRep(
        GradedSet(tuple(grades1)),
        GradedSet(tuple(grades2)),
        m0,
        GF2Matrix(m0, m1, cols1),
        GF2Matrix(m1, m2, cols2),
    )
    try:
        rep.validate()
    except InvariantError as exc:
        raise InputError(str(exc)) from exc
    return rep


def parse_input(text: str) -> Bifiltration | FIRep:
    """Dispatch on the header line of either supported input format."""
    for _, line in _content_lines(text):
        if line == "bifiltration":
            return parse_bifiltration(text)
        if line == "firep":
            return parse_firep(text)
        raise ParseError(f"unknown input header {line!r}", 1)
    raise ParseError("empty input", 1)


# ---------------------------------------------------------------------------
# function-Rips construction


def rips_bifiltration(points, codensity, max_scale, max_dim: int = 2) -> Bifiltration:
    """Function-Rips bifiltration of a planar point cloud.

    A simplex is graded by (max codensity over its vertices, half its longest
    pairwise distance); the scale axis is capped at max_scale and the simplex
    dimension at max_dim.
    """
    if not points:
        raise InputError("empty point set")
    max_scale = Fraction(max_scale)
    if max_scale < 0:
        raise InputError("max_scale must be non-negative")
    if len(codensity) != len(points):
        raise InputError("codensity must assign a value to every point")
    pts = [(Fraction(p[0]), Fraction(p[1])) for p in points]
    gamma = [Fraction(g) for g in codensity]
    n = len(pts)

    scale: dict[tuple[int, int], Fraction] = {}
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        d2 = (pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2
        t = rational_sqrt(d2) / 2
        if t <= max_scale:
            scale[(i, j)] = t
            neighbors[i].add(j)
            neighbors[j].add(i)

    simplices: list[tuple[tuple[int, ...], Bigrade]] = [
        ((i,), Bigrade(gamma[i], Fraction(0))) for i in range(n)
    ]

    def grade_of(verts: tuple[int, ...]) -> Bigrade:
        g = max(gamma[v] for v in verts)
        t = max(scale[(a, b)] for a, b in itertools.combinations(verts, 2))
        return Bigrade(g, t)

    frontier = [tuple(e) for e in sorted(scale)]
    for e in frontier:
        simplices.append((e, grade_of(e)))
    dim = 1
    while dim < max_dim and frontier:
        nxt = []
        for verts in frontier:
            common = set.intersection(*(neighbors[v] for v in verts))
            for w in sorted(common):
                if w > verts[-1]:
                    nxt.append(verts + (w,))
        for verts in nxt:
            simplices.append((verts, grade_of(verts)))
        frontier = nxt
        dim += 1

    bif = Bifiltration(simplices, "codensity", "scale")
    bif.validate()
    return bif


# ---------------------------------------------------------------------------
# FI-rep construction and surgery


def firep_from_bifiltration(bif: Bifiltration, degree: int) -> FIRep:
    """FI-rep of the degree-th persistent homology of a 1-critical bifiltration.

    Simplices within each dimension are ordered colexicographically by grade,
    ties broken by vertex list, so the grade functions are colex-sorted.
    """
    if degree < 0:
        raise InputError("homology degree must be >= 0")

    def ordered(dim):
        return sorted(bif.by_dimension(dim), key=lambda sg: (colex_key(sg[1]), sg[0]))

    below = ordered(degree - 1) if degree > 0 else []
    mid = ordered(degree)
    above = ordered(degree + 1)
    below_index = {v: i + 1 for i, (v, _) in enumerate(below)}
    mid_index = {v: i + 1 for i, (v, _) in enumerate(mid)}

    def boundary(cells, index, rows):
        cols = []
        for verts, _ in cells:
            if len(verts) == 1:
                cols.append(0)
            else:
                cols.append(mask_from_rows(index[f] for f in faces_of(verts)))
        return GF2Matrix(rows, len(cells), cols)

    rep = FIRep(
        GradedSet(tuple(g for _, g in mid)),
        GradedSet(tuple(g for _, g in above)),
        len(below),
        boundary(mid, below_index, len(below)),
        boundary(above, mid_index, len(mid)),
    )
    rep.validate()
    return rep


def trim(rep: FIRep, lub_support: Bigrade) -> FIRep:
    """Restrict to columns graded inside box(S); the homology is unchanged."""
    keep1 = [i for i in range(1, rep.m1 + 1) if rep.gr1.grade(i).leq(lub_support)]
    keep2 = [j for j in range(1, rep.m2 + 1) if rep.gr2.grade(j).leq(lub_support)]
    new_row = {old: new + 1 for new, old in enumerate(keep1)}
    cols2 = []
    for j in keep2:
        cols2.append(mask_from_rows(new_row[i] for i in rep.D2.column_rows(j)))
    return FIRep(
        GradedSet(tuple(rep.gr1.grade(i) for i in keep1)),
        GradedSet(tuple(rep.gr2.grade(j) for j in keep2)),
        rep.m0,
        GF2Matrix(rep.m0, len(keep1), [rep.D1.column(i) for i in keep1]),
        GF2Matrix(len(keep1), len(keep2), cols2),
    )


def coarsen(rep: FIRep, grid: Grid2) -> FIRep:
    """Snap every grade up to the minimal dominating grid point."""
    return rep.with_grades(
        GradedSet(tuple(grid.ceil(g) for g in rep.gr1)),
        GradedSet(tuple(grid.ceil(g) for g in rep.gr2)),
    )


def discretize(rep: FIRep) -> tuple[FIRep, Grid2]:
    """Replace grades by their 1-based ranks; returns the bijection grid.

    Composing the integer grades with the grid recovers the input exactly.
    """
    grades = rep.all_grades()
    xs = unique_sorted(g.x for g in grades) or (Fraction(0),)
    ys = unique_sorted(g.y for g in grades) or (Fraction(0),)
    grid = Grid2(xs, ys)

    def snap(g: Bigrade) -> Bigrade:
        i, j = grid.index_of(g)
        return Bigrade(Fraction(i), Fraction(j))

    return (
        rep.with_grades(
            GradedSet(tuple(snap(g) for g in rep.gr1)),
            GradedSet(tuple(snap(g) for g in rep.gr2)),
        ),
        grid,
    )


def uniform_grid(bounds: tuple[Bigrade, Bigrade], xbins: int, ybins: int) -> Grid2:
    """Evenly spaced grid spanning [glb, lub] with the given value counts."""
    if xbins < 1 or ybins < 1:
        raise InputError("bin counts must be >= 1")
    lo, hi = bounds

    def axis(a: Fraction, b: Fraction, n: int):
        if n == 1 or a == b:
            return (b,)
        step = Fraction(b - a, n - 1)
        return tuple(a + k * step for k in range(n))

    return Grid2(axis(lo.x, hi.x, xbins), axis(lo.y, hi.y, ybins))
