"""Slice queries: pushing template points onto a line, and diagrams.

A query line lives in the data plane; the augmented arrangement may be
internally translated along x (to keep anchor slopes non-negative), so the
line is translated in and the resulting barcode points are translated back.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .arrangement import DualPoint, face_in_direction
from .errors import InputError, InvariantError
from .gf2 import GF2Matrix, mask_from_rows
from .grades import Bigrade, rational_sqrt
from .model import FIRep
from .reduction import RuState, pairs_ess
from .templates import AugmentedArrangement


@dataclass(frozen=True)
class LineSpec:
    """An affine line of non-negative slope, or a vertical line."""

    vertical: bool
    slope: Fraction = Fraction(0)  # finite lines only
    intercept: Fraction = Fraction(0)
    x: Fraction = Fraction(0)  # vertical lines only

    @classmethod
    def finite(cls, slope, intercept) -> "LineSpec":
        slope, intercept = Fraction(slope), Fraction(intercept)
        if slope < 0:
            raise InputError("slice lines must have non-negative slope")
        return cls(False, slope, intercept)

    @classmethod
    def from_vertical(cls, x) -> "LineSpec":
        return cls(True, x=Fraction(x))

    def shift_x(self, delta: Fraction) -> "LineSpec":
        """The image of the line under translating the plane by (delta, 0)."""
        if delta == 0:
            return self
        if self.vertical:
            return LineSpec.from_vertical(self.x + delta)
        return LineSpec.finite(self.slope, self.intercept - self.slope * delta)


def push(line: LineSpec, a: Bigrade) -> Bigrade | None:
    """Minimal point of the line dominating a, or None when no point does."""
    if line.vertical:
        if a.x > line.x:
            return None
        return Bigrade(line.x, a.y)
    if line.slope == 0:
        if a.y > line.intercept:
            return None
        return Bigrade(a.x, line.intercept)
    x_star = max(a.x, (a.y - line.intercept) / line.slope)
    return Bigrade(x_star, line.slope * x_star + line.intercept)


def line_order_key(line: LineSpec, p: Bigrade) -> Fraction:
    """A 1-D coordinate inducing the total order along the line."""
    return p.y if line.vertical else p.x


@dataclass(frozen=True)
class Barcode:
    """Multiset of intervals on a line: (birth point, death point or None)."""

    entries: tuple[tuple[Bigrade, Bigrade | None, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.entries)

    def as_multiset(self) -> dict[tuple[Bigrade, Bigrade | None], int]:
        return {(b, d): m for b, d, m in self.entries}


def _aggregate(bars) -> Barcode:
    agg: dict[tuple[Bigrade, Bigrade | None], int] = {}
    for b, d, m in bars:
        agg[(b, d)] = agg.get((b, d), 0) + m
    entries = tuple(
        (b, d, m)
        for (b, d), m in sorted(
            agg.items(),
            key=lambda kv: (
                kv[0][0],
                kv[0][1] is None,
                kv[0][1] if kv[0][1] is not None else Bigrade(Fraction(0), Fraction(0)),
            ),
        )
    )
    return Barcode(entries)


# ---------------------------------------------------------------------------
# coface selection


def select_coface(aug: AugmentedArrangement, line: LineSpec) -> int:
    """The 2-cell whose template answers queries for this line."""
    internal = line.shift_x(aug.x_shift)
    dcel = aug.dcel
    if internal.vertical:
        return aug.vlookup.lookup(internal.x)
    dual = DualPoint(internal.slope, -internal.intercept)
    cell = aug.locator.locate((dual.c, dual.d))
    if cell.kind == "face":
        return cell.index
    steep = (Fraction(1), -(aug.max_slope() + 1))
    if cell.kind == "vertex":
        if internal.slope == 0:
            # horizontal line: the bottom 2-D coface
            return face_in_direction(dcel, cell.index, steep)
        faces = [
            f for f in dcel.faces_at_vertex(cell.index) if not dcel.faces[f].is_outer
        ]
        return min(faces)
    # on a 1-cell
    he = dcel.half_edges[cell.index]
    f1, f2 = he.face, dcel.half_edges[he.twin].face
    interior = [f for f in (f1, f2) if not dcel.faces[f].is_outer]
    if internal.slope == 0:
        # dual lies on the boundary line x = 0; the unique interior coface
        if len(interior) != 1:
            raise InvariantError("horizontal dual point off the boundary line")
        return interior[0]
    return min(interior)


def query_barcode(aug: AugmentedArrangement, line: LineSpec) -> Barcode:
    """Barcode of the slice along the line, via one template lookup."""
    face = select_coface(aug, line)
    template = aug.template_at(face)
    internal = line.shift_x(aug.x_shift)
    delta = aug.x_shift
    bars = []
    for birth, death, mult in template.entries:
        pb = push(internal, birth)
        if pb is None:
            continue
        if death is None:
            pd = None
        else:
            pd = push(internal, death)
            if pd is not None and line_order_key(internal, pb) >= line_order_key(
                internal, pd
            ):
                continue
            if pd is None:
                pass  # an unbounded interval on a horizontal/vertical line
        bars.append(
            (
                Bigrade(pb.x - delta, pb.y),
                None if pd is None else Bigrade(pd.x - delta, pd.y),
                mult,
            )
        )
    return _aggregate(bars)


# ---------------------------------------------------------------------------
# the restriction oracle


def slice_oracle(rep: FIRep, line: LineSpec) -> Barcode:
    """Ground truth: push all grades onto the line, sort, reduce, read.

    Columns pushed to infinity never contribute to any vector space on the
    line, so the restriction is the sub-FI-rep of finitely pushed indices.
    """
    key1 = [push(line, g) for g in rep.gr1]
    key2 = [push(line, g) for g in rep.gr2]
    keep1 = [k for k in range(1, rep.m1 + 1) if key1[k - 1] is not None]
    keep2 = [j for j in range(1, rep.m2 + 1) if key2[j - 1] is not None]
    order1 = sorted(keep1, key=lambda k: (line_order_key(line, key1[k - 1]), k))
    order2 = sorted(keep2, key=lambda j: (line_order_key(line, key2[j - 1]), j))
    pos1 = {k: p for p, k in enumerate(order1, start=1)}
    cols1 = [rep.D1.column(k) for k in order1]
    cols2 = []
    for j in order2:
        rows = rep.D2.column_rows(j)
        if any(k not in pos1 for k in rows):
            raise InvariantError("a finitely pushed relation hits an infinite row")
        cols2.append(mask_from_rows(pos1[k] for k in rows))
    D1 = GF2Matrix(rep.m0, len(order1), cols1)
    D2 = GF2Matrix(len(order1), len(order2), cols2)
    state = RuState.reduce(D1, D2)
    pairs, ess = pairs_ess(state, len(order1))
    okey1 = [line_order_key(line, key1[k - 1]) for k in order1]
    okey2 = [line_order_key(line, key2[j - 1]) for j in order2]

    def point_from_key(t: Fraction) -> Bigrade:
        if line.vertical:
            return Bigrade(line.x, t)
        return Bigrade(t, line.slope * t + line.intercept)

    bars = []
    for p, q in pairs:
        if okey1[p - 1] < okey2[q - 1]:
            bars.append((point_from_key(okey1[p - 1]), point_from_key(okey2[q - 1]), 1))
    for p in ess:
        bars.append((point_from_key(okey1[p - 1]), None, 1))
    return _aggregate(bars)


# ---------------------------------------------------------------------------
# persistence-diagram parameterization


@dataclass(frozen=True)
class ParamValue:
    """A non-negative isometric line parameter, exact via its square."""

    sq: Fraction
    value: float

    def leq_sqrt(self, bound_sq: Fraction) -> bool:
        """self <= sqrt(bound_sq), exactly."""
        return self.sq <= bound_sq


@dataclass(frozen=True)
class ParamLine:
    """gamma(0) and the order-preserving isometry for one line."""

    origin: Bigrade
    line: LineSpec

    def param(self, p: Bigrade) -> ParamValue:
        dx = p.x - self.origin.x
        dy = p.y - self.origin.y
        sq = dx * dx + dy * dy
        if (self.line.vertical and dy < 0) or (not self.line.vertical and dx < 0):
            raise InvariantError("barcode point parameterizes negatively")
        return ParamValue(sq, float(rational_sqrt(sq)))


def parameterize(line: LineSpec) -> ParamLine:
    """The unique order-preserving isometry fixed by the window rules."""
    if line.vertical:
        return ParamLine(Bigrade(line.x, Fraction(0)), line)
    if line.slope == 0:
        return ParamLine(Bigrade(Fraction(0), line.intercept), line)
    if line.intercept >= 0:
        return ParamLine(Bigrade(Fraction(0), line.intercept), line)
    return ParamLine(Bigrade(-line.intercept / line.slope, Fraction(0)), line)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Bucketed diagram: square window, two strips, two overflow counts.

    window_bound is the (possibly approximated) rational display value; the
    bucketing itself is decided against the exact squared bound.
    """

    window_bound: Fraction
    window_bound_sq: Fraction
    in_window: tuple[tuple[ParamValue, ParamValue, int], ...]
    inf_strip: tuple[tuple[ParamValue, int], ...]
    ltinf_strip: tuple[tuple[ParamValue, ParamValue, int], ...]
    overflow_essential: int
    overflow_finite: int

    @property
    def total_multiplicity(self) -> int:
        return (
            sum(m for *_, m in self.in_window)
            + sum(m for *_, m in self.inf_strip)
            + sum(m for *_, m in self.ltinf_strip)
            + self.overflow_essential
            + self.overflow_finite
        )


def bucket_intervals(
    intervals: list[tuple[ParamValue, ParamValue | None, int]],
    bound: Fraction,
    bound_sq: Fraction | None = None,
) -> PersistenceDiagram:
    """Assign every parameterized interval to exactly one diagram bucket.

    Window membership is closed (alpha <= |B|); pass bound_sq when |B| itself
    is irrational so boundary cases are decided exactly.
    """
    if bound_sq is None:
        bound_sq = bound * bound
    in_window = []
    inf_strip = []
    ltinf = []
    over_ess = 0
    over_fin = 0
    for alpha, beta, mult in intervals:
        inside = alpha.leq_sqrt(bound_sq)
        if beta is None:
            if inside:
                inf_strip.append((alpha, mult))
            else:
                over_ess += mult
        elif inside and beta.leq_sqrt(bound_sq):
            in_window.append((alpha, beta, mult))
        elif inside:
            ltinf.append((alpha, beta, mult))
        else:
            over_fin += mult
    return PersistenceDiagram(
        bound,
        bound_sq,
        tuple(in_window),
        tuple(inf_strip),
        tuple(ltinf),
        over_ess,
        over_fin,
    )


def diagram(
    aug: AugmentedArrangement,
    line: LineSpec,
    normalized: bool = False,
    window_bound: Fraction | None = None,
) -> tuple[Barcode, PersistenceDiagram]:
    """Query the line and bucket the resulting intervals per the window rules.

    With normalized=True the line is interpreted in the coordinates where the
    grade bounds become (0,0) and (1,1), and the barcode is transformed
    accordingly before parameterization.
    """
    if aug.bounds is None:
        a = b = Bigrade(Fraction(0), Fraction(0))
    else:
        a, b = aug.bounds
    span = Bigrade(b.x - a.x, b.y - a.y)
    sx = span.x if span.x > 0 else Fraction(1)
    sy = span.y if span.y > 0 else Fraction(1)

    if normalized:
        if line.vertical:
            data_line = LineSpec.from_vertical(a.x + sx * line.x)
        else:
            slope = line.slope * sy / sx
            intercept = line.intercept * sy - slope * a.x + a.y
            data_line = LineSpec.finite(slope, intercept)

        def transform(p: Bigrade) -> Bigrade:
            return Bigrade((p.x - a.x) / sx, (p.y - a.y) / sy)

        window_corner = Bigrade(Fraction(1), Fraction(1))
        view_line = line
    else:
        data_line = line

        def transform(p: Bigrade) -> Bigrade:
            return Bigrade(p.x - a.x, p.y - a.y)

        window_corner = span
        if line.vertical:
            view_line = LineSpec.from_vertical(line.x - a.x)
        else:
            view_line = LineSpec.finite(
                line.slope, line.intercept + line.slope * a.x - a.y
            )

    barcode = query_barcode(aug, data_line)
    if window_bound is None:
        bound_sq = window_corner.x**2 + window_corner.y**2
        if bound_sq == 0:
            bound_sq = Fraction(1)
        window_bound = rational_sqrt(bound_sq)
    else:
        bound_sq = window_bound * window_bound
    pline = parameterize(view_line)
    intervals = []
    for birth, death, mult in barcode.entries:
        alpha = pline.param(transform(birth))
        beta = None if death is None else pline.param(transform(death))
        intervals.append((alpha, beta, mult))
    return barcode, bucket_intervals(intervals, window_bound, bound_sq)
