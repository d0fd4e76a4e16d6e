"""The dual-plane line arrangement: duality, sweep, DCEL, point location.

Anchor points dualize to lines in the half-plane [0, inf) x R.  The
arrangement induced by those lines (plus the boundary line x = 0) is built
inside an exact rational clip box chosen to strictly contain every pairwise
intersection; box edges other than the x = 0 side are synthetic artifacts and
carry no anchors.  All geometry is exact: coordinates are Fractions and every
predicate is a rational comparison.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import InputError, InvariantError
from .grades import Bigrade

Point = tuple[Fraction, Fraction]


class DualLine(NamedTuple):
    """y = slope * x + intercept with slope >= 0."""

    slope: Fraction
    intercept: Fraction

    def value_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept


class DualPoint(NamedTuple):
    c: Fraction
    d: Fraction


def dual_ell(line: DualLine) -> DualPoint:
    """(a, b) |-> (a, -b); defined only for non-vertical lines, slope >= 0."""
    if line.slope < 0:
        raise InputError("duality is defined for non-negative slopes only")
    return DualPoint(line.slope, -line.intercept)


def dual_p(point: DualPoint) -> DualLine:
    """(c, d) |-> the line y = c x - d."""
    if point.c < 0:
        raise InputError("dual points live in [0, inf) x R")
    return DualLine(point.c, -point.d)


def anchor_line(anchor: Bigrade) -> DualLine:
    return dual_p(DualPoint(anchor.x, anchor.y))


# ---------------------------------------------------------------------------
# Bentley-Ottmann sweep over the clipped anchor lines


def sweep_intersections(lines: list[DualLine], x_max: Fraction) -> dict[Point, list[int]]:
    """All pairwise intersection points with 0 < x <= x_max.

    Standard sweep: the status holds all lines ordered by value; each event
    point reverses the contiguous block of lines through it.  Events are
    processed in exact (x, y) order with slope as the in-block tie-break, so
    concurrent lines and shared events are handled uniformly.
    """
    n = len(lines)
    if n == 0:
        return {}
    status = sorted(range(n), key=lambda i: (lines[i].intercept, lines[i].slope))
    pos = {i: p for p, i in enumerate(status)}
    events: list[Point] = []
    seen: set[Point] = set()

    def candidate(i: int, j: int) -> None:
        a, b = lines[i], lines[j]
        if a.slope == b.slope:
            return
        x = (b.intercept - a.intercept) / (a.slope - b.slope)
        if 0 < x <= x_max:
            p = (x, a.value_at(x))
            if p not in seen:
                seen.add(p)
                heapq.heappush(events, p)

    for p in range(n - 1):
        candidate(status[p], status[p + 1])

    crossings: dict[Point, list[int]] = {}
    while events:
        point = heapq.heappop(events)
        x, y = point
        # contiguous block of lines through the event point
        hits = [i for i in status if lines[i].value_at(x) == y]
        if len(hits) < 2:
            continue
        ps = sorted(pos[i] for i in hits)
        if ps != list(range(ps[0], ps[-1] + 1)):
            raise InvariantError("sweep status lost contiguity of an event block")
        lo, hi = ps[0], ps[-1]
        block = status[lo : hi + 1]
        block.reverse()
        status[lo : hi + 1] = block
        for p, i in enumerate(status):
            pos[i] = p
        crossings[point] = sorted(hits)
        if lo > 0:
            candidate(status[lo - 1], status[lo])
        if hi < n - 1:
            candidate(status[hi], status[hi + 1])
    return crossings


# ---------------------------------------------------------------------------
# DCEL


@dataclass
class HalfEdge:
    origin: int
    twin: int = -1
    next: int = -1
    prev: int = -1
    face: int = -1
    anchor: Bigrade | None = None
    synthetic: bool = False
    boundary: bool = False  # on the real 1-skeleton line x = 0


@dataclass
class Face:
    edge: int
    is_outer: bool = False


@dataclass
class Dcel:
    vertices: list[Point]
    half_edges: list[HalfEdge]
    faces: list[Face]
    box: tuple[Fraction, Fraction, Fraction, Fraction]  # x0, x1, ylo, yhi
    vertex_synthetic: list[bool] = field(default_factory=list)

    def head(self, h: int) -> int:
        return self.half_edges[self.half_edges[h].twin].origin

    def face_cycle(self, f: int) -> list[int]:
        out = []
        h0 = self.faces[f].edge
        h = h0
        while True:
            out.append(h)
            h = self.half_edges[h].next
            if h == h0:
                return out

    def face_vertices(self, f: int) -> list[int]:
        return [self.half_edges[h].origin for h in self.face_cycle(f)]

    def interior_faces(self) -> list[int]:
        return [i for i, f in enumerate(self.faces) if not f.is_outer]

    def face_sample_point(self, f: int) -> Point:
        """Exact interior point of a (convex) face: the vertex centroid."""
        vs = self.face_vertices(f)
        sx = sum(self.vertices[v][0] for v in vs)
        sy = sum(self.vertices[v][1] for v in vs)
        n = len(vs)
        return (Fraction(sx, n), Fraction(sy, n))

    def outgoing(self, v: int) -> list[int]:
        return [h for h, he in enumerate(self.half_edges) if he.origin == v]

    def faces_at_vertex(self, v: int) -> list[int]:
        return sorted({self.half_edges[h].face for h in self.outgoing(v)})

    def edge_faces(self, h: int) -> tuple[int, int]:
        return (self.half_edges[h].face, self.half_edges[self.half_edges[h].twin].face)

    def check(self) -> None:
        for h, he in enumerate(self.half_edges):
            if self.half_edges[he.twin].twin != h:
                raise InvariantError("twin involution broken")
            if self.half_edges[he.next].prev != h:
                raise InvariantError("next/prev inconsistency")
            if self.half_edges[he.next].face != he.face:
                raise InvariantError("face not constant along a cycle")
        v = len(self.vertices)
        e = len(self.half_edges) // 2
        f = len(self.faces)
        if v - e + f != 2:
            raise InvariantError(f"Euler check failed: V={v} E={e} F={f}")


def _direction_between(a: Point, b: Point) -> Point:
    return (b[0] - a[0], b[1] - a[1])


def _ccw_sort_key(d: Point):
    """Exact CCW angular order key starting at the +x axis.

    Within each quadrant the angle is monotone in dy/dx; the axis directions
    (dx == 0) open their quadrant.
    """
    dx, dy = d
    if dx == 0 and dy == 0:
        raise InvariantError("zero direction vector")
    if dx > 0 and dy >= 0:
        q = 0
    elif dx <= 0 and dy > 0:
        q = 1
    elif dx < 0 and dy <= 0:
        q = 2
    else:
        q = 3
    if dx == 0:
        return (q, 0, Fraction(0))
    return (q, 1, Fraction(dy, dx))


def build_dcel(anchors: list[Bigrade]) -> Dcel:
    """DCEL of the clipped arrangement of the anchors' dual lines."""
    uniq = sorted(set((a.x, a.y) for a in anchors))
    lines = [anchor_line(Bigrade(x, y)) for (x, y) in uniq]
    anchor_of_line = {i: Bigrade(*uniq[i]) for i in range(len(lines))}

    # clip box strictly containing all crossings and x=0 intercepts
    big = Fraction(1)
    xs_cross: list[Fraction] = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a, b = lines[i], lines[j]
            if a.slope != b.slope:
                x = (b.intercept - a.intercept) / (a.slope - b.slope)
                if x >= 0:
                    xs_cross.append(x)
    x_max = max(xs_cross, default=Fraction(0)) + big
    vals = [Fraction(0)]
    for ln in lines:
        vals.extend((ln.intercept, ln.value_at(x_max)))
    y_lo = min(vals) - big
    y_hi = max(vals) + big
    x0 = Fraction(0)

    crossings = sweep_intersections(lines, x_max)

    per_line_points: list[list[Point]] = [
        [(x0, ln.intercept), (x_max, ln.value_at(x_max))] for ln in lines
    ]
    for point, hit in crossings.items():
        for i in hit:
            per_line_points[i].append(point)
    for pts in per_line_points:
        pts.sort()

    corners = [(x0, y_lo), (x_max, y_lo), (x_max, y_hi), (x0, y_hi)]
    left_pts = sorted({(x0, y_lo), (x0, y_hi)} | {(x0, ln.intercept) for ln in lines})
    right_pts = sorted(
        {(x_max, y_lo), (x_max, y_hi)} | {(x_max, ln.value_at(x_max)) for ln in lines}
    )

    # undirected edges with metadata
    edges: list[tuple[Point, Point, Bigrade | None, bool, bool]] = []
    for i, pts in enumerate(per_line_points):
        dedup = sorted(set(pts))
        for a, b in zip(dedup, dedup[1:]):
            edges.append((a, b, anchor_of_line[i], False, False))
    for a, b in zip(left_pts, left_pts[1:]):
        edges.append((a, b, None, False, True))
    for a, b in zip(right_pts, right_pts[1:]):
        edges.append((a, b, None, True, False))
    edges.append(((x0, y_lo), (x_max, y_lo), None, True, False))
    edges.append(((x0, y_hi), (x_max, y_hi), None, True, False))

    points = sorted({p for e in edges for p in e[:2]})
    vid = {p: i for i, p in enumerate(points)}

    half_edges: list[HalfEdge] = []
    for a, b, anchor, synthetic, boundary in sorted(edges, key=lambda e: (e[0], e[1])):
        h1 = len(half_edges)
        half_edges.append(
            HalfEdge(vid[a], twin=h1 + 1, anchor=anchor, synthetic=synthetic, boundary=boundary)
        )
        half_edges.append(
            HalfEdge(vid[b], twin=h1, anchor=anchor, synthetic=synthetic, boundary=boundary)
        )

    # angular next/prev: next(h) is the clockwise-neighbour of twin(h) at head(h)
    outgoing: dict[int, list[int]] = {v: [] for v in range(len(points))}
    for h, he in enumerate(half_edges):
        outgoing[he.origin].append(h)

    def h_dir(h: int) -> Point:
        he = half_edges[h]
        return _direction_between(points[he.origin], points[half_edges[he.twin].origin])

    order_at: dict[int, list[int]] = {}
    index_at: dict[int, dict[int, int]] = {}
    for v, hs in outgoing.items():
        hs.sort(key=lambda h: _ccw_sort_key(h_dir(h)))
        order_at[v] = hs
        index_at[v] = {h: i for i, h in enumerate(hs)}
    for h, he in enumerate(half_edges):
        t = he.twin
        v = half_edges[t].origin  # head of h
        ring = order_at[v]
        i = index_at[v][t]
        nxt = ring[(i - 1) % len(ring)]
        half_edges[h].next = nxt
        half_edges[nxt].prev = h

    # faces = orbits of next; the one with clockwise total turning is outer
    faces: list[Face] = []
    for h in range(len(half_edges)):
        if half_edges[h].face != -1:
            continue
        fid = len(faces)
        cycle = []
        cur = h
        while half_edges[cur].face == -1:
            half_edges[cur].face = fid
            cycle.append(cur)
            cur = half_edges[cur].next
        area2 = Fraction(0)
        for ch in cycle:
            a = points[half_edges[ch].origin]
            b = points[half_edges[half_edges[ch].twin].origin]
            area2 += a[0] * b[1] - b[0] * a[1]
        faces.append(Face(h, is_outer=area2 < 0))

    outer = [i for i, f in enumerate(faces) if f.is_outer]
    if len(outer) != 1:
        raise InvariantError(f"expected exactly one outer face, found {len(outer)}")

    synth_pts = {p for p in points if p[1] in (y_lo, y_hi) or (p[0] == x_max)}
    dcel = Dcel(
        points,
        half_edges,
        faces,
        (x0, x_max, y_lo, y_hi),
        [p in synth_pts for p in points],
    )
    dcel.check()
    return dcel


# ---------------------------------------------------------------------------
# cell location


class CellRef(NamedTuple):
    """A located cell: kind in {'face', 'edge', 'vertex'} with its index."""

    kind: str
    index: int


@dataclass
class Locator:
    """Slab decomposition: O(kappa^2) space, O(log kappa) queries."""

    dcel: Dcel
    slab_xs: list[Fraction]
    slab_edges: list[list[int]]  # per slab: half-edge ids of the spanning edges
    vertex_ids: dict[Point, int]
    vertical_edges: dict[Fraction, list[tuple[Fraction, Fraction, int]]]

    @classmethod
    def build(cls, dcel: Dcel) -> "Locator":
        xs = sorted({p[0] for p in dcel.vertices})
        oriented = []
        verticals: dict[Fraction, list[tuple[Fraction, Fraction, int]]] = {}
        for h, he in enumerate(dcel.half_edges):
            if h > he.twin:
                continue
            a = dcel.vertices[he.origin]
            b = dcel.vertices[dcel.half_edges[he.twin].origin]
            if a[0] == b[0]:
                lo, hi = min(a[1], b[1]), max(a[1], b[1])
                verticals.setdefault(a[0], []).append((lo, hi, h))
            else:
                oriented.append((h, min(a, b), max(a, b)))
        for vs in verticals.values():
            vs.sort()
        slab_edges: list[list[int]] = []
        for xl, xr in zip(xs, xs[1:]):
            xm = (xl + xr) / 2
            inside = [(h, a, b) for (h, a, b) in oriented if a[0] <= xl and b[0] >= xr]
            inside.sort(key=lambda hab: _y_on(hab[1], hab[2], xm))
            slab_edges.append([h for h, _, _ in inside])
        return cls(
            dcel,
            xs,
            slab_edges,
            {p: i for i, p in enumerate(dcel.vertices)},
            verticals,
        )

    def locate(self, p: Point) -> CellRef:
        """The unique open cell containing p.

        Points beyond the right clip boundary are resolved against the anchor
        lines themselves (there are no crossings out there), so the answer is
        the true cell of the unclipped half-plane arrangement.
        """
        dcel = self.dcel
        x, y = p
        if x < 0:
            raise InputError("dual points have non-negative x")
        vid = self.vertex_ids.get(p)
        if vid is not None:
            if not dcel.vertex_synthetic[vid]:
                return CellRef("vertex", vid)
            return self._resolve_synthetic_vertex(vid, p)
        x0, x1, ylo, yhi = dcel.box
        if x > x1:
            return self._locate_beyond_right(p)
        hit = self._vertical_hit(x, y)
        if hit is not None:
            return self._edge_or_clipped_face(hit.index)
        xs = self.slab_xs
        lo, hi = 0, len(xs) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid - 1
        slab = min(lo, len(self.slab_edges) - 1)
        edges = self.slab_edges[slab]

        def edge_y(h: int) -> Fraction:
            he = dcel.half_edges[h]
            a = dcel.vertices[he.origin]
            b = dcel.vertices[dcel.half_edges[he.twin].origin]
            return _y_on(a, b, x)

        lo, hi = 0, len(edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if edge_y(edges[mid]) < y:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(edges) and edge_y(edges[lo]) == y:
            return self._edge_or_clipped_face(edges[lo])
        if lo == 0:
            # below the bottom box edge: the bottom-direction cell
            return CellRef("face", self._face_above(edges[0]))
        if lo == len(edges):
            # above the top box edge: the top-direction cell
            return CellRef("face", self._face_below(edges[-1]))
        return CellRef("face", self._face_above(edges[lo - 1]))

    def _locate_beyond_right(self, p: Point) -> CellRef:
        """Order against the anchor lines' true equations at p's x."""
        dcel = self.dcel
        x, y = p
        last = self.slab_edges[-1]
        anchored = []
        for h in last:
            a = dcel.half_edges[h].anchor
            if a is not None:
                anchored.append((h, DualLine(a.x, -a.y)))
        if not anchored:
            return CellRef("face", bottom_face(dcel))
        values = [(ln.value_at(x), h) for h, ln in anchored]
        below = [hv for hv in values if hv[0] < y]
        on = [hv for hv in values if hv[0] == y]
        if on:
            return CellRef("edge", on[0][1])
        if not below:
            return CellRef("face", bottom_face(dcel))
        vmax = max(below)
        return CellRef("face", self._face_above(vmax[1]))

    def _face_above(self, h: int) -> int:
        """Face above a non-vertical edge."""
        dcel = self.dcel
        he = dcel.half_edges[h]
        a = dcel.vertices[he.origin]
        b = dcel.vertices[dcel.half_edges[he.twin].origin]
        if a[0] < b[0]:
            return he.face
        return dcel.half_edges[he.twin].face

    def _face_below(self, h: int) -> int:
        dcel = self.dcel
        he = dcel.half_edges[h]
        a = dcel.vertices[he.origin]
        b = dcel.vertices[dcel.half_edges[he.twin].origin]
        if a[0] < b[0]:
            return dcel.half_edges[he.twin].face
        return he.face

    def _vertical_hit(self, x: Fraction, y: Fraction) -> CellRef | None:
        for lo, hi, h in self.vertical_edges.get(x, ()):
            if lo < y < hi:
                return CellRef("edge", h)
        return None

    def _edge_or_clipped_face(self, h: int) -> CellRef:
        """A synthetic boundary edge stands in for the face it clipped."""
        he = self.dcel.half_edges[h]
        if not he.synthetic:
            return CellRef("edge", h)
        f1, f2 = self.dcel.edge_faces(h)
        interior = [f for f in (f1, f2) if not self.dcel.faces[f].is_outer]
        return CellRef("face", interior[0])

    def _resolve_synthetic_vertex(self, vid: int, p: Point) -> CellRef:
        """Clip-box artifacts resolve to the real cell they truncated."""
        dcel = self.dcel
        x0, x1, ylo, yhi = dcel.box
        if p[0] == x0:
            # a corner of the real boundary line x = 0: the adjacent 1-cell
            for lo, hi, h in self.vertical_edges.get(x0, ()):
                if (p[1] == ylo and lo == ylo) or (p[1] == yhi and hi == yhi):
                    return CellRef("edge", h)
            raise InvariantError("left boundary corner without a boundary edge")
        for h in dcel.outgoing(vid):
            if dcel.half_edges[h].anchor is not None:
                return CellRef("edge", min(h, dcel.half_edges[h].twin))
        # a right corner of the box: the unbounded cell in that direction
        return CellRef(
            "face", bottom_face(dcel) if p[1] == ylo else topmost_face(dcel)
        )


def _y_on(a: Point, b: Point, x: Fraction) -> Fraction:
    if a[0] == b[0]:
        raise InvariantError("vertical edge in a slab list")
    t = (x - a[0]) / (b[0] - a[0])
    return a[1] + t * (b[1] - a[1])


# ---------------------------------------------------------------------------
# derived search structures


def topmost_face(dcel: Dcel) -> int:
    """The 2-cell whose points dualize to lines right of all template points."""
    x0, x1, ylo, yhi = dcel.box
    top = ((x0, yhi), (x1, yhi))
    for h, he in enumerate(dcel.half_edges):
        a = dcel.vertices[he.origin]
        b = dcel.vertices[dcel.half_edges[he.twin].origin]
        if {a, b} == {top[0], top[1]} or (a[1] == yhi and b[1] == yhi):
            f = he.face
            if not dcel.faces[f].is_outer:
                return f
    raise InvariantError("topmost face not found")


def bottom_face(dcel: Dcel) -> int:
    x0, x1, ylo, yhi = dcel.box
    for h, he in enumerate(dcel.half_edges):
        a = dcel.vertices[he.origin]
        b = dcel.vertices[dcel.half_edges[he.twin].origin]
        if a[1] == ylo and b[1] == ylo:
            f = he.face
            if not dcel.faces[f].is_outer:
                return f
    raise InvariantError("bottom face not found")


@dataclass
class VerticalLookup:
    """Per slope, the topmost line's rightmost 1-cell; binary search by slope."""

    slopes: list[Fraction]
    faces_above: list[int]
    fallback: int  # the bottom unbounded 2-cell

    @classmethod
    def build(cls, dcel: Dcel) -> "VerticalLookup":
        x0, x1, ylo, yhi = dcel.box
        best: dict[Fraction, tuple[Fraction, int]] = {}
        for h, he in enumerate(dcel.half_edges):
            if he.anchor is None or h > he.twin:
                continue
            a = dcel.vertices[he.origin]
            b = dcel.vertices[dcel.half_edges[he.twin].origin]
            if x1 not in (a[0], b[0]):
                continue
            slope, alpha_y = he.anchor.x, he.anchor.y
            # topmost line per slope = smallest anchor y (largest intercept)
            cur = best.get(slope)
            if cur is None or alpha_y < cur[0]:
                lr = h if a[0] < b[0] else he.twin
                he_lr = dcel.half_edges[lr]
                best[slope] = (alpha_y, he_lr.face)
        slopes = sorted(best)
        return cls(slopes, [best[s][1] for s in slopes], bottom_face(dcel))

    def lookup(self, x: Fraction) -> int:
        """2-cell above the rightmost 1-cell of the steepest line with slope <= x."""
        lo, hi = 0, len(self.slopes)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.slopes[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        if lo == 0:
            return self.fallback
        return self.faces_above[lo - 1]


@dataclass
class DualGraphEdge:
    faces: tuple[int, int]
    anchor: Bigrade
    weight: Fraction = Fraction(0)


@dataclass
class DualGraph:
    nodes: list[int]  # interior face ids
    edges: list[DualGraphEdge]

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {f: [] for f in self.nodes}
        for idx, e in enumerate(self.edges):
            a, b = e.faces
            adj[a].append((b, idx))
            adj[b].append((a, idx))
        return adj


def dual_graph(dcel: Dcel) -> DualGraph:
    """One node per interior 2-cell, one edge per shared anchor-line chain."""
    seen: dict[tuple[int, int], Bigrade] = {}
    for h, he in enumerate(dcel.half_edges):
        if he.anchor is None or h > he.twin:
            continue
        f1, f2 = he.face, dcel.half_edges[he.twin].face
        if dcel.faces[f1].is_outer or dcel.faces[f2].is_outer:
            continue
        key = (min(f1, f2), max(f1, f2))
        if key in seen and seen[key] != he.anchor:
            raise InvariantError("two faces share chains on distinct anchor lines")
        seen[key] = he.anchor
    return DualGraph(
        dcel.interior_faces(),
        [DualGraphEdge(k, a) for k, a in sorted(seen.items())],
    )


def face_in_direction(dcel: Dcel, vertex: int, direction: Point) -> int:
    """The face whose wedge at the vertex contains the given direction."""
    hs = dcel.outgoing(vertex)
    hs.sort(key=lambda h: _ccw_sort_key(_h_direction(dcel, h)))
    key = _ccw_sort_key(direction)
    # wedge between consecutive outgoing edges (CCW) belongs to the earlier edge
    best = None
    for h in hs:
        if _ccw_sort_key(_h_direction(dcel, h)) <= key:
            best = h
    if best is None:
        best = hs[-1]  # wraps past +x axis
    return dcel.half_edges[best].face


def _h_direction(dcel: Dcel, h: int) -> Point:
    he = dcel.half_edges[h]
    return _direction_between(
        dcel.vertices[he.origin], dcel.vertices[dcel.half_edges[he.twin].origin]
    )
