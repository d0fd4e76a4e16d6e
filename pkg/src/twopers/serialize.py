"""Versioned on-disk format for augmented arrangements.

Everything rational is serialized as a "p/q" string; loading reproduces the
structure bit-exactly and rebuilds the derived search structures.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .arrangement import Dcel, Face, HalfEdge, Locator, VerticalLookup
from .betti import BettiTable, DimGrid
from .errors import InputError
from .grades import Bigrade, Grid2
from .templates import AugmentedArrangement, BarcodeTemplate, WalkStats

FORMAT_VERSION = 1


def _rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _unrat(s: str) -> Fraction:
    try:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {s!r} in augmented-arrangement file") from exc


def _point(p) -> list[str]:
    return [_rat(p[0]), _rat(p[1])]


def _unpoint(v) -> tuple[Fraction, Fraction]:
    return (_unrat(v[0]), _unrat(v[1]))


def _grade(g: Bigrade) -> list[str]:
    return [_rat(g.x), _rat(g.y)]


def _ungrade(v) -> Bigrade:
    return Bigrade(_unrat(v[0]), _unrat(v[1]))


def save(aug: AugmentedArrangement) -> bytes:
    """Serialize to canonical JSON bytes."""
    dcel = aug.dcel
    doc = {
        "format": "twopers-augmented-arrangement",
        "version": FORMAT_VERSION,
        "bounds": None
        if aug.bounds is None
        else {"lower": _grade(aug.bounds[0]), "upper": _grade(aug.bounds[1])},
        "x_shift": _rat(aug.x_shift),
        "kappa": aug.kappa,
        "m1": aug.m1,
        "anchors": [_grade(a) for a in aug.anchors],
        "betti": {
            "grid": {
                "xs": [_rat(x) for x in aug.betti.grid.xs],
                "ys": [_rat(y) for y in aug.betti.grid.ys],
            },
            "xi0": [[i, j, v] for (i, j), v in sorted(aug.betti.xi0.items())],
            "xi1": [[i, j, v] for (i, j), v in sorted(aug.betti.xi1.items())],
            "xi2": [[i, j, v] for (i, j), v in sorted(aug.betti.xi2.items())],
        },
        "dims": aug.dims.dims,
        "dcel": {
            "box": [_rat(v) for v in dcel.box],
            "vertices": [_point(p) for p in dcel.vertices],
            "vertex_synthetic": dcel.vertex_synthetic,
            "half_edges": [
                {
                    "origin": he.origin,
                    "twin": he.twin,
                    "next": he.next,
                    "prev": he.prev,
                    "face": he.face,
                    "anchor": None if he.anchor is None else _grade(he.anchor),
                    "synthetic": he.synthetic,
                    "boundary": he.boundary,
                }
                for he in dcel.half_edges
            ],
            "faces": [
                {"edge": f.edge, "is_outer": f.is_outer} for f in dcel.faces
            ],
        },
        "templates": {
            str(face): [
                [_grade(b), None if d is None else _grade(d), m]
                for b, d, m in t.entries
            ]
            for face, t in sorted(aug.templates.items())
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def _section(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"augmented-arrangement file is missing section {key!r}")
    return doc[key]


def load(data: bytes) -> AugmentedArrangement:
    """Parse, rebuild derived structures, and return the arrangement."""
    try:
        doc = json.loads(data.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"corrupt augmented-arrangement file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "twopers-augmented-arrangement":
        raise InputError("not an augmented-arrangement file")
    if doc.get("version") != FORMAT_VERSION:
        raise InputError(
            f"unsupported format version {doc.get('version')!r}; expected {FORMAT_VERSION}"
        )
    try:
        d = _section(doc, "dcel")
        dcel = Dcel(
            [_unpoint(p) for p in _section(d, "vertices")],
            [
                HalfEdge(
                    origin=he["origin"],
                    twin=he["twin"],
                    next=he["next"],
                    prev=he["prev"],
                    face=he["face"],
                    anchor=None if he["anchor"] is None else _ungrade(he["anchor"]),
                    synthetic=he["synthetic"],
                    boundary=he["boundary"],
                )
                for he in _section(d, "half_edges")
            ],
            [Face(f["edge"], f["is_outer"]) for f in _section(d, "faces")],
            tuple(_unrat(v) for v in _section(d, "box")),
            list(_section(d, "vertex_synthetic")),
        )
        dcel.check()
        b = _section(doc, "betti")
        grid = Grid2(
            tuple(_unrat(x) for x in b["grid"]["xs"]),
            tuple(_unrat(y) for y in b["grid"]["ys"]),
        )
        betti = BettiTable(
            grid,
            {(i, j): v for i, j, v in b["xi0"]},
            {(i, j): v for i, j, v in b["xi1"]},
            {(i, j): v for i, j, v in b["xi2"]},
        )
        dims = DimGrid(grid, _section(doc, "dims"))
        bounds_doc = _section(doc, "bounds")
        bounds = (
            None
            if bounds_doc is None
            else (_ungrade(bounds_doc["lower"]), _ungrade(bounds_doc["upper"]))
        )
        templates = {
            int(face): BarcodeTemplate(
                tuple(
                    (_ungrade(b_), None if d_ is None else _ungrade(d_), m)
                    for b_, d_, m in entries
                )
            )
            for face, entries in _section(doc, "templates").items()
        }
        aug = AugmentedArrangement(
            dcel,
            Locator.build(dcel),
            VerticalLookup.build(dcel),
            templates,
            betti,
            dims,
            bounds,
            _unrat(_section(doc, "x_shift")),
            tuple(_ungrade(a) for a in _section(doc, "anchors")),
            int(_section(doc, "kappa")),
            int(_section(doc, "m1")),
            WalkStats(),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"corrupt augmented-arrangement section: {exc}") from exc
    for face in aug.dcel.interior_faces():
        if face not in aug.templates:
            raise InputError("corrupt augmented-arrangement: template section incomplete")
    return aug
