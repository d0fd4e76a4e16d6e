"""HTTP query API over a store of computed augmented arrangements."""
from __future__ import annotations

import hashlib
import threading
from fractions import Fraction

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .errors import InputError
from .grades import Bigrade, parse_rational
from .model import FIRep, coarsen, firep_from_bifiltration, parse_input, uniform_grid
from .query import Barcode, LineSpec, PersistenceDiagram, diagram
from .templates import AugmentedArrangement, compute_augmented_arrangement

DEFAULT_COLUMN_LIMIT = 2_000_000


def _rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _grade(g: Bigrade) -> list[str]:
    return [_rat(g.x), _rat(g.y)]


class SessionStore:
    """Immutable published arrangements, keyed by content-derived ids."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entries: dict[str, AugmentedArrangement] = {}

    def publish(self, key: str, aug: AugmentedArrangement) -> None:
        with self._lock:
            self._entries.setdefault(key, aug)

    def get(self, key: str) -> AugmentedArrangement | None:
        with self._lock:
            return self._entries.get(key)


def _bounds_doc(aug: AugmentedArrangement):
    if aug.bounds is None:
        return None
    return {"lower": _grade(aug.bounds[0]), "upper": _grade(aug.bounds[1])}


def _barcode_doc(barcode: Barcode):
    return [
        {
            "birth": _grade(b),
            "death": None if d is None else _grade(d),
            "multiplicity": m,
        }
        for b, d, m in barcode.entries
    ]


def _diagram_doc(d: PersistenceDiagram):
    return {
        "window_bound": _rat(d.window_bound),
        "in_window": [
            {"alpha": a.value, "beta": b.value, "multiplicity": m}
            for a, b, m in d.in_window
        ],
        "inf_strip": [{"alpha": a.value, "multiplicity": m} for a, m in d.inf_strip],
        "ltinf_strip": [
            {"alpha": a.value, "beta": b.value, "multiplicity": m}
            for a, b, m in d.ltinf_strip
        ],
        "overflow_essential": d.overflow_essential,
        "overflow_finite": d.overflow_finite,
    }


def build_firep(text: str, degree: int, xbins: int | None, ybins: int | None) -> FIRep:
    """Parse either input format and produce the (optionally coarsened) FI-rep."""
    parsed = parse_input(text)
    if isinstance(parsed, FIRep):
        rep = parsed
    else:
        rep = firep_from_bifiltration(parsed, degree)
    if xbins or ybins:
        bounds = rep.bounds()
        if bounds is not None:
            from .grades import Grid2, unique_sorted

            grades = rep.all_grades()
            full = uniform_grid(bounds, xbins or 2, ybins or 2)
            xs = full.xs if xbins else unique_sorted(g.x for g in grades)
            ys = full.ys if ybins else unique_sorted(g.y for g in grades)
            rep = coarsen(rep, Grid2(xs, ys))
    return rep


def create_app(
    store: SessionStore | None = None,
    column_limit: int = DEFAULT_COLUMN_LIMIT,
) -> FastAPI:
    app = FastAPI(title="twopers", docs_url=None, redoc_url=None)
    sessions = store or SessionStore()
    app.state.store = sessions

    @app.exception_handler(InputError)
    async def _input_error(_req: Request, exc: InputError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/modules", status_code=201)
    async def post_module(
        request: Request,
        degree: int = Query(0, ge=0),
        xbins: int | None = Query(None, ge=1),
        ybins: int | None = Query(None, ge=1),
    ):
        body = (await request.body()).decode("utf-8", errors="replace")
        rep = build_firep(body, degree, xbins, ybins)
        if rep.m0 + rep.m1 + rep.m2 > column_limit:
            raise InputError(
                f"input exceeds the synchronous column limit ({column_limit})"
            )
        key = hashlib.sha256(
            f"{degree}|{xbins}|{ybins}|{body}".encode()
        ).hexdigest()[:16]
        if sessions.get(key) is None:
            aug = compute_augmented_arrangement(rep)
            sessions.publish(key, aug)
        aug = sessions.get(key)
        return {
            "id": key,
            "bounds": _bounds_doc(aug),
            "kappa": aug.kappa,
            "cell_count": aug.cell_count,
        }

    def _get_aug(module_id: str) -> AugmentedArrangement | None:
        return sessions.get(module_id)

    @app.get("/modules/{module_id}/betti")
    async def get_betti(module_id: str):
        aug = _get_aug(module_id)
        if aug is None:
            return JSONResponse(status_code=404, content={"detail": "unknown module id"})
        betti = aug.betti  # the Betti grid lives in data coordinates
        return {
            "grid": {
                "xs": [_rat(x) for x in betti.grid.xs],
                "ys": [_rat(y) for y in betti.grid.ys],
            },
            "xi0": [[i, j, v] for (i, j), v in sorted(betti.xi0.items())],
            "xi1": [[i, j, v] for (i, j), v in sorted(betti.xi1.items())],
            "xi2": [[i, j, v] for (i, j), v in sorted(betti.xi2.items())],
            "dims": aug.dims.dims,
            "bounds": _bounds_doc(aug),
        }

    @app.get("/modules/{module_id}/barcode")
    async def get_barcode(
        module_id: str,
        kind: str = Query("finite"),
        slope: str | None = None,
        intercept: str | None = None,
        x: str | None = None,
        normalized: bool = False,
    ):
        aug = _get_aug(module_id)
        if aug is None:
            return JSONResponse(status_code=404, content={"detail": "unknown module id"})
        try:
            if kind == "finite":
                if slope is None or intercept is None:
                    raise InputError("finite lines need slope and intercept")
                line = LineSpec.finite(parse_rational(slope), parse_rational(intercept))
            elif kind == "vertical":
                if x is None:
                    raise InputError("vertical lines need x")
                line = LineSpec.from_vertical(parse_rational(x))
            else:
                raise InputError(f"unknown line kind {kind!r}")
        except InputError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        barcode, pd = diagram(aug, line, normalized=normalized)
        return {"barcode": _barcode_doc(barcode), "diagram": _diagram_doc(pd)}

    @app.get("/modules/{module_id}/arrangement")
    async def get_arrangement(module_id: str):
        aug = _get_aug(module_id)
        if aug is None:
            return JSONResponse(status_code=404, content={"detail": "unknown module id"})
        dcel = aug.dcel
        return {
            "x_shift": _rat(aug.x_shift),
            "anchors": [_grade(a) for a in aug.anchors],
            "box": [_rat(v) for v in dcel.box],
            "vertices": [[_rat(p[0]), _rat(p[1])] for p in dcel.vertices],
            "faces": [
                {
                    "id": f,
                    "vertices": dcel.face_vertices(f),
                    "template_size": aug.template_at(f).total_multiplicity,
                }
                for f in dcel.interior_faces()
            ],
        }

    return app


def mount_frontend(app: FastAPI, directory: str) -> None:
    """Serve the built browser UI, when a dist directory is available."""
    from fastapi.staticfiles import StaticFiles

    app.mount("/", StaticFiles(directory=directory, html=True), name="ui")
