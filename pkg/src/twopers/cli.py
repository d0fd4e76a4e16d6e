"""Command line front end: compute, query, betti, serve."""
from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from .errors import InputError, InvariantError
from .grades import parse_rational
from .query import LineSpec, diagram
from .serialize import load, save
from .service import SessionStore, build_firep, create_app
from .templates import AugmentedArrangement, compute_augmented_arrangement


def _rat(x: Fraction, flip: bool = False) -> str:
    return str(-x if flip else x)


def _fmt_point(g, flip_x: bool) -> str:
    return f"({_rat(g.x, flip_x)}, {_rat(g.y)})"


def _load_aug(path: str) -> AugmentedArrangement:
    data = Path(path).read_bytes()
    if data.lstrip().startswith(b"{"):
        return load(data)
    rep = build_firep(data.decode(), 0, None, None)
    return compute_augmented_arrangement(rep)


@click.group()
def cli() -> None:
    """Two-parameter persistence: augmented arrangements and slice queries."""


@cli.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("-d", "--degree", type=int, default=0, show_default=True)
@click.option("--xbins", type=int, default=None, help="coarsen the x axis to N values")
@click.option("--ybins", type=int, default=None, help="coarsen the y axis to N values")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def compute(source, degree, xbins, ybins, output) -> None:
    """Compute the augmented arrangement of an input module and save it."""
    rep = build_firep(Path(source).read_text(), degree, xbins, ybins)
    aug = compute_augmented_arrangement(rep)
    Path(output).write_bytes(save(aug))
    click.echo(
        f"wrote {output}: kappa={aug.kappa}, cells={aug.cell_count}, "
        f"anchors={len(aug.anchors)}"
    )


@cli.command()
@click.argument("aug_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--slope", default=None, help="slope of a finite query line")
@click.option("--intercept", default=None, help="intercept of a finite query line")
@click.option("--vertical", default=None, help="x-value of a vertical query line")
@click.option("--normalized", is_flag=True, default=False)
@click.option("--flip-x", is_flag=True, default=False, help="negate x on display")
@click.option("--json", "as_json", is_flag=True, default=False)
def query(aug_path, slope, intercept, vertical, normalized, flip_x, as_json) -> None:
    """Barcode of one affine slice of a computed arrangement."""
    aug = _load_aug(aug_path)
    if vertical is not None:
        if slope is not None or intercept is not None:
            raise InputError("give either --vertical or --slope/--intercept")
        line = LineSpec.from_vertical(parse_rational(vertical))
    else:
        if slope is None or intercept is None:
            raise InputError("finite lines need both --slope and --intercept")
        line = LineSpec.finite(parse_rational(slope), parse_rational(intercept))
    barcode, pd = diagram(aug, line, normalized=normalized)
    if as_json:
        from .service import _barcode_doc, _diagram_doc

        click.echo(
            json.dumps(
                {"barcode": _barcode_doc(barcode), "diagram": _diagram_doc(pd)},
                sort_keys=True,
            )
        )
        return
    if not barcode.entries:
        click.echo("empty barcode")
        return
    for birth, death, mult in barcode.entries:
        d = "inf" if death is None else _fmt_point(death, flip_x)
        click.echo(f"[{_fmt_point(birth, flip_x)}, {d})  x{mult}")
    click.echo(
        f"diagram: {len(pd.in_window)} in window, {len(pd.inf_strip)} inf, "
        f"{len(pd.ltinf_strip)} <inf, overflow {pd.overflow_essential}+{pd.overflow_finite}"
    )


@cli.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("-d", "--degree", type=int, default=0, show_default=True)
@click.option("--flip-x", is_flag=True, default=False)
@click.option("--json", "as_json", is_flag=True, default=False)
def betti(source, degree, flip_x, as_json) -> None:
    """Bigraded Betti numbers and the dimension function of an input module."""
    from .betti import betti_numbers

    rep = build_firep(Path(source).read_text(), degree, None, None)
    table, dims = betti_numbers(rep)
    table.check_hilbert(dims)
    if as_json:
        doc = {
            "grid": {
                "xs": [str(x) for x in table.grid.xs],
                "ys": [str(y) for y in table.grid.ys],
            },
            "xi0": [[i, j, v] for (i, j), v in sorted(table.xi0.items())],
            "xi1": [[i, j, v] for (i, j), v in sorted(table.xi1.items())],
            "xi2": [[i, j, v] for (i, j), v in sorted(table.xi2.items())],
            "dims": dims.dims,
        }
        click.echo(json.dumps(doc, sort_keys=True))
        return
    for name, tab in (("xi0", table.xi0), ("xi1", table.xi1), ("xi2", table.xi2)):
        if not tab:
            click.echo(f"{name}: 0")
            continue
        cells = ", ".join(
            f"{_fmt_point(table.grid.value(i, j), flip_x)}:{v}"
            for (i, j), v in sorted(tab.items())
        )
        click.echo(f"{name}: {cells}")


@cli.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--port", type=int, default=None)
@click.option("-d", "--degree", type=int, default=0, show_default=True)
@click.option("--static", "static_dir", type=click.Path(file_okay=False), default=None)
def serve(source, port, degree, static_dir) -> None:
    """Serve the HTTP API (and the browser UI) for one precomputed module."""
    import uvicorn

    store = SessionStore()
    data = Path(source).read_bytes()
    if data.lstrip().startswith(b"{"):
        aug = load(data)
    else:
        aug = compute_augmented_arrangement(build_firep(data.decode(), degree, None, None))
    store.publish("default", aug)
    app = create_app(store)
    if static_dir:
        from .service import mount_frontend

        mount_frontend(app, static_dir)
    port = port or int(os.environ.get("PORT", "8765"))
    click.echo(f"module published as id 'default'; listening on :{port}")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except (click.ClickException, InputError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except InvariantError as exc:
        click.echo(f"internal invariant violation: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
