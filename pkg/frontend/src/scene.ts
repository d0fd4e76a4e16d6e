/** Pure scene builders: response JSON in, drawable primitives out.
 *
 * Keeping these free of canvas state means the display invariants (one bar
 * per interval, diagram totals matching the line window) are plain data
 * assertions.
 */

import {
  BarcodeResponse,
  BettiResponse,
  DiagramDoc,
  gradeToPoint,
} from "./api.js";
import { Handles, Pt, Window2, slopeOf } from "./geometry.js";
import { parseRat, toNumber } from "./rational.js";

export interface ShadedCell {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
  level: number; // 0..1 grey intensity, proportional to dim
  dim: number;
}

export interface BettiDot {
  x: number;
  y: number;
  radius: number; // area proportional to the function value
  color: "green" | "red" | "yellow";
  value: number;
}

export interface Bar {
  from: Pt;
  to: Pt;
  essential: boolean;
  offset: number; // perpendicular offset index (1-based)
}

export interface LineWindowScene {
  window: Window2;
  cells: ShadedCell[];
  dots: BettiDot[];
  line: Handles;
  bars: Bar[];
}

const DOT_BASE_RADIUS = 0.018; // fraction of the window diagonal, area-scaled

export function buildLineWindowScene(
  betti: BettiResponse,
  line: Handles,
  barcode: BarcodeResponse | null,
  normalized: boolean,
): LineWindowScene {
  const xs = betti.grid.xs.map((s) => toNumber(parseRat(s)));
  const ys = betti.grid.ys.map((s) => toNumber(parseRat(s)));
  const bounds = betti.bounds;
  let win: Window2;
  if (bounds) {
    const lo = gradeToPoint(bounds.lower);
    const hi = gradeToPoint(bounds.upper);
    win = { x0: lo.x, x1: hi.x, y0: lo.y, y1: hi.y };
  } else {
    win = { x0: 0, x1: 1, y0: 0, y1: 1 };
  }
  if (win.x1 === win.x0) win.x1 = win.x0 + 1;
  if (win.y1 === win.y0) win.y1 = win.y0 + 1;
  const tx = normalized
    ? (x: number) => (x - win.x0) / (win.x1 - win.x0)
    : (x: number) => x;
  const ty = normalized
    ? (y: number) => (y - win.y0) / (win.y1 - win.y0)
    : (y: number) => y;
  const view: Window2 = normalized
    ? { x0: 0, x1: 1, y0: 0, y1: 1 }
    : win;

  const maxDim = Math.max(1, ...betti.dims.flat());
  const cells: ShadedCell[] = [];
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < ys.length; j++) {
      const dim = betti.dims[i][j];
      if (dim === 0) continue;
      cells.push({
        x0: tx(xs[i]),
        x1: tx(i + 1 < xs.length ? xs[i + 1] : win.x1),
        y0: ty(ys[j]),
        y1: ty(j + 1 < ys.length ? ys[j + 1] : win.y1),
        level: dim / maxDim,
        dim,
      });
    }
  }

  const diag = Math.hypot(view.x1 - view.x0, view.y1 - view.y0);
  const dots: BettiDot[] = [];
  const addDots = (
    table: [number, number, number][],
    color: BettiDot["color"],
  ) => {
    for (const [i, j, v] of table) {
      dots.push({
        x: tx(xs[i - 1]),
        y: ty(ys[j - 1]),
        radius: DOT_BASE_RADIUS * diag * Math.sqrt(v),
        color,
        value: v,
      });
    }
  };
  addDots(betti.xi0, "green");
  addDots(betti.xi1, "red");
  addDots(betti.xi2, "yellow");

  const bars: Bar[] = [];
  if (barcode) {
    const mView = slopeOf(line); // handles live in view coordinates
    let offset = 0;
    for (const entry of barcode.barcode) {
      const from = gradeToPoint(entry.birth);
      const fromV: Pt = { x: tx(from.x), y: ty(from.y) };
      for (let k = 0; k < entry.multiplicity; k++) {
        offset += 1;
        let toV: Pt;
        const essential = entry.death === null;
        if (entry.death === null) {
          // unbounded interval: draw to the window edge along the line
          toV = isFinite(mView)
            ? { x: view.x1, y: fromV.y + mView * (view.x1 - fromV.x) }
            : { x: fromV.x, y: view.y1 };
        } else {
          const d = gradeToPoint(entry.death);
          toV = { x: tx(d.x), y: ty(d.y) };
        }
        bars.push({ from: fromV, to: toV, essential, offset });
      }
    }
  }
  return { window: view, cells, dots, line, bars };
}

export interface DiagramDot {
  alpha: number;
  beta: number | null; // null marks a strip dot
  radius: number;
  strip: "none" | "inf" | "ltinf";
  multiplicity: number;
}

export interface DiagramScene {
  bound: number;
  dots: DiagramDot[];
  overflowEssential: number;
  overflowFinite: number;
  totalMultiplicity: number;
}

export function buildDiagramScene(d: DiagramDoc): DiagramScene {
  const bound = toNumber(parseRat(d.window_bound));
  const dots: DiagramDot[] = [];
  const r = (m: number) => 0.012 * bound * Math.sqrt(m);
  for (const e of d.in_window) {
    dots.push({
      alpha: e.alpha,
      beta: e.beta,
      radius: r(e.multiplicity),
      strip: "none",
      multiplicity: e.multiplicity,
    });
  }
  for (const e of d.inf_strip) {
    dots.push({
      alpha: e.alpha,
      beta: null,
      radius: r(e.multiplicity),
      strip: "inf",
      multiplicity: e.multiplicity,
    });
  }
  for (const e of d.ltinf_strip) {
    dots.push({
      alpha: e.alpha,
      beta: null,
      radius: r(e.multiplicity),
      strip: "ltinf",
      multiplicity: e.multiplicity,
    });
  }
  const total =
    dots.reduce((acc, dot) => acc + dot.multiplicity, 0) +
    d.overflow_essential +
    d.overflow_finite;
  return {
    bound,
    dots,
    overflowEssential: d.overflow_essential,
    overflowFinite: d.overflow_finite,
    totalMultiplicity: total,
  };
}
