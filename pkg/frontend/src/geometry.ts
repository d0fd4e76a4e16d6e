/** Line-handle geometry for the selection window, in data coordinates. */

import { LineQuery } from "./api.js";
import { fromNumber, rat, ratDiv, ratSub } from "./rational.js";

export interface Pt {
  x: number;
  y: number;
}

export interface Window2 {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

/** A selection line held by its two boundary handles; a.x <= b.x. */
export interface Handles {
  a: Pt;
  b: Pt;
}

export function slopeOf(h: Handles): number {
  if (h.b.x === h.a.x) return Infinity;
  return (h.b.y - h.a.y) / (h.b.x - h.a.x);
}

/** Endpoints of y = m x + c (or x = v) clipped to the window boundary. */
export function clipLine(win: Window2, m: number, c: number): Handles {
  if (!isFinite(m)) throw new Error("use vertical handles directly");
  const candidates: Pt[] = [];
  const push = (x: number, y: number) => {
    const eps = 1e-9;
    if (x >= win.x0 - eps && x <= win.x1 + eps && y >= win.y0 - eps && y <= win.y1 + eps)
      candidates.push({ x, y });
  };
  push(win.x0, m * win.x0 + c);
  push(win.x1, m * win.x1 + c);
  if (m !== 0) {
    push((win.y0 - c) / m, win.y0);
    push((win.y1 - c) / m, win.y1);
  }
  candidates.sort((p, q) => p.x - q.x || p.y - q.y);
  if (candidates.length < 2) {
    // the line misses the window; park it on the nearest horizontal edge
    const y = Math.min(Math.max(c, win.y0), win.y1);
    return { a: { x: win.x0, y }, b: { x: win.x1, y } };
  }
  return { a: candidates[0], b: candidates[candidates.length - 1] };
}

/** A window intersection collapsed to a corner point. */
export function degenerate(h: Handles): boolean {
  return Math.hypot(h.b.x - h.a.x, h.b.y - h.a.y) < 1e-9;
}

/** Mid-line drag: translate perpendicular to the slope, slope unchanged. */
export function dragLine(win: Window2, h: Handles, dx: number, dy: number): Handles {
  const m = slopeOf(h);
  if (!isFinite(m)) {
    const x = clamp(h.a.x + dx, win.x0, win.x1);
    return { a: { x, y: win.y0 }, b: { x, y: win.y1 } };
  }
  // perpendicular component of the drag vector
  const len2 = 1 + m * m;
  const perp = (-m * dx + dy) / len2;
  const c = h.a.y - m * h.a.x + perp * len2;
  const moved = clipLine(win, m, c);
  return degenerate(moved) ? h : moved; // pin the gesture at a corner touch
}

/** Endpoint drag: move one handle, keep the other fixed, slope >= 0. */
export function dragEndpoint(
  win: Window2,
  h: Handles,
  which: "a" | "b",
  to: Pt,
): Handles {
  const fixed = which === "a" ? h.b : h.a;
  const moved: Pt = {
    x: clamp(to.x, win.x0, win.x1),
    y: clamp(to.y, win.y0, win.y1),
  };
  if (moved.x === fixed.x) {
    return { a: { x: moved.x, y: win.y0 }, b: { x: moved.x, y: win.y1 } };
  }
  const negative =
    moved.x < fixed.x ? fixed.y < moved.y : moved.y < fixed.y;
  if (negative) {
    moved.y = fixed.y; // clamp the gesture at slope zero
  }
  const lo = moved.x < fixed.x ? moved : fixed;
  const hi = moved.x < fixed.x ? fixed : moved;
  const m = slopeOf({ a: lo, b: hi });
  return clipLine(win, m, lo.y - m * lo.x);
}

export function toQuery(h: Handles): LineQuery {
  // derive everything from rational endpoint snaps so repeated queries for
  // the same handles serialize identically
  const ax = fromNumber(h.a.x);
  const ay = fromNumber(h.a.y);
  const bx = fromNumber(h.b.x);
  const by = fromNumber(h.b.y);
  const run = ratSub(bx, ax);
  if (run.n === 0) return { kind: "vertical", x: ax };
  const slope = ratDiv(ratSub(by, ay), run);
  const intercept = ratSub(ay, rat(slope.n * ax.n, slope.d * ax.d));
  return { kind: "finite", slope, intercept };
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(Math.max(v, lo), hi);
}
