import { describe, expect, it } from "vitest";

import {
  barcodeMultiplicity,
  diagramMultiplicity,
} from "../src/api.js";
import { clipLine } from "../src/geometry.js";
import { buildDiagramScene, buildLineWindowScene } from "../src/scene.js";
import { BARCODES, BETTI } from "./helpers.js";

const WIN = { x0: 0, x1: 1, y0: 0, y1: 1 };

describe("line window scene", () => {
  it("draws one bar per interval of the latest response", () => {
    for (const resp of Object.values(BARCODES)) {
      const scene = buildLineWindowScene(BETTI, clipLine(WIN, 1, 0), resp, false);
      expect(scene.bars.length).toBe(barcodeMultiplicity(resp));
    }
  });

  it("shades exactly the grid boxes with positive dimension", () => {
    const scene = buildLineWindowScene(BETTI, clipLine(WIN, 1, 0), null, false);
    const positive = BETTI.dims.flat().filter((d) => d > 0).length;
    expect(scene.cells.length).toBe(positive);
    for (const cell of scene.cells) {
      expect(cell.level).toBeGreaterThan(0);
      expect(cell.level).toBeLessThanOrEqual(1);
    }
  });

  it("plots area-scaled dots for all three Betti tables", () => {
    const scene = buildLineWindowScene(BETTI, clipLine(WIN, 1, 0), null, false);
    const expected = BETTI.xi0.length + BETTI.xi1.length + BETTI.xi2.length;
    expect(scene.dots.length).toBe(expected);
    const greens = scene.dots.filter((d) => d.color === "green");
    expect(greens.length).toBe(BETTI.xi0.length);
    // area proportional to value: radius grows like sqrt(value)
    const unit = greens[0].radius / Math.sqrt(greens[0].value);
    for (const d of scene.dots) {
      expect(d.radius / Math.sqrt(d.value)).toBeCloseTo(unit, 10);
    }
  });

  it("normalization toggle yields the unit-square window", () => {
    const scene = buildLineWindowScene(BETTI, clipLine(WIN, 1, 0), null, true);
    expect(scene.window).toEqual({ x0: 0, x1: 1, y0: 0, y1: 1 });
  });

  it("essential bars run to the window edge", () => {
    const resp = BARCODES["finite|1|0||false"];
    const scene = buildLineWindowScene(BETTI, clipLine(WIN, 1, 0), resp, false);
    for (const bar of scene.bars.filter((b) => b.essential)) {
      expect(bar.to.x).toBe(scene.window.x1);
    }
  });
});

describe("diagram scene", () => {
  it("totals match the API response for every fixture", () => {
    for (const resp of Object.values(BARCODES)) {
      const scene = buildDiagramScene(resp.diagram);
      expect(scene.totalMultiplicity).toBe(diagramMultiplicity(resp.diagram));
      expect(scene.totalMultiplicity).toBe(barcodeMultiplicity(resp));
    }
  });

  it("strip dots carry no beta coordinate", () => {
    for (const resp of Object.values(BARCODES)) {
      const scene = buildDiagramScene(resp.diagram);
      for (const dot of scene.dots) {
        if (dot.strip === "none") expect(dot.beta).not.toBeNull();
        else expect(dot.beta).toBeNull();
      }
    }
  });

  it("overflow counters come straight from the response", () => {
    const resp = BARCODES["finite|1|0||false"];
    const scene = buildDiagramScene(resp.diagram);
    expect(scene.overflowEssential).toBe(resp.diagram.overflow_essential);
    expect(scene.overflowFinite).toBe(resp.diagram.overflow_finite);
  });
});
