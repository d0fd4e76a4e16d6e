/** Typed client for the slice-query service. */

import { Rat, parseRat, ratToString } from "./rational.js";

export interface ModuleInfo {
  id: string;
  bounds: { lower: [string, string]; upper: [string, string] } | null;
  kappa: number;
  cell_count: number;
}

export interface BettiResponse {
  grid: { xs: string[]; ys: string[] };
  xi0: [number, number, number][];
  xi1: [number, number, number][];
  xi2: [number, number, number][];
  dims: number[][];
  bounds: ModuleInfo["bounds"];
}

export interface BarcodeEntry {
  birth: [string, string];
  death: [string, string] | null;
  multiplicity: number;
}

export interface DiagramDoc {
  window_bound: string;
  in_window: { alpha: number; beta: number; multiplicity: number }[];
  inf_strip: { alpha: number; multiplicity: number }[];
  ltinf_strip: { alpha: number; beta: number; multiplicity: number }[];
  overflow_essential: number;
  overflow_finite: number;
}

export interface BarcodeResponse {
  barcode: BarcodeEntry[];
  diagram: DiagramDoc;
}

export type LineQuery =
  | { kind: "finite"; slope: Rat; intercept: Rat }
  | { kind: "vertical"; x: Rat };

export function barcodeUrl(moduleId: string, line: LineQuery, normalized: boolean): string {
  const base = `/modules/${moduleId}/barcode`;
  const tail = normalized ? "&normalized=true" : "";
  if (line.kind === "vertical") {
    return `${base}?kind=vertical&x=${encodeURIComponent(ratToString(line.x))}${tail}`;
  }
  return (
    `${base}?kind=finite&slope=${encodeURIComponent(ratToString(line.slope))}` +
    `&intercept=${encodeURIComponent(ratToString(line.intercept))}${tail}`
  );
}

export type Fetcher = (url: string) => Promise<unknown>;

export class ApiClient {
  constructor(private readonly fetcher: Fetcher) {}

  async betti(moduleId: string): Promise<BettiResponse> {
    return (await this.fetcher(`/modules/${moduleId}/betti`)) as BettiResponse;
  }

  async barcode(
    moduleId: string,
    line: LineQuery,
    normalized = false,
  ): Promise<BarcodeResponse> {
    return (await this.fetcher(barcodeUrl(moduleId, line, normalized))) as BarcodeResponse;
  }
}

export function gradeToPoint(g: [string, string]): { x: number; y: number } {
  const px = parseRat(g[0]);
  const py = parseRat(g[1]);
  return { x: px.n / px.d, y: py.n / py.d };
}

export function barcodeMultiplicity(resp: BarcodeResponse): number {
  return resp.barcode.reduce((acc, e) => acc + e.multiplicity, 0);
}

export function diagramMultiplicity(d: DiagramDoc): number {
  const sum = (xs: { multiplicity: number }[]) =>
    xs.reduce((acc, e) => acc + e.multiplicity, 0);
  return (
    sum(d.in_window) +
    sum(d.inf_strip) +
    sum(d.ltinf_strip) +
    d.overflow_essential +
    d.overflow_finite
  );
}
