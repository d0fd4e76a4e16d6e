/** View state and the drag-to-query loop.
 *
 * One in-flight barcode request per view; requests are debounced and each
 * carries a token so responses that arrive after a newer one are discarded.
 */

import {
  ApiClient,
  BarcodeResponse,
  BettiResponse,
  LineQuery,
  barcodeMultiplicity,
} from "./api.js";
import { Debouncer } from "./debounce.js";
import {
  Handles,
  Pt,
  Window2,
  dragEndpoint,
  dragLine,
  toQuery,
} from "./geometry.js";
import { gradeToPoint } from "./api.js";

export type DragTarget = "a" | "b" | "mid" | null;

export interface ViewState {
  moduleId: string;
  window: Window2;
  handles: Handles;
  normalized: boolean;
  hoverGrade: Pt | null;
  lastBarcode: BarcodeResponse | null;
  lastLine: LineQuery | null;
  error: string | null;
}

const HANDLE_GRAB = 0.05; // fraction of the window diagonal

export class ViewController {
  readonly state: ViewState;
  private readonly debouncer: Debouncer;
  private token = 0;
  private shownToken = 0;
  private dragging: DragTarget = null;
  private listeners: (() => void)[] = [];

  constructor(
    private readonly api: ApiClient,
    moduleId: string,
    betti: BettiResponse,
    debounceMs = 30,
  ) {
    let win: Window2 = { x0: 0, x1: 1, y0: 0, y1: 1 };
    if (betti.bounds) {
      const lo = gradeToPoint(betti.bounds.lower);
      const hi = gradeToPoint(betti.bounds.upper);
      win = {
        x0: lo.x,
        x1: hi.x > lo.x ? hi.x : lo.x + 1,
        y0: lo.y,
        y1: hi.y > lo.y ? hi.y : lo.y + 1,
      };
    }
    this.state = {
      moduleId,
      window: win,
      handles: { a: { x: win.x0, y: win.y0 }, b: { x: win.x1, y: win.y1 } },
      normalized: false,
      hoverGrade: null,
      lastBarcode: null,
      lastLine: null,
      error: null,
    };
    this.debouncer = new Debouncer(debounceMs);
  }

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private viewWindow(): Window2 {
    return this.state.normalized
      ? { x0: 0, x1: 1, y0: 0, y1: 1 }
      : this.state.window;
  }

  setNormalized(on: boolean): void {
    if (on === this.state.normalized) return;
    this.state.normalized = on;
    const w = this.viewWindow();
    this.state.handles = { a: { x: w.x0, y: w.y0 }, b: { x: w.x1, y: w.y1 } };
    this.requestBarcode();
  }

  pointerDown(p: Pt): void {
    const { a, b } = this.state.handles;
    const w = this.viewWindow();
    const grab = HANDLE_GRAB * Math.hypot(w.x1 - w.x0, w.y1 - w.y0);
    if (Math.hypot(p.x - a.x, p.y - a.y) <= grab) this.dragging = "a";
    else if (Math.hypot(p.x - b.x, p.y - b.y) <= grab) this.dragging = "b";
    else this.dragging = "mid";
    this.lastPointer = p;
  }

  private lastPointer: Pt | null = null;

  pointerMove(p: Pt): void {
    this.state.hoverGrade = p;
    if (this.dragging === null) {
      this.emit();
      return;
    }
    const w = this.viewWindow();
    if (this.dragging === "mid") {
      const prev = this.lastPointer ?? p;
      this.state.handles = dragLine(
        w,
        this.state.handles,
        p.x - prev.x,
        p.y - prev.y,
      );
    } else {
      this.state.handles = dragEndpoint(w, this.state.handles, this.dragging, p);
    }
    this.lastPointer = p;
    this.requestBarcode();
  }

  pointerUp(): void {
    this.dragging = null;
    this.lastPointer = null;
  }

  /** Debounced, token-guarded barcode request for the current line. */
  requestBarcode(): void {
    const line = toQuery(this.state.handles);
    this.state.lastLine = line;
    this.emit();
    this.debouncer.run(() => {
      const token = ++this.token;
      this.api
        .barcode(this.state.moduleId, line, this.state.normalized)
        .then((resp) => {
          if (token < this.shownToken) return; // stale: a newer answer landed
          this.shownToken = token;
          this.state.lastBarcode = resp;
          this.state.error = null;
          this.emit();
        })
        .catch((err) => {
          if (token < this.shownToken) return;
          this.state.error = String(err); // banner; keep the last good barcode
          this.emit();
        });
    });
  }

  displayedBarCount(): number {
    return this.state.lastBarcode ? barcodeMultiplicity(this.state.lastBarcode) : 0;
  }
}
