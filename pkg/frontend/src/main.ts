/** Canvas wiring: paints scenes and forwards pointer events. */

import { ApiClient, BettiResponse } from "./api.js";
import { ViewController } from "./controller.js";
import { Pt } from "./geometry.js";
import {
  DiagramScene,
  LineWindowScene,
  buildDiagramScene,
  buildLineWindowScene,
} from "./scene.js";
import { parseRat, toNumber } from "./rational.js";

const COLORS = { green: "0,160,0", red: "200,0,0", yellow: "210,190,0" };

function paintLineWindow(
  canvas: HTMLCanvasElement,
  scene: LineWindowScene,
  dimAt: (p: Pt) => number | null,
): void {
  const ctx = canvas.getContext("2d")!;
  const w = scene.window;
  const sx = (x: number) => ((x - w.x0) / (w.x1 - w.x0)) * canvas.width;
  const sy = (y: number) => canvas.height - ((y - w.y0) / (w.y1 - w.y0)) * canvas.height;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const cell of scene.cells) {
    ctx.fillStyle = `rgba(40,40,40,${0.12 + 0.5 * cell.level})`;
    ctx.fillRect(
      sx(cell.x0),
      sy(cell.y1),
      sx(cell.x1) - sx(cell.x0),
      sy(cell.y0) - sy(cell.y1),
    );
  }
  for (const dot of scene.dots) {
    ctx.fillStyle = `rgba(${COLORS[dot.color]},0.55)`;
    ctx.beginPath();
    const r = (dot.radius / (w.x1 - w.x0)) * canvas.width;
    ctx.arc(sx(dot.x), sy(dot.y), Math.max(3, r), 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.strokeStyle = "rgb(30,80,220)";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(sx(scene.line.a.x), sy(scene.line.a.y));
  ctx.lineTo(sx(scene.line.b.x), sy(scene.line.b.y));
  ctx.stroke();
  for (const h of [scene.line.a, scene.line.b]) {
    ctx.fillStyle = "rgb(30,80,220)";
    ctx.beginPath();
    ctx.arc(sx(h.x), sy(h.y), 5, 0, 2 * Math.PI);
    ctx.fill();
  }
  // purple bars, offset perpendicular to the line
  const dx = scene.line.b.x - scene.line.a.x;
  const dy = scene.line.b.y - scene.line.a.y;
  const len = Math.hypot(dx, dy) || 1;
  const gap = 0.012 * Math.hypot(w.x1 - w.x0, w.y1 - w.y0);
  const px = (-dy / len) * gap;
  const py = (dx / len) * gap;
  ctx.strokeStyle = "rgba(130,0,160,0.9)";
  ctx.lineWidth = 3;
  for (const bar of scene.bars) {
    ctx.beginPath();
    ctx.moveTo(sx(bar.from.x + px * bar.offset), sy(bar.from.y + py * bar.offset));
    ctx.lineTo(sx(bar.to.x + px * bar.offset), sy(bar.to.y + py * bar.offset));
    ctx.stroke();
  }
  const hover = dimAt(scene.line.a); // repainted with the live grade below
  void hover;
}

function paintDiagram(canvas: HTMLCanvasElement, scene: DiagramScene): void {
  const ctx = canvas.getContext("2d")!;
  const strip = 0.18 * canvas.height; // two strips above the square region
  const side = canvas.height - strip;
  const sx = (a: number) => (a / scene.bound) * side;
  const sy = (b: number) => side - (b / scene.bound) * side + strip;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#555";
  ctx.strokeRect(0, strip, side, side);
  ctx.beginPath();
  ctx.moveTo(sx(0), sy(0));
  ctx.lineTo(sx(scene.bound), sy(scene.bound));
  ctx.stroke();
  // strip separators: dashed
  ctx.setLineDash([5, 4]);
  for (const frac of [0.5, 1.0]) {
    ctx.beginPath();
    ctx.moveTo(0, strip * frac);
    ctx.lineTo(side, strip * frac);
    ctx.stroke();
  }
  ctx.beginPath(); // vertical dashed line before the overflow counters
  ctx.moveTo(side, 0);
  ctx.lineTo(side, strip);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText("inf", 4, strip * 0.5 - 4);
  ctx.fillText("< inf", 4, strip - 4);
  ctx.fillText(String(scene.overflowEssential), side + 6, strip * 0.5 - 4);
  ctx.fillText(String(scene.overflowFinite), side + 6, strip - 4);
  for (const dot of scene.dots) {
    ctx.fillStyle = "rgba(130,0,160,0.8)";
    const y =
      dot.strip === "none"
        ? sy(dot.beta as number)
        : dot.strip === "inf"
          ? strip * 0.25
          : strip * 0.75;
    ctx.beginPath();
    ctx.arc(sx(dot.alpha), y, Math.max(3, (dot.radius / scene.bound) * side), 0, 2 * Math.PI);
    ctx.fill();
  }
}

export async function start(moduleId: string): Promise<void> {
  const fetcher = async (url: string) => {
    const resp = await fetch(url);
    if (!resp.ok) throw new Error(`${resp.status}: ${await resp.text()}`);
    return resp.json();
  };
  const api = new ApiClient(fetcher);
  const betti: BettiResponse = await api.betti(moduleId);
  const controller = new ViewController(api, moduleId, betti);

  const lineCanvas = document.getElementById("line-window") as HTMLCanvasElement;
  const diagCanvas = document.getElementById("diagram-window") as HTMLCanvasElement;
  const banner = document.getElementById("banner") as HTMLDivElement;
  const tooltip = document.getElementById("tooltip") as HTMLDivElement;
  const toggle = document.getElementById("normalize") as HTMLInputElement;

  const xs = betti.grid.xs.map((s) => toNumber(parseRat(s)));
  const ys = betti.grid.ys.map((s) => toNumber(parseRat(s)));
  const dimAt = (p: Pt): number | null => {
    let i = -1;
    while (i + 1 < xs.length && xs[i + 1] <= p.x) i++;
    let j = -1;
    while (j + 1 < ys.length && ys[j + 1] <= p.y) j++;
    if (i < 0 || j < 0) return 0;
    return betti.dims[i][j];
  };

  const repaint = () => {
    const scene = buildLineWindowScene(
      betti,
      controller.state.handles,
      controller.state.lastBarcode,
      controller.state.normalized,
    );
    paintLineWindow(lineCanvas, scene, dimAt);
    if (controller.state.lastBarcode) {
      paintDiagram(diagCanvas, buildDiagramScene(controller.state.lastBarcode.diagram));
    }
    banner.style.display = controller.state.error ? "block" : "none";
    banner.textContent = controller.state.error ?? "";
    const hover = controller.state.hoverGrade;
    if (hover && !controller.state.normalized) {
      tooltip.textContent = `dim M(${hover.x.toPrecision(4)}, ${hover.y.toPrecision(4)}) = ${dimAt(hover)}`;
    }
  };
  controller.onChange(repaint);

  const toData = (ev: MouseEvent): Pt => {
    const rect = lineCanvas.getBoundingClientRect();
    const w = controller.state.normalized
      ? { x0: 0, x1: 1, y0: 0, y1: 1 }
      : controller.state.window;
    return {
      x: w.x0 + ((ev.clientX - rect.left) / rect.width) * (w.x1 - w.x0),
      y: w.y0 + (1 - (ev.clientY - rect.top) / rect.height) * (w.y1 - w.y0),
    };
  };
  lineCanvas.addEventListener("mousedown", (ev) => controller.pointerDown(toData(ev)));
  lineCanvas.addEventListener("mousemove", (ev) => controller.pointerMove(toData(ev)));
  window.addEventListener("mouseup", () => controller.pointerUp());
  toggle.addEventListener("change", () => controller.setNormalized(toggle.checked));

  controller.requestBarcode();
}

declare global {
  interface Window {
    twopersStart: typeof start;
  }
}
if (typeof window !== "undefined") {
  window.twopersStart = start;
}
