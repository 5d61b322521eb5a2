// Canvas plotting: viewport math is pure (and unit-tested); the draw*
// functions only transform service data to pixels — no numerics happen here.

import type { Contour, RootSet, Trajectory } from "./api";
import { markerFor, rampColor } from "./colors";

export interface Viewport {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  width: number;
  height: number;
}

export function dataToPx(v: Viewport, x: number, y: number): [number, number] {
  const px = ((x - v.xMin) / (v.xMax - v.xMin)) * v.width;
  const py = v.height - ((y - v.yMin) / (v.yMax - v.yMin)) * v.height;
  return [px, py];
}

export function pxToData(v: Viewport, px: number, py: number): [number, number] {
  const x = v.xMin + (px / v.width) * (v.xMax - v.xMin);
  const y = v.yMin + ((v.height - py) / v.height) * (v.yMax - v.yMin);
  return [x, y];
}

/** Axis-aligned bounds of a point cloud, padded; degenerate spans widened. */
export function autoFit(
  points: Iterable<[number, number]>,
  width: number,
  height: number,
  padFrac = 0.08,
): Viewport {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of points) {
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  if (xMin > xMax) {
    xMin = -1;
    xMax = 1;
    yMin = -1;
    yMax = 1;
  }
  let padX = (xMax - xMin) * padFrac;
  let padY = (yMax - yMin) * padFrac;
  if (padX === 0) padX = Math.max(1, Math.abs(xMin)) * 0.1;
  if (padY === 0) padY = Math.max(1, Math.abs(yMin)) * 0.1;
  return {
    xMin: xMin - padX,
    xMax: xMax + padX,
    yMin: yMin - padY,
    yMax: yMax + padY,
    width,
    height,
  };
}

// ---------------------------------------------------------------------------
// Drawing
// ---------------------------------------------------------------------------

const AXIS_COLOR = "#888";
const GRID_COLOR = "#e4e4e4";

function niceTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const raw = span / target;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= target) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const ticks = [];
  for (let t = first; t <= hi + step * 1e-9; t += step) ticks.push(t);
  return ticks;
}

export function drawAxes(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  xLabel: string,
  yLabel: string,
): void {
  ctx.clearRect(0, 0, v.width, v.height);
  ctx.save();
  ctx.strokeStyle = GRID_COLOR;
  ctx.fillStyle = AXIS_COLOR;
  ctx.font = "11px system-ui, sans-serif";
  ctx.lineWidth = 1;
  for (const t of niceTicks(v.xMin, v.xMax)) {
    const [px] = dataToPx(v, t, 0);
    ctx.beginPath();
    ctx.moveTo(px, 0);
    ctx.lineTo(px, v.height);
    ctx.stroke();
    ctx.fillText(Number(t.toPrecision(6)).toString(), px + 3, v.height - 4);
  }
  for (const t of niceTicks(v.yMin, v.yMax)) {
    const [, py] = dataToPx(v, 0, t);
    ctx.beginPath();
    ctx.moveTo(0, py);
    ctx.lineTo(v.width, py);
    ctx.stroke();
    ctx.fillText(Number(t.toPrecision(6)).toString(), 4, py - 3);
  }
  // zero lines, slightly stronger
  ctx.strokeStyle = AXIS_COLOR;
  if (v.xMin < 0 && v.xMax > 0) {
    const [px] = dataToPx(v, 0, 0);
    ctx.beginPath();
    ctx.moveTo(px, 0);
    ctx.lineTo(px, v.height);
    ctx.stroke();
  }
  if (v.yMin < 0 && v.yMax > 0) {
    const [, py] = dataToPx(v, 0, 0);
    ctx.beginPath();
    ctx.moveTo(0, py);
    ctx.lineTo(v.width, py);
    ctx.stroke();
  }
  ctx.fillText(xLabel, v.width - ctx.measureText(xLabel).width - 6, v.height - 18);
  ctx.fillText(yLabel, 6, 14);
  ctx.restore();
}

export function drawContour(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  contour: Contour,
  highlight?: { s0: number; tau: number } | null,
): void {
  ctx.save();
  ctx.strokeStyle = "#1558b0";
  ctx.lineWidth = 1.8;
  for (const poly of contour.polylines) {
    if (poly.length < 2) continue;
    ctx.beginPath();
    poly.forEach(([x, y], i) => {
      const [px, py] = dataToPx(v, x, y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }
  if (highlight) {
    const [px, py] = dataToPx(v, highlight.s0, highlight.tau);
    ctx.fillStyle = "#d03020";
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.restore();
}

function drawMarker(
  ctx: CanvasRenderingContext2D,
  px: number,
  py: number,
  shape: "diamond" | "circle",
  color: string,
  size: number,
): void {
  ctx.fillStyle = color;
  ctx.beginPath();
  if (shape === "diamond") {
    ctx.moveTo(px, py - size);
    ctx.lineTo(px + size, py);
    ctx.lineTo(px, py + size);
    ctx.lineTo(px - size, py);
    ctx.closePath();
  } else {
    ctx.arc(px, py, size * 0.7, 0, 2 * Math.PI);
  }
  ctx.fill();
}

/** Spectrum scatter; when a sweep is shown, nominal diamonds go on top. */
export function drawSpectra(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  layers: { k: number; K: number; rs: RootSet }[],
): void {
  const ordered = [...layers].sort((a, b) => Math.abs(b.k) - Math.abs(a.k));
  ctx.save();
  for (const { k, K, rs } of ordered) {
    const color = k === 0 ? "#000000" : rampColor(k, Math.max(K, 1));
    for (const [re, im] of rs.roots) {
      const [px, py] = dataToPx(v, re, im);
      drawMarker(ctx, px, py, markerFor(k), color, k === 0 ? 5 : 3.2);
    }
  }
  ctx.restore();
}

/** Trajectory line; the history segment t <= 0 is drawn distinctly. */
export function drawTrajectory(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  traj: Trajectory,
): void {
  ctx.save();
  const segment = (from: number, to: number, style: string, dash: number[]) => {
    ctx.strokeStyle = style;
    ctx.setLineDash(dash);
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    let started = false;
    for (let i = from; i < to; i++) {
      const [px, py] = dataToPx(v, traj.t[i], traj.y[i]);
      if (!started) {
        ctx.moveTo(px, py);
        started = true;
      } else ctx.lineTo(px, py);
    }
    ctx.stroke();
  };
  let firstPositive = traj.t.findIndex((t) => t > 0);
  if (firstPositive < 0) firstPositive = traj.t.length;
  segment(0, Math.min(firstPositive + 1, traj.t.length), "#777777", [5, 4]);
  segment(Math.max(firstPositive - 1, 0), traj.t.length, "#1558b0", []);
  ctx.restore();
}

/** Root rows nearest to a pixel, for hover readouts. */
export function hitTestRoots(
  v: Viewport,
  rs: RootSet,
  px: number,
  py: number,
  radiusPx = 6,
): number | null {
  let best: number | null = null;
  let bestD = radiusPx;
  rs.roots.forEach(([re, im], i) => {
    const [qx, qy] = dataToPx(v, re, im);
    const d = Math.hypot(qx - px, qy - py);
    if (d <= bestD) {
      best = i;
      bestD = d;
    }
  });
  return best;
}
