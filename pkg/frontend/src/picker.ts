// Click-to-pick on the admissibility plot: snap to the nearest contour
// vertex, or reject clicks that have no admissible counterpart at all.

import type { Contour } from "./api";

export interface Snap {
  ok: true;
  s0: number;
  tau: number;
  polyline: number;
  vertex: number;
  /** normalized distance from the click to the snapped vertex */
  distance: number;
}

export interface Rejection {
  ok: false;
  reason: string;
}

export type PickResult = Snap | Rejection;

function fmt(v: number): string {
  return Number(v.toPrecision(3)).toString();
}

/**
 * Snap a click in data coordinates to the contour.
 *
 * Distances are measured after normalizing each axis by the plotted window
 * span, so a click "near" the curve means near on screen regardless of the
 * axes' very different scales. Clicks beyond the feasible range of either
 * coordinate are rejected with an explanation instead of being dragged to
 * the closest curve end.
 */
export function snapToContour(contour: Contour, s0: number, tau: number): PickResult {
  const polys = contour.polylines;
  if (polys.length === 0 || polys.every((p) => p.length === 0)) {
    return { ok: false, reason: "no admissible region in this window" };
  }
  let tauTop = -Infinity;
  let s0Top = -Infinity;
  for (const poly of polys) {
    for (const [x, y] of poly) {
      if (y > tauTop) tauTop = y;
      if (x > s0Top) s0Top = x;
    }
  }
  const r = contour.rectangle;
  const spanS0 = r.s0_max - r.s0_min || 1;
  const spanTau = r.tau_max - r.tau_min || 1;
  // 2% of the window span: forgives grid discretization, not real misses
  const slack = 0.02;
  if (tau > tauTop + slack * spanTau) {
    return {
      ok: false,
      reason:
        `no admissible point at delay ${fmt(tau)}: ` +
        `the largest admissible delay here is about ${fmt(tauTop)}`,
    };
  }
  if (s0 > s0Top + slack * spanS0) {
    return {
      ok: false,
      reason:
        `no admissible point with root ${fmt(s0)}: ` +
        `the rightmost admissible root here is about ${fmt(s0Top)}`,
    };
  }
  let best: Snap | null = null;
  polys.forEach((poly, pi) => {
    poly.forEach(([x, y], vi) => {
      const d = Math.hypot((x - s0) / spanS0, (y - tau) / spanTau);
      if (best === null || d < best.distance) {
        best = { ok: true, s0: x, tau: y, polyline: pi, vertex: vi, distance: d };
      }
    });
  });
  return best!;
}
