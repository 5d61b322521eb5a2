// Sensitivity color convention: perturbed spectra for k < 0 in shades of
// blue (darkest at -K, lightening toward the nominal), k > 0 from orange at
// +1 deepening to red at +K, and the nominal k = 0 set as black diamonds.

export const NOMINAL_COLOR = "#000000";

export type MarkerShape = "diamond" | "circle";

export function markerFor(k: number): MarkerShape {
  return k === 0 ? "diamond" : "circle";
}

/** CSS color for the band at offset k of a sweep with half-width K. */
export function rampColor(k: number, K: number): string {
  if (!Number.isInteger(k) || !Number.isInteger(K) || K < 1 || Math.abs(k) > K) {
    throw new RangeError(`need integers |k| <= K, K >= 1; got k=${k}, K=${K}`);
  }
  if (k === 0) return NOMINAL_COLOR;
  const step = (Math.abs(k) - 1) / Math.max(1, K - 1); // 0 at |k|=1 .. 1 at |k|=K
  if (k < 0) {
    // blue: light at k=-1, dark at k=-K
    const light = 68 - 38 * step;
    return `hsl(217 85% ${Math.round(light)}%)`;
  }
  // orange (k=+1) to dark red (k=+K)
  const hue = 35 - 35 * step;
  const light = 55 - 22 * step;
  return `hsl(${Math.round(hue)} 90% ${Math.round(light)}%)`;
}

/** Parsed back out for tests and for legend swatch labels. */
export function hslParts(color: string): { h: number; s: number; l: number } | null {
  const m = /^hsl\((-?\d+) (\d+)% (\d+)%\)$/.exec(color);
  if (!m) return null;
  return { h: Number(m[1]), s: Number(m[2]), l: Number(m[3]) };
}

/** Legend entries for a sweep, ordered k = -K .. +K. */
export function legend(K: number): { k: number; color: string; marker: MarkerShape }[] {
  const out = [];
  for (let k = -K; k <= K; k++) {
    out.push({ k, color: rampColor(k, K), marker: markerFor(k) });
  }
  return out;
}
