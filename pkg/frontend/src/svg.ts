/** Tiny SVG + scale helpers; all views render through these. */

const SVG_NS = "http://www.w3.org/2000/svg";

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export interface LinearScale {
  (value: number): number;
  invert(position: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  scale.invert = (position: number) => d0 + ((position - r0) / (r1 - r0 || 1)) * span;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Closed area path between a polyline and a horizontal baseline. */
export function areaPath(xs: number[], ys: number[], baseline: number): string {
  if (xs.length === 0) return "";
  const parts = [`M${xs[0]},${baseline}`];
  for (let i = 0; i < xs.length; i++) parts.push(`L${xs[i]},${ys[i]}`);
  parts.push(`L${xs[xs.length - 1]},${baseline}`, "Z");
  return parts.join(" ");
}

/** Linear interpolation of a sampled curve at x (0 outside the support). */
export function sampleCurve(grid: number[], values: number[], x: number): number {
  const n = grid.length;
  if (n === 0 || x < grid[0] || x > grid[n - 1]) return 0;
  let lo = 0;
  let hi = n - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (grid[mid] <= x) lo = mid;
    else hi = mid;
  }
  const t = (x - grid[lo]) / (grid[hi] - grid[lo] || 1);
  return values[lo] + t * (values[hi] - values[lo]);
}
