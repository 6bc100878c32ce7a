/** Color assignments: categorical palette for cell types, cohort hues, and
 * the diverging heatmap colormap.
 *
 * The type palette is the qualitative 12-class Set3 scheme with its blue and
 * orange entries removed so cell types never collide with the cohort colors.
 * Types sharing a palette slot are told apart by saturation offsets.
 */

export const COHORT_A_COLOR = "#4e79a7"; // blue
export const COHORT_B_COLOR = "#f28e2b"; // orange
export const OVERLAP_GRAY = "#c8c8c8";
export const FADE_GRAY = "#dcdcdc";

// 12-class Set3 minus the blue (#80b1d3) and orange (#fdb462) entries
export const TYPE_PALETTE = [
  "#8dd3c7",
  "#ffffb3",
  "#bebada",
  "#fb8072",
  "#b3de69",
  "#fccde5",
  "#d9d9d9",
  "#bc80bd",
  "#ccebc5",
  "#ffed6f",
] as const;

export function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

export function rgbToHex(r: number, g: number, b: number): string {
  const c = (x: number) => Math.round(Math.max(0, Math.min(255, x))).toString(16).padStart(2, "0");
  return `#${c(r)}${c(g)}${c(b)}`;
}

function rgbToHsl(r: number, g: number, b: number): [number, number, number] {
  r /= 255;
  g /= 255;
  b /= 255;
  const max = Math.max(r, g, b);
  const min = Math.min(r, g, b);
  const l = (max + min) / 2;
  if (max === min) return [0, 0, l];
  const d = max - min;
  const s = l > 0.5 ? d / (2 - max - min) : d / (max + min);
  let h: number;
  if (max === r) h = (g - b) / d + (g < b ? 6 : 0);
  else if (max === g) h = (b - r) / d + 2;
  else h = (r - g) / d + 4;
  return [h / 6, s, l];
}

function hslToRgb(h: number, s: number, l: number): [number, number, number] {
  if (s === 0) {
    const v = l * 255;
    return [v, v, v];
  }
  const hue = (p: number, q: number, t: number) => {
    if (t < 0) t += 1;
    if (t > 1) t -= 1;
    if (t < 1 / 6) return p + (q - p) * 6 * t;
    if (t < 1 / 2) return q;
    if (t < 2 / 3) return p + (q - p) * (2 / 3 - t) * 6;
    return p;
  };
  const q = l < 0.5 ? l * (1 + s) : l + s - l * s;
  const p = 2 * l - q;
  return [hue(p, q, h + 1 / 3) * 255, hue(p, q, h) * 255, hue(p, q, h - 1 / 3) * 255];
}

/** Saturation-offset variant of a palette hue for its k-th reuse. */
export function adjustSaturation(hex: string, reuse: number): string {
  if (reuse === 0) return hex;
  const [r, g, b] = hexToRgb(hex);
  const [h, s, l] = rgbToHsl(r, g, b);
  const factor = Math.pow(0.55, reuse);
  return rgbToHex(...hslToRgb(h, Math.min(1, s * factor + (reuse % 2) * 0.08), l));
}

/** Stable type -> color map: palette slots cycle in catalog order unless
 * manually reassigned; repeated slots get saturation offsets. */
export function typeColors(
  labels: string[],
  assignments: Map<string, number>,
): Map<string, string> {
  const colors = new Map<string, string>();
  const used = new Map<number, number>();
  labels.forEach((label, i) => {
    const slot = assignments.get(label) ?? i % TYPE_PALETTE.length;
    const reuse = used.get(slot) ?? 0;
    used.set(slot, reuse + 1);
    colors.set(label, adjustSaturation(TYPE_PALETTE[slot], reuse));
  });
  return colors;
}

function mix(from: string, to: string, t: number): string {
  const [r1, g1, b1] = hexToRgb(from);
  const [r2, g2, b2] = hexToRgb(to);
  return rgbToHex(r1 + (r2 - r1) * t, g1 + (g2 - g1) * t, b1 + (b2 - b1) * t);
}

/** Diverging colormap anchored at +-maxAbs: positive toward the cohort A
 * blue, negative toward the cohort B orange, neutral light gray at zero. */
export function divergingColor(value: number, maxAbs: number): string {
  if (maxAbs <= 0 || value === 0) return OVERLAP_GRAY;
  const t = Math.max(-1, Math.min(1, value / maxAbs));
  return t > 0 ? mix(OVERLAP_GRAY, COHORT_A_COLOR, t) : mix(OVERLAP_GRAY, COHORT_B_COLOR, -t);
}
