/** Superposed two-cohort raincloud: density clouds above one tick per sample.
 *
 * The clouds composite with three fixed colors: cohort A blue, cohort B
 * orange, and a light-gray layer covering the pointwise minimum of the two
 * densities, so any overlapping region reads as neutral gray. Fences from
 * the outlier report are drawn as dashed rules and flagged samples carry a
 * marker on their tick.
 */

import { COHORT_A_COLOR, COHORT_B_COLOR, OVERLAP_GRAY } from "./colors.js";
import { areaPath, linearScale, sampleCurve, svgEl } from "./svg.js";
import type { CohortOutliersWire, DistributionWire } from "./types.js";

export interface RaincloudOptions {
  width?: number;
  height?: number;
  fadedCohort?: "A" | "B" | null;
  selectedSamples?: Set<string>;
  onTickClick?: (sampleId: string) => void;
  showFences?: boolean;
}

const FADED_OPACITY = "0.18";

export function renderRaincloud(
  dist: DistributionWire,
  options: RaincloudOptions = {},
): SVGSVGElement {
  const width = options.width ?? 320;
  const height = options.height ?? 110;
  const cloudHeight = Math.round(height * 0.62);
  const tickTop = cloudHeight + 4;
  const tickHeight = height - tickTop - 6;
  const faded = options.fadedCohort ?? null;
  const selected = options.selectedSamples ?? new Set<string>();

  const svg = svgEl("svg", {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: "raincloud",
  });

  const curves = dist.curves ?? null;
  const values = [...dist.values.a, ...dist.values.b].map((v) => v.value);
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (curves) {
    lo = Math.min(lo, curves.a.grid[0], curves.b.grid[0]);
    hi = Math.max(hi, curves.a.grid[curves.a.grid.length - 1], curves.b.grid[curves.b.grid.length - 1]);
  }
  if (!isFinite(lo) || !isFinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const x = linearScale([lo, hi], [6, width - 6]);

  if (curves) {
    const peak = Math.max(...curves.a.density, ...curves.b.density, 1e-12);
    const y = linearScale([0, peak], [cloudHeight, 4]);
    const grid = mergedGrid(curves.a.grid, curves.b.grid);
    const densA = grid.map((g) => sampleCurve(curves.a.grid, curves.a.density, g));
    const densB = grid.map((g) => sampleCurve(curves.b.grid, curves.b.density, g));
    const overlap = grid.map((_, i) => Math.min(densA[i], densB[i]));
    const px = grid.map((g) => x(g));

    const cloudA = svgEl("path", {
      class: "cloud cloud-a",
      d: areaPath(px, densA.map(y), cloudHeight),
      fill: COHORT_A_COLOR,
    });
    const cloudB = svgEl("path", {
      class: "cloud cloud-b",
      d: areaPath(px, densB.map(y), cloudHeight),
      fill: COHORT_B_COLOR,
    });
    const cloudOverlap = svgEl("path", {
      class: "cloud cloud-overlap",
      d: areaPath(px, overlap.map(y), cloudHeight),
      fill: OVERLAP_GRAY,
    });
    cloudOverlap.dataset.supportMin = String(grid[0]);
    cloudOverlap.dataset.supportMax = String(grid[grid.length - 1]);
    if (faded === "A") cloudA.setAttribute("opacity", FADED_OPACITY);
    if (faded === "B") cloudB.setAttribute("opacity", FADED_OPACITY);
    svg.append(cloudA, cloudB, cloudOverlap);
  }

  const flags = new Map<string, string>();
  for (const side of [dist.outliers?.a, dist.outliers?.b]) {
    for (const entry of side?.entries ?? []) {
      if (entry.flag !== "none") flags.set(entry.sample, entry.flag);
    }
  }

  if (options.showFences !== false && dist.outliers) {
    drawFences(svg, dist.outliers.a, "a", x, tickTop, tickHeight);
    drawFences(svg, dist.outliers.b, "b", x, tickTop, tickHeight);
  }

  for (const [cohort, side, color] of [
    ["a", dist.values.a, COHORT_A_COLOR],
    ["b", dist.values.b, COHORT_B_COLOR],
  ] as const) {
    const group = svgEl("g", { class: `ticks ticks-${cohort}` });
    if ((faded === "A" && cohort === "a") || (faded === "B" && cohort === "b")) {
      group.setAttribute("opacity", FADED_OPACITY);
    }
    for (const { sample, value } of side) {
      const isSelected = selected.has(sample);
      const tick = svgEl("line", {
        class: `tick tick-${cohort}${isSelected ? " selected" : ""}`,
        x1: x(value),
        x2: x(value),
        y1: isSelected ? tickTop - 3 : tickTop,
        y2: tickTop + tickHeight,
        stroke: color,
        "stroke-width": isSelected ? 3 : 1.4,
      });
      tick.dataset.sample = sample;
      tick.dataset.value = String(value);
      const flag = flags.get(sample);
      if (flag) {
        tick.classList.add(`outlier-${flag}`);
        const marker = svgEl("circle", {
          class: `outlier-marker outlier-${flag}`,
          cx: x(value),
          cy: tickTop - 4,
          r: 2.6,
          fill: color,
          stroke: "#444",
          "stroke-width": 0.7,
        });
        marker.dataset.sample = sample;
        group.append(marker);
      }
      if (options.onTickClick) {
        tick.addEventListener("click", () => options.onTickClick?.(sample));
        tick.style.cursor = "pointer";
      }
      group.append(tick);
    }
    svg.append(group);
  }
  return svg;
}

function drawFences(
  svg: SVGSVGElement,
  outliers: CohortOutliersWire,
  cohort: "a" | "b",
  x: (v: number) => number,
  top: number,
  height: number,
): void {
  const color = cohort === "a" ? COHORT_A_COLOR : COHORT_B_COLOR;
  for (const [kind, value] of [
    ["low", outliers.fences.low],
    ["high", outliers.fences.high],
  ] as const) {
    const pos = x(value);
    const fence = svgEl("line", {
      class: `fence fence-${cohort} fence-${kind}`,
      x1: pos,
      x2: pos,
      y1: top,
      y2: top + height,
      stroke: color,
      "stroke-dasharray": "2,2",
      "stroke-width": 0.8,
      opacity: 0.7,
    });
    svg.append(fence);
  }
}

function mergedGrid(a: number[], b: number[]): number[] {
  const merged = [...new Set([...a, ...b])].sort((p, q) => p - q);
  return merged;
}
