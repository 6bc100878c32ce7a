/** Rendering fidelity against recorded responses: the overlap treatment for
 * identical cohorts, the neutral heatmap for the zero matrix, and the small
 * pure helpers behind them. */

import { describe, expect, it } from "vitest";

import { LatestSlot } from "../src/api.js";
import {
  COHORT_A_COLOR,
  COHORT_B_COLOR,
  OVERLAP_GRAY,
  adjustSaturation,
  divergingColor,
  typeColors,
} from "../src/colors.js";
import { renderHeatmap } from "../src/heatmap.js";
import { applyExtension } from "../src/querybuilder.js";
import { renderRaincloud } from "../src/raincloud.js";
import { searchOrder } from "../src/search.js";
import type { DistributionResponse, HeatmapResponse } from "../src/types.js";
import { findGet, loadFixture } from "./helpers.js";

const twin = loadFixture("twin");

describe("raincloud overlap treatment", () => {
  it("identical cohorts render light-gray across the full support", () => {
    const dist = findGet(twin, "/distributions").response as DistributionResponse;
    // identical cohorts: the recorded curves agree exactly
    expect(dist.curves!.a.density).toEqual(dist.curves!.b.density)
    const svg = renderRaincloud(dist);
    const overlap = svg.querySelector<SVGPathElement>(".cloud-overlap")!;
    const cloudA = svg.querySelector<SVGPathElement>(".cloud-a")!;
    const cloudB = svg.querySelector<SVGPathElement>(".cloud-b")!;
    // the gray overlap layer covers both clouds completely
    expect(overlap.getAttribute("d")).toBe(cloudA.getAttribute("d"));
    expect(overlap.getAttribute("d")).toBe(cloudB.getAttribute("d"));
    expect(overlap.getAttribute("fill")).toBe(OVERLAP_GRAY);
    expect(Number(overlap.dataset.supportMin)).toBe(dist.curves!.a.grid[0]);
    expect(Number(overlap.dataset.supportMax)).toBe(
      dist.curves!.a.grid[dist.curves!.a.grid.length - 1],
    );
  });

  it("draws one tick per sample and the fences from the report", () => {
    const dist = findGet(twin, "/distributions").response as DistributionResponse;
    const svg = renderRaincloud(dist);
    const ticks = svg.querySelectorAll(".tick");
    expect(ticks.length).toBe(dist.values.a.length + dist.values.b.length);
    expect(svg.querySelectorAll(".fence").length).toBe(4);
  });

  it("marks flagged outlier ticks", () => {
    const demo = loadFixture("demo");
    const flagged = demo
      .map((e) => e.response as DistributionResponse)
      .find(
        (r) =>
          r.outliers &&
          [...r.outliers.a.entries, ...r.outliers.b.entries].some((x) => x.flag !== "none"),
      )!;
    const svg = renderRaincloud(flagged);
    expect(svg.querySelectorAll(".outlier-marker").length).toBeGreaterThan(0);
  });
});

describe("heatmap rendering", () => {
  it("zero matrix renders uniformly light-gray", () => {
    const heatmap = findGet(twin, "/heatmap").response as HeatmapResponse;
    expect(heatmap.max_abs).toBe(0);
    const svg = renderHeatmap(heatmap);
    const cells = [...svg.querySelectorAll<SVGRectElement>(".heatmap-cell")];
    expect(cells.length).toBe(heatmap.labels.length ** 2);
    for (const cell of cells) {
      expect(cell.getAttribute("fill")).toBe(OVERLAP_GRAY);
    }
  });

  it("anchors the diverging colormap at +-max|value|", () => {
    expect(divergingColor(0, 1)).toBe(OVERLAP_GRAY);
    expect(divergingColor(1, 1)).toBe(COHORT_A_COLOR);
    expect(divergingColor(-1, 1)).toBe(COHORT_B_COLOR);
    expect(divergingColor(2, 1)).toBe(COHORT_A_COLOR); // clamped
    expect(divergingColor(0.5, 1)).not.toBe(OVERLAP_GRAY);
  });
});

describe("interaction helpers", () => {
  it("search brings substring matches to the top, keeping order halves", () => {
    const labels = ["B-cell", "Tumor-prolif", "t-cell", "TUMOR-dorm"];
    expect(searchOrder(labels, "tumor")).toEqual([
      "Tumor-prolif",
      "TUMOR-dorm",
      "B-cell",
      "t-cell",
    ]);
    expect(searchOrder(labels, "")).toEqual(labels);
    expect(searchOrder(labels, "zzz")).toEqual(labels);
  });

  it("applies refinements: None sets exclusivity, labels extend the env", () => {
    const base = { center: ["A"], env: ["B"], exclusive: false };
    expect(applyExtension(base, null)).toEqual({ ...base, exclusive: true });
    expect(applyExtension(base, "C")).toEqual({ ...base, env: ["B", "C"] });
    expect(applyExtension(base, "B")).toEqual(base); // already present
  });

  it("palette reuses hues with saturation offsets and stays stable", () => {
    const labels = Array.from({ length: 12 }, (_, i) => `t${i}`);
    const colors = typeColors(labels, new Map());
    // 11th and 12th types reuse slots 0 and 1 with adjusted saturation
    expect(colors.get("t10")).not.toBe(colors.get("t0"));
    expect(colors.get("t11")).not.toBe(colors.get("t1"));
    expect(adjustSaturation("#8dd3c7", 1)).not.toBe("#8dd3c7");
    const again = typeColors(labels, new Map());
    expect([...again.entries()]).toEqual([...colors.entries()]);
  });

  it("discards stale responses, applying only the latest", async () => {
    const slot = new LatestSlot<number>();
    const applied: number[] = [];
    let releaseFirst: (() => void) | null = null;
    const first = slot.run(
      () => new Promise<number>((resolve) => {
        releaseFirst = () => resolve(1);
      }),
      (v) => applied.push(v),
    );
    const second = slot.run(() => Promise.resolve(2), (v) => applied.push(v));
    await second;
    releaseFirst!();
    await first;
    expect(applied).toEqual([2]);
  });
});
