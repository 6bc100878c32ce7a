/** Two-panel tissue view, one panel per cohort. Samples render as vector
 * geometry (outline polygons when available, centroid discs otherwise);
 * types are color-coded from the categorical palette. With an active
 * highlight subject, non-matching cells fade to light gray. Each sample
 * supports wheel zoom and drag panning of its own viewport.
 */

import { FADE_GRAY } from "./colors.js";
import { svgEl } from "./svg.js";
import type { GeometryResponse } from "./types.js";

export interface TissuePanelOptions {
  colors: Map<string, string>;
  hasSubject: boolean;
  cohortLabels: { A: string; B: string };
  size?: number;
}

export function renderTissueView(
  geometries: GeometryResponse[],
  options: TissuePanelOptions,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "tissue-view";
  for (const cohort of ["A", "B"] as const) {
    const panel = document.createElement("div");
    panel.className = `tissue-panel tissue-panel-${cohort.toLowerCase()}`;
    panel.dataset.cohort = cohort;
    const title = document.createElement("h4");
    title.className = `cohort-title cohort-${cohort.toLowerCase()}`;
    title.textContent = options.cohortLabels[cohort];
    panel.append(title);
    for (const geometry of geometries.filter((g) => g.cohort === cohort)) {
      panel.append(renderSample(geometry, options));
    }
    root.append(panel);
  }
  return root;
}

function renderSample(geometry: GeometryResponse, options: TissuePanelOptions): HTMLElement {
  const card = document.createElement("div");
  card.className = "tissue-sample";
  card.dataset.sample = geometry.sample;
  const caption = document.createElement("div");
  caption.className = "tissue-caption";
  caption.textContent = geometry.sample;
  card.append(caption);

  const xs = geometry.cells.map((c) => c.x);
  const ys = geometry.cells.map((c) => c.y);
  const pad = 6;
  const minX = Math.min(...xs) - pad;
  const minY = Math.min(...ys) - pad;
  const spanX = Math.max(...xs) + pad - minX;
  const spanY = Math.max(...ys) + pad - minY;
  const size = options.size ?? 240;
  const svg = svgEl("svg", {
    width: size,
    height: size,
    viewBox: `${minX} ${minY} ${spanX} ${spanY}`,
    class: "tissue-svg",
    preserveAspectRatio: "xMidYMid meet",
  });

  const cellRadius = Math.max(spanX, spanY) / 90;
  for (const cell of geometry.cells) {
    const color = options.hasSubject && !cell.highlighted
      ? FADE_GRAY
      : options.colors.get(cell.type) ?? FADE_GRAY;
    let shape: SVGElement;
    if (cell.outline && cell.outline.length >= 3) {
      shape = svgEl("polygon", {
        points: cell.outline.map(([px, py]) => `${px},${py}`).join(" "),
        fill: color,
      });
    } else {
      shape = svgEl("circle", { cx: cell.x, cy: cell.y, r: cellRadius, fill: color });
    }
    shape.classList.add("tissue-cell");
    shape.dataset.cellId = cell.cell_id;
    shape.dataset.type = cell.type;
    shape.dataset.highlighted = String(cell.highlighted);
    svg.append(shape);
  }
  attachZoomPan(svg, { minX, minY, spanX, spanY });
  card.append(svg);
  return card;
}

interface Box {
  minX: number;
  minY: number;
  spanX: number;
  spanY: number;
}

function attachZoomPan(svg: SVGSVGElement, initial: Box): void {
  let view = { ...initial };
  const apply = () =>
    svg.setAttribute("viewBox", `${view.minX} ${view.minY} ${view.spanX} ${view.spanY}`);

  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = event.deltaY < 0 ? 0.8 : 1.25;
    const fx = event.offsetX / (svg.clientWidth || 1);
    const fy = event.offsetY / (svg.clientHeight || 1);
    const cx = view.minX + view.spanX * fx;
    const cy = view.minY + view.spanY * fy;
    view = {
      minX: cx - (cx - view.minX) * factor,
      minY: cy - (cy - view.minY) * factor,
      spanX: view.spanX * factor,
      spanY: view.spanY * factor,
    };
    apply();
  });

  let panFrom: { x: number; y: number } | null = null;
  svg.addEventListener("mousedown", (event) => {
    panFrom = { x: event.clientX, y: event.clientY };
  });
  svg.addEventListener("mousemove", (event) => {
    if (!panFrom) return;
    const scale = view.spanX / (svg.clientWidth || 1);
    view.minX -= (event.clientX - panFrom.x) * scale;
    view.minY -= (event.clientY - panFrom.y) * scale;
    panFrom = { x: event.clientX, y: event.clientY };
    apply();
  });
  for (const kind of ["mouseup", "mouseleave"]) {
    svg.addEventListener(kind, () => {
      panFrom = null;
    });
  }
}
