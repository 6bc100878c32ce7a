/** Pairwise co-localization heatmap: center types on rows, microenvironment
 * types on columns. Cell color diverges from light gray toward the cohort A
 * blue (positive) or cohort B orange (negative), anchored at the matrix's
 * max absolute value. Clicking a cell seeds the detail query (row | column).
 */

import { divergingColor } from "./colors.js";
import { svgEl } from "./svg.js";
import type { HeatmapResponse } from "./types.js";

export interface HeatmapOptions {
  cellSize?: number;
  labelSpace?: number;
  onCellClick?: (rowLabel: string, colLabel: string) => void;
}

export function renderHeatmap(
  data: HeatmapResponse,
  options: HeatmapOptions = {},
): SVGSVGElement {
  const cell = options.cellSize ?? 18;
  const labelSpace = options.labelSpace ?? 86;
  const n = data.labels.length;
  const size = labelSpace + n * cell;
  const svg = svgEl("svg", {
    width: size,
    height: size,
    viewBox: `0 0 ${size} ${size}`,
    class: `heatmap heatmap-${data.variant}`,
  });
  svg.dataset.maxAbs = String(data.max_abs);

  for (let i = 0; i < n; i++) {
    const rowLabel = svgEl("text", {
      x: labelSpace - 4,
      y: labelSpace + i * cell + cell * 0.7,
      "text-anchor": "end",
      class: "heatmap-label heatmap-row-label",
      "font-size": 9,
    });
    rowLabel.textContent = data.labels[i];
    const colLabel = svgEl("text", {
      x: 0,
      y: 0,
      transform: `translate(${labelSpace + i * cell + cell * 0.7}, ${labelSpace - 4}) rotate(-60)`,
      class: "heatmap-label heatmap-col-label",
      "font-size": 9,
    });
    colLabel.textContent = data.labels[i];
    svg.append(rowLabel, colLabel);
  }

  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const value = data.matrix[i][j];
      const rect = svgEl("rect", {
        class: "heatmap-cell",
        x: labelSpace + j * cell,
        y: labelSpace + i * cell,
        width: cell - 1,
        height: cell - 1,
        fill: divergingColor(value, data.max_abs),
      });
      rect.dataset.row = String(i);
      rect.dataset.col = String(j);
      rect.dataset.value = String(value);
      const title = svgEl("title");
      title.textContent = `${data.labels[i]} | ${data.labels[j]}: ${value.toPrecision(4)}`;
      rect.append(title);
      if (options.onCellClick) {
        rect.addEventListener("click", () =>
          options.onCellClick?.(data.labels[i], data.labels[j]),
        );
        rect.style.cursor = "pointer";
      }
      svg.append(rect);
    }
  }
  return svg;
}
