/** SurfaceGrid heatmap: one SVG rect per cell, yellow peaks on blue bases,
 * hover tooltip (native <title>) showing (T, H, S). Values come straight
 * from the API grid; nothing is recomputed here. */

import { escapeHtml, surfaceColor } from "./format.js";
import type { SurfaceGrid } from "./types.js";

export interface HeatmapOptions {
  width?: number;
  height?: number;
}

export function renderHeatmap(grid: SurfaceGrid, options: HeatmapOptions = {}): string {
  const width = options.width ?? 480;
  const height = options.height ?? 360;
  const rows = grid.t_axis.length;
  const cols = grid.h_axis.length;
  if (rows === 0 || cols === 0) return `<svg class="heatmap" viewBox="0 0 ${width} ${height}"></svg>`;

  const cellW = width / cols;
  const cellH = height / rows;
  const maxValue = Math.max(...grid.values.map((row) => Math.max(...row)));

  const cells: string[] = [];
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const value = grid.values[i][j];
      const fill = surfaceColor(value, maxValue);
      const tooltip = escapeHtml(
        `T=${grid.t_axis[i].toFixed(1)} degC, H=${grid.h_axis[j].toFixed(1)} %, S=${value.toFixed(2)}`,
      );
      // temperature increases upward, like a conventional T/H chart
      const x = j * cellW;
      const y = height - (i + 1) * cellH;
      cells.push(
        `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${cellW.toFixed(2)}" height="${cellH.toFixed(2)}"` +
          ` fill="${fill}" data-t="${grid.t_axis[i]}" data-h="${grid.h_axis[j]}" data-s="${value}">` +
          `<title>${tooltip}</title></rect>`,
      );
    }
  }
  return `<svg class="heatmap" viewBox="0 0 ${width} ${height}" role="img" aria-label="salubrity surface">${cells.join("")}</svg>`;
}
