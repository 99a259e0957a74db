/** 3-D surface as a heatmap (yellow peaks, blue bases) with a steps slider. */

import { renderHeatmap } from "./heatmap.js";
import type { SurfaceGrid } from "./types.js";

export interface SurfaceViewState {
  grid: SurfaceGrid | null;
  steps: number;
  error: string | null;
}

export function renderSurfaceView(state: SurfaceViewState): string {
  const body = state.error
    ? `<p class="error">${state.error}</p>`
    : state.grid
      ? renderHeatmap(state.grid)
      : `<p class="empty">loading surface…</p>`;
  return (
    `<section class="surface">` +
    `<h2>Salubrity surface</h2>` +
    `<label>Resolution <input id="surface-steps" type="range" min="2" max="60" value="${state.steps}"/>` +
    ` <span id="surface-steps-value">${state.steps}</span> steps</label>` +
    body +
    `<p class="hint">Hover a cell for (T, H, S). Yellow = healthy peak, blue = risky base.</p>` +
    `</section>`
  );
}
