/** Hand-rolled SVG: a polyline time-series chart and the salubrity gauge.
 * String builders only, so views render (and test) without a DOM. */

import { BAND_COLORS, displayIndex, escapeHtml, gaugeBand } from "./format.js";

export interface SeriesPoint {
  ts: string;
  value: number;
}

export interface ChartOptions {
  title: string;
  unit: string;
  color: string;
  width?: number;
  height?: number;
}

export function lineChart(points: SeriesPoint[], options: ChartOptions): string {
  const width = options.width ?? 420;
  const height = options.height ?? 120;
  const padding = 6;
  const title = escapeHtml(`${options.title} (${options.unit})`);

  if (points.length === 0) {
    return `<svg class="chart" viewBox="0 0 ${width} ${height}" role="img" aria-label="${title}">` +
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" class="chart-empty">no data</text></svg>`;
  }

  const times = points.map((p) => Date.parse(p.ts));
  const values = points.map((p) => p.value);
  const tMin = Math.min(...times);
  const tMax = Math.max(...times);
  const vMin = Math.min(...values);
  const vMax = Math.max(...values);
  const tSpan = tMax - tMin || 1;
  const vSpan = vMax - vMin || 1;

  const coords = points.map((p) => {
    const x = padding + ((Date.parse(p.ts) - tMin) / tSpan) * (width - 2 * padding);
    const y = height - padding - ((p.value - vMin) / vSpan) * (height - 2 * padding - 14);
    return `${x.toFixed(1)},${y.toFixed(1)}`;
  });

  const last = values[values.length - 1];
  return (
    `<svg class="chart" viewBox="0 0 ${width} ${height}" role="img" aria-label="${title}">` +
    `<text x="${padding}" y="12" class="chart-title">${title}</text>` +
    `<text x="${width - padding}" y="12" text-anchor="end" class="chart-latest">${last}</text>` +
    `<polyline fill="none" stroke="${options.color}" stroke-width="1.5" points="${coords.join(" ")}"/>` +
    `<text x="${padding}" y="${height - 1}" class="chart-bound">${vMin}</text>` +
    `<text x="${width - padding}" y="${height - 1}" text-anchor="end" class="chart-bound">${vMax}</text>` +
    `</svg>`
  );
}

/** Semi-circular gauge; colour follows the documented display bands. */
export function salubrityGauge(value: number, scale = 100): string {
  const band = gaugeBand(value);
  const color = BAND_COLORS[band];
  const fraction = Math.min(1, Math.max(0, value / scale));
  const angle = Math.PI * (1 - fraction); // pi -> 0 sweeping left to right
  const cx = 100;
  const cy = 95;
  const r = 80;
  const x = cx + r * Math.cos(angle);
  const y = cy - r * Math.sin(angle);
  const largeArc = fraction > 0.5 ? 1 : 0;
  return (
    `<svg class="gauge gauge-${band}" viewBox="0 0 200 110" role="img" aria-label="salubrity index">` +
    `<path d="M 20 95 A 80 80 0 0 1 180 95" fill="none" stroke="#d0d4da" stroke-width="12" stroke-linecap="round"/>` +
    `<path d="M 20 95 A 80 80 0 ${largeArc} 1 ${x.toFixed(1)} ${y.toFixed(1)}" fill="none" stroke="${color}" stroke-width="12" stroke-linecap="round"/>` +
    `<text x="100" y="85" text-anchor="middle" class="gauge-value" fill="${color}">${displayIndex(value)}</text>` +
    `<text x="100" y="104" text-anchor="middle" class="gauge-label">salubrity</text>` +
    `</svg>`
  );
}
