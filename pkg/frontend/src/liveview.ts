/** Live monitoring: T/H/ppm charts plus the salubrity gauge.
 * Every number shown here was produced by the backend; the dashboard never
 * computes the index itself. */

import { lineChart, salubrityGauge, type SeriesPoint } from "./charts.js";
import { escapeHtml, fmtTs } from "./format.js";
import type { ChannelMeta, FeedRow, LatestSalubrity } from "./types.js";

export interface LiveViewData {
  channel: ChannelMeta | null;
  feed: FeedRow[];
  latest: LatestSalubrity | null;
  /** Last successful poll when the API is currently unreachable. */
  staleSince: string | null;
}

/** field1..fieldN key carrying the given field name, per channel metadata. */
export function fieldKeyFor(channel: ChannelMeta, fieldName: string): string | null {
  for (const [key, meta] of Object.entries(channel.fields)) {
    if (meta.name === fieldName) return key;
  }
  return null;
}

function series(feed: FeedRow[], key: string): SeriesPoint[] {
  const points: SeriesPoint[] = [];
  for (const row of feed) {
    const value = row[key];
    if (typeof value === "number") points.push({ ts: row.created_at, value });
  }
  return points;
}

export function renderLiveView(data: LiveViewData): string {
  if (!data.channel) {
    return `<section class="live"><p class="empty">No channel selected.</p></section>`;
  }
  const staleBadge = data.staleSince
    ? `<div class="stale-badge" role="alert">stale data – last update ${fmtTs(data.staleSince)}</div>`
    : "";

  const tempKey = fieldKeyFor(data.channel, "temperature_c");
  const humKey = fieldKeyFor(data.channel, "humidity_pct");
  const charts = [
    tempKey ? lineChart(series(data.feed, tempKey), { title: "Temperature", unit: "degC", color: "#d6453a" }) : "",
    humKey ? lineChart(series(data.feed, humKey), { title: "Humidity", unit: "%RH", color: "#2563eb" }) : "",
    lineChart(
      data.feed
        .filter((row) => row.ppm !== null)
        .map((row) => ({ ts: row.created_at, value: row.ppm as number })),
      { title: "Gas", unit: "ppm", color: "#7c3aed" },
    ),
  ].join("");

  const gauge = data.latest
    ? salubrityGauge(data.latest.value) +
      `<div class="gauge-meta">as of ${fmtTs(data.latest.ts)} · f_T ${data.latest.temp_factor.toFixed(3)}` +
      ` · f_H ${data.latest.hum_factor.toFixed(3)}</div>`
    : `<p class="empty">no scored readings yet</p>`;

  return (
    `<section class="live">` +
    staleBadge +
    `<h2>${escapeHtml(data.channel.name)}</h2>` +
    `<div class="live-grid"><div class="gauge-cell">${gauge}</div><div class="charts">${charts}</div></div>` +
    `</section>`
  );
}
