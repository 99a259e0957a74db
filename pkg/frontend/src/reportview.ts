/** Historical reports: filter form, result table and a CSV download whose
 * bytes come from the same POST /reports endpoint as the table. */

import { escapeHtml, fmtNumber } from "./format.js";
import type { ReportJson } from "./types.js";

export interface ReportFilter {
  start: string;
  end: string;
  aggregation: string;
}

export const AGGREGATIONS = ["none", "hourly_mean", "hourly_min", "hourly_max"];

/** Blocks submission client-side; returns null when the filter is valid. */
export function validateReportFilter(filter: ReportFilter): string | null {
  const start = filter.start ? Date.parse(filter.start) : null;
  const end = filter.end ? Date.parse(filter.end) : null;
  if (filter.start && Number.isNaN(start)) return "start is not a valid timestamp";
  if (filter.end && Number.isNaN(end)) return "end is not a valid timestamp";
  if (start !== null && end !== null && start > end) return "start must be before end";
  if (!AGGREGATIONS.includes(filter.aggregation)) return "unknown aggregation";
  return null;
}

export function renderReportTable(report: ReportJson): string {
  const header = report.columns.map((c) => `<th>${escapeHtml(c)}</th>`).join("");
  const rows = report.rows
    .map((row) => {
      const cells = report.columns
        .map((column) => {
          const value = row[column];
          const text = column === "ts" ? String(value ?? "–") : fmtNumber(value, 4);
          return `<td>${escapeHtml(text)}</td>`;
        })
        .join("");
      return `<tr>${cells}</tr>`;
    })
    .join("");
  const empty = report.rows.length === 0 ? `<p class="empty">no rows in range</p>` : "";
  return (
    `<table class="report-table"><thead><tr>${header}</tr></thead>` +
    `<tbody>${rows}</tbody></table>${empty}`
  );
}

export interface ReportViewState {
  filter: ReportFilter;
  report: ReportJson | null;
  error: string | null;
}

export function renderReportView(state: ReportViewState): string {
  const options = AGGREGATIONS.map(
    (agg) => `<option value="${agg}"${agg === state.filter.aggregation ? " selected" : ""}>${agg}</option>`,
  ).join("");
  const error = state.error ? `<p class="error" role="alert">${escapeHtml(state.error)}</p>` : "";
  const table = state.report ? renderReportTable(state.report) : "";
  const download = state.report ? `<button id="download-csv">download CSV</button>` : "";
  return (
    `<section class="reports">` +
    `<h2>Historical reports</h2>` +
    `<form id="report-form">` +
    `<label>Start <input id="report-start" value="${escapeHtml(state.filter.start)}" placeholder="2024-01-01T00:00:00Z"/></label>` +
    `<label>End <input id="report-end" value="${escapeHtml(state.filter.end)}" placeholder="2024-01-02T00:00:00Z"/></label>` +
    `<label>Aggregation <select id="report-agg">${options}</select></label>` +
    `<button type="submit">run</button> ${download}</form>` +
    error +
    table +
    `</section>`
  );
}
