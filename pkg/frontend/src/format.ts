/** Display conventions. The gauge bands and the surface colours are pure
 * presentation constants, independent of any alert rule thresholds. */

export type GaugeBand = "green" | "amber" | "red";

export const GAUGE_GREEN_MIN = 70;
export const GAUGE_AMBER_MIN = 50;

export const BAND_COLORS: Record<GaugeBand, string> = {
  green: "#22a04a",
  amber: "#e0a400",
  red: "#d6453a",
};

export function gaugeBand(value: number): GaugeBand {
  if (value >= GAUGE_GREEN_MIN) return "green";
  if (value >= GAUGE_AMBER_MIN) return "amber";
  return "red";
}

/** Index values straight from the API; only the *display* floors tiny
 * values to 0 (the engine itself never reports an exact 0). */
export function displayIndex(value: number): string {
  if (value < 1e-6) return "0";
  return value.toFixed(1);
}

export function fmtNumber(value: unknown, digits = 1): string {
  if (value === null || value === undefined || value === "") return "–";
  const n = Number(value);
  if (!Number.isFinite(n)) return String(value);
  return Number.isInteger(n) ? String(n) : n.toFixed(digits);
}

export function fmtTs(iso: string | null): string {
  if (!iso) return "–";
  return iso.replace("T", " ").replace("Z", " UTC");
}

/** Low values render deep blue, high values yellow (peaks stand out). */
export function surfaceColor(value: number, maxValue: number): string {
  const t = maxValue > 0 ? Math.min(1, Math.max(0, value / maxValue)) : 0;
  const low = [30, 58, 138]; // #1e3a8a
  const high = [250, 204, 21]; // #facc15
  const rgb = low.map((lo, i) => Math.round(lo + (high[i] - lo) * t));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
