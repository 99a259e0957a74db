/** Alert banners: a rule shows a banner from its latest RAISE until a later
 * CLEAR/CONFIG_RESET arrives or the operator acknowledges that raise. */

import { escapeHtml, fmtNumber, fmtTs } from "./format.js";
import type { AlertEvent } from "./types.js";

export function bannerKey(event: AlertEvent): string {
  return `${event.rule_id}@${event.ts}`;
}

export function activeAlerts(events: AlertEvent[], acknowledged: ReadonlySet<string>): AlertEvent[] {
  const open = new Map<string, AlertEvent>();
  for (const event of events) {
    if (event.kind === "RAISE") {
      open.set(event.rule_id, event);
    } else {
      open.delete(event.rule_id); // CLEAR or CONFIG_RESET ends the episode
    }
  }
  return [...open.values()].filter((event) => !acknowledged.has(bannerKey(event)));
}

export function renderBanners(alerts: AlertEvent[]): string {
  if (alerts.length === 0) return "";
  const items = alerts
    .map(
      (event) =>
        `<div class="banner" data-key="${escapeHtml(bannerKey(event))}">` +
        `<strong>${escapeHtml(event.rule_id)}</strong> raised at ${fmtTs(event.ts)}` +
        ` (value ${fmtNumber(event.value, 2)})` +
        ` <button class="ack" data-key="${escapeHtml(bannerKey(event))}">acknowledge</button></div>`,
    )
    .join("");
  return `<div class="banners">${items}</div>`;
}
