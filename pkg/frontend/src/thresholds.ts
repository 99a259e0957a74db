/** Threshold management: drafts are validated client-side against the same
 * invariants the backend enforces, so a bad rule never even leaves the
 * browser; server-side 400s render against the offending field list. */

import { ApiRequestError, type ApiClient } from "./api.js";
import { escapeHtml, fmtNumber } from "./format.js";
import type { AlertConfig, AlertRule, AlertRuleKind } from "./types.js";

export interface RuleDraft {
  rule_id: string;
  kind: string;
  threshold: string;
  hysteresis: string;
  min_consecutive: string;
}

export type DraftErrors = Partial<Record<keyof RuleDraft, string>>;

export const RULE_KINDS: AlertRuleKind[] = ["SALUBRITY_BELOW", "GAS_PPM_ABOVE"];

export function draftFromRule(rule: AlertRule): RuleDraft {
  return {
    rule_id: rule.rule_id,
    kind: rule.kind,
    threshold: String(rule.threshold),
    hysteresis: String(rule.hysteresis),
    min_consecutive: String(rule.min_consecutive),
  };
}

/** Mirrors the backend AlertRule invariants; returns {} when clean. */
export function validateRuleDraft(draft: RuleDraft, scale = 100): DraftErrors {
  const errors: DraftErrors = {};
  if (!draft.rule_id.trim()) {
    errors.rule_id = "rule id is required";
  }
  if (!RULE_KINDS.includes(draft.kind as AlertRuleKind)) {
    errors.kind = "unknown rule kind";
  }
  const threshold = Number(draft.threshold);
  if (draft.threshold.trim() === "" || !Number.isFinite(threshold)) {
    errors.threshold = "threshold must be a number";
  } else if (draft.kind === "SALUBRITY_BELOW" && !(threshold > 0 && threshold < scale)) {
    errors.threshold = `threshold must lie in (0, ${scale})`;
  }
  const hysteresis = Number(draft.hysteresis);
  if (draft.hysteresis.trim() === "" || !Number.isFinite(hysteresis)) {
    errors.hysteresis = "hysteresis must be a number";
  } else if (hysteresis < 0) {
    errors.hysteresis = "hysteresis must be >= 0";
  }
  const minConsecutive = Number(draft.min_consecutive);
  if (!Number.isInteger(minConsecutive) || minConsecutive < 1) {
    errors.min_consecutive = "min consecutive must be an integer >= 1";
  }
  return errors;
}

export function draftToRule(draft: RuleDraft): AlertRule {
  return {
    rule_id: draft.rule_id.trim(),
    kind: draft.kind as AlertRuleKind,
    threshold: Number(draft.threshold),
    hysteresis: Number(draft.hysteresis),
    min_consecutive: Number(draft.min_consecutive),
  };
}

export interface SubmitResult {
  saved: boolean;
  errors: DraftErrors[];
  note: string;
  config?: AlertConfig;
}

/** Validate client-side, then PUT. Invalid drafts never reach the API. */
export async function submitRules(
  api: ApiClient,
  channelId: string,
  drafts: RuleDraft[],
  scale = 100,
): Promise<SubmitResult> {
  const errors = drafts.map((draft) => validateRuleDraft(draft, scale));
  if (errors.some((e) => Object.keys(e).length > 0)) {
    return { saved: false, errors, note: "fix the highlighted fields - nothing was sent" };
  }
  try {
    const config = await api.putAlertConfig(channelId, drafts.map(draftToRule));
    return {
      saved: true,
      errors: drafts.map(() => ({})),
      note: "saved (replaces the previous list; last write wins)",
      config,
    };
  } catch (error) {
    const note =
      error instanceof ApiRequestError
        ? `${error.body.code}: ${error.body.message}${error.body.field ? ` (${error.body.field})` : ""}`
        : String(error);
    return { saved: false, errors, note };
  }
}

function inputRow(
  index: number,
  field: keyof RuleDraft,
  label: string,
  value: string,
  error: string | undefined,
): string {
  const errorHtml = error ? `<span class="field-error">${escapeHtml(error)}</span>` : "";
  return (
    `<label>${label}<input data-rule-index="${index}" data-field="${field}" ` +
    `value="${escapeHtml(value)}"/>${errorHtml}</label>`
  );
}

export interface ThresholdEditorState {
  config: AlertConfig | null;
  drafts: RuleDraft[];
  errors: DraftErrors[];
  /** Server-side rejection or info note ("last write wins", save ok, ...). */
  note: string | null;
}

export function renderThresholdEditor(state: ThresholdEditorState): string {
  if (!state.config) {
    return `<section class="thresholds"><p class="empty">loading rules…</p></section>`;
  }
  const rows = state.drafts
    .map((draft, i) => {
      const errors = state.errors[i] ?? {};
      const status = state.config?.states[draft.rule_id];
      const badge = status === "RAISED" ? `<span class="badge badge-raised">RAISED</span>` : "";
      const kindOptions = RULE_KINDS.map(
        (kind) => `<option value="${kind}"${kind === draft.kind ? " selected" : ""}>${kind}</option>`,
      ).join("");
      const kindError = errors.kind ? `<span class="field-error">${escapeHtml(errors.kind)}</span>` : "";
      return (
        `<fieldset class="rule" data-rule-index="${i}">` +
        `<legend>${escapeHtml(draft.rule_id || "(new rule)")} ${badge}</legend>` +
        inputRow(i, "rule_id", "Rule id", draft.rule_id, errors.rule_id) +
        `<label>Kind<select data-rule-index="${i}" data-field="kind">${kindOptions}</select>${kindError}</label>` +
        inputRow(i, "threshold", "Threshold", draft.threshold, errors.threshold) +
        inputRow(i, "hysteresis", "Hysteresis", draft.hysteresis, errors.hysteresis) +
        inputRow(i, "min_consecutive", "Min consecutive", draft.min_consecutive, errors.min_consecutive) +
        `<button class="remove-rule" data-rule-index="${i}">remove</button>` +
        `</fieldset>`
      );
    })
    .join("");

  const note = state.note ? `<p class="note">${escapeHtml(state.note)}</p>` : "";
  const current = state.config.rules
    .map((rule) => `<li>${escapeHtml(rule.rule_id)}: ${rule.kind} @ ${fmtNumber(rule.threshold)} ±${fmtNumber(rule.hysteresis)}</li>`)
    .join("");

  return (
    `<section class="thresholds">` +
    `<h2>Alert thresholds</h2>${note}` +
    `<form id="rules-form">${rows}` +
    `<button id="add-rule" type="button">add rule</button>` +
    `<button id="save-rules" type="submit">save</button></form>` +
    `<h3>Active configuration</h3><ul class="current-rules">${current}</ul>` +
    `<p class="hint">Saving replaces the whole rule list (last write wins); changed rules restart from IDLE.</p>` +
    `</section>`
  );
}
