/** Wire types of the workshopair REST API (see docs/api.md in the backend). */

export interface FieldMeta {
  name: string;
  unit: string;
}

export interface ChannelMeta {
  channel_id: string;
  name: string;
  device_id: string;
  fields: Record<string, FieldMeta>; // field1.. -> {name, unit}
  entry_count: number;
  last_entry_at: string | null;
}

export interface FeedRow {
  entry_id?: number;
  created_at: string;
  ppm: number | null;
  salubrity: number | null;
  flags?: string[];
  count?: number; // aggregate rows only
  [field: string]: unknown; // field1..fieldN
}

export interface FeedResponse {
  channel: ChannelMeta;
  feed: FeedRow[];
  truncated: boolean;
}

export interface LatestSalubrity {
  channel_id: string;
  entry_id: number;
  ts: string;
  value: number;
  temp_factor: number;
  hum_factor: number;
}

export interface SurfaceGrid {
  t_axis: number[];
  h_axis: number[];
  values: number[][];
}

export type AlertRuleKind = "SALUBRITY_BELOW" | "GAS_PPM_ABOVE";

export interface AlertRule {
  rule_id: string;
  kind: AlertRuleKind;
  threshold: number;
  hysteresis: number;
  min_consecutive: number;
}

export interface AlertConfig {
  channel_id: string;
  rules: AlertRule[];
  states: Record<string, "IDLE" | "RAISED">;
}

export type AlertEventKind = "RAISE" | "CLEAR" | "CONFIG_RESET";

export interface AlertEvent {
  rule_id: string;
  kind: AlertEventKind;
  ts: string;
  value: number | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

export interface ReportRequest {
  channel_id: string;
  start_ts?: string;
  end_ts?: string;
  aggregation?: string;
  format?: "JSON" | "CSV";
}

export interface ReportJson {
  channel_id: string;
  aggregation: string;
  columns: string[];
  rows: Record<string, unknown>[];
}
