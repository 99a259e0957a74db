/** Single-page wiring: tabs, poll loops, form handlers. All data flows
 * through ApiClient; views are pure string renderers over that data. */

import { ApiClient, ApiRequestError } from "./api.js";
import { activeAlerts, renderBanners } from "./banners.js";
import { renderLiveView, type LiveViewData } from "./liveview.js";
import { clampPollPeriod, PollGate } from "./poll.js";
import { renderReportView, validateReportFilter, type ReportViewState } from "./reportview.js";
import { renderSurfaceView, type SurfaceViewState } from "./surfaceview.js";
import {
  draftFromRule,
  renderThresholdEditor,
  submitRules,
  type RuleDraft,
  type ThresholdEditorState,
} from "./thresholds.js";
import type { AlertEvent, ChannelMeta } from "./types.js";

type Tab = "live" | "surface" | "thresholds" | "reports";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;
const bannerHost = document.getElementById("banners") as HTMLElement;

const state = {
  tab: "live" as Tab,
  channels: [] as ChannelMeta[],
  selectedChannel: null as string | null,
  liveWindowMinutes: 60,
  pollPeriodMs: clampPollPeriod(5000),
  live: { channel: null, feed: [], latest: null, staleSince: null } as LiveViewData,
  lastSuccess: null as string | null,
  events: [] as AlertEvent[],
  acknowledged: new Set<string>(),
  surface: { grid: null, steps: 25, error: null } as SurfaceViewState,
  thresholds: { config: null, drafts: [], errors: [], note: null } as ThresholdEditorState,
  reports: {
    filter: { start: "", end: "", aggregation: "none" },
    report: null,
    error: null,
  } as ReportViewState,
};

const liveGate = new PollGate();
const surfaceGate = new PollGate();

function channel(): ChannelMeta | null {
  return state.channels.find((c) => c.channel_id === state.selectedChannel) ?? null;
}

function render(): void {
  bannerHost.innerHTML = renderBanners(activeAlerts(state.events, state.acknowledged));
  switch (state.tab) {
    case "live":
      root.innerHTML = renderLiveView(state.live);
      break;
    case "surface":
      root.innerHTML = renderSurfaceView(state.surface);
      bindSurface();
      break;
    case "thresholds":
      root.innerHTML = renderThresholdEditor(state.thresholds);
      bindThresholds();
      break;
    case "reports":
      root.innerHTML = renderReportView(state.reports);
      bindReports();
      break;
  }
}

// ---------------------------------------------------------------- live

async function pollLive(): Promise<void> {
  const id = state.selectedChannel;
  if (!id) return;
  await liveGate.run(
    async () => {
      const end = new Date();
      const start = new Date(end.getTime() - state.liveWindowMinutes * 60_000);
      const feed = await api.feed(id, { start: start.toISOString(), end: end.toISOString() });
      const latest = await api.latestSalubrity(id).catch((error) => {
        if (error instanceof ApiRequestError && error.status === 404) return null;
        throw error;
      });
      const events = await api.alertEvents(id);
      return { feed, latest, events };
    },
    ({ feed, latest, events }) => {
      state.live = { channel: feed.channel, feed: feed.feed, latest, staleSince: null };
      state.events = events;
      state.lastSuccess = new Date().toISOString();
      render();
    },
    () => {
      state.live = { ...state.live, staleSince: state.lastSuccess ?? "never" };
      render();
    },
  );
}

// ---------------------------------------------------------------- surface

async function loadSurface(): Promise<void> {
  await surfaceGate.run(
    () => api.surface({ steps: state.surface.steps }),
    (grid) => {
      state.surface = { ...state.surface, grid, error: null };
      render();
    },
    (error) => {
      state.surface = { ...state.surface, error: String(error) };
      render();
    },
  );
}

function bindSurface(): void {
  const slider = document.getElementById("surface-steps") as HTMLInputElement | null;
  slider?.addEventListener("change", () => {
    state.surface.steps = Math.max(2, Number(slider.value) || 25);
    surfaceGate.invalidate();
    void loadSurface();
  });
}

// ---------------------------------------------------------------- thresholds

async function loadThresholds(): Promise<void> {
  const id = state.selectedChannel;
  if (!id) return;
  const config = await api.alertConfig(id);
  state.thresholds = {
    config,
    drafts: config.rules.map(draftFromRule),
    errors: config.rules.map(() => ({})),
    note: null,
  };
  render();
}

function bindThresholds(): void {
  const form = document.getElementById("rules-form") as HTMLFormElement | null;
  if (!form) return;

  form.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    const index = Number(target.dataset.ruleIndex);
    const field = target.dataset.field as keyof RuleDraft | undefined;
    if (!Number.isInteger(index) || !field) return;
    state.thresholds.drafts[index] = { ...state.thresholds.drafts[index], [field]: target.value };
  });

  document.getElementById("add-rule")?.addEventListener("click", () => {
    state.thresholds.drafts.push({
      rule_id: "",
      kind: "SALUBRITY_BELOW",
      threshold: "50",
      hysteresis: "5",
      min_consecutive: "1",
    });
    state.thresholds.errors.push({});
    render();
  });

  root.querySelectorAll<HTMLButtonElement>(".remove-rule").forEach((button) =>
    button.addEventListener("click", (event) => {
      event.preventDefault();
      const index = Number(button.dataset.ruleIndex);
      state.thresholds.drafts.splice(index, 1);
      state.thresholds.errors.splice(index, 1);
      render();
    }),
  );

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void saveThresholds();
  });
}

async function saveThresholds(): Promise<void> {
  const id = state.selectedChannel;
  if (!id) return;
  const result = await submitRules(api, id, state.thresholds.drafts);
  state.thresholds.errors = result.errors;
  state.thresholds.note = result.note;
  if (result.saved && result.config) {
    state.thresholds.config = result.config;
    state.thresholds.drafts = result.config.rules.map(draftFromRule);
    state.thresholds.errors = result.config.rules.map(() => ({}));
  }
  render();
}

// ---------------------------------------------------------------- reports

function bindReports(): void {
  const form = document.getElementById("report-form") as HTMLFormElement | null;
  if (!form) return;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    state.reports.filter = {
      start: (document.getElementById("report-start") as HTMLInputElement).value.trim(),
      end: (document.getElementById("report-end") as HTMLInputElement).value.trim(),
      aggregation: (document.getElementById("report-agg") as HTMLSelectElement).value,
    };
    void runReport();
  });
  document.getElementById("download-csv")?.addEventListener("click", (event) => {
    event.preventDefault();
    void downloadCsv();
  });
}

function reportRequest() {
  const id = state.selectedChannel as string;
  const filter = state.reports.filter;
  return {
    channel_id: id,
    start_ts: filter.start || undefined,
    end_ts: filter.end || undefined,
    aggregation: filter.aggregation,
  };
}

async function runReport(): Promise<void> {
  if (!state.selectedChannel) return;
  const invalid = validateReportFilter(state.reports.filter);
  if (invalid) {
    state.reports = { ...state.reports, error: invalid }; // blocked client-side
    render();
    return;
  }
  try {
    const report = await api.reportJson(reportRequest());
    state.reports = { ...state.reports, report, error: null };
  } catch (error) {
    state.reports = { ...state.reports, error: String(error) };
  }
  render();
}

async function downloadCsv(): Promise<void> {
  if (!state.selectedChannel) return;
  const csv = await api.reportCsv(reportRequest());
  const blob = new Blob([csv], { type: "text/csv" });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = `${state.selectedChannel}-report.csv`;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

// ---------------------------------------------------------------- bootstrap

function bindTabs(): void {
  document.querySelectorAll<HTMLButtonElement>("nav [data-tab]").forEach((button) =>
    button.addEventListener("click", () => {
      state.tab = button.dataset.tab as Tab;
      document.querySelectorAll("nav [data-tab]").forEach((b) => b.classList.remove("active"));
      button.classList.add("active");
      render();
      if (state.tab === "surface" && !state.surface.grid) void loadSurface();
      if (state.tab === "thresholds") void loadThresholds();
    }),
  );

  bannerHost.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("ack") && target.dataset.key) {
      state.acknowledged.add(target.dataset.key);
      render();
    }
  });

  const select = document.getElementById("channel-select") as HTMLSelectElement | null;
  select?.addEventListener("change", () => {
    state.selectedChannel = select.value;
    liveGate.invalidate(); // discard any in-flight poll for the old channel
    state.live = { channel: channel(), feed: [], latest: null, staleSince: null };
    render();
    void pollLive();
  });
}

async function bootstrap(): Promise<void> {
  state.channels = await api.channels();
  state.selectedChannel = state.channels[0]?.channel_id ?? null;
  const select = document.getElementById("channel-select") as HTMLSelectElement | null;
  if (select) {
    select.innerHTML = state.channels
      .map((c) => `<option value="${c.channel_id}">${c.name}</option>`)
      .join("");
  }
  bindTabs();
  render();
  await pollLive();
  window.setInterval(() => {
    if (state.tab === "live") void pollLive();
  }, state.pollPeriodMs);
}

void bootstrap();
