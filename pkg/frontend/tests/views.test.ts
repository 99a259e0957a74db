/** The four dashboard views render from recorded API fixtures alone. */

import { describe, expect, it } from "vitest";

import { renderLiveView, fieldKeyFor } from "../src/liveview.js";
import { renderSurfaceView } from "../src/surfaceview.js";
import { draftFromRule, renderThresholdEditor } from "../src/thresholds.js";
import { renderReportView } from "../src/reportview.js";
import {
  ALERT_CONFIG_FIXTURE,
  CHANNELS_FIXTURE,
  FEED_FIXTURE,
  LATEST_FIXTURE,
  REPORT_FIXTURE,
  SURFACE_GRID_FIXTURE,
} from "./fixtures.js";

const channel = CHANNELS_FIXTURE.channels[0];

describe("live view", () => {
  it("renders gauge and all three charts from the fixture", () => {
    const html = renderLiveView({
      channel,
      feed: FEED_FIXTURE.feed,
      latest: LATEST_FIXTURE,
      staleSince: null,
    });
    expect(html).toContain("Workshop bay 1");
    expect(html).toContain("Temperature (degC)");
    expect(html).toContain("Humidity (%RH)");
    expect(html).toContain("Gas (ppm)");
    expect(html).toContain("gauge-green"); // fixture latest value is 100
    expect(html).toContain(">100.0<");
    expect(html).not.toContain("stale");
  });

  it("maps series through the channel field table, not positions", () => {
    expect(fieldKeyFor(channel, "temperature_c")).toBe("field1");
    expect(fieldKeyFor(channel, "mq135_adc")).toBe("field3");
    expect(fieldKeyFor(channel, "nonexistent")).toBeNull();
  });

  it("shows the gauge value exactly as the API reported it", () => {
    // doctored latest: a value the engine would never produce for (21, 40);
    // the dashboard must display it anyway - it never computes the index
    const html = renderLiveView({
      channel,
      feed: FEED_FIXTURE.feed,
      latest: { ...LATEST_FIXTURE, value: 41.5 },
      staleSince: null,
    });
    expect(html).toContain(">41.5<");
    expect(html).toContain("gauge-red");
  });

  it("shows a stale badge with the last success time when polling fails", () => {
    const html = renderLiveView({
      channel,
      feed: FEED_FIXTURE.feed,
      latest: LATEST_FIXTURE,
      staleSince: "2024-01-01T00:09:50Z",
    });
    expect(html).toContain("stale data");
    expect(html).toContain("2024-01-01 00:09:50 UTC");
  });
});

describe("surface view", () => {
  it("renders the fixture grid with the steps slider", () => {
    const html = renderSurfaceView({ grid: SURFACE_GRID_FIXTURE, steps: 9, error: null });
    expect(html).toContain("surface-steps");
    expect(html).toContain('value="9"');
    expect(html).toContain("<svg");
    expect(html).toContain("Yellow = healthy peak");
  });

  it("renders an error state without crashing", () => {
    const html = renderSurfaceView({ grid: null, steps: 25, error: "invalid_parameter: steps" });
    expect(html).toContain("invalid_parameter");
  });
});

describe("threshold editor", () => {
  it("renders the recorded config with per-rule state badges", () => {
    const html = renderThresholdEditor({
      config: ALERT_CONFIG_FIXTURE,
      drafts: ALERT_CONFIG_FIXTURE.rules.map(draftFromRule),
      errors: ALERT_CONFIG_FIXTURE.rules.map(() => ({})),
      note: null,
    });
    expect(html).toContain("salubrity-low");
    expect(html).toContain("gas-high");
    expect(html).toContain("SALUBRITY_BELOW");
    expect(html).toContain("last write wins");
  });

  it("renders field errors inline", () => {
    const drafts = ALERT_CONFIG_FIXTURE.rules.map(draftFromRule);
    drafts[0] = { ...drafts[0], hysteresis: "-1" };
    const html = renderThresholdEditor({
      config: ALERT_CONFIG_FIXTURE,
      drafts,
      errors: [{ hysteresis: "hysteresis must be >= 0" }, {}],
      note: "fix the highlighted fields - nothing was sent",
    });
    expect(html).toContain("field-error");
    expect(html).toContain("hysteresis must be &gt;= 0");
    expect(html).toContain("nothing was sent");
  });
});

describe("report view", () => {
  it("renders the hourly-mean fixture as a single table row", () => {
    const html = renderReportView({
      filter: { start: "", end: "", aggregation: "hourly_mean" },
      report: REPORT_FIXTURE,
      error: null,
    });
    expect(html).toContain("report-table");
    expect((html.match(/<tbody><tr>/g) ?? []).length).toBe(1);
    expect(html).toContain("2024-01-01T00:00:00Z");
    expect(html).toContain("download CSV");
  });

  it("renders a blocking error without a table refresh", () => {
    const html = renderReportView({
      filter: { start: "2024-01-02T00:00:00Z", end: "2024-01-01T00:00:00Z", aggregation: "none" },
      report: null,
      error: "start must be before end",
    });
    expect(html).toContain("start must be before end");
    expect(html).not.toContain("report-table");
  });
});
