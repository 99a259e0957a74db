import { describe, expect, it } from "vitest";

import { displayIndex, gaugeBand, surfaceColor } from "../src/format.js";

describe("gauge color bands", () => {
  it("matches the documented cutoffs: green >= 70, amber 50-70, red < 50", () => {
    expect(gaugeBand(100)).toBe("green");
    expect(gaugeBand(70)).toBe("green");
    expect(gaugeBand(69.99)).toBe("amber");
    expect(gaugeBand(50)).toBe("amber");
    expect(gaugeBand(49.99)).toBe("red");
    expect(gaugeBand(0.001)).toBe("red");
  });
});

describe("index display rule", () => {
  it("floors sub-1e-6 values to 0 in the display layer only", () => {
    expect(displayIndex(1e-7)).toBe("0");
    expect(displayIndex(0.5)).toBe("0.5");
    expect(displayIndex(100)).toBe("100.0");
  });
});

describe("surface colormap", () => {
  it("is yellow at the peak and blue at the base", () => {
    expect(surfaceColor(100, 100)).toBe("rgb(250,204,21)");
    expect(surfaceColor(0, 100)).toBe("rgb(30,58,138)");
  });

  it("interpolates monotonically", () => {
    const mid = surfaceColor(50, 100);
    const [r] = mid.match(/\d+/g)!.map(Number);
    expect(r).toBeGreaterThan(30);
    expect(r).toBeLessThan(250);
  });
});
