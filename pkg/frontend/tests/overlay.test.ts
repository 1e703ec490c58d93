// Overlay values must equal served values after unit conversion, at 4
// significant figures; the over-capacity state gets its own color.

import { describe, expect, it } from "vitest";

import {
  equilibriumBadge,
  headlineMetrics,
  loadColor,
  METRIC_LABELS,
  nodeOverlay,
  OVER_CAPACITY_COLOR,
  stationOverlay,
} from "../src/overlay.js";
import { sig4 } from "../src/units.js";
import { SOLVE_RESULT } from "./mock_server.js";

describe("station overlay", () => {
  it("shows served utilization at 4 significant figures", () => {
    const overlay = stationOverlay(SOLVE_RESULT, "rho");
    SOLVE_RESULT.station_report.forEach((served, i) => {
      expect(overlay[i].id).toBe(served.id);
      expect(overlay[i].value).toBe(sig4(served.rho));
    });
    expect(overlay[1].value).toBe(0.8667); // 0.8666667 served
  });

  it("converts served queue delay days to minutes at 4 s.f.", () => {
    const overlay = stationOverlay(SOLVE_RESULT, "wq");
    SOLVE_RESULT.station_report.forEach((served, i) => {
      expect(overlay[i].value).toBe(sig4(served.wq_days * 1440));
    });
    expect(overlay[0].value).toBe(17.78); // 0.0123456 days -> 17.777... min
  });

  it("flags over-capacity stations with the reserved color", () => {
    const overlay = stationOverlay(SOLVE_RESULT, "rho");
    expect(overlay[2].overCapacity).toBe(true);
    expect(overlay[2].color).toBe(OVER_CAPACITY_COLOR);
    expect(overlay[0].color).not.toBe(OVER_CAPACITY_COLOR);
  });

  it("pins the utilization ramp to [0, 1]", () => {
    expect(loadColor(0)).toBe("hsl(120, 75%, 45%)");
    expect(loadColor(1)).toBe("hsl(0, 75%, 45%)");
    expect(loadColor(2)).toBe(loadColor(1)); // clamped, comparable across scenarios
  });
});

describe("node overlay", () => {
  it("shows served access minutes at 4 s.f.", () => {
    const overlay = nodeOverlay(SOLVE_RESULT);
    SOLVE_RESULT.node_report.forEach((served, i) => {
      expect(overlay[i].accessMin).toBe(sig4(served.access_time_min));
    });
    expect(overlay[0].accessMin).toBe(123.5);
  });
});

describe("headline metrics", () => {
  it("carries the four report metrics in order", () => {
    const metrics = headlineMetrics(SOLVE_RESULT);
    expect(metrics.map((m) => m.label)).toEqual([...METRIC_LABELS]);
    const served = SOLVE_RESULT.system_metrics;
    expect(metrics[0].value).toBe(sig4(served.total_access_time_days));
    expect(metrics[1].value).toBe(sig4(served.total_access_plus_charging_days));
    expect(metrics[2].value).toBe(sig4(served.avg_access_time_min));
    expect(metrics[3].value).toBe(sig4(served.avg_access_plus_charging_hours));
  });

  it("rounds to exactly 4 significant figures", () => {
    const metrics = headlineMetrics(SOLVE_RESULT);
    expect(metrics[2].value).toBe(140.1); // 140.123456 served
    expect(metrics[3].value).toBe(3.946); // 3.9456789 served
  });
});

describe("equilibrium badge", () => {
  it("reports the served gap", () => {
    const badge = equilibriumBadge(SOLVE_RESULT);
    expect(badge.converged).toBe(true);
    expect(badge.gap).toBe(SOLVE_RESULT.wardrop_gap);
    expect(badge.gapOk).toBe(true);
  });

  it("warns when the gap exceeds the threshold", () => {
    const badge = equilibriumBadge({ ...SOLVE_RESULT, wardrop_gap: 0.05 });
    expect(badge.gapOk).toBe(false);
  });
});
