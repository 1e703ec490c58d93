// The scenario worksheet: pending DCFC upgrades against the loaded base
// network. Edits never touch the base; compare requests are built fresh.

import type { CompareRow, ScenarioPayload, SolveResult, Upgrade } from "./types.js";
import { METRIC_LABELS } from "./overlay.js";
import { fmt } from "./units.js";

export function addDcfc(upgrades: Upgrade[], stationId: string): Upgrade[] {
  const existing = upgrades.find((u) => u.station_id === stationId);
  if (existing) {
    return upgrades.map((u) =>
      u.station_id === stationId ? { ...u, dcfc_count: u.dcfc_count + 1 } : u,
    );
  }
  return [...upgrades, { station_id: stationId, dcfc_count: 1 }];
}

export function removeStation(upgrades: Upgrade[], stationId: string): Upgrade[] {
  return upgrades.filter((u) => u.station_id !== stationId);
}

/** Replace the worksheet with one DCFC per ranked station, preserving order. */
export function fillFromRanking(rankedIds: string[], n: number): Upgrade[] {
  return rankedIds.slice(0, n).map((id) => ({ station_id: id, dcfc_count: 1 }));
}

export function worksheetScenario(upgrades: Upgrade[], name = "worksheet"): ScenarioPayload {
  return { name, upgrades };
}

export interface CompareTable {
  columns: string[];
  rows: { name: string; cells: string[]; failed: boolean; error: string | null }[];
}

const METRIC_UNITS = ["days", "days", "min", "h"];

export function metricValues(row: CompareRow): (number | null)[] {
  if (!row.metrics) return [null, null, null, null];
  return [
    row.metrics.total_access_time_days,
    row.metrics.total_access_plus_charging_days,
    row.metrics.avg_access_time_min,
    row.metrics.avg_access_plus_charging_hours,
  ];
}

export function buildCompareTable(rows: CompareRow[]): CompareTable {
  return {
    columns: ["scenario", ...METRIC_LABELS],
    rows: rows.map((row) => ({
      name: row.name,
      cells: metricValues(row).map((v, i) => (v === null ? "-" : fmt(v, METRIC_UNITS[i]))),
      failed: row.failed,
      error: row.error,
    })),
  };
}

/** A base-only table shown before any comparison has run. */
export function baseOnlyRows(base: SolveResult): CompareRow[] {
  return [
    {
      name: "base",
      failed: false,
      error: null,
      metrics: base.system_metrics,
      converged: base.converged,
      iterations: base.iterations,
      final_epsilon: base.final_epsilon,
      wardrop_gap: base.wardrop_gap,
    },
  ];
}

export function tableToCsv(table: CompareTable): string {
  const escape = (s: string) => (/[",\n]/.test(s) ? `"${s.replace(/"/g, '""')}"` : s);
  const lines = [table.columns.map(escape).join(",")];
  for (const row of table.rows) {
    lines.push([row.name, ...row.cells.map((c) => c.split(" ")[0])].map(escape).join(","));
  }
  return lines.join("\n") + "\n";
}

export interface ChartSeries {
  label: string;
  points: { x: number; y: number; name: string }[];
}

/** One series per metric over the scenario sequence (base first). */
export function metricSeries(rows: CompareRow[]): ChartSeries[] {
  const ok = rows.filter((r) => !r.failed && r.metrics);
  return METRIC_LABELS.map((label, i) => ({
    label,
    points: ok.map((row, x) => ({ x, y: metricValues(row)[i] as number, name: row.name })),
  }));
}
