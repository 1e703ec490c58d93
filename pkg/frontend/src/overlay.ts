// Pure builders turning served results into display values and colors.
// Every number shown is a served value, unit-converted and rounded here.

import type { SolveResult } from "./types.js";
import { daysToMinutes, fmt, sig4 } from "./units.js";

export type OverlayMode = "rho" | "wq";

export interface StationOverlay {
  id: string;
  value: number; // rho (dimensionless) or queue delay in minutes
  display: string;
  color: string;
  overCapacity: boolean;
  tooltip: string;
}

export interface NodeOverlay {
  id: string;
  accessMin: number;
  display: string;
  color: string;
}

export interface HeadlineMetric {
  label: string;
  value: number;
  display: string;
}

// Matches the service's comparison-report metric columns.
export const METRIC_LABELS = [
  "System total access time",
  "System total access time + charging time",
  "Average access time",
  "Average access time + charging time",
] as const;

export const OVER_CAPACITY_COLOR = "#7b1fa2"; // distinct from the load ramp

/** Green-to-red ramp over t in [0, 1]. */
export function loadColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const hue = 120 * (1 - clamped); // 120 = green, 0 = red
  return `hsl(${hue.toFixed(0)}, 75%, 45%)`;
}

export function stationOverlay(result: SolveResult, mode: OverlayMode): StationOverlay[] {
  const maxWqMin = Math.max(...result.station_report.map((s) => daysToMinutes(s.wq_days)), 1e-9);
  return result.station_report.map((s) => {
    const wqMin = sig4(daysToMinutes(s.wq_days));
    const value = mode === "rho" ? sig4(s.rho) : wqMin;
    // rho renders on a fixed [0, 1] scale so scenarios stay comparable
    const t = mode === "rho" ? s.rho : daysToMinutes(s.wq_days) / maxWqMin;
    return {
      id: s.id,
      value,
      display: mode === "rho" ? `ρ=${value}` : `${value} min`,
      color: s.over_capacity ? OVER_CAPACITY_COLOR : loadColor(t),
      overCapacity: s.over_capacity,
      tooltip:
        `${s.id} (${s.charger_class}, ${s.chargers} chargers)\n` +
        `flow ${fmt(s.flow)} veh/day, ρ ${fmt(s.rho)}\n` +
        `queue ${fmt(daysToMinutes(s.wq_days))} min` +
        (s.over_capacity ? "\nOVER CAPACITY" : ""),
    };
  });
}

export function nodeOverlay(result: SolveResult): NodeOverlay[] {
  const maxMin = Math.max(...result.node_report.map((n) => n.access_time_min), 1e-9);
  return result.node_report.map((n) => ({
    id: n.id,
    accessMin: sig4(n.access_time_min),
    display: `${sig4(n.access_time_min)} min`,
    color: loadColor(n.access_time_min / maxMin),
  }));
}

export function headlineMetrics(result: SolveResult): HeadlineMetric[] {
  const m = result.system_metrics;
  const values = [
    m.total_access_time_days,
    m.total_access_plus_charging_days,
    m.avg_access_time_min,
    m.avg_access_plus_charging_hours,
  ];
  const units = ["days", "days", "min", "h"];
  return METRIC_LABELS.map((label, i) => ({
    label,
    value: sig4(values[i]),
    display: fmt(values[i], units[i]),
  }));
}

export interface EquilibriumBadge {
  converged: boolean;
  gap: number;
  gapOk: boolean;
  text: string;
}

export function equilibriumBadge(result: SolveResult, gapThreshold = 1e-2): EquilibriumBadge {
  const gapOk = result.wardrop_gap <= gapThreshold;
  return {
    converged: result.converged,
    gap: result.wardrop_gap,
    gapOk,
    text: result.converged
      ? gapOk
        ? `equilibrium: gap ${fmt(result.wardrop_gap)}`
        : `converged, but gap ${fmt(result.wardrop_gap)} above ${gapThreshold}`
      : "iteration cap hit before tolerance",
  };
}
