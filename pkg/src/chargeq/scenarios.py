"""System metrics, station rankings, DCFC upgrade scenarios and their comparison."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .network import ChargerClass, Network, Station, TravelTimeMatrix
from .solver import (
    CancelCheck,
    EquilibriumResult,
    ProgressCallback,
    SolverCancelled,
    SolverConfig,
    solve_equilibrium,
)

MINUTES_PER_DAY = 1440.0
HOURS_PER_DAY = 24.0

# Report column labels, in fixed order.
METRIC_COLUMNS = (
    "System total access time",
    "System total access time + charging time",
    "Average access time",
    "Average access time + charging time",
)


class RankCriterion(str, Enum):
    UTILIZATION = "utilization"
    QUEUE_DELAY = "queue_delay"


@dataclass(frozen=True)
class SystemMetrics:
    """Flow-weighted time totals (vehicle-days/day) and per-vehicle averages.

    Totals are in days; the access average is minutes/vehicle and the
    access-plus-charging average hours/vehicle. Always computed with raw,
    unweighted times: cost weights steer routing, not reporting.
    """

    total_access_time: float
    total_access_plus_charging: float
    avg_access_time: float
    avg_access_plus_charging: float
    zero_demand: bool = False


def system_metrics(result: EquilibriumResult, network: Network) -> SystemMetrics:
    """Aggregate access and access+charging times over the assignment."""
    demand = network.demand
    total_demand = float(demand.sum())
    wq = np.array([d.wait_queue_mdc for d in result.station_delays])
    charge = 1.0 / network.service_rates
    access = network.travel.values + wq[None, :]
    weighted = demand[:, None] * result.assignment
    total_access = float((weighted * access).sum())
    total_full = float((weighted * (access + charge[None, :])).sum())
    if total_demand <= 0:
        return SystemMetrics(0.0, 0.0, 0.0, 0.0, zero_demand=True)
    return SystemMetrics(
        total_access_time=total_access,
        total_access_plus_charging=total_full,
        avg_access_time=total_access / total_demand * MINUTES_PER_DAY,
        avg_access_plus_charging=total_full / total_demand * HOURS_PER_DAY,
    )


def rank_station_entries(
    entries: Sequence[tuple[str, float, float, str]],
    criterion: RankCriterion,
    filter_class: ChargerClass | None = None,
) -> list[str]:
    """Order (id, rho, wq, charger_class) entries by busyness, descending.

    Ties break on station id ascending, so rankings are reproducible.
    """
    metric_idx = 1 if criterion is RankCriterion.UTILIZATION else 2
    pool = [e for e in entries if filter_class is None or e[3] == filter_class.value]
    return [e[0] for e in sorted(pool, key=lambda e: (-e[metric_idx], e[0]))]


def rank_stations(
    result: EquilibriumResult,
    network: Network,
    criterion: RankCriterion,
    filter_class: ChargerClass | None = None,
) -> list[str]:
    """Station ids sorted by utilization ratio or queue delay at equilibrium."""
    entries = [
        (s.id, d.utilization, d.wait_queue_mdc, s.charger_class.value)
        for s, d in zip(network.stations, result.station_delays)
    ]
    return rank_station_entries(entries, criterion, filter_class)


@dataclass(frozen=True)
class StationUpgrade:
    station_id: str
    dcfc_count: int

    def __post_init__(self) -> None:
        if self.dcfc_count < 1:
            raise ValueError(f"dcfc_count must be >= 1, got {self.dcfc_count}")


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    upgrades: tuple[StationUpgrade, ...]
    dcfc_service_rate: float = 48.0

    def __post_init__(self) -> None:
        if self.dcfc_service_rate <= 0:
            raise ValueError("dcfc_service_rate must be > 0")


def apply_upgrade(network: Network, spec: ScenarioSpec) -> Network:
    """Add the scenario's DCFCs as co-located sibling stations; the base is untouched.

    A fast charger bank next to a Level 2 bank has its own deterministic
    service time, so it gets its own queue: a new station "<id>#dcfc" at the
    same coordinates, sharing the original's travel-time column.
    """
    seen: set[str] = set()
    for up in spec.upgrades:
        if up.station_id in seen:
            raise ValueError(f"duplicate upgrade target {up.station_id!r}")
        seen.add(up.station_id)

    existing = {s.id for s in network.stations}
    stations = list(network.stations)
    columns = [network.travel.values]
    for up in spec.upgrades:
        if up.station_id not in existing:
            raise ValueError(f"unknown station id {up.station_id!r}")
        j = network.station_index(up.station_id)
        base = network.stations[j]
        new_id = f"{base.id}#dcfc"
        if new_id in existing:
            raise ValueError(f"station id {new_id!r} already exists")
        stations.append(
            Station(new_id, base.x, base.y, up.dcfc_count, spec.dcfc_service_rate, ChargerClass.DCFC)
        )
        columns.append(network.travel.values[:, j : j + 1])
    if len(columns) == 1:
        return network
    travel = TravelTimeMatrix(
        np.hstack(columns),
        network.travel.provenance,
        network.travel.speed,
        network.travel.metric,
    )
    return Network(network.nodes, tuple(stations), travel)


def nested_upgrade_scenarios(
    result: EquilibriumResult,
    network: Network,
    criterion: RankCriterion,
    batch_sizes: Sequence[int],
    dcfc_per_station: int = 1,
    dcfc_service_rate: float = 48.0,
    name_prefix: str = "S",
) -> list[ScenarioSpec]:
    """Nested upgrade batches over the base ranking: batch m covers batch m-1's stations.

    Rankings come from the base equilibrium once and are not re-derived
    between batches, so scenario m+1 always contains scenario m.
    """
    ranked = rank_stations(result, network, criterion, ChargerClass.LEVEL2)
    specs = []
    for i, size in enumerate(batch_sizes):
        if size < 1 or size > len(ranked):
            raise ValueError(f"batch size {size} outside 1..{len(ranked)} ranked stations")
        upgrades = tuple(StationUpgrade(sid, dcfc_per_station) for sid in ranked[:size])
        specs.append(ScenarioSpec(f"{name_prefix}{i + 1}", upgrades, dcfc_service_rate))
    return specs


@dataclass
class ScenarioRow:
    name: str
    failed: bool = False
    error: str | None = None
    metrics: SystemMetrics | None = None
    converged: bool | None = None
    iterations: int | None = None
    final_epsilon: float | None = None
    wardrop_gap: float | None = None


@dataclass
class ComparisonReport:
    rows: list[ScenarioRow]  # base first, then one row per scenario


def compare_scenarios(
    base: Network,
    scenarios: Sequence[ScenarioSpec],
    solver_cfg: SolverConfig | None = None,
    progress: ProgressCallback | None = None,
    should_cancel: CancelCheck | None = None,
) -> ComparisonReport:
    """Solve the base and every upgrade scenario; failures mark their row only.

    progress receives a cumulative iteration count over all solves.
    """
    solver_cfg = solver_cfg or SolverConfig()
    done = [0]
    rows = [_solve_row("base", base, solver_cfg, done, progress, should_cancel)]
    for spec in scenarios:
        try:
            net = apply_upgrade(base, spec)
        except ValueError as e:
            rows.append(ScenarioRow(spec.name, failed=True, error=str(e)))
            continue
        rows.append(_solve_row(spec.name, net, solver_cfg, done, progress, should_cancel))
    return ComparisonReport(rows)


def _solve_row(
    name: str,
    network: Network,
    cfg: SolverConfig,
    done_iterations: list[int],
    progress: ProgressCallback | None = None,
    should_cancel: CancelCheck | None = None,
) -> ScenarioRow:
    sub_progress = None
    if progress is not None:
        base = done_iterations[0]
        sub_progress = lambda it, eps, gap: progress(base + it, eps, gap)  # noqa: E731
    try:
        result = solve_equilibrium(network, cfg, sub_progress, should_cancel)
    except SolverCancelled:
        raise
    except Exception as e:  # one bad scenario must not sink the batch
        return ScenarioRow(name, failed=True, error=str(e))
    done_iterations[0] += result.iterations
    return ScenarioRow(
        name,
        metrics=system_metrics(result, network),
        converged=result.converged,
        iterations=result.iterations,
        final_epsilon=result.final_epsilon,
        wardrop_gap=result.wardrop_gap,
    )


def comparison_csv(report: ComparisonReport) -> str:
    header = ["scenario", *METRIC_COLUMNS, "converged", "iterations", "final_epsilon", "wardrop_gap", "error"]
    lines = [",".join(header)]
    for row in report.rows:
        if row.failed or row.metrics is None:
            cells = [row.name, "", "", "", "", "", "", "", "", row.error or "failed"]
        else:
            m = row.metrics
            cells = [
                row.name,
                repr(m.total_access_time),
                repr(m.total_access_plus_charging),
                repr(m.avg_access_time),
                repr(m.avg_access_plus_charging),
                str(row.converged).lower(),
                str(row.iterations),
                repr(row.final_epsilon),
                repr(row.wardrop_gap),
                "",
            ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_to_dict(report: ComparisonReport) -> dict[str, Any]:
    rows = []
    for row in report.rows:
        entry: dict[str, Any] = {"name": row.name, "failed": row.failed, "error": row.error}
        if row.metrics is not None:
            entry["metrics"] = {
                "total_access_time_days": row.metrics.total_access_time,
                "total_access_plus_charging_days": row.metrics.total_access_plus_charging,
                "avg_access_time_min": row.metrics.avg_access_time,
                "avg_access_plus_charging_hours": row.metrics.avg_access_plus_charging,
                "zero_demand": row.metrics.zero_demand,
            }
            entry["converged"] = row.converged
            entry["iterations"] = row.iterations
            entry["final_epsilon"] = _json_float(row.final_epsilon)
            entry["wardrop_gap"] = row.wardrop_gap
        rows.append(entry)
    return {"rows": rows}


def load_scenarios(path: str | Path) -> list[ScenarioSpec]:
    """Parse a scenario file: {"scenarios": [{"name", "upgrades": [...], "dcfc_service_rate"?}]}."""
    with open(path) as f:
        data = json.load(f)
    raw = data.get("scenarios")
    if not isinstance(raw, list) or not raw:
        raise ValueError("scenario file must contain a non-empty 'scenarios' list")
    specs = []
    for i, entry in enumerate(raw):
        if "name" not in entry or "upgrades" not in entry:
            raise ValueError(f"scenarios[{i}]: 'name' and 'upgrades' are required")
        upgrades = tuple(
            StationUpgrade(str(u["station_id"]), int(u["dcfc_count"])) for u in entry["upgrades"]
        )
        specs.append(
            ScenarioSpec(str(entry["name"]), upgrades, float(entry.get("dcfc_service_rate", 48.0)))
        )
    return specs


def _json_float(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value


def equilibrium_report(result: EquilibriumResult, network: Network) -> dict[str, Any]:
    """JSON-ready solve summary: assignment, station and node reports, system metrics.

    Times carry their unit in the field name; day-to-minute conversion happens
    here and nowhere upstream.
    """
    wq = np.array([d.wait_queue_mdc for d in result.station_delays])
    charge = 1.0 / network.service_rates
    access = network.travel.values + wq[None, :]
    per_node_access = (result.assignment * access).sum(axis=1)
    per_node_total = (result.assignment * (access + charge[None, :])).sum(axis=1)
    metrics = system_metrics(result, network)
    return {
        "converged": result.converged,
        "iterations": result.iterations,
        "final_epsilon": _json_float(result.final_epsilon),
        "wardrop_gap": result.wardrop_gap,
        "assignment": result.assignment.tolist(),
        "station_report": [
            {
                "id": s.id,
                "charger_class": s.charger_class.value,
                "chargers": s.chargers,
                "flow": float(result.flows[j]),
                "rho": d.utilization,
                "wq_days": d.wait_queue_mdc,
                "w_days": d.total_wait_mdc,
                "over_capacity": d.over_capacity,
            }
            for j, (s, d) in enumerate(zip(network.stations, result.station_delays))
        ],
        "node_report": [
            {
                "id": n.id,
                "access_time_min": float(per_node_access[i]) * MINUTES_PER_DAY,
                "total_time_min": float(per_node_total[i]) * MINUTES_PER_DAY,
            }
            for i, n in enumerate(network.nodes)
        ],
        "system_metrics": {
            "total_access_time_days": metrics.total_access_time,
            "total_access_plus_charging_days": metrics.total_access_plus_charging,
            "avg_access_time_min": metrics.avg_access_time,
            "avg_access_plus_charging_hours": metrics.avg_access_plus_charging,
            "zero_demand": metrics.zero_demand,
        },
        "warnings": list(result.warnings),
    }
