"""User-equilibrium assignment of charging demand to stations.

Derivative-free fixed-point iteration: an all-or-nothing auxiliary assignment
on current costs is blended into the running assignment with step 1/(n+1)
(successive averages), then station queue delays and costs are refreshed from
the new flows. Iteration stops when the Frobenius norm of consecutive
assignment changes drops below the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .network import Network, Station
from .queueing import QueueDelays, QueueInput, station_total_wait, station_waits_bulk

ProgressCallback = Callable[[int, float, float], None]
CancelCheck = Callable[[], bool]


class SolverNumericError(ArithmeticError):
    """Non-finite cost encountered mid-solve; carries the iteration index."""

    def __init__(self, iteration: int, message: str):
        self.iteration = iteration
        super().__init__(f"iteration {iteration}: {message}")


class SolverCancelled(RuntimeError):
    """Raised between iterations when the caller's cancel check fires."""


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-4
    max_iterations: int = 500_000
    weight_access: float = 1.0
    weight_charging: float = 1.0
    gap_check_period: int = 1000

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.weight_access < 0 or self.weight_charging < 0:
            raise ValueError("weights must be >= 0")
        if self.weight_access == 0 and self.weight_charging == 0:
            raise ValueError("at least one weight must be positive")
        if self.gap_check_period < 1:
            raise ValueError(f"gap_check_period must be >= 1, got {self.gap_check_period}")


@dataclass
class EquilibriumResult:
    """Final assignment plus the next-iteration costs and diagnostics.

    assignment is row-stochastic |N| x |S|; costs is the weighted cost matrix
    evaluated at the final flows (i.e. what iteration n+1 would have seen).
    """

    assignment: np.ndarray
    flows: np.ndarray
    costs: np.ndarray
    station_delays: list[QueueDelays]
    iterations: int
    final_epsilon: float
    wardrop_gap: float
    converged: bool
    warnings: list[str] = field(default_factory=list)


def cost_matrix(
    travel: np.ndarray,
    delays: Sequence[QueueDelays],
    stations: Sequence[Station],
    cfg: SolverConfig,
) -> np.ndarray:
    """Per-(node, station) cost: w_acc * (travel + queue delay) + w_char * charging time.

    With both weights 1 this is exactly travel time plus total station wait.
    """
    wq = np.array([d.wait_queue_mdc for d in delays])
    charge = 1.0 / np.array([s.service_rate for s in stations])
    return _cost_arrays(np.asarray(travel, dtype=float), wq, charge, cfg)


def _cost_arrays(
    travel: np.ndarray, wq: np.ndarray, charge_time: np.ndarray, cfg: SolverConfig
) -> np.ndarray:
    return cfg.weight_access * (travel + wq[None, :]) + cfg.weight_charging * charge_time[None, :]


def auxiliary_assignment(costs: np.ndarray) -> np.ndarray:
    """All-or-nothing assignment: each row fully on its cheapest station.

    Ties go to the lowest station index.
    """
    if not np.all(np.isfinite(costs)):
        raise ValueError("cost matrix must be finite")
    y = np.zeros_like(costs)
    y[np.arange(costs.shape[0]), np.argmin(costs, axis=1)] = 1.0
    return y


def msa_step(x_prev: np.ndarray, y: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    """Successive-averages update X = Y/(n+1) + n X_prev/(n+1); returns (X, epsilon).

    epsilon is the Frobenius norm of the assignment change.
    """
    if n < 1:
        raise ValueError(f"msa_step requires n >= 1, got {n}")
    x = y / (n + 1) + x_prev * (n / (n + 1))
    return x, float(np.linalg.norm(x - x_prev))


def station_flows(assignment: np.ndarray, demand: np.ndarray) -> np.ndarray:
    """Arrival rate absorbed by each station: A_j = sum_i lambda_i X_ij."""
    return np.asarray(demand, dtype=float) @ np.asarray(assignment, dtype=float)


def _gap(assignment: np.ndarray, costs: np.ndarray, demand: np.ndarray) -> float:
    # flow-weighted excess cost over the per-node minimum, normalized
    best = costs.min(axis=1)
    incurred = float(demand @ (assignment * costs).sum(axis=1))
    ideal = float(demand @ best)
    if ideal <= 0.0:
        return 0.0
    return (incurred - ideal) / ideal


def wardrop_gap(result: EquilibriumResult, demand: np.ndarray) -> float:
    """Relative excess of incurred cost over the cheapest attainable; 0 exactly at UE."""
    return _gap(result.assignment, result.costs, demand)


def solve_equilibrium(
    network: Network,
    cfg: SolverConfig | None = None,
    progress: ProgressCallback | None = None,
    should_cancel: CancelCheck | None = None,
) -> EquilibriumResult:
    """Iterate to a charging-station access user equilibrium.

    Costs start as pure travel times, so the first auxiliary assignment is
    nearest-station-by-time. `progress` (iteration, epsilon, gap) and
    `should_cancel` are polled every cfg.gap_check_period iterations; a
    positive cancel check raises SolverCancelled. Deterministic: identical
    network and config produce bit-identical results.
    """
    cfg = cfg or SolverConfig()
    d = network.travel.values
    lam = network.demand
    mu = network.service_rates
    k = network.charger_counts
    charge_time = 1.0 / mu

    result_warnings: list[str] = []
    total_demand = float(lam.sum())
    if total_demand > network.total_capacity:
        result_warnings.append(
            f"total demand {total_demand:.6g}/day exceeds station capacity "
            f"{network.total_capacity:.6g}/day; some stations stay over capacity at equilibrium"
        )

    costs = d.copy()  # pure travel time: the first assignment is nearest-station
    x = np.zeros_like(d)
    eps = np.inf
    n = 0
    while eps > cfg.tolerance and n < cfg.max_iterations:
        y = auxiliary_assignment(costs)
        if n == 0:
            x = y
        else:
            x, eps = msa_step(x, y, n)
        flows = station_flows(x, lam)
        wq, _, _, _ = station_waits_bulk(flows, mu, k)
        costs = _cost_arrays(d, wq, charge_time, cfg)
        if not np.all(np.isfinite(costs)):
            raise SolverNumericError(n, "non-finite cost matrix")
        n += 1
        if n % cfg.gap_check_period == 0:
            if should_cancel is not None and should_cancel():
                raise SolverCancelled(f"cancelled at iteration {n}")
            if progress is not None:
                progress(n, float(eps), _gap(x, costs, lam))

    flows = station_flows(x, lam)
    delays = [
        station_total_wait(QueueInput(float(a), float(m), int(c)))
        for a, m, c in zip(flows, mu, k)
    ]
    result = EquilibriumResult(
        assignment=x,
        flows=flows,
        costs=costs,
        station_delays=delays,
        iterations=n,
        final_epsilon=float(eps) if np.isfinite(eps) else float("inf"),
        wardrop_gap=_gap(x, costs, lam),
        converged=bool(eps <= cfg.tolerance),
        warnings=result_warnings,
    )
    if progress is not None:
        progress(n, result.final_epsilon, result.wardrop_gap)
    _check_conservation(result, lam)
    return result


def _check_conservation(result: EquilibriumResult, demand: np.ndarray) -> None:
    total = float(demand.sum())
    assigned = float(result.flows.sum())
    if total > 0 and abs(assigned - total) > 1e-6 * total:
        raise SolverNumericError(
            result.iterations, f"flow conservation violated: {assigned} != {total}"
        )
