"""Fit the charging-frequency factor so equilibrium utilization matches an observed target."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Network, scale_demand
from .solver import (
    CancelCheck,
    EquilibriumResult,
    ProgressCallback,
    SolverConfig,
    solve_equilibrium,
)


class UnbracketedTargetError(ValueError):
    """The target utilization is not bracketed by the factor bounds."""


class CalibrationError(RuntimeError):
    """Bisection exhausted its evaluation budget before reaching tolerance."""


@dataclass(frozen=True)
class CalibrationSpec:
    target_utilization: float
    factor_bounds: tuple[float, float] = (1.0 / 30.0, 2.0)  # 0.5 to 30 days per charge
    tolerance: float = 0.001
    max_evals: int = 60

    def __post_init__(self) -> None:
        if not 0.0 < self.target_utilization < 1.0:
            raise ValueError(f"target_utilization must be in (0, 1), got {self.target_utilization}")
        low, high = self.factor_bounds
        if not 0.0 < low < high:
            raise ValueError(f"factor_bounds must satisfy 0 < low < high, got {self.factor_bounds}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_evals < 3:
            raise ValueError(f"max_evals must be >= 3, got {self.max_evals}")


@dataclass(frozen=True)
class CalibrationResult:
    factor: float  # charges/day per EV
    days_per_charge: float
    utilization: float
    evaluations: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class CurvePoint:
    factor: float
    days_per_charge: float
    mean_utilization: float


def mean_utilization(result: EquilibriumResult, charger_counts: np.ndarray | None = None) -> float:
    """Average station utilization ratio; unweighted unless charger counts are given."""
    rho = np.array([d.utilization for d in result.station_delays])
    if charger_counts is None:
        return float(rho.mean())
    weights = np.asarray(charger_counts, dtype=float)
    return float((rho * weights).sum() / weights.sum())


def calibrate_frequency_factor(
    network: Network,
    spec: CalibrationSpec,
    solver_cfg: SolverConfig | None = None,
    progress: ProgressCallback | None = None,
    should_cancel: CancelCheck | None = None,
) -> CalibrationResult:
    """Bisect the charges/day factor until mean utilization hits the target.

    Utilization is empirically monotone in the factor but assignment shifts
    can dent that locally, so each midpoint is checked against the bracket
    endpoints: a midpoint outside their range attaches a warning and the
    search continues on whichever sub-bracket still straddles the target.

    progress receives a cumulative iteration count across the bisection's
    equilibrium solves; should_cancel is polled inside each solve.
    """
    solver_cfg = solver_cfg or SolverConfig()
    evals = 0
    done_iterations = 0
    warnings_seen: list[str] = []

    def utilization_at(factor: float) -> float:
        nonlocal evals, done_iterations
        evals += 1
        sub_progress = None
        if progress is not None:
            base = done_iterations
            sub_progress = lambda it, eps, gap: progress(base + it, eps, gap)  # noqa: E731
        result = solve_equilibrium(
            scale_demand(network, factor), solver_cfg, sub_progress, should_cancel
        )
        done_iterations += result.iterations
        return mean_utilization(result)

    low, high = spec.factor_bounds
    u_low = utilization_at(low)
    if abs(u_low - spec.target_utilization) <= spec.tolerance:
        return CalibrationResult(low, 1.0 / low, u_low, evals, tuple(warnings_seen))
    u_high = utilization_at(high)
    if abs(u_high - spec.target_utilization) <= spec.tolerance:
        return CalibrationResult(high, 1.0 / high, u_high, evals, tuple(warnings_seen))
    if not (u_low < spec.target_utilization < u_high):
        raise UnbracketedTargetError(
            f"target utilization {spec.target_utilization} is not bracketed by "
            f"[{u_low:.6g}, {u_high:.6g}] at factor bounds {spec.factor_bounds}; widen the bounds"
        )

    while evals < spec.max_evals:
        mid = 0.5 * (low + high)
        u_mid = utilization_at(mid)
        if abs(u_mid - spec.target_utilization) <= spec.tolerance:
            return CalibrationResult(mid, 1.0 / mid, u_mid, evals, tuple(warnings_seen))
        lo_band, hi_band = min(u_low, u_high), max(u_low, u_high)
        if not lo_band <= u_mid <= hi_band:
            warnings_seen.append(
                f"utilization {u_mid:.6g} at factor {mid:.6g} lies outside the bracket "
                f"range [{lo_band:.6g}, {hi_band:.6g}]; continuing on the straddling sub-bracket"
            )
        if (u_low - spec.target_utilization) * (u_mid - spec.target_utilization) < 0:
            high, u_high = mid, u_mid
        else:
            low, u_low = mid, u_mid

    raise CalibrationError(
        f"no factor within tolerance {spec.tolerance} after {evals} equilibrium solves; "
        "widen tolerance or raise max_evals"
    )


def frequency_curve(
    network: Network, factor_grid: list[float], solver_cfg: SolverConfig | None = None
) -> list[CurvePoint]:
    """Mean utilization at each charging-frequency factor, sorted by factor."""
    solver_cfg = solver_cfg or SolverConfig()
    if any(f <= 0 for f in factor_grid):
        raise ValueError("all factors must be > 0")
    points = []
    for factor in sorted(factor_grid):
        result = solve_equilibrium(scale_demand(network, factor), solver_cfg)
        points.append(CurvePoint(factor, 1.0 / factor, mean_utilization(result)))
    return points


def curve_csv(points: list[CurvePoint]) -> str:
    lines = ["days_per_charge,mean_utilization"]
    lines += [f"{p.days_per_charge!r},{p.mean_utilization!r}" for p in points]
    return "\n".join(lines) + "\n"
