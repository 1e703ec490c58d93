"""Seeded simulation of an M/D/C queue, used to validate the analytic approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .queueing import QueueInput, mdc_queue_wait


@dataclass(frozen=True)
class SimConfig:
    """Parameters for one simulation experiment (all times in the same unit)."""

    arrival_rate: float
    service_time: float
    servers: int
    horizon: float
    seed: int
    runs: int = 1

    def __post_init__(self) -> None:
        if self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if self.service_time <= 0:
            raise ValueError(f"service_time must be > 0, got {self.service_time}")
        if self.servers < 1:
            raise ValueError(f"servers must be >= 1, got {self.servers}")
        if self.horizon <= 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class SimResult:
    mean_wait: float
    sample_count: int
    per_run_means: tuple[float, ...]


@dataclass(frozen=True)
class ReplicationTrace:
    """Per-customer record of one replication: Poisson arrivals in [0, horizon]."""

    arrivals: np.ndarray
    starts: np.ndarray
    service_time: float
    horizon: float

    @property
    def waits(self) -> np.ndarray:
        return self.starts - self.arrivals

    @property
    def served_by_horizon(self) -> int:
        return int(np.count_nonzero(self.starts + self.service_time <= self.horizon))

    @property
    def in_system_at_horizon(self) -> int:
        return len(self.arrivals) - self.served_by_horizon


def _poisson_arrivals(rate: float, horizon: float, rng: np.random.Generator) -> np.ndarray:
    if rate <= 0:
        return np.empty(0)
    times: list[np.ndarray] = []
    total = 0.0
    block = max(int(1.2 * rate * horizon) + 16, 64)
    while total <= horizon:
        gaps = rng.exponential(1.0 / rate, size=block)
        chunk = total + np.cumsum(gaps)
        times.append(chunk)
        total = chunk[-1]
    arrivals = np.concatenate(times)
    return arrivals[arrivals <= horizon]


def replication_trace(cfg: SimConfig, run_index: int = 0) -> ReplicationTrace:
    """Simulate one replication (seed = cfg.seed + run_index) and return its trace.

    FIFO, C identical servers, deterministic service, infinite buffer, empty
    start. With equal deterministic service times the earliest-free server
    rotates cyclically through the C servers, so customer n enters service at
    max(arrival_n, start_{n-C} + s): each length-C stride of the arrival
    sequence obeys a Lindley-type recursion, solved here in closed form as a
    running maximum. Start times are identical to an event-list engine that
    processes service completions before simultaneous arrivals.
    """
    rng = np.random.default_rng(cfg.seed + run_index)
    arrivals = _poisson_arrivals(cfg.arrival_rate, cfg.horizon, rng)
    starts = np.empty_like(arrivals)
    s = cfg.service_time
    for lane in range(min(cfg.servers, len(arrivals))):
        t = arrivals[lane :: cfg.servers]
        steps = s * np.arange(len(t))
        starts[lane :: cfg.servers] = steps + np.maximum.accumulate(t - steps)
    return ReplicationTrace(arrivals, starts, s, cfg.horizon)


def simulate_mdc(cfg: SimConfig) -> SimResult:
    """Mean time-in-queue over customers entering service within the horizon.

    Replications use seeds cfg.seed, cfg.seed + 1, ... and are reduced by the
    arithmetic mean of per-run means. Customers still queued at the horizon
    are excluded (counting them would bias the estimate toward short waits).
    """
    per_run: list[float] = []
    samples = 0
    for r in range(cfg.runs):
        trace = replication_trace(cfg, r)
        counted = trace.starts <= cfg.horizon
        n = int(np.count_nonzero(counted))
        samples += n
        per_run.append(float(trace.waits[counted].mean()) if n else 0.0)
    return SimResult(
        mean_wait=float(np.mean(per_run)),
        sample_count=samples,
        per_run_means=tuple(per_run),
    )


@dataclass(frozen=True)
class ValidationRow:
    """One (rho, C) cell of the approximation-vs-simulation error table."""

    rho: float
    servers: int
    approx: float
    sim_mean: float
    abs_err: float
    rel_err: float | None


def validate_approximation(
    rho_grid: Sequence[float], c_grid: Sequence[int], cfg_template: SimConfig
) -> list[ValidationRow]:
    """Approximation error against simulation on a (rho, C) grid.

    Service time is taken from cfg_template (the reference protocol fixes the
    service rate to 1.0); arrival rate per cell is rho * C / service_time.
    Relative error is None when the simulated mean is zero.
    """
    mu = 1.0 / cfg_template.service_time
    rows = []
    for c in c_grid:
        for rho in rho_grid:
            if not 0.0 < rho < 1.0:
                raise ValueError(f"rho grid values must lie in (0, 1), got {rho}")
            lam = rho * mu * c
            approx = mdc_queue_wait(QueueInput(lam, mu, c))
            sim = simulate_mdc(
                SimConfig(
                    arrival_rate=lam,
                    service_time=cfg_template.service_time,
                    servers=c,
                    horizon=cfg_template.horizon,
                    seed=cfg_template.seed,
                    runs=cfg_template.runs,
                )
            )
            abs_err = abs(approx - sim.mean_wait)
            rel_err = abs_err / sim.mean_wait if sim.mean_wait > 0 else None
            rows.append(ValidationRow(rho, c, approx, sim.mean_wait, abs_err, rel_err))
    return rows


VALIDATION_CSV_COLUMNS = ("rho", "servers", "approx", "sim_mean", "abs_err", "rel_err")


def validation_csv(rows: Sequence[ValidationRow]) -> str:
    lines = [",".join(VALIDATION_CSV_COLUMNS)]
    for r in rows:
        rel = "" if r.rel_err is None or math.isnan(r.rel_err) else repr(r.rel_err)
        lines.append(f"{r.rho!r},{r.servers},{r.approx!r},{r.sim_mean!r},{r.abs_err!r},{rel}")
    return "\n".join(lines) + "\n"
