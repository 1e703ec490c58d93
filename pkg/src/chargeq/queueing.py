"""Station congestion: M/M/C and M/D/C queue delays with an over-capacity fallback.

All rates are vehicles/day and all waits are days/vehicle. Unit conversion to
minutes or hours happens only at the reporting boundary, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this arrival rate a station is treated as empty (no queue forms).
ZERO_ARRIVAL_EPS = 1e-12

# The alpha recursion grows factorially when service is fast relative to
# arrivals; past this the multi-server wait is zero at reportable precision.
ALPHA_OVERFLOW_GUARD = 1e100


class ZeroArrivalError(ValueError):
    """A steady-state queue formula was asked for an empty station (lambda = 0)."""


class OverCapacityError(ValueError):
    """A steady-state queue formula was asked for rho >= 1 (no steady state)."""


@dataclass(frozen=True)
class QueueInput:
    """One station's queue parameters: arrivals/day, per-charger rate/day, charger count."""

    arrival_rate: float
    service_rate: float
    servers: int

    def __post_init__(self) -> None:
        if self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if self.service_rate <= 0:
            raise ValueError(f"service_rate must be > 0, got {self.service_rate}")
        if self.servers < 1:
            raise ValueError(f"servers must be >= 1, got {self.servers}")

    @property
    def utilization(self) -> float:
        return self.arrival_rate / (self.service_rate * self.servers)


@dataclass(frozen=True)
class QueueDelays:
    """Steady-state delays (days/vehicle) for one station at a given load."""

    wait_queue_mmc: float
    wait_queue_mdc: float
    total_wait_mdc: float
    utilization: float
    over_capacity: bool


def alpha_recursion(q: QueueInput) -> float:
    """Recursive term of the multi-server wait: a_1 = 1, a_i = 1 + (mu/lam)(i-1)a_{i-1}.

    Returns inf once an intermediate value passes the overflow guard; plugged
    into the wait formula this yields an exactly-zero queue delay, the correct
    limit in that regime.
    """
    if q.arrival_rate == 0.0:
        raise ZeroArrivalError("alpha recursion is undefined for arrival_rate = 0")
    ratio = q.service_rate / q.arrival_rate
    alpha = 1.0
    for i in range(2, q.servers + 1):
        alpha = 1.0 + ratio * (i - 1) * alpha
        if alpha > ALPHA_OVERFLOW_GUARD:
            return math.inf
    return alpha


def mmc_queue_wait(q: QueueInput) -> float:
    """Expected M/M/C time-in-queue (days/vehicle); requires rho < 1."""
    if q.arrival_rate == 0.0:
        raise ZeroArrivalError("M/M/C wait is zero for arrival_rate = 0; short-circuit upstream")
    rho = q.utilization
    if rho >= 1.0:
        raise OverCapacityError(f"rho = {rho:.6g} >= 1; use the deterministic fallback")
    lam = q.arrival_rate
    surplus = q.servers * q.service_rate - lam
    return lam / (surplus**2 * (alpha_recursion(q) + lam / surplus))


def _mdc_correction(rho: float, servers: int) -> float:
    # deterministic-service multiplier applied to half the M/M/C wait
    c = servers
    return 1.0 + (1.0 - rho) * (c - 1) * (math.sqrt(4.0 + 5.0 * c) - 2.0) / (16.0 * rho * c)


def mdc_queue_wait(q: QueueInput) -> float:
    """Expected M/D/C time-in-queue: half the M/M/C wait times a C-dependent correction.

    For C = 1 the correction is exactly 1 and the result coincides with the
    exact single-server deterministic-service delay rho / (2 mu (1 - rho)).
    """
    wq_mmc = mmc_queue_wait(q)
    if wq_mmc == 0.0:
        return 0.0
    return wq_mmc / 2.0 * _mdc_correction(q.utilization, q.servers)


def station_total_wait(q: QueueInput) -> QueueDelays:
    """Total expected wait (queue + charging) for any load level; always finite.

    Empty stations wait only the charging time. Below saturation the M/D/C
    approximation applies; at or above saturation (rho >= 1) the worst-case
    deterministic bound lambda / (2 mu C) replaces the queue delay.
    """
    rho = q.utilization
    charge_time = 1.0 / q.service_rate
    if q.arrival_rate <= ZERO_ARRIVAL_EPS:
        return QueueDelays(0.0, 0.0, charge_time, rho, False)
    if rho < 1.0:
        wq_m = mmc_queue_wait(q)
        wq_d = 0.0 if wq_m == 0.0 else wq_m / 2.0 * _mdc_correction(rho, q.servers)
        return QueueDelays(wq_m, wq_d, wq_d + charge_time, rho, False)
    wq = q.arrival_rate / (2.0 * q.service_rate * q.servers)
    return QueueDelays(wq, wq, wq + charge_time, rho, True)


def station_waits_bulk(
    flows: np.ndarray, service_rates: np.ndarray, servers: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized station_total_wait over all stations at once.

    Returns (wait_queue_mdc, total_wait_mdc, utilization, over_capacity)
    arrays. Agrees with the scalar path to the last bit; used in the solver
    hot loop where per-station Python calls would dominate runtime.
    """
    lam = np.asarray(flows, dtype=float)
    mu = np.asarray(service_rates, dtype=float)
    k = np.asarray(servers)
    rho = lam / (mu * k)
    wq = np.zeros_like(lam)

    nonzero = lam > ZERO_ARRIVAL_EPS
    over = (rho >= 1.0) & nonzero
    wq[over] = lam[over] / (2.0 * mu[over] * k[over])

    busy = nonzero & ~over
    if np.any(busy):
        lam_b, mu_b, k_b, rho_b = lam[busy], mu[busy], k[busy], rho[busy]
        ratio = mu_b / lam_b
        alpha = np.ones_like(lam_b)
        with np.errstate(over="ignore"):  # overflow lands in the guard below
            for i in range(2, int(k_b.max()) + 1):
                grow = k_b >= i
                alpha[grow] = 1.0 + ratio[grow] * (i - 1) * alpha[grow]
        alpha[alpha > ALPHA_OVERFLOW_GUARD] = np.inf
        surplus = k_b * mu_b - lam_b
        wq_m = lam_b / (surplus**2 * (alpha + lam_b / surplus))
        corr = 1.0 + (1.0 - rho_b) * (k_b - 1) * (np.sqrt(4.0 + 5.0 * k_b) - 2.0) / (16.0 * rho_b * k_b)
        wq_d = np.where(wq_m == 0.0, 0.0, wq_m / 2.0 * corr)
        wq[busy] = wq_d

    total = wq + 1.0 / mu
    return wq, total, rho, over
