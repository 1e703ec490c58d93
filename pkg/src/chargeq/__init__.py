"""Capacitated EV charging assignment at user equilibrium with M/D/C station queues."""

from .calibrate import (
    CalibrationResult,
    CalibrationSpec,
    UnbracketedTargetError,
    calibrate_frequency_factor,
    frequency_curve,
    mean_utilization,
)
from .network import (
    ChargerClass,
    DemandNode,
    Network,
    NetworkValidationError,
    Station,
    TravelTimeMatrix,
    euclidean_travel_times,
    load_network,
    save_network,
    scale_demand,
)
from .queueing import (
    OverCapacityError,
    QueueDelays,
    QueueInput,
    ZeroArrivalError,
    alpha_recursion,
    mdc_queue_wait,
    mmc_queue_wait,
    station_total_wait,
)
from .scenarios import (
    ComparisonReport,
    RankCriterion,
    ScenarioSpec,
    StationUpgrade,
    SystemMetrics,
    apply_upgrade,
    compare_scenarios,
    rank_stations,
    system_metrics,
)
from .simulate import SimConfig, SimResult, simulate_mdc, validate_approximation
from .solver import (
    EquilibriumResult,
    SolverConfig,
    auxiliary_assignment,
    cost_matrix,
    msa_step,
    solve_equilibrium,
    station_flows,
    wardrop_gap,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationResult",
    "CalibrationSpec",
    "ChargerClass",
    "ComparisonReport",
    "DemandNode",
    "EquilibriumResult",
    "Network",
    "NetworkValidationError",
    "OverCapacityError",
    "QueueDelays",
    "QueueInput",
    "RankCriterion",
    "ScenarioSpec",
    "SimConfig",
    "SimResult",
    "SolverConfig",
    "Station",
    "StationUpgrade",
    "SystemMetrics",
    "TravelTimeMatrix",
    "UnbracketedTargetError",
    "ZeroArrivalError",
    "alpha_recursion",
    "apply_upgrade",
    "auxiliary_assignment",
    "calibrate_frequency_factor",
    "compare_scenarios",
    "cost_matrix",
    "euclidean_travel_times",
    "frequency_curve",
    "load_network",
    "mdc_queue_wait",
    "mean_utilization",
    "mmc_queue_wait",
    "msa_step",
    "rank_stations",
    "save_network",
    "scale_demand",
    "simulate_mdc",
    "solve_equilibrium",
    "station_flows",
    "station_total_wait",
    "system_metrics",
    "validate_approximation",
    "wardrop_gap",
]
