"""Request and response models for the HTTP API. All raw times are in days."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from ..calibrate import CalibrationSpec
from ..network import Network, network_from_dict
from ..scenarios import ScenarioSpec, StationUpgrade
from ..solver import SolverConfig


class NodePayload(BaseModel):
    id: str
    x: float
    y: float
    ev_count: int = Field(ge=0)
    arrival_rate: float | None = Field(default=None, ge=0)


class StationPayload(BaseModel):
    id: str
    x: float
    y: float
    chargers: int = Field(ge=1)
    charger_class: Literal["LEVEL2", "DCFC", "CUSTOM"] = "CUSTOM"
    service_rate: float | None = Field(default=None, gt=0)


class NetworkPayload(BaseModel):
    distance_mode: Literal["euclidean", "haversine", "matrix"]
    speed: float | None = Field(default=None, gt=0)
    nodes: list[NodePayload] = Field(min_length=1)
    stations: list[StationPayload] = Field(min_length=1)
    travel_matrix: list[list[float]] | None = None

    def to_network(self) -> Network:
        return network_from_dict(self.model_dump(exclude_none=True))


class SolverOptions(BaseModel):
    tolerance: float = Field(default=1e-4, gt=0)
    max_iterations: int = Field(default=500_000, ge=1)
    weight_access: float = Field(default=1.0, ge=0)
    weight_charging: float = Field(default=1.0, ge=0)
    gap_check_period: int = Field(default=1000, ge=1)
    seed: int = 42  # accepted for reproducibility bookkeeping; the solver is deterministic

    @model_validator(mode="after")
    def _some_weight(self) -> "SolverOptions":
        if self.weight_access == 0 and self.weight_charging == 0:
            raise ValueError("at least one of weight_access/weight_charging must be positive")
        return self

    def to_config(self) -> SolverConfig:
        return SolverConfig(
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            weight_access=self.weight_access,
            weight_charging=self.weight_charging,
            gap_check_period=self.gap_check_period,
        )


class SolveRequest(BaseModel):
    network: NetworkPayload
    options: SolverOptions = SolverOptions()


class CalibrateRequest(BaseModel):
    network: NetworkPayload
    target_utilization: float = Field(gt=0, lt=1)
    factor_bounds: tuple[float, float] = (1.0 / 30.0, 2.0)
    tolerance: float = Field(default=0.001, gt=0)
    max_evals: int = Field(default=60, ge=3)
    options: SolverOptions = SolverOptions()

    def to_spec(self) -> CalibrationSpec:
        return CalibrationSpec(
            target_utilization=self.target_utilization,
            factor_bounds=self.factor_bounds,
            tolerance=self.tolerance,
            max_evals=self.max_evals,
        )


class UpgradePayload(BaseModel):
    station_id: str
    dcfc_count: int = Field(ge=1)


class ScenarioPayload(BaseModel):
    name: str
    upgrades: list[UpgradePayload] = Field(min_length=1)
    dcfc_service_rate: float = Field(default=48.0, gt=0)

    def to_spec(self) -> ScenarioSpec:
        return ScenarioSpec(
            self.name,
            tuple(StationUpgrade(u.station_id, u.dcfc_count) for u in self.upgrades),
            self.dcfc_service_rate,
        )


class CompareRequest(BaseModel):
    network: NetworkPayload
    scenarios: list[ScenarioPayload] = Field(min_length=1)
    options: SolverOptions = SolverOptions()


class JobCreated(BaseModel):
    job_id: str


class ProgressView(BaseModel):
    iteration: int
    epsilon: float | None
    wardrop_gap: float | None


class JobView(BaseModel):
    job_id: str
    kind: str
    status: str
    progress: ProgressView
    error: str | None
    created_at: float


class NetworkCheck(BaseModel):
    ok: bool
    nodes: int
    stations: int
