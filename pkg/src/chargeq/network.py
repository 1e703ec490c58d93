"""Problem-instance data model: demand nodes, stations, travel-time matrix, ingestion.

Networks are immutable after construction; every mutation-style operation
returns a new instance.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Sequence

import numpy as np

# Charging-time presets: 4 h/veh for Level 2, 0.5 h/veh for DC fast chargers.
CLASS_SERVICE_RATES = {"LEVEL2": 6.0, "DCFC": 48.0}

EARTH_RADIUS_KM = 6371.0088


class ChargerClass(str, Enum):
    LEVEL2 = "LEVEL2"
    DCFC = "DCFC"
    CUSTOM = "CUSTOM"


class MatrixProvenance(str, Enum):
    EXTERNAL = "EXTERNAL"
    EUCLIDEAN = "EUCLIDEAN"  # any coordinate-derived matrix (planar or great-circle)


class NetworkValidationError(ValueError):
    """Structured ingestion failure naming the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class DemandNode:
    id: str
    x: float
    y: float
    ev_count: int
    arrival_rate: float  # vehicles/day needing to recharge

    def __post_init__(self) -> None:
        if self.ev_count < 0:
            raise NetworkValidationError(f"node {self.id!r} ev_count", "must be >= 0")
        if self.arrival_rate < 0:
            raise NetworkValidationError(f"node {self.id!r} arrival_rate", "must be >= 0")


@dataclass(frozen=True)
class Station:
    id: str
    x: float
    y: float
    chargers: int
    service_rate: float  # vehicles/day per charger
    charger_class: ChargerClass = ChargerClass.CUSTOM

    def __post_init__(self) -> None:
        if self.chargers < 1:
            raise NetworkValidationError(f"station {self.id!r} chargers", "must be >= 1")
        if self.service_rate <= 0:
            raise NetworkValidationError(f"station {self.id!r} service_rate", "must be > 0")


@dataclass(frozen=True, eq=False)
class TravelTimeMatrix:
    """|N| x |S| one-way travel times in days, plus how the matrix was obtained.

    speed/metric are retained for coordinate-derived matrices so a network can
    be saved and reloaded without changing how its travel times are defined.
    """

    values: np.ndarray
    provenance: MatrixProvenance
    speed: float | None = None
    metric: str | None = None  # "euclidean" | "haversine" when coordinate-derived

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2:
            raise NetworkValidationError("travel_matrix", "must be two-dimensional")
        if not np.all(np.isfinite(vals)):
            raise NetworkValidationError("travel_matrix", "entries must be finite")
        if np.any(vals < 0):
            raise NetworkValidationError("travel_matrix", "entries must be >= 0")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TravelTimeMatrix):
            return NotImplemented
        return (
            self.provenance == other.provenance
            and self.speed == other.speed
            and self.metric == other.metric
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )


@dataclass(frozen=True)
class Network:
    nodes: tuple[DemandNode, ...]
    stations: tuple[Station, ...]
    travel: TravelTimeMatrix

    def __post_init__(self) -> None:
        if not self.nodes:
            raise NetworkValidationError("nodes", "at least one demand node is required")
        if not self.stations:
            raise NetworkValidationError("stations", "at least one station is required")
        _check_unique_ids("nodes", [n.id for n in self.nodes])
        _check_unique_ids("stations", [s.id for s in self.stations])
        if self.travel.values.shape != (len(self.nodes), len(self.stations)):
            raise NetworkValidationError(
                "travel_matrix",
                f"shape {self.travel.values.shape} does not match "
                f"{len(self.nodes)} nodes x {len(self.stations)} stations",
            )
        if self.total_capacity <= 0:
            raise NetworkValidationError("stations", "total capacity must be > 0")

    @property
    def demand(self) -> np.ndarray:
        return np.array([n.arrival_rate for n in self.nodes])

    @property
    def service_rates(self) -> np.ndarray:
        return np.array([s.service_rate for s in self.stations])

    @property
    def charger_counts(self) -> np.ndarray:
        return np.array([s.chargers for s in self.stations])

    @property
    def total_capacity(self) -> float:
        return float(sum(s.service_rate * s.chargers for s in self.stations))

    def station_index(self, station_id: str) -> int:
        for j, s in enumerate(self.stations):
            if s.id == station_id:
                return j
        raise KeyError(f"unknown station id {station_id!r}")


def _check_unique_ids(field: str, ids: Sequence[str]) -> None:
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            raise NetworkValidationError(field, f"duplicate id {i!r}")
        seen.add(i)


def euclidean_travel_times(
    nodes: Sequence[DemandNode], stations: Sequence[Station], speed: float
) -> TravelTimeMatrix:
    """Straight-line one-way travel times: pairwise distance / speed (days)."""
    if speed <= 0:
        raise NetworkValidationError("speed", "must be > 0")
    nx = np.array([[n.x, n.y] for n in nodes])
    sx = np.array([[s.x, s.y] for s in stations])
    dist = np.hypot(nx[:, None, 0] - sx[None, :, 0], nx[:, None, 1] - sx[None, :, 1])
    return TravelTimeMatrix(dist / speed, MatrixProvenance.EUCLIDEAN, speed, "euclidean")


def haversine_travel_times(
    nodes: Sequence[DemandNode], stations: Sequence[Station], speed: float
) -> TravelTimeMatrix:
    """Great-circle travel times for lon/lat coordinates; speed is km/day."""
    if speed <= 0:
        raise NetworkValidationError("speed", "must be > 0")
    nlon = np.radians([n.x for n in nodes])[:, None]
    nlat = np.radians([n.y for n in nodes])[:, None]
    slon = np.radians([s.x for s in stations])[None, :]
    slat = np.radians([s.y for s in stations])[None, :]
    h = np.sin((slat - nlat) / 2) ** 2 + np.cos(nlat) * np.cos(slat) * np.sin((slon - nlon) / 2) ** 2
    dist_km = 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(h))
    return TravelTimeMatrix(dist_km / speed, MatrixProvenance.EUCLIDEAN, speed, "haversine")


def _parse_node(i: int, raw: dict[str, Any]) -> tuple[DemandNode, bool]:
    field = f"nodes[{i}]"
    for key in ("id", "x", "y", "ev_count"):
        if key not in raw:
            raise NetworkValidationError(f"{field}.{key}", "missing required field")
    ev_count = raw["ev_count"]
    if not isinstance(ev_count, int) or isinstance(ev_count, bool):
        raise NetworkValidationError(f"{field}.ev_count", "must be an integer")
    explicit = "arrival_rate" in raw and raw["arrival_rate"] is not None
    # one charge per EV per day unless stated; rescale via scale_demand/calibration
    rate = float(raw["arrival_rate"]) if explicit else float(ev_count)
    node = DemandNode(str(raw["id"]), float(raw["x"]), float(raw["y"]), ev_count, rate)
    return node, explicit


def _parse_station(i: int, raw: dict[str, Any]) -> Station:
    field = f"stations[{i}]"
    for key in ("id", "x", "y", "chargers"):
        if key not in raw:
            raise NetworkValidationError(f"{field}.{key}", "missing required field")
    chargers = raw["chargers"]
    if not isinstance(chargers, int) or isinstance(chargers, bool):
        raise NetworkValidationError(f"{field}.chargers", "must be an integer")
    cls_name = raw.get("charger_class", "CUSTOM")
    try:
        cls = ChargerClass(cls_name)
    except ValueError:
        raise NetworkValidationError(
            f"{field}.charger_class", f"unknown class {cls_name!r}"
        ) from None
    rate = raw.get("service_rate")
    if rate is None:
        if cls.value not in CLASS_SERVICE_RATES:
            raise NetworkValidationError(
                f"{field}.service_rate", "required when charger_class is CUSTOM"
            )
        rate = CLASS_SERVICE_RATES[cls.value]
    return Station(str(raw["id"]), float(raw["x"]), float(raw["y"]), chargers, float(rate), cls)


def network_from_dict(data: dict[str, Any], base_dir: Path | None = None) -> Network:
    """Build and validate a Network from the JSON document structure."""
    mode = data.get("distance_mode")
    if mode not in ("euclidean", "haversine", "matrix"):
        raise NetworkValidationError(
            "distance_mode", f"must be 'euclidean', 'haversine' or 'matrix', got {mode!r}"
        )

    raw_nodes = data.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise NetworkValidationError("nodes", "must be a non-empty list")
    raw_stations = data.get("stations")
    if not isinstance(raw_stations, list) or not raw_stations:
        raise NetworkValidationError("stations", "must be a non-empty list")

    parsed = [_parse_node(i, n) for i, n in enumerate(raw_nodes)]
    nodes = [p[0] for p in parsed]
    overridden = [n.id for (n, explicit) in parsed if explicit and n.ev_count > 0]
    if overridden:
        warnings.warn(
            f"nodes {overridden[:5]} give an explicit arrival_rate; it overrides "
            "the ev_count-derived demand",
            stacklevel=2,
        )
    stations = [_parse_station(i, s) for i, s in enumerate(raw_stations)]

    if mode == "matrix":
        if data.get("travel_matrix") is not None:
            values = np.asarray(data["travel_matrix"], dtype=float)
        elif data.get("travel_matrix_csv"):
            csv_path = Path(data["travel_matrix_csv"])
            if not csv_path.is_absolute() and base_dir is not None:
                csv_path = base_dir / csv_path
            values = _read_matrix_csv(csv_path, nodes, stations)
        else:
            raise NetworkValidationError(
                "travel_matrix", "distance_mode 'matrix' requires travel_matrix or travel_matrix_csv"
            )
        if values.ndim != 2 or values.shape != (len(nodes), len(stations)):
            raise NetworkValidationError(
                "travel_matrix",
                f"shape {values.shape} does not match {len(nodes)} nodes x {len(stations)} stations",
            )
        travel = TravelTimeMatrix(values, MatrixProvenance.EXTERNAL)
    else:
        if data.get("travel_matrix") is not None:
            raise NetworkValidationError(
                "travel_matrix", f"only valid with distance_mode 'matrix', not {mode!r}"
            )
        speed = data.get("speed")
        if speed is None:
            raise NetworkValidationError("speed", f"required for distance_mode {mode!r}")
        speed = float(speed)
        if speed <= 0:
            raise NetworkValidationError("speed", "must be > 0")
        build = euclidean_travel_times if mode == "euclidean" else haversine_travel_times
        travel = build(nodes, stations, speed)

    return Network(tuple(nodes), tuple(stations), travel)


def _read_matrix_csv(path: Path, nodes: Sequence[DemandNode], stations: Sequence[Station]) -> np.ndarray:
    if not path.exists():
        raise NetworkValidationError("travel_matrix_csv", f"file not found: {path}")
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise NetworkValidationError("travel_matrix_csv", "empty file")
    header = [h.strip() for h in rows[0][1:]]
    station_ids = [s.id for s in stations]
    if header != station_ids:
        raise NetworkValidationError(
            "travel_matrix_csv", f"header station ids {header} do not match network {station_ids}"
        )
    by_node: dict[str, list[float]] = {}
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        node_id = row[0].strip()
        if len(row) - 1 != len(station_ids):
            raise NetworkValidationError(
                "travel_matrix_csv", f"line {line_no}: expected {len(station_ids)} values"
            )
        try:
            by_node[node_id] = [float(v) for v in row[1:]]
        except ValueError:
            raise NetworkValidationError(
                "travel_matrix_csv", f"line {line_no}: non-numeric entry"
            ) from None
    node_ids = [n.id for n in nodes]
    missing = [i for i in node_ids if i not in by_node]
    if missing:
        raise NetworkValidationError("travel_matrix_csv", f"missing rows for nodes {missing}")
    return np.array([by_node[i] for i in node_ids])


def load_network(path: str | Path) -> Network:
    """Load and validate a network JSON file (see the schema in the README)."""
    path = Path(path)
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise NetworkValidationError("file", f"invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise NetworkValidationError("file", "top level must be a JSON object")
    return network_from_dict(data, base_dir=path.parent)


def network_to_dict(network: Network) -> dict[str, Any]:
    """Serialize a Network so that loading the result reproduces it exactly."""
    travel = network.travel
    if travel.provenance is MatrixProvenance.EXTERNAL:
        head: dict[str, Any] = {"distance_mode": "matrix", "travel_matrix": travel.values.tolist()}
    else:
        head = {"distance_mode": travel.metric or "euclidean", "speed": travel.speed}
    def node_entry(n: DemandNode) -> dict[str, Any]:
        entry: dict[str, Any] = {"id": n.id, "x": n.x, "y": n.y, "ev_count": n.ev_count}
        if n.arrival_rate != float(n.ev_count):  # only keep rates that carry information
            entry["arrival_rate"] = n.arrival_rate
        return entry

    return {
        **head,
        "nodes": [node_entry(n) for n in network.nodes],
        "stations": [
            {
                "id": s.id,
                "x": s.x,
                "y": s.y,
                "chargers": s.chargers,
                "charger_class": s.charger_class.value,
                "service_rate": s.service_rate,
            }
            for s in network.stations
        ],
    }


def save_network(network: Network, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(network_to_dict(network), f, indent=2)
        f.write("\n")


def scale_demand(network: Network, factor: float) -> Network:
    """New network with arrival_rate_i = ev_count_i * factor (charges/day per EV).

    The factor always applies to the EV counts, so rescaling is idempotent
    rather than cumulative; nodes, stations and travel times are shared.
    """
    if factor < 0:
        raise ValueError(f"factor must be >= 0, got {factor}")
    nodes = tuple(replace(n, arrival_rate=n.ev_count * factor) for n in network.nodes)
    return Network(nodes, network.stations, network.travel)
