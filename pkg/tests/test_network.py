"""Network ingestion, validation, travel-time construction, demand scaling."""

import json

import numpy as np
import pytest

from chargeq.network import (
    ChargerClass,
    DemandNode,
    MatrixProvenance,
    Network,
    NetworkValidationError,
    Station,
    TravelTimeMatrix,
    euclidean_travel_times,
    haversine_travel_times,
    load_network,
    network_from_dict,
    save_network,
    scale_demand,
)


def minimal_doc(**overrides):
    doc = {
        "distance_mode": "matrix",
        "nodes": [{"id": "n1", "x": 0.0, "y": 0.0, "ev_count": 3}],
        "stations": [{"id": "s1", "x": 1.0, "y": 0.0, "chargers": 2, "charger_class": "LEVEL2"}],
        "travel_matrix": [[0.01]],
    }
    doc.update(overrides)
    return doc


class TestLoadNetwork:
    def test_minimal_matrix_passthrough(self, tmp_path):
        path = tmp_path / "net.json"
        path.write_text(json.dumps(minimal_doc()))
        net = load_network(path)
        assert net.travel.values[0, 0] == 0.01
        assert net.travel.provenance is MatrixProvenance.EXTERNAL
        assert net.stations[0].service_rate == 6.0  # LEVEL2 preset
        assert net.nodes[0].arrival_rate == 3.0  # one charge per EV per day by default

    def test_euclidean_from_coordinates(self):
        doc = minimal_doc(distance_mode="euclidean", speed=480.0, travel_matrix=None)
        doc["stations"][0]["x"], doc["stations"][0]["y"] = 3.0, 4.0
        net = network_from_dict({k: v for k, v in doc.items() if v is not None})
        assert net.travel.values[0, 0] == pytest.approx(5.0 / 480.0)
        assert net.travel.provenance is MatrixProvenance.EUCLIDEAN

    def test_matrix_shape_error(self):
        doc = minimal_doc(
            nodes=[{"id": f"n{i}", "x": 0, "y": 0, "ev_count": 1} for i in range(3)],
            stations=[
                {"id": f"s{i}", "x": 1, "y": 1, "chargers": 1, "charger_class": "DCFC"}
                for i in range(3)
            ],
            travel_matrix=[[0.1, 0.1, 0.1], [0.1, 0.1, 0.1]],
        )
        with pytest.raises(NetworkValidationError, match="shape"):
            network_from_dict(doc)

    def test_duplicate_node_id(self):
        doc = minimal_doc()
        doc["nodes"] = doc["nodes"] * 2
        doc["travel_matrix"] = [[0.01], [0.01]]
        with pytest.raises(NetworkValidationError, match="duplicate id"):
            network_from_dict(doc)

    def test_missing_speed(self):
        doc = minimal_doc(distance_mode="euclidean")
        del doc["travel_matrix"]
        with pytest.raises(NetworkValidationError, match="speed"):
            network_from_dict(doc)

    def test_bad_distance_mode(self):
        with pytest.raises(NetworkValidationError, match="distance_mode"):
            network_from_dict(minimal_doc(distance_mode="manhattan"))

    def test_custom_class_needs_service_rate(self):
        doc = minimal_doc()
        doc["stations"][0] = {"id": "s1", "x": 0, "y": 0, "chargers": 1, "charger_class": "CUSTOM"}
        with pytest.raises(NetworkValidationError, match="service_rate"):
            network_from_dict(doc)

    def test_service_rate_overrides_preset(self):
        doc = minimal_doc()
        doc["stations"][0]["service_rate"] = 8.0
        net = network_from_dict(doc)
        assert net.stations[0].service_rate == 8.0

    def test_explicit_arrival_rate_wins_with_warning(self):
        doc = minimal_doc()
        doc["nodes"][0]["arrival_rate"] = 1.25
        with pytest.warns(UserWarning, match="arrival_rate"):
            net = network_from_dict(doc)
        assert net.nodes[0].arrival_rate == 1.25
        assert net.nodes[0].ev_count == 3

    def test_matrix_csv(self, tmp_path):
        (tmp_path / "matrix.csv").write_text("node,s1,s2\nn1,0.1,0.2\nn2,0.3,0.4\n")
        doc = minimal_doc(
            nodes=[
                {"id": "n1", "x": 0, "y": 0, "ev_count": 1},
                {"id": "n2", "x": 0, "y": 1, "ev_count": 1},
            ],
            stations=[
                {"id": "s1", "x": 1, "y": 0, "chargers": 1, "charger_class": "DCFC"},
                {"id": "s2", "x": 1, "y": 1, "chargers": 1, "charger_class": "DCFC"},
            ],
            travel_matrix=None,
            travel_matrix_csv="matrix.csv",
        )
        del doc["travel_matrix"]
        path = tmp_path / "net.json"
        path.write_text(json.dumps(doc))
        net = load_network(path)
        assert np.array_equal(net.travel.values, [[0.1, 0.2], [0.3, 0.4]])

    def test_matrix_csv_header_mismatch(self, tmp_path):
        (tmp_path / "matrix.csv").write_text("node,sX\nn1,0.1\n")
        doc = minimal_doc(travel_matrix_csv="matrix.csv")
        del doc["travel_matrix"]
        path = tmp_path / "net.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(NetworkValidationError, match="header"):
            load_network(path)

    def test_negative_matrix_entry(self):
        with pytest.raises(NetworkValidationError, match=">= 0"):
            network_from_dict(minimal_doc(travel_matrix=[[-0.5]]))


class TestTravelTimes:
    def test_three_four_five_triangle(self):
        nodes = [DemandNode("n", 0.0, 0.0, 1, 1.0)]
        stations = [Station("s", 3.0, 4.0, 1, 6.0, ChargerClass.LEVEL2)]
        travel = euclidean_travel_times(nodes, stations, speed=5.0)
        assert travel.values[0, 0] == pytest.approx(1.0)

    def test_colocated_zero(self):
        nodes = [DemandNode("n", 2.0, 2.0, 1, 1.0)]
        stations = [Station("s", 2.0, 2.0, 1, 6.0, ChargerClass.LEVEL2)]
        assert euclidean_travel_times(nodes, stations, 10.0).values[0, 0] == 0.0

    def test_symmetric_stations_equal_times(self):
        nodes = [DemandNode("n", 0.0, 0.0, 1, 1.0)]
        stations = [
            Station("a", 1.0, 1.0, 1, 6.0, ChargerClass.LEVEL2),
            Station("b", -1.0, -1.0, 1, 6.0, ChargerClass.LEVEL2),
        ]
        travel = euclidean_travel_times(nodes, stations, 10.0)
        assert travel.values[0, 0] == travel.values[0, 1]

    def test_haversine_one_degree_longitude_at_equator(self):
        nodes = [DemandNode("n", 0.0, 0.0, 1, 1.0)]
        stations = [Station("s", 1.0, 0.0, 1, 6.0, ChargerClass.LEVEL2)]
        travel = haversine_travel_times(nodes, stations, speed=111.0)
        # one degree of longitude at the equator is ~111.19 km
        assert travel.values[0, 0] == pytest.approx(1.002, abs=0.01)

    def test_rejects_zero_speed(self):
        with pytest.raises(NetworkValidationError, match="speed"):
            euclidean_travel_times(
                [DemandNode("n", 0, 0, 1, 1.0)],
                [Station("s", 1, 1, 1, 6.0, ChargerClass.LEVEL2)],
                0.0,
            )


class TestRoundTrip:
    def test_matrix_network(self, tmp_path):
        net = network_from_dict(minimal_doc())
        save_network(net, tmp_path / "out.json")
        assert load_network(tmp_path / "out.json") == net

    def test_euclidean_network(self, tmp_path):
        doc = minimal_doc(distance_mode="euclidean", speed=480.0)
        del doc["travel_matrix"]
        net = network_from_dict(doc)
        save_network(net, tmp_path / "out.json")
        again = load_network(tmp_path / "out.json")
        assert again == net
        assert again.travel.provenance is MatrixProvenance.EUCLIDEAN

    def test_explicit_rate_round_trip(self, tmp_path):
        doc = minimal_doc()
        doc["nodes"][0]["arrival_rate"] = 0.5
        with pytest.warns(UserWarning):
            net = network_from_dict(doc)
        save_network(net, tmp_path / "out.json")
        with pytest.warns(UserWarning):
            assert load_network(tmp_path / "out.json") == net


class TestScaleDemand:
    @pytest.fixture
    def net(self):
        return network_from_dict(
            minimal_doc(
                nodes=[
                    {"id": "n1", "x": 0, "y": 0, "ev_count": 9},
                    {"id": "n2", "x": 1, "y": 1, "ev_count": 4},
                ],
                travel_matrix=[[0.01], [0.02]],
            )
        )

    def test_zero_factor_zeroes_demand(self, net):
        assert all(n.arrival_rate == 0.0 for n in scale_demand(net, 0.0).nodes)

    def test_three_days_per_charge(self, net):
        scaled = scale_demand(net, 1.0 / 3.0)
        assert scaled.nodes[0].arrival_rate == pytest.approx(3.0)

    def test_not_cumulative(self, net):
        twice = scale_demand(scale_demand(net, 0.7), 0.2)
        once = scale_demand(net, 0.2)
        assert [n.arrival_rate for n in twice.nodes] == [n.arrival_rate for n in once.nodes]

    def test_original_untouched_and_structure_shared(self, net):
        before = [n.arrival_rate for n in net.nodes]
        scaled = scale_demand(net, 0.5)
        assert [n.arrival_rate for n in net.nodes] == before
        assert scaled.stations is net.stations
        assert scaled.travel is net.travel  # bit-for-bit, same object

    def test_rejects_negative(self, net):
        with pytest.raises(ValueError):
            scale_demand(net, -0.1)


class TestNetworkInvariants:
    def test_demand_and_capacity_vectors(self):
        net = network_from_dict(minimal_doc())
        assert net.demand.tolist() == [3.0]
        assert net.service_rates.tolist() == [6.0]
        assert net.charger_counts.tolist() == [2]
        assert net.total_capacity == 12.0

    def test_travel_matrix_is_read_only(self):
        net = network_from_dict(minimal_doc())
        with pytest.raises(ValueError):
            net.travel.values[0, 0] = 99.0

    def test_station_index(self):
        net = network_from_dict(minimal_doc())
        assert net.station_index("s1") == 0
        with pytest.raises(KeyError):
            net.station_index("nope")

    def test_empty_station_list_rejected(self):
        doc = minimal_doc(stations=[], travel_matrix=[[]])
        with pytest.raises(NetworkValidationError, match="station"):
            network_from_dict(doc)
