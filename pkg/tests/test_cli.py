"""CLI contract: output formats, exit codes, file emission."""

import json

import pytest

from chargeq.cli import main

MINIMAL_NETWORK = {
    "distance_mode": "matrix",
    "nodes": [{"id": "n1", "x": 0.0, "y": 0.0, "ev_count": 8}],
    "stations": [
        {"id": "a", "x": 1.0, "y": 0.0, "chargers": 1, "charger_class": "LEVEL2"},
        {"id": "b", "x": -1.0, "y": 0.0, "chargers": 1, "charger_class": "LEVEL2"},
    ],
    "travel_matrix": [[0.1, 0.1]],
}


@pytest.fixture
def network_file(tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps(MINIMAL_NETWORK))
    return str(path)


class TestQueueCommand:
    def test_md1_anchor(self, capsys):
        assert main(["queue", "--lambda", "0.5", "--mu", "1", "--servers", "1"]) == 0
        out = capsys.readouterr().out
        assert "wq_mdc=0.5" in out
        assert "over_capacity=false" in out

    def test_over_capacity_fallback(self, capsys):
        assert main(["queue", "--lambda", "10", "--mu", "1", "--servers", "2"]) == 0
        out = capsys.readouterr().out
        assert "w_total=3.5" in out
        assert "over_capacity=true" in out

    def test_bad_input_exit_1(self, capsys):
        assert main(["queue", "--lambda", "-1", "--mu", "1", "--servers", "1"]) == 1

    def test_unknown_flag_exit_1(self, capsys):
        assert main(["queue", "--lambda", "1", "--mu", "1", "--servers", "1", "--bogus"]) == 1
        assert "usage" in capsys.readouterr().err


class TestSimCommand:
    def test_prints_mean_wait(self, capsys):
        code = main(
            ["sim", "--lambda", "0.5", "--servers", "1", "--horizon", "2000", "--runs", "2"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("mean_wait=")
        assert "per_run_means=" in out

    def test_seed_changes_result(self, capsys):
        main(["sim", "--lambda", "0.5", "--servers", "1", "--horizon", "500", "--runs", "1"])
        first = capsys.readouterr().out
        main(["--seed", "7", "sim", "--lambda", "0.5", "--servers", "1", "--horizon", "500", "--runs", "1"])
        second = capsys.readouterr().out
        assert first != second

    def test_same_seed_same_output(self, capsys):
        args = ["sim", "--lambda", "0.5", "--servers", "2", "--horizon", "500", "--runs", "2"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first


class TestValidateCommand:
    def test_csv_to_file(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        code = main(
            [
                "validate",
                "--rho-grid",
                "0.5",
                "--c-grid",
                "1,2",
                "--horizon",
                "500",
                "--runs",
                "1",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "rho,servers,approx,sim_mean,abs_err,rel_err"
        assert len(lines) == 3


class TestSolveCommand:
    def test_symmetric_split(self, network_file, capsys):
        code = main(["solve", "--network", network_file, "--tolerance", "1e-4"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["converged"] is True
        x = report["assignment"][0]
        assert abs(x[0] - 0.5) < 1e-3 and abs(x[1] - 0.5) < 1e-3

    def test_missing_file_exit_1(self, capsys):
        assert main(["solve", "--network", "/does/not/exist.json"]) == 1

    def test_result_to_file(self, network_file, tmp_path, capsys):
        out = tmp_path / "result.json"
        assert main(["solve", "--network", network_file, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["converged"] is True


class TestCalibrateCommand:
    def test_calibrate_prints_factor(self, network_file, capsys):
        code = main(
            [
                "calibrate",
                "--network",
                network_file,
                "--target-utilization",
                "0.2",
                "--tolerance",
                "0.005",
                "--factor-low",
                "0.001",
                "--factor-high",
                "2",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "factor=" in out and "days_per_charge=" in out

    def test_unbracketed_exit_1(self, network_file, capsys):
        code = main(
            [
                "calibrate",
                "--network",
                network_file,
                "--target-utilization",
                "0.9",
                "--factor-low",
                "0.0001",
                "--factor-high",
                "0.0002",
            ]
        )
        assert code == 1

    def test_curve_csv(self, network_file, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = main(
            ["calibrate", "--network", network_file, "--target-utilization", "0.2",
             "--curve", "0.1,0.5", "--curve-out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "days_per_charge,mean_utilization"
        assert len(lines) == 3


class TestScenarioCompareCommand:
    def test_compare_to_csv_and_json(self, network_file, tmp_path, capsys):
        scen = tmp_path / "scen.json"
        scen.write_text(
            json.dumps(
                {"scenarios": [{"name": "A1", "upgrades": [{"station_id": "a", "dcfc_count": 1}]}]}
            )
        )
        out_csv = tmp_path / "report.csv"
        out_json = tmp_path / "report.json"
        code = main(
            [
                "scenario",
                "compare",
                "--base",
                network_file,
                "--scenarios",
                str(scen),
                "--out",
                str(out_csv),
                "--json-out",
                str(out_json),
            ]
        )
        assert code == 0
        header = out_csv.read_text().split("\n")[0]
        assert "System total access time" in header
        rows = json.loads(out_json.read_text())["rows"]
        assert [r["name"] for r in rows] == ["base", "A1"]
