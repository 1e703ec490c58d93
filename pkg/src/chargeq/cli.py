"""Command-line entry points. Thin dispatch over the same core the HTTP service uses.

Exit codes: 0 success, 1 input error (bad flags, files, validation), 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calibrate import (
    CalibrationError,
    CalibrationSpec,
    UnbracketedTargetError,
    calibrate_frequency_factor,
    curve_csv,
    frequency_curve,
)
from .network import NetworkValidationError, load_network
from .queueing import QueueInput, station_total_wait
from .scenarios import (
    compare_scenarios,
    comparison_csv,
    equilibrium_report,
    load_scenarios,
    report_to_dict,
)
from .simulate import SimConfig, simulate_mdc, validate_approximation, validation_csv
from .solver import SolverConfig, SolverNumericError, solve_equilibrium

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; input errors are exit 1 here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")


def _add_solver_flags(p: argparse.ArgumentParser, tolerance: float = 1e-4) -> None:
    p.add_argument("--tolerance", type=float, default=tolerance, help="assignment-change tolerance")
    p.add_argument("--max-iterations", type=int, default=500_000)
    p.add_argument("--weight-access", type=float, default=1.0)
    p.add_argument("--weight-charging", type=float, default=1.0)


def _solver_cfg(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        weight_access=args.weight_access,
        weight_charging=args.weight_charging,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chargeq", description=__doc__)
    parser.add_argument("--seed", type=int, default=42, help="seed for all randomness")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("queue", help="one-shot station wait evaluation")
    p.add_argument("--lambda", dest="arrival_rate", type=float, required=True, help="vehicles/day")
    p.add_argument("--mu", dest="service_rate", type=float, required=True, help="vehicles/day per charger")
    p.add_argument("--servers", type=int, required=True)

    p = sub.add_parser("sim", help="simulate an M/D/C queue")
    p.add_argument("--lambda", dest="arrival_rate", type=float, required=True)
    p.add_argument("--service-time", type=float, default=1.0)
    p.add_argument("--servers", type=int, required=True)
    p.add_argument("--horizon", type=float, default=10_000.0)
    p.add_argument("--runs", type=int, default=5)

    p = sub.add_parser("validate", help="approximation-vs-simulation error table")
    p.add_argument("--rho-grid", default="0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95")
    p.add_argument("--c-grid", default="1,2,4,8,16")
    p.add_argument("--service-time", type=float, default=1.0)
    p.add_argument("--horizon", type=float, default=10_000.0)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--out", help="CSV path (stdout when omitted)")

    p = sub.add_parser("solve", help="solve a network to user equilibrium")
    p.add_argument("--network", required=True)
    _add_solver_flags(p)
    p.add_argument("--out", help="result JSON path (stdout when omitted)")

    p = sub.add_parser("calibrate", help="fit charging frequency to a utilization target")
    p.add_argument("--network", required=True)
    p.add_argument("--target-utilization", type=float, required=True)
    p.add_argument("--tolerance", type=float, default=0.001, help="utilization tolerance")
    p.add_argument("--factor-low", type=float, default=1.0 / 30.0)
    p.add_argument("--factor-high", type=float, default=2.0)
    p.add_argument("--max-evals", type=int, default=60)
    p.add_argument("--max-iterations", type=int, default=500_000)
    p.add_argument("--solver-tolerance", type=float, default=1e-3)
    p.add_argument("--curve", help="comma-separated factor grid for a frequency-utilization curve")
    p.add_argument("--curve-out", help="CSV path for the curve (stdout when omitted)")

    p = sub.add_parser("scenario", help="scenario tools")
    scen_sub = p.add_subparsers(dest="scenario_command", required=True, parser_class=_Parser)
    p = scen_sub.add_parser("compare", help="solve base + upgrade scenarios, emit a report")
    p.add_argument("--base", required=True, help="network JSON")
    p.add_argument("--scenarios", required=True, help="scenario JSON")
    _add_solver_flags(p)
    p.add_argument("--out", help="report CSV path (stdout when omitted)")
    p.add_argument("--json-out", help="optional report JSON path")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--workers", type=int, default=None, help="job worker threads (default: cores)")
    p.add_argument("--state-dir", default=None, help="persist job records as JSON lines here")

    return parser


def cmd_queue(args: argparse.Namespace) -> int:
    delays = station_total_wait(QueueInput(args.arrival_rate, args.service_rate, args.servers))
    print(f"rho={_fmt(delays.utilization)}")
    print(f"wq_mmc={_fmt(delays.wait_queue_mmc)}")
    print(f"wq_mdc={_fmt(delays.wait_queue_mdc)}")
    print(f"w_total={_fmt(delays.total_wait_mdc)}")
    print(f"over_capacity={'true' if delays.over_capacity else 'false'}")
    return EXIT_OK


def cmd_sim(args: argparse.Namespace) -> int:
    cfg = SimConfig(
        arrival_rate=args.arrival_rate,
        service_time=args.service_time,
        servers=args.servers,
        horizon=args.horizon,
        seed=args.seed,
        runs=args.runs,
    )
    result = simulate_mdc(cfg)
    print(f"mean_wait={_fmt(result.mean_wait)}")
    print(f"sample_count={result.sample_count}")
    print("per_run_means=" + ",".join(_fmt(m) for m in result.per_run_means))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    rho_grid = [float(v) for v in args.rho_grid.split(",") if v.strip()]
    c_grid = [int(v) for v in args.c_grid.split(",") if v.strip()]
    template = SimConfig(
        arrival_rate=1.0,
        service_time=args.service_time,
        servers=1,
        horizon=args.horizon,
        seed=args.seed,
        runs=args.runs,
    )
    rows = validate_approximation(rho_grid, c_grid, template)
    _write_text(validation_csv(rows), args.out)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    result = solve_equilibrium(network, _solver_cfg(args))
    report = equilibrium_report(result, network)
    _write_text(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    solver_cfg = SolverConfig(tolerance=args.solver_tolerance, max_iterations=args.max_iterations)
    if args.curve:
        grid = [float(v) for v in args.curve.split(",") if v.strip()]
        points = frequency_curve(network, grid, solver_cfg)
        _write_text(curve_csv(points), args.curve_out)
        return EXIT_OK
    spec = CalibrationSpec(
        target_utilization=args.target_utilization,
        factor_bounds=(args.factor_low, args.factor_high),
        tolerance=args.tolerance,
        max_evals=args.max_evals,
    )
    calib = calibrate_frequency_factor(network, spec, solver_cfg)
    print(f"factor={_fmt(calib.factor)}")
    print(f"days_per_charge={_fmt(calib.days_per_charge)}")
    print(f"mean_utilization={_fmt(calib.utilization)}")
    print(f"evaluations={calib.evaluations}")
    for w in calib.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_scenario_compare(args: argparse.Namespace) -> int:
    base = load_network(args.base)
    specs = load_scenarios(args.scenarios)
    report = compare_scenarios(base, specs, _solver_cfg(args))
    _write_text(comparison_csv(report), args.out)
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
        print(f"wrote {args.json_out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    app = create_app(workers=args.workers, seed=args.seed, state_dir=args.state_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse signals usage errors by exiting
        return int(e.code or 0)
    handlers = {
        "queue": cmd_queue,
        "sim": cmd_sim,
        "validate": cmd_validate,
        "solve": cmd_solve,
        "calibrate": cmd_calibrate,
        "scenario": cmd_scenario_compare,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (NetworkValidationError, UnbracketedTargetError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverNumericError, CalibrationError, ArithmeticError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
