"""FastAPI service: submit solve/calibrate/compare jobs, poll progress, fetch results."""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..calibrate import calibrate_frequency_factor
from ..network import ChargerClass, NetworkValidationError
from ..scenarios import (
    RankCriterion,
    compare_scenarios,
    equilibrium_report,
    rank_station_entries,
    report_to_dict,
)
from ..solver import SolverConfig, solve_equilibrium
from .jobs import JobFinishedError, JobKind, JobStatus, JobStore, UnknownJobError
from .schemas import (
    CalibrateRequest,
    CompareRequest,
    JobCreated,
    JobView,
    NetworkCheck,
    NetworkPayload,
    SolveRequest,
)


def create_app(
    workers: int | None = None, seed: int = 42, state_dir: str | None = None
) -> FastAPI:
    app = FastAPI(title="chargeq", version="0.1.0")
    store = JobStore(workers=workers, state_dir=state_dir)
    app.state.store = store
    app.state.seed = seed
    # the planner console is served separately; this is a local planning tool
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
        detail = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.exception_handler(NetworkValidationError)
    async def network_handler(request: Request, exc: NetworkValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"detail": [{"field": exc.field, "message": exc.message}]}
        )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": app.version}

    @app.post("/v1/networks/validate", response_model=NetworkCheck)
    def validate_network(payload: NetworkPayload) -> NetworkCheck:
        network = payload.to_network()
        return NetworkCheck(ok=True, nodes=len(network.nodes), stations=len(network.stations))

    @app.post("/v1/solve", response_model=JobCreated)
    def submit_solve(req: SolveRequest) -> JobCreated:
        network = req.network.to_network()
        cfg = req.options.to_config()

        def run(set_progress, cancelled):
            result = solve_equilibrium(
                network, cfg, progress=set_progress, should_cancel=cancelled.is_set
            )
            return equilibrium_report(result, network)

        return JobCreated(job_id=store.submit(JobKind.SOLVE, run))

    @app.post("/v1/calibrate", response_model=JobCreated)
    def submit_calibrate(req: CalibrateRequest) -> JobCreated:
        network = req.network.to_network()
        spec = req.to_spec()
        cfg = req.options.to_config()

        def run(set_progress, cancelled):
            calib = calibrate_frequency_factor(
                network, spec, cfg, progress=set_progress, should_cancel=cancelled.is_set
            )
            return {
                "factor": calib.factor,
                "days_per_charge": calib.days_per_charge,
                "mean_utilization": calib.utilization,
                "evaluations": calib.evaluations,
                "warnings": list(calib.warnings),
            }

        return JobCreated(job_id=store.submit(JobKind.CALIBRATE, run))

    @app.post("/v1/scenarios/compare", response_model=JobCreated)
    def submit_compare(req: CompareRequest) -> JobCreated:
        network = req.network.to_network()
        specs = [s.to_spec() for s in req.scenarios]
        cfg = req.options.to_config()

        def run(set_progress, cancelled):
            report = compare_scenarios(
                network, specs, cfg, progress=set_progress, should_cancel=cancelled.is_set
            )
            return report_to_dict(report)

        return JobCreated(job_id=store.submit(JobKind.COMPARE, run))

    @app.get("/v1/jobs/{job_id}", response_model=JobView)
    def job_status(job_id: str) -> JobView:
        record = _get_or_404(store, job_id)
        return JobView(**record.to_view())

    @app.get("/v1/jobs/{job_id}/result")
    def job_result(job_id: str) -> dict:
        record = _get_or_404(store, job_id)
        if record.status is not JobStatus.DONE:
            raise HTTPException(
                status_code=409, detail=f"job {job_id} is {record.status.value}, not DONE"
            )
        assert record.result is not None
        return record.result

    @app.get("/v1/jobs/{job_id}/rankings")
    def job_rankings(
        job_id: str,
        criterion: Literal["utilization", "queue_delay"] = "utilization",
        charger_class: Literal["LEVEL2", "DCFC", "CUSTOM"] | None = None,
        limit: int | None = None,
    ) -> dict:
        record = _get_or_404(store, job_id)
        if record.status is not JobStatus.DONE or record.kind is not JobKind.SOLVE:
            raise HTTPException(status_code=409, detail="rankings need a DONE solve job")
        assert record.result is not None
        entries = [
            (s["id"], s["rho"], s["wq_days"], s["charger_class"])
            for s in record.result["station_report"]
        ]
        ranked = rank_station_entries(
            entries,
            RankCriterion(criterion),
            ChargerClass(charger_class) if charger_class else None,
        )
        if limit is not None:
            ranked = ranked[: max(limit, 0)]
        return {"criterion": criterion, "charger_class": charger_class, "station_ids": ranked}

    @app.delete("/v1/jobs/{job_id}")
    def cancel_job(job_id: str) -> dict:
        try:
            store.cancel(job_id)
        except JobFinishedError:
            raise HTTPException(status_code=409, detail=f"job {job_id} already finished") from None
        except UnknownJobError:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}") from None
        return {"job_id": job_id, "status": "cancelling"}

    return app


def _get_or_404(store: JobStore, job_id: str):
    try:
        return store.get(job_id)
    except UnknownJobError:
        raise HTTPException(status_code=404, detail=f"unknown job {job_id}") from None
