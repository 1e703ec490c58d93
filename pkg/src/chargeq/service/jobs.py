"""In-memory job store with a bounded worker pool and optional JSONL persistence."""

from __future__ import annotations

import json
import math
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable

from ..solver import SolverCancelled

# fn(progress_setter, cancelled) -> result payload
JobFn = Callable[[Callable[[int, float, float], None], threading.Event], dict]


class JobKind(str, Enum):
    SOLVE = "SOLVE"
    CALIBRATE = "CALIBRATE"
    COMPARE = "COMPARE"


class JobStatus(str, Enum):
    QUEUED = "QUEUED"
    RUNNING = "RUNNING"
    DONE = "DONE"
    FAILED = "FAILED"


class UnknownJobError(KeyError):
    pass


class JobFinishedError(RuntimeError):
    """Cancel requested on a job that already reached DONE or FAILED."""


@dataclass
class Progress:
    iteration: int = 0
    epsilon: float | None = None
    wardrop_gap: float | None = None


@dataclass
class JobRecord:
    job_id: str
    kind: JobKind
    status: JobStatus
    progress: Progress = field(default_factory=Progress)
    result: dict | None = None
    error: str | None = None
    created_at: float = field(default_factory=time.time)

    def to_view(self) -> dict[str, Any]:
        return {
            "job_id": self.job_id,
            "kind": self.kind.value,
            "status": self.status.value,
            "progress": {
                "iteration": self.progress.iteration,
                "epsilon": _finite_or_none(self.progress.epsilon),
                "wardrop_gap": _finite_or_none(self.progress.wardrop_gap),
            },
            "error": self.error,
            "created_at": self.created_at,
        }


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value


class JobStore:
    """Tracks jobs and runs them on a thread pool.

    Status moves QUEUED -> RUNNING -> DONE | FAILED, written only by the
    owning worker. Cancellation sets a per-job event that the solver polls
    between iterations; a restarted store marks any job that was live as
    FAILED("restart") when replaying its state file.
    """

    def __init__(self, workers: int | None = None, state_dir: str | Path | None = None):
        self._jobs: dict[str, JobRecord] = {}
        self._cancel_events: dict[str, threading.Event] = {}
        self._lock = threading.RLock()
        self._pool = ThreadPoolExecutor(max_workers=workers or os.cpu_count() or 2)
        self._state_path: Path | None = None
        if state_dir is not None:
            state_dir = Path(state_dir)
            state_dir.mkdir(parents=True, exist_ok=True)
            self._state_path = state_dir / "jobs.jsonl"
            self._replay_state()

    def submit(self, kind: JobKind, fn: JobFn) -> str:
        job_id = uuid.uuid4().hex
        record = JobRecord(job_id=job_id, kind=kind, status=JobStatus.QUEUED)
        cancelled = threading.Event()
        with self._lock:
            self._jobs[job_id] = record
            self._cancel_events[job_id] = cancelled
        self._persist(record)
        self._pool.submit(self._run, job_id, fn, cancelled)
        return job_id

    def get(self, job_id: str) -> JobRecord:
        with self._lock:
            if job_id not in self._jobs:
                raise UnknownJobError(job_id)
            return self._jobs[job_id]

    def cancel(self, job_id: str) -> None:
        with self._lock:
            record = self.get(job_id)
            if record.status in (JobStatus.DONE, JobStatus.FAILED):
                raise JobFinishedError(job_id)
            self._cancel_events[job_id].set()

    def shutdown(self) -> None:
        self._pool.shutdown(wait=False, cancel_futures=True)

    # -- worker side ------------------------------------------------------

    def _run(self, job_id: str, fn: JobFn, cancelled: threading.Event) -> None:
        record = self.get(job_id)
        if cancelled.is_set():
            self._finish(record, JobStatus.FAILED, error="cancelled")
            return
        with self._lock:
            record.status = JobStatus.RUNNING
        self._persist(record)

        def set_progress(iteration: int, epsilon: float, gap: float) -> None:
            with self._lock:
                record.progress = Progress(iteration, epsilon, gap)

        try:
            result = fn(set_progress, cancelled)
        except SolverCancelled:
            self._finish(record, JobStatus.FAILED, error="cancelled")
        except Exception as e:
            self._finish(record, JobStatus.FAILED, error=str(e))
        else:
            self._finish(record, JobStatus.DONE, result=result)

    def _finish(
        self, record: JobRecord, status: JobStatus, result: dict | None = None, error: str | None = None
    ) -> None:
        with self._lock:
            record.status = status
            record.result = result
            record.error = error
        self._persist(record)

    # -- persistence ------------------------------------------------------

    def _persist(self, record: JobRecord) -> None:
        if self._state_path is None:
            return
        line = json.dumps({**record.to_view(), "result": record.result})
        with self._lock:
            with open(self._state_path, "a") as f:
                f.write(line + "\n")

    def _replay_state(self) -> None:
        assert self._state_path is not None
        if not self._state_path.exists():
            return
        with open(self._state_path) as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                record = JobRecord(
                    job_id=raw["job_id"],
                    kind=JobKind(raw["kind"]),
                    status=JobStatus(raw["status"]),
                    result=raw.get("result"),
                    error=raw.get("error"),
                    created_at=raw.get("created_at", 0.0),
                )
                prog = raw.get("progress") or {}
                record.progress = Progress(
                    prog.get("iteration", 0), prog.get("epsilon"), prog.get("wardrop_gap")
                )
                self._jobs[record.job_id] = record
                self._cancel_events[record.job_id] = threading.Event()
        for record in self._jobs.values():
            if record.status in (JobStatus.QUEUED, JobStatus.RUNNING):
                record.status = JobStatus.FAILED
                record.error = "restart"
                self._persist(record)
