"""HTTP service: audit and repair over one loaded dataset.

Thin wrapper over the runner so answers match the CLI exactly for equal
inputs and seeds. Repairs run asynchronously: POST /v1/repair returns a job
id; at most one repair executes at a time (others queue) so bench numbers
stay uncontaminated; DELETE cancels a queued or running job.
"""

import threading
import uuid
from collections import deque
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .errors import FairselectError
from .ingest import IngestResult
from .model import FairnessSpec, WeightVector
from .runner import run_audit, run_repair


class AuditRequest(BaseModel):
    w: list[float]
    k: int
    lower: int
    upper: int


class RepairRequest(BaseModel):
    w0: list[float]
    eps: float
    k: int
    lower: int
    upper: int
    algorithm: str = "klevel-hd"
    workers: int = 1
    seed: int = 0
    budget: Optional[int] = None
    timeLimit: Optional[float] = Field(default=None)


class Job:
    def __init__(self, fn):
        self.id = uuid.uuid4().hex[:12]
        self.fn = fn
        self.status = "queued"
        self.result: Optional[dict] = None
        self.error: Optional[str] = None
        self.cancel = threading.Event()


class JobManager:
    """Serial executor: one repair at a time, the rest wait in FIFO order."""

    def __init__(self):
        self.jobs: dict[str, Job] = {}
        self.queue: deque[Job] = deque()
        self.lock = threading.Lock()
        self.wake = threading.Condition(self.lock)
        self.thread: Optional[threading.Thread] = None

    def _ensure_worker(self):
        if self.thread is None or not self.thread.is_alive():
            self.thread = threading.Thread(target=self._loop, daemon=True)
            self.thread.start()

    def submit(self, fn) -> Job:
        job = Job(fn)
        with self.wake:
            self.jobs[job.id] = job
            self.queue.append(job)
            self._ensure_worker()
            self.wake.notify()
        return job

    def _loop(self):
        while True:
            with self.wake:
                while not self.queue:
                    self.wake.wait(timeout=1.0)
                job = self.queue.popleft()
                if job.cancel.is_set():
                    continue
                job.status = "running"
            try:
                result = job.fn(job.cancel)
                with self.lock:
                    if job.cancel.is_set():
                        job.status = "cancelled"
                    else:
                        job.result = result
                        job.status = "done"
            except Exception as e:  # surface the reason verbatim
                with self.lock:
                    if job.cancel.is_set():
                        job.status = "cancelled"
                    else:
                        job.status = "failed"
                        job.error = str(e)

    def get(self, job_id: str) -> Optional[Job]:
        return self.jobs.get(job_id)

    def cancel(self, job_id: str) -> Optional[Job]:
        job = self.jobs.get(job_id)
        if job is None:
            return None
        with self.lock:
            job.cancel.set()
            if job.status in ("queued", "running"):
                job.status = "cancelled"
        return job


def create_app(bundle: Optional[IngestResult]) -> FastAPI:
    app = FastAPI(title="fairselect", version="0.1.0")
    ds = bundle.dataset if bundle is not None else None
    manager = JobManager()

    def need_dataset():
        if ds is None:
            raise HTTPException(status_code=409, detail="no dataset loaded")

    @app.get("/v1/dataset")
    def dataset_info():
        need_dataset()
        return {
            "n": ds.n,
            "d": ds.d,
            "groups": list(ds.groups),
            "protectedShare": ds.protected_count / ds.n,
            "columnNames": list(bundle.column_names),
        }

    @app.post("/v1/audit")
    def audit(req: AuditRequest):
        need_dataset()
        try:
            spec = FairnessSpec(req.k, req.lower, req.upper)
            report = run_audit(ds, WeightVector(req.w), spec)
        except (FairselectError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        return report.to_json()

    @app.post("/v1/repair")
    def repair(req: RepairRequest):
        need_dataset()
        try:
            spec = FairnessSpec(req.k, req.lower, req.upper)
            w0 = WeightVector(req.w0)
            if req.eps < 0 or req.eps > 1:
                raise FairselectError("eps must be in [0, 1]")
        except (FairselectError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))

        def fn(cancel_event):
            return run_repair(
                ds, w0, req.eps, spec,
                algorithm=req.algorithm, workers=req.workers, seed=req.seed,
                budget=req.budget, time_limit=req.timeLimit,
                cancel_event=cancel_event,
            ).to_json()

        job = manager.submit(fn)
        return {"jobId": job.id}

    @app.get("/v1/jobs/{job_id}")
    def job_status(job_id: str):
        job = manager.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        out = {"status": job.status}
        if job.result is not None:
            out["result"] = job.result
        if job.error is not None:
            out["error"] = job.error
        return out

    @app.delete("/v1/jobs/{job_id}")
    def job_cancel(job_id: str):
        job = manager.cancel(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return {"status": job.status}

    return app
