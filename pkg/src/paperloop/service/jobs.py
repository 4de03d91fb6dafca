"""Bounded-worker background jobs with polling."""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum


class JobStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


@dataclass
class Job:
    id: str
    status: JobStatus = JobStatus.PENDING
    result: dict | None = None
    error: str | None = None
    done_event: threading.Event = field(default_factory=threading.Event, repr=False)

    def to_dict(self) -> dict:
        out = {"job_id": self.id, "status": self.status.value}
        if self.result is not None:
            out["result"] = self.result
        if self.error is not None:
            out["error"] = self.error
        return out


class JobRegistry:
    def __init__(self, max_workers: int = 4) -> None:
        self._pool = ThreadPoolExecutor(max_workers=max_workers)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, fn) -> str:
        job = Job(id=uuid.uuid4().hex[:12])
        with self._lock:
            self._jobs[job.id] = job

        def run() -> None:
            job.status = JobStatus.RUNNING
            try:
                job.result = fn()
                job.status = JobStatus.DONE
            except Exception as exc:  # surfaced to the poller, not swallowed
                job.error = f"{type(exc).__name__}: {exc}"
                job.status = JobStatus.FAILED
            finally:
                job.done_event.set()

        self._pool.submit(run)
        return job.id

    def get(self, job_id: str) -> Job:
        with self._lock:
            if job_id not in self._jobs:
                raise KeyError(f"unknown job {job_id!r}")
            return self._jobs[job_id]

    def wait(self, job_id: str, timeout: float | None = 30.0) -> Job:
        job = self.get(job_id)
        if not job.done_event.wait(timeout):
            raise TimeoutError(f"job {job_id} did not finish within {timeout}s")
        return job

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
