from .app import create_app
from .jobs import JobKind, JobRecord, JobStatus, JobStore

__all__ = ["create_app", "JobKind", "JobRecord", "JobStatus", "JobStore"]
