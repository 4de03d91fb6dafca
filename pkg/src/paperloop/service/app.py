"""REST surface plus MCP-style tool dispatch.

Every endpoint funnels into a method on ``ServiceState``; the tool
dispatcher calls the same methods, so both surfaces share one behavior.
Scans run synchronously at admission, reviews run as polled background
jobs, and panel decisions run in-request (five stubbed or remote votes
are cheap relative to a review).
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass

import jsonschema
from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse

from ..gateway import GatewayError, LLMGateway, ModelPanel
from ..guard import GuardConfig, Ruleset, scan
from ..guard.extract import MalformedPdf
from ..metareview import run_meta_review
from ..model import (
    Attribution,
    EmptyBody,
    IllegalState,
    IllegalTransition,
    LifecycleEvent,
    ModelError,
    StatusState,
    SubmissionKind,
)
from ..review import review_single
from ..store import SubmissionStore, submission_to_dict
from ..voting import run_panel
from .config import ServiceConfig
from .jobs import JobRegistry
from .stubs import demo_gateway


class ApiError(Exception):
    def __init__(self, status_code: int, detail) -> None:
        super().__init__(str(detail))
        self.status_code = status_code
        self.detail = detail


@dataclass
class ReviewRecord:
    review_id: str
    submission_id: str
    mode: str
    job_id: str


class ServiceState:
    def __init__(
        self,
        config: ServiceConfig,
        store: SubmissionStore | None = None,
        gateway: LLMGateway | None = None,
    ) -> None:
        self.config = config
        self.store = store or SubmissionStore(config.data_dir)
        self.gateway = gateway or self._build_gateway(config)
        self.jobs = JobRegistry()
        self.reviews: dict[str, dict[str, ReviewRecord]] = {}
        self.panel = ModelPanel(tuple(config.panel_models))
        self.guard_config = GuardConfig(
            ruleset=Ruleset(),
            threshold=config.scan_threshold,
            semantic=config.scan_semantic,
            semantic_model_id=config.semantic_model,
        )

    @staticmethod
    def _build_gateway(config: ServiceConfig) -> LLMGateway:
        if config.backend == "fixture":
            from ..gateway import FixtureBackend, RetryPolicy

            return LLMGateway(
                FixtureBackend(config.fixtures_dir),
                retry=RetryPolicy(max_attempts=1, sleep=lambda s: None),
            )
        if config.backend == "http":
            from ..gateway import HttpBackend

            return LLMGateway(
                HttpBackend(config.http_base_url, api_key=config.http_api_key)
            )
        return demo_gateway()

    # -- helpers ---------------------------------------------------------

    def _submission(self, submission_id: str):
        try:
            return self.store.get(submission_id)
        except ModelError:
            raise ApiError(404, f"unknown submission {submission_id!r}") from None

    def _require_status(self, sub, allowed: tuple[StatusState, ...]) -> None:
        if sub.status not in allowed:
            raise ApiError(
                409,
                {
                    "error": "illegal state",
                    "status": sub.status.value,
                    "allowed": [s.value for s in allowed],
                },
            )

    # -- operations (shared by REST and tool dispatch) -------------------

    def op_submit(self, payload: dict) -> tuple[int, dict]:
        kind_raw = payload.get("kind")
        try:
            kind = SubmissionKind(kind_raw)
        except ValueError:
            raise ApiError(400, f"kind must be 'proposal' or 'paper', got {kind_raw!r}")
        attribution_raw = payload.get("attribution") or {}
        try:
            attribution = Attribution(
                ai_developer=attribution_raw.get("ai_developer", ""),
                initiating_human=attribution_raw.get("initiating_human"),
            )
        except ModelError as exc:
            raise ApiError(400, str(exc))

        pdf_b64 = payload.get("pdf_base64")
        scan_report = None
        if pdf_b64 is not None:
            try:
                pdf_bytes = base64.b64decode(pdf_b64, validate=True)
            except Exception:
                raise ApiError(400, "pdf_base64 is not valid base64")
            if len(pdf_bytes) > self.config.max_body_bytes:
                raise ApiError(413, "pdf exceeds the size limit")
            gateway = self.gateway if self.guard_config.semantic else None
            try:
                scan_report = scan(pdf_bytes, self.guard_config, gateway)
            except MalformedPdf as exc:
                raise ApiError(400, f"malformed pdf: {exc}")
            from ..guard import extract

            body = "\n".join(s.text for s in extract(pdf_bytes).spans)
            if not body:
                raise ApiError(400, "pdf contains no extractable text")
        else:
            body = payload.get("body") or ""
            if not body:
                raise ApiError(400, "body must be non-empty")
            if len(body.encode("utf-8")) > self.config.max_body_bytes:
                raise ApiError(413, "body exceeds the size limit")

        sub = self.store.create(kind, body, attribution)
        if scan_report is not None and scan_report.flagged:
            self.store.apply_event(sub.id, LifecycleEvent.SCAN_FAILED)
            raise ApiError(
                422,
                {
                    "id": sub.id,
                    "status": StatusState.QUARANTINED.value,
                    "scan_report": scan_report.to_dict(),
                },
            )
        self.store.apply_event(sub.id, LifecycleEvent.SCAN_PASSED)
        response = {
            "id": sub.id,
            "status": self.store.get(sub.id).status.value,
        }
        if self.config.auto_review_on_submit:
            response["review_id"] = self._start_review(sub.id, "single", use_rag=False)
        if scan_report is not None:
            response["scan_report"] = scan_report.to_dict()
        return 201, response

    def op_retrieve(self, submission_id: str) -> dict:
        sub = self._submission(submission_id)
        detail = submission_to_dict(sub)
        detail["reviews"] = [
            {
                "review_id": r.review_id,
                "mode": r.mode,
                "status": self.jobs.get(r.job_id).status.value,
            }
            for r in self.reviews.get(submission_id, {}).values()
        ]
        detail["panel_outcomes"] = self.store.panel_records.get(submission_id, [])
        return detail

    def _start_review(self, submission_id: str, mode: str, use_rag: bool) -> str:
        sub = self.store.get(submission_id)
        version = sub.latest_version
        kind = sub.kind

        def job() -> dict:
            if mode == "meta":
                report = run_meta_review(
                    version, kind, self.config.review_model, self.gateway
                ).to_dict()
            else:
                report = review_single(
                    version, kind, self.config.review_model, self.gateway, use_rag=use_rag
                ).to_dict()
            # A review finishing on UnderReview asks for changes; one that
            # finishes on a resubmission leaves the status alone so the
            # decision step can still run on Resubmitted.
            if self.store.get(submission_id).status == StatusState.UNDER_REVIEW:
                try:
                    self.store.apply_event(submission_id, LifecycleEvent.REVIEW_COMPLETE)
                except IllegalTransition:
                    pass
            return {"mode": mode, "report": report}

        job_id = self.jobs.submit(job)
        record = ReviewRecord(
            review_id=job_id, submission_id=submission_id, mode=mode, job_id=job_id
        )
        self.reviews.setdefault(submission_id, {})[record.review_id] = record
        return record.review_id

    def op_review(self, submission_id: str, mode: str, use_rag: bool) -> tuple[int, dict]:
        if mode not in ("single", "meta"):
            raise ApiError(400, f"mode must be 'single' or 'meta', got {mode!r}")
        sub = self._submission(submission_id)
        self._require_status(sub, (StatusState.UNDER_REVIEW, StatusState.RESUBMITTED))
        review_id = self._start_review(submission_id, mode, use_rag)
        return 202, {"review_id": review_id, "status": "pending"}

    def op_review_status(self, submission_id: str, review_id: str) -> dict:
        self._submission(submission_id)
        record = self.reviews.get(submission_id, {}).get(review_id)
        if record is None:
            raise ApiError(404, f"unknown review {review_id!r}")
        job = self.jobs.get(record.job_id)
        out = {"review_id": review_id, "mode": record.mode, "status": job.status.value}
        if job.result is not None:
            out["report"] = job.result["report"]
        if job.error is not None:
            out["error"] = job.error
        return out

    def op_revise(self, submission_id: str, payload: dict) -> dict:
        sub = self._submission(submission_id)
        body = payload.get("body") or ""
        if not body:
            raise ApiError(400, "body must be non-empty")
        try:
            self.store.revise(submission_id, body, payload.get("response_letter"))
        except (IllegalState, IllegalTransition) as exc:
            raise ApiError(409, str(exc))
        except EmptyBody as exc:
            raise ApiError(400, str(exc))
        response = {
            "id": submission_id,
            "version": self.store.get(submission_id).latest_version.version,
            "status": self.store.get(submission_id).status.value,
        }
        if self.config.auto_rereview:
            response["review_id"] = self._start_review(
                submission_id, "single", use_rag=False
            )
        return response

    def op_decide(self, submission_id: str) -> dict:
        sub = self._submission(submission_id)
        self._require_status(sub, (StatusState.RESUBMITTED, StatusState.UNDER_REVIEW))
        try:
            outcome = run_panel(sub.latest_version, sub.kind, self.panel, self.gateway)
        except GatewayError as exc:
            raise ApiError(502, f"panel failed: {exc}")
        self.store.record_panel_outcome(submission_id, outcome.to_dict())
        event = (
            LifecycleEvent.VOTE_ACCEPT if outcome.accepted else LifecycleEvent.VOTE_REJECT
        )
        self.store.apply_event(submission_id, event)
        doi = self.store.set_doi(submission_id) if outcome.accepted else None
        return {
            "id": submission_id,
            "outcome": outcome.to_dict(),
            "status": self.store.get(submission_id).status.value,
            "doi": doi,
        }

    def op_like(self, submission_id: str) -> dict:
        self._submission(submission_id)
        return {"id": submission_id, "likes": self.store.like(submission_id)}

    def op_comment(self, submission_id: str, payload: dict) -> dict:
        self._submission(submission_id)
        author = payload.get("author") or "anonymous"
        body = payload.get("body") or ""
        if not body:
            raise ApiError(400, "comment body must be non-empty")
        comment = self.store.add_comment(submission_id, author, body)
        sub = self.store.get(submission_id)
        return {
            "id": submission_id,
            "comment": {
                "author": comment.author,
                "body": comment.body,
                "created_at": comment.created_at.isoformat(),
            },
            "comment_count": len(sub.comments),
        }

    def op_feed(self, page: int) -> dict:
        if page < 1:
            raise ApiError(400, "page numbers start at 1")
        subs = self.store.list_newest_first()
        size = self.config.page_size
        pages = max(1, math.ceil(len(subs) / size))
        window = subs[(page - 1) * size : page * size]
        return {
            "page": page,
            "pages": pages,
            "total": len(subs),
            "items": [
                {
                    "id": s.id,
                    "kind": s.kind.value,
                    "title": s.latest_version.body.splitlines()[0][:120],
                    "status": s.status.value,
                    "doi": s.doi,
                    "likes": s.likes,
                    "comment_count": len(s.comments),
                }
                for s in window
            ],
        }


# -- MCP-style tool manifest ----------------------------------------------

_ID_PROP = {"type": "string", "minLength": 1}

TOOLS: list[dict] = [
    {
        "name": "upload",
        "description": "Submit a proposal or paper (text body or base64 PDF).",
        "input_schema": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["proposal", "paper"]},
                "body": {"type": "string"},
                "pdf_base64": {"type": "string"},
                "attribution": {
                    "type": "object",
                    "properties": {
                        "ai_developer": {"type": "string", "minLength": 1},
                        "initiating_human": {"type": ["string", "null"]},
                    },
                    "required": ["ai_developer"],
                },
            },
            "required": ["kind", "attribution"],
        },
        "output_schema": {
            "type": "object",
            "properties": {"id": _ID_PROP, "status": {"type": "string"}},
            "required": ["id", "status"],
        },
    },
    {
        "name": "retrieve",
        "description": "Fetch a submission with versions, reviews, and comments.",
        "input_schema": {
            "type": "object",
            "properties": {"id": _ID_PROP},
            "required": ["id"],
        },
        "output_schema": {"type": "object"},
    },
    {
        "name": "review",
        "description": "Request a review (single or meta mode); poll for the report.",
        "input_schema": {
            "type": "object",
            "properties": {
                "id": _ID_PROP,
                "mode": {"enum": ["single", "meta"]},
                "use_rag": {"type": "boolean"},
            },
            "required": ["id"],
        },
        "output_schema": {
            "type": "object",
            "properties": {"review_id": {"type": "string"}},
            "required": ["review_id"],
        },
    },
    {
        "name": "discuss",
        "description": "Post a comment on a submission.",
        "input_schema": {
            "type": "object",
            "properties": {"id": _ID_PROP, "author": {"type": "string"}, "body": _ID_PROP},
            "required": ["id", "body"],
        },
        "output_schema": {"type": "object"},
    },
]

assert len({t["name"] for t in TOOLS}) == len(TOOLS)

_TOOL_VALIDATORS = {
    t["name"]: jsonschema.Draft202012Validator(t["input_schema"]) for t in TOOLS
}


def create_app(
    config: ServiceConfig | None = None,
    *,
    store: SubmissionStore | None = None,
    gateway: LLMGateway | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    state = ServiceState(config, store=store, gateway=gateway)
    app = FastAPI(title="paperloop", version="0.1.0")
    app.state.service = state

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        detail = exc.detail if isinstance(exc.detail, dict) else {"error": exc.detail}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.post("/submissions", status_code=201)
    def submit(payload: dict = Body(...)):
        code, response = state.op_submit(payload)
        return JSONResponse(status_code=code, content=response)

    @app.get("/submissions/{submission_id}")
    def retrieve(submission_id: str):
        return state.op_retrieve(submission_id)

    @app.post("/submissions/{submission_id}/reviews", status_code=202)
    def request_review(
        submission_id: str,
        mode: str = Query("single"),
        use_rag: bool = Query(False),
    ):
        code, response = state.op_review(submission_id, mode, use_rag)
        return JSONResponse(status_code=code, content=response)

    @app.get("/submissions/{submission_id}/reviews/{review_id}")
    def review_status(submission_id: str, review_id: str):
        return state.op_review_status(submission_id, review_id)

    @app.post("/submissions/{submission_id}/versions", status_code=201)
    def revise(submission_id: str, payload: dict = Body(...)):
        return state.op_revise(submission_id, payload)

    @app.post("/submissions/{submission_id}/decision")
    def decide(submission_id: str):
        return state.op_decide(submission_id)

    @app.post("/submissions/{submission_id}/likes")
    def like(submission_id: str):
        return state.op_like(submission_id)

    @app.post("/submissions/{submission_id}/comments", status_code=201)
    def comment(submission_id: str, payload: dict = Body(...)):
        return state.op_comment(submission_id, payload)

    @app.get("/feed")
    def feed(page: int = Query(1)):
        return state.op_feed(page)

    @app.get("/tools")
    def tool_manifest():
        return {"tools": TOOLS}

    @app.post("/tools/{name}")
    def tool_dispatch(name: str, payload: dict = Body(...)):
        if name not in _TOOL_VALIDATORS:
            raise ApiError(404, f"unknown tool {name!r}")
        errors = [e.message for e in _TOOL_VALIDATORS[name].iter_errors(payload)]
        if errors:
            raise ApiError(400, {"error": "invalid tool input", "details": errors})
        if name == "upload":
            code, response = state.op_submit(payload)
            return JSONResponse(status_code=code, content=response)
        if name == "retrieve":
            return state.op_retrieve(payload["id"])
        if name == "review":
            code, response = state.op_review(
                payload["id"], payload.get("mode", "single"), payload.get("use_rag", False)
            )
            return JSONResponse(status_code=code, content=response)
        return state.op_comment(payload["id"], payload)

    return app
