"""Event-sourced persistence for submissions.

Two files live under the data directory:

* ``events.jsonl`` — append-only log, one JSON event per line. The log is
  the source of truth; replaying it reconstructs all state.
* ``snapshot.jsonl`` — materialized view of current submissions, rewritten
  after each committed event.

Writes are serialized per submission id (single writer per id); reads see
the latest committed state.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime
from pathlib import Path

from . import model
from .model import (
    Attribution,
    Clock,
    Comment,
    IdFactory,
    LifecycleEvent,
    Submission,
    SubmissionKind,
    SubmissionVersion,
    StatusState,
)


def _dt(s: str) -> datetime:
    return datetime.fromisoformat(s)


def submission_to_dict(sub: Submission) -> dict:
    return {
        "id": sub.id,
        "kind": sub.kind.value,
        "status": sub.status.value,
        "doi": sub.doi,
        "likes": sub.likes,
        "attribution": {
            "ai_developer": sub.attribution.ai_developer,
            "initiating_human": sub.attribution.initiating_human,
        },
        "versions": [
            {
                "version": v.version,
                "body": v.body,
                "created_at": v.created_at.isoformat(),
                "source_pdf": v.source_pdf,
                "response_letter": v.response_letter,
            }
            for v in sub.versions
        ],
        "comments": [
            {"author": c.author, "body": c.body, "created_at": c.created_at.isoformat()}
            for c in sub.comments
        ],
    }


def submission_from_dict(d: dict) -> Submission:
    sub = Submission(
        id=d["id"],
        kind=SubmissionKind(d["kind"]),
        attribution=Attribution(**d["attribution"]),
        versions=[
            SubmissionVersion(
                version=v["version"],
                body=v["body"],
                created_at=_dt(v["created_at"]),
                source_pdf=v.get("source_pdf"),
                response_letter=v.get("response_letter"),
            )
            for v in d["versions"]
        ],
        status=StatusState(d["status"]),
        doi=d.get("doi"),
        likes=d.get("likes", 0),
        comments=[
            Comment(author=c["author"], body=c["body"], created_at=_dt(c["created_at"]))
            for c in d.get("comments", [])
        ],
    )
    return sub


class SubmissionStore:
    def __init__(
        self,
        data_dir: str | Path,
        *,
        clock: Clock = model.utc_now,
        id_factory: IdFactory = model.random_id,
    ) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.events_path = self.data_dir / "events.jsonl"
        self.snapshot_path = self.data_dir / "snapshot.jsonl"
        self.clock = clock
        self.id_factory = id_factory
        self._global = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._order: list[str] = []  # creation order, for stable snapshots
        self.submissions: dict[str, Submission] = {}
        self.external_reviews: dict[str, dict[str, str]] = {}
        self.panel_records: dict[str, list[dict]] = {}
        if self.events_path.exists():
            self._replay_file(self.events_path)

    # -- locking ---------------------------------------------------------

    def lock_for(self, submission_id: str) -> threading.Lock:
        with self._global:
            return self._locks.setdefault(submission_id, threading.Lock())

    # -- event machinery -------------------------------------------------

    def _append(self, submission_id: str, etype: str, payload: dict) -> None:
        event = {
            "ts": self.clock().isoformat(),
            "submission_id": submission_id,
            "type": etype,
            "payload": payload,
        }
        with self.events_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
        self._write_snapshot()

    def _apply(self, event: dict) -> None:
        sid = event["submission_id"]
        etype = event["type"]
        p = event["payload"]
        if etype == "created":
            sub = submission_from_dict(p)
            self.submissions[sid] = sub
            self._order.append(sid)
            self._locks.setdefault(sid, threading.Lock())
        elif etype == "revision_added":
            sub = self.submissions[sid]
            sub.versions.append(
                SubmissionVersion(
                    version=p["version"],
                    body=p["body"],
                    created_at=_dt(p["created_at"]),
                    source_pdf=p.get("source_pdf"),
                    response_letter=p.get("response_letter"),
                )
            )
            sub.status = StatusState(p["status"])
        elif etype == "status_changed":
            self.submissions[sid].status = StatusState(p["to"])
        elif etype == "doi_assigned":
            self.submissions[sid].doi = p["doi"]
        elif etype == "liked":
            self.submissions[sid].likes += 1
        elif etype == "comment_added":
            self.submissions[sid].comments.append(
                Comment(author=p["author"], body=p["body"], created_at=_dt(p["created_at"]))
            )
        elif etype == "panel_outcome":
            self.panel_records.setdefault(sid, []).append(p)
        elif etype == "external_review":
            self.external_reviews.setdefault(sid, {})[p["agent"]] = p["verdict"]
        else:
            raise ValueError(f"unknown event type {etype!r}")

    def _replay_file(self, path: Path) -> None:
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    # -- snapshot --------------------------------------------------------

    def snapshot_bytes(self) -> bytes:
        lines = [
            json.dumps(submission_to_dict(self.submissions[sid]), sort_keys=True)
            for sid in self._order
        ]
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    def _write_snapshot(self) -> None:
        tmp = self.snapshot_path.with_suffix(".tmp")
        tmp.write_bytes(self.snapshot_bytes())
        tmp.replace(self.snapshot_path)

    # -- domain operations ----------------------------------------------

    def create(
        self,
        kind: SubmissionKind,
        body: str,
        attribution: Attribution,
        *,
        source_pdf: str | None = None,
    ) -> Submission:
        sub = model.create_submission(
            kind,
            body,
            attribution,
            source_pdf=source_pdf,
            clock=self.clock,
            id_factory=self.id_factory,
        )
        with self._global:
            self.submissions[sub.id] = sub
            self._order.append(sub.id)
            self._locks.setdefault(sub.id, threading.Lock())
        self._append(sub.id, "created", submission_to_dict(sub))
        return sub

    def get(self, submission_id: str) -> Submission:
        try:
            return self.submissions[submission_id]
        except KeyError:
            raise model.ModelError(f"unknown submission {submission_id!r}") from None

    def list_newest_first(self) -> list[Submission]:
        return [self.submissions[sid] for sid in reversed(self._order)]

    def revise(
        self,
        submission_id: str,
        body: str,
        response_letter: str | None = None,
        *,
        source_pdf: str | None = None,
    ) -> Submission:
        with self.lock_for(submission_id):
            sub = self.get(submission_id)
            model.add_revision(
                sub, body, response_letter, source_pdf=source_pdf, clock=self.clock
            )
            v = sub.latest_version
            self._append(
                submission_id,
                "revision_added",
                {
                    "version": v.version,
                    "body": v.body,
                    "created_at": v.created_at.isoformat(),
                    "source_pdf": v.source_pdf,
                    "response_letter": v.response_letter,
                    "status": sub.status.value,
                },
            )
            return sub

    def apply_event(self, submission_id: str, event: LifecycleEvent) -> StatusState:
        with self.lock_for(submission_id):
            sub = self.get(submission_id)
            state = model.transition(sub, event)
            self._append(
                submission_id,
                "status_changed",
                {"event": event.value, "to": state.value},
            )
            return state

    def set_doi(self, submission_id: str) -> str:
        with self.lock_for(submission_id):
            sub = self.get(submission_id)
            doi = model.assign_doi(sub)
            self._append(submission_id, "doi_assigned", {"doi": doi})
            return doi

    def like(self, submission_id: str) -> int:
        with self.lock_for(submission_id):
            sub = self.get(submission_id)
            sub.likes += 1
            self._append(submission_id, "liked", {})
            return sub.likes

    def add_comment(self, submission_id: str, author: str, body: str) -> Comment:
        with self.lock_for(submission_id):
            sub = self.get(submission_id)
            comment = Comment(author=author, body=body, created_at=self.clock())
            sub.comments.append(comment)
            self._append(
                submission_id,
                "comment_added",
                {"author": author, "body": body, "created_at": comment.created_at.isoformat()},
            )
            return comment

    def record_panel_outcome(self, submission_id: str, outcome: dict) -> None:
        with self.lock_for(submission_id):
            self.get(submission_id)
            self.panel_records.setdefault(submission_id, []).append(outcome)
            self._append(submission_id, "panel_outcome", outcome)

    def record_external_review(self, submission_id: str, agent: str, verdict: str) -> None:
        with self.lock_for(submission_id):
            self.get(submission_id)
            self.external_reviews.setdefault(submission_id, {})[agent] = verdict
            self._append(
                submission_id, "external_review", {"agent": agent, "verdict": verdict}
            )
