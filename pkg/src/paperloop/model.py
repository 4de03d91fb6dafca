"""Submissions, versions, and the lifecycle state machine.

A submission is an append-only list of versions plus a status driven by a
fixed transition table. Status changes happen only through `transition`,
so every mutation corresponds to a declared edge.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable


class SubmissionKind(Enum):
    PROPOSAL = "proposal"
    PAPER = "paper"


class StatusState(Enum):
    SUBMITTED = "submitted"
    QUARANTINED = "quarantined"
    UNDER_REVIEW = "under_review"
    REVISION_REQUESTED = "revision_requested"
    RESUBMITTED = "resubmitted"
    PROVISIONALLY_ACCEPTED = "provisionally_accepted"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class LifecycleEvent(Enum):
    SCAN_PASSED = "scan_passed"
    SCAN_FAILED = "scan_failed"
    REVIEW_COMPLETE = "review_complete"
    REVISION_SUBMITTED = "revision_submitted"
    VOTE_ACCEPT = "vote_accept"
    VOTE_REJECT = "vote_reject"
    EXTERNAL_THRESHOLD_MET = "external_threshold_met"


# The complete edge set. Any (state, event) pair absent here is illegal.
TRANSITION_TABLE: dict[tuple[StatusState, LifecycleEvent], StatusState] = {
    (StatusState.SUBMITTED, LifecycleEvent.SCAN_PASSED): StatusState.UNDER_REVIEW,
    (StatusState.SUBMITTED, LifecycleEvent.SCAN_FAILED): StatusState.QUARANTINED,
    (StatusState.UNDER_REVIEW, LifecycleEvent.REVIEW_COMPLETE): StatusState.REVISION_REQUESTED,
    (StatusState.UNDER_REVIEW, LifecycleEvent.REVISION_SUBMITTED): StatusState.RESUBMITTED,
    (StatusState.UNDER_REVIEW, LifecycleEvent.VOTE_ACCEPT): StatusState.PROVISIONALLY_ACCEPTED,
    (StatusState.UNDER_REVIEW, LifecycleEvent.VOTE_REJECT): StatusState.REJECTED,
    (StatusState.REVISION_REQUESTED, LifecycleEvent.REVISION_SUBMITTED): StatusState.RESUBMITTED,
    (StatusState.RESUBMITTED, LifecycleEvent.SCAN_PASSED): StatusState.UNDER_REVIEW,
    (StatusState.RESUBMITTED, LifecycleEvent.SCAN_FAILED): StatusState.QUARANTINED,
    (StatusState.RESUBMITTED, LifecycleEvent.REVIEW_COMPLETE): StatusState.REVISION_REQUESTED,
    (StatusState.RESUBMITTED, LifecycleEvent.VOTE_ACCEPT): StatusState.PROVISIONALLY_ACCEPTED,
    (StatusState.RESUBMITTED, LifecycleEvent.VOTE_REJECT): StatusState.REJECTED,
    (StatusState.PROVISIONALLY_ACCEPTED, LifecycleEvent.EXTERNAL_THRESHOLD_MET): StatusState.ACCEPTED,
}

DOI_PREFIX = "10.99999"  # reserved-style namespace; never minted for real


class ModelError(Exception):
    """Base class for domain errors."""


class EmptyBody(ModelError):
    pass


class IllegalState(ModelError):
    pass


class IllegalTransition(ModelError):
    pass


class AlreadyAssigned(ModelError):
    pass


Clock = Callable[[], datetime]
IdFactory = Callable[[], str]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def random_id() -> str:
    return uuid.uuid4().hex[:12]


@dataclass(frozen=True)
class Attribution:
    ai_developer: str
    initiating_human: str | None = None

    def __post_init__(self) -> None:
        if not self.ai_developer:
            raise ModelError("ai_developer must be non-empty")


@dataclass(frozen=True)
class Comment:
    author: str
    body: str
    created_at: datetime

    def __post_init__(self) -> None:
        if not self.body:
            raise EmptyBody("comment body must be non-empty")


@dataclass(frozen=True)
class SubmissionVersion:
    version: int
    body: str
    created_at: datetime
    source_pdf: str | None = None  # opaque reference, e.g. a blob filename
    response_letter: str | None = None

    def __post_init__(self) -> None:
        if not self.body:
            raise EmptyBody("version body must be non-empty")
        if self.version < 1:
            raise ModelError("version numbers start at 1")
        if self.response_letter is not None and self.version == 1:
            raise ModelError("response letter only allowed on revisions")


@dataclass
class Submission:
    id: str
    kind: SubmissionKind
    attribution: Attribution
    versions: list[SubmissionVersion]
    status: StatusState = StatusState.SUBMITTED
    doi: str | None = None
    likes: int = 0
    comments: list[Comment] = field(default_factory=list)

    @property
    def latest_version(self) -> SubmissionVersion:
        return self.versions[-1]


def create_submission(
    kind: SubmissionKind,
    body: str,
    attribution: Attribution,
    *,
    source_pdf: str | None = None,
    clock: Clock = utc_now,
    id_factory: IdFactory = random_id,
) -> Submission:
    if not body:
        raise EmptyBody("submission body must be non-empty")
    first = SubmissionVersion(version=1, body=body, created_at=clock(), source_pdf=source_pdf)
    return Submission(
        id=id_factory(),
        kind=kind,
        attribution=attribution,
        versions=[first],
    )


def add_revision(
    submission: Submission,
    body: str,
    response_letter: str | None = None,
    *,
    source_pdf: str | None = None,
    clock: Clock = utc_now,
) -> Submission:
    """Append a new version and move the submission to Resubmitted."""
    if submission.status not in (StatusState.REVISION_REQUESTED, StatusState.UNDER_REVIEW):
        raise IllegalState(
            f"cannot revise a submission in state {submission.status.value}"
        )
    if not body:
        raise EmptyBody("revision body must be non-empty")
    nxt = SubmissionVersion(
        version=submission.latest_version.version + 1,
        body=body,
        created_at=clock(),
        source_pdf=source_pdf,
        response_letter=response_letter,
    )
    submission.versions.append(nxt)
    transition(submission, LifecycleEvent.REVISION_SUBMITTED)
    return submission


def next_state(state: StatusState, event: LifecycleEvent) -> StatusState:
    try:
        return TRANSITION_TABLE[(state, event)]
    except KeyError:
        raise IllegalTransition(f"no edge for ({state.value}, {event.value})") from None


def transition(submission: Submission, event: LifecycleEvent) -> StatusState:
    """Apply one lifecycle event; illegal pairs raise without mutation."""
    submission.status = next_state(submission.status, event)
    return submission.status


def assign_doi(submission: Submission) -> str:
    if submission.doi is not None:
        raise AlreadyAssigned(f"{submission.id} already has DOI {submission.doi}")
    if submission.status not in (
        StatusState.PROVISIONALLY_ACCEPTED,
        StatusState.ACCEPTED,
    ):
        raise IllegalState(
            f"DOI requires provisional or full acceptance, not {submission.status.value}"
        )
    doi = f"{DOI_PREFIX}/aixiv.{submission.id}.v{submission.latest_version.version}"
    submission.doi = doi
    return doi
