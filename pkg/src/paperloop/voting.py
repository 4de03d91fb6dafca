"""Five-model accept/reject panel and the external-review upgrade path."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import prompts, schemas
from .gateway import ChatMessage, ChatRequest, GatewayError, LLMGateway, ModelPanel
from .model import (
    IllegalState,
    LifecycleEvent,
    StatusState,
    SubmissionKind,
    SubmissionVersion,
)
from .retrieval import LiteratureRetriever, SearchUnavailable
from .review import Budgets, DEFAULT_BUDGETS, ReviewReport
from .store import SubmissionStore
from .tokens import truncate_to_budget

ACCEPT_THRESHOLD = 3  # of 5 votes

EXTERNAL_REVIEWER_THRESHOLD = 3
EXTERNAL_ACCEPT_FRACTION = 0.5


class WrongPanelSize(Exception):
    pass


class DuplicateModel(Exception):
    pass


@dataclass(frozen=True)
class VoteDecision:
    model_id: str
    decision: str  # "accept" | "reject"
    confidence: float
    reasons: tuple[str, ...]
    scores: dict[str, float]
    used_lit_search: bool
    failed: bool = False  # True when a backend failure was converted to reject

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "decision": self.decision,
            "confidence": self.confidence,
            "reasons": list(self.reasons),
            "scores": dict(self.scores),
            "used_lit_search": self.used_lit_search,
            "failed": self.failed,
        }


@dataclass(frozen=True)
class PanelOutcome:
    votes: tuple[VoteDecision, ...]
    accepted: bool
    accept_count: int

    def to_dict(self) -> dict:
        return {
            "votes": [v.to_dict() for v in self.votes],
            "accepted": self.accepted,
            "accept_count": self.accept_count,
        }


def vote_schema_id(kind: SubmissionKind) -> str:
    return "vote-proposal" if kind == SubmissionKind.PROPOSAL else "vote-paper"


def _assemble_document(
    version: SubmissionVersion, prior_reviews: list[ReviewReport] | None
) -> str:
    """Revised versions carry prior reviews and the response letter so the
    voter treats them as revisions."""
    parts = [version.body]
    if prior_reviews:
        parts.append("## Previous reviews")
        parts.extend(json.dumps(r.to_dict(), sort_keys=True) for r in prior_reviews)
    if version.response_letter:
        parts += ["## Response letter", version.response_letter]
    return "\n\n".join(parts)


def cast_vote(
    version: SubmissionVersion,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    prior_reviews: list[ReviewReport] | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> VoteDecision:
    doc = truncate_to_budget(
        _assemble_document(version, prior_reviews), budgets.for_kind(kind)
    )
    lit_text = ""
    if use_rag and retriever is not None:
        try:
            lit_text = retriever.literature_block(doc, budgets.literature).text
        except SearchUnavailable:
            lit_text = ""
    if kind == SubmissionKind.PROPOSAL:
        prompt = prompts.VOTE_PROPOSAL.format(
            proposal_text=doc, related_literature=lit_text
        )
    else:
        prompt = prompts.VOTE_PAPER.format(paper_text=doc, related_literature=lit_text)
    request = ChatRequest(
        model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
    )
    document = gateway.complete_structured(request, vote_schema_id(kind))
    return VoteDecision(
        model_id=model_id,
        decision=document["decision"],
        confidence=document["confidence"],
        reasons=tuple(document["reasons"]),
        scores=dict(document["scores"]),
        used_lit_search=document["meta"]["used_lit_search"],
    )


def _failure_vote(model_id: str, kind: SubmissionKind, error: str) -> VoteDecision:
    keys = (
        schemas.PROPOSAL_SCORE_KEYS
        if kind == SubmissionKind.PROPOSAL
        else schemas.PAPER_SCORE_KEYS
    )
    return VoteDecision(
        model_id=model_id,
        decision="reject",
        confidence=0.0,
        reasons=(f"vote unavailable: {error}",),
        scores={k: 0 for k in keys},
        used_lit_search=False,
        failed=True,
    )


def tally(votes: list[VoteDecision]) -> PanelOutcome:
    """Pure majority count; confidence plays no role."""
    if len(votes) != 5:
        raise WrongPanelSize(f"expected 5 votes, got {len(votes)}")
    ids = [v.model_id for v in votes]
    if len(set(ids)) != 5:
        raise DuplicateModel(f"duplicate model ids in {ids}")
    accept_count = sum(v.decision == "accept" for v in votes)
    return PanelOutcome(
        votes=tuple(votes),
        accepted=accept_count >= ACCEPT_THRESHOLD,
        accept_count=accept_count,
    )


def run_panel(
    version: SubmissionVersion,
    kind: SubmissionKind,
    panel: ModelPanel,
    gateway: LLMGateway,
    *,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    prior_reviews: list[ReviewReport] | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> PanelOutcome:
    """Five concurrent votes; a vote that fails after retries counts as
    reject, so outages can never accept a submission."""

    def one(model_id: str) -> VoteDecision:
        try:
            return cast_vote(
                version,
                kind,
                model_id,
                gateway,
                use_rag=use_rag,
                retriever=retriever,
                prior_reviews=prior_reviews,
                budgets=budgets,
            )
        except GatewayError as exc:
            return _failure_vote(model_id, kind, str(exc))

    with ThreadPoolExecutor(max_workers=5) as pool:
        votes = list(pool.map(one, panel.model_ids))
    return tally(votes)


@dataclass(frozen=True)
class UpgradeProgress:
    distinct_reviewers: int
    accept_count: int
    threshold_met: bool


def record_external_review(
    store: SubmissionStore,
    submission_id: str,
    agent: str,
    verdict: str,
    *,
    reviewer_threshold: int = EXTERNAL_REVIEWER_THRESHOLD,
    accept_fraction: float = EXTERNAL_ACCEPT_FRACTION,
) -> UpgradeProgress:
    """Count one external verdict; repeated verdicts from the same agent
    overwrite rather than accumulate. Fires the upgrade transition when
    enough distinct reviewers lean accept."""
    if verdict not in ("accept", "reject"):
        raise ValueError("verdict must be 'accept' or 'reject'")
    sub = store.get(submission_id)
    if sub.status != StatusState.PROVISIONALLY_ACCEPTED:
        raise IllegalState(
            f"external reviews only apply to provisionally accepted submissions, "
            f"not {sub.status.value}"
        )
    store.record_external_review(submission_id, agent, verdict)
    verdicts = store.external_reviews[submission_id]
    distinct = len(verdicts)
    accepts = sum(v == "accept" for v in verdicts.values())
    met = distinct >= reviewer_threshold and accepts / distinct >= accept_fraction
    if met:
        store.apply_event(submission_id, LifecycleEvent.EXTERNAL_THRESHOLD_MET)
    return UpgradeProgress(
        distinct_reviewers=distinct, accept_count=accepts, threshold_met=met
    )
