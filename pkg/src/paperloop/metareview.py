"""Meta Review Mode: planner -> domain sub-reviewers -> summarizer."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import prompts
from .gateway import ChatMessage, ChatRequest, GatewayError, LLMGateway
from .model import SubmissionKind, SubmissionVersion
from .retrieval import LiteratureRetriever, SearchUnavailable
from .review import Budgets, DEFAULT_BUDGETS
from .tokens import truncate_to_budget

PLANNER_DOC_BUDGET = 3000
SUB_REVIEW_DOC_BUDGET = 8000
SUMMARIZER_REVIEWS_BUDGET = 8000

HARD_MIN_REVIEWERS = 2
HARD_MAX_REVIEWERS = 6
SOFT_MIN_REVIEWERS = 3
SOFT_MAX_REVIEWERS = 5

MIN_SURVIVING_REVIEWS = 2


class TooFewReviews(Exception):
    pass


@dataclass(frozen=True)
class ReviewerSpec:
    role: str
    expertise: str
    instructions: str


@dataclass(frozen=True)
class SubReview:
    reviewer_role: str
    criteria: dict[str, dict]  # name -> {"score": int 0-4, "comment": str}
    notes: str


@dataclass(frozen=True)
class MetaReviewReport:
    summary: str
    decision: str  # "accept" | "reject"
    justification: str
    criteria_scores: dict[str, int]  # soundness / presentation / contribution, 0-4
    rating: int  # 1-10

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "decision": self.decision,
            "justification": self.justification,
            "criteria_scores": dict(self.criteria_scores),
            "rating": self.rating,
        }


@dataclass(frozen=True)
class ReviewStandard:
    kind: SubmissionKind
    criteria: dict[str, str]  # criterion name -> what it measures
    default_reviewer_count: int = 3
    min_reviewers: int = HARD_MIN_REVIEWERS
    max_reviewers: int = HARD_MAX_REVIEWERS

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind.value,
                "criteria": self.criteria,
                "default_reviewer_count": self.default_reviewer_count,
                "reviewer_range": [self.min_reviewers, self.max_reviewers],
                "criteria_scale": [0, 4],
                "rating_scale": [1, 10],
            },
            sort_keys=True,
        )

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ReviewStandard":
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        return cls(
            kind=SubmissionKind(data["kind"]),
            criteria=dict(data["criteria"]),
            default_reviewer_count=max(
                SOFT_MIN_REVIEWERS,
                min(SOFT_MAX_REVIEWERS, int(data.get("default_reviewer_count", 3))),
            ),
            min_reviewers=int(data.get("min_reviewers", HARD_MIN_REVIEWERS)),
            max_reviewers=int(data.get("max_reviewers", HARD_MAX_REVIEWERS)),
        )


def default_standard(kind: SubmissionKind) -> ReviewStandard:
    path = Path(__file__).parent / "standards" / f"{kind.value}.yaml"
    return ReviewStandard.from_yaml(path)


def clamp_reviewer_count(n: int) -> int:
    """Hard clamp into [2,6]. The soft [3,5] window applies to configured
    defaults (see default_standard), not to what the planner proposed."""
    return max(HARD_MIN_REVIEWERS, min(HARD_MAX_REVIEWERS, n))


GENERALIST = ReviewerSpec(
    role="Generalist reviewer",
    expertise="broad machine learning research methodology",
    instructions="Review the submission end to end against every criterion in the standard.",
)


def plan_reviewers(
    version: SubmissionVersion,
    standard: ReviewStandard,
    model_id: str,
    gateway: LLMGateway,
) -> list[ReviewerSpec]:
    doc = truncate_to_budget(version.body, PLANNER_DOC_BUDGET)
    prompt = prompts.PLANNER.format(
        min_reviewers=standard.min_reviewers,
        max_reviewers=standard.max_reviewers,
        kind=standard.kind.value,
        submission_text=doc,
        standard_json=standard.to_json(),
    )
    request = ChatRequest(
        model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
    )
    document = gateway.complete_structured(request, "planner")
    specs = [
        ReviewerSpec(role=r["role"], expertise=r["expertise"], instructions=r["instructions"])
        for r in document["reviewers"]
    ]
    target = clamp_reviewer_count(len(specs))
    specs = specs[:target]
    while len(specs) < target:
        specs.append(GENERALIST)
    return specs


def run_sub_reviews(
    specs: list[ReviewerSpec],
    version: SubmissionVersion,
    standard: ReviewStandard,
    model_id: str,
    gateway: LLMGateway,
    *,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    raise_per_reviewer: bool = False,
) -> list[SubReview]:
    """Fan the specs out concurrently; failed reviewers are dropped unless
    fewer than MIN_SURVIVING_REVIEWS remain."""
    if not specs:
        raise ValueError("specs must be non-empty")
    doc = truncate_to_budget(version.body, SUB_REVIEW_DOC_BUDGET)
    lit_text = ""
    if use_rag and retriever is not None:
        try:
            block = retriever.literature_block(doc, budgets.literature)
            lit_text = block.text
        except SearchUnavailable:
            lit_text = ""

    def one(spec: ReviewerSpec) -> SubReview:
        prompt = prompts.SUB_REVIEW.format(
            role=spec.role,
            expertise=spec.expertise,
            instructions=spec.instructions,
            kind=standard.kind.value,
            submission_text=doc,
            related_literature=lit_text,
            standard_json=standard.to_json(),
        )
        request = ChatRequest(
            model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
        )
        document = gateway.complete_structured(request, "sub-review")
        return SubReview(
            reviewer_role=spec.role,
            criteria=document["criteria"],
            notes=document["notes"],
        )

    results: list[SubReview] = []
    failures: list[Exception] = []
    with ThreadPoolExecutor(max_workers=len(specs)) as pool:
        for future in [pool.submit(one, s) for s in specs]:
            try:
                results.append(future.result())
            except GatewayError as exc:
                if raise_per_reviewer:
                    raise
                failures.append(exc)
    if len(results) < MIN_SURVIVING_REVIEWS:
        raise TooFewReviews(
            f"only {len(results)} sub-reviews succeeded ({len(failures)} failed)"
        )
    return results


def summarize(
    sub_reviews: list[SubReview],
    standard: ReviewStandard,
    model_id: str,
    gateway: LLMGateway,
) -> MetaReviewReport:
    if len(sub_reviews) < MIN_SURVIVING_REVIEWS:
        raise TooFewReviews(f"need at least {MIN_SURVIVING_REVIEWS} sub-reviews")
    serialized = json.dumps(
        [
            {"reviewer_role": r.reviewer_role, "criteria": r.criteria, "notes": r.notes}
            for r in sub_reviews
        ],
        sort_keys=True,
    )
    reviews_text = truncate_to_budget(serialized, SUMMARIZER_REVIEWS_BUDGET)
    prompt = prompts.SUMMARIZER.format(
        kind=standard.kind.value,
        standard_json=standard.to_json(),
        reviews_text=reviews_text,
    )
    request = ChatRequest(
        model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
    )
    document = gateway.complete_structured(request, "meta-review")
    # Decision and rating are recorded verbatim; the engine never reconciles
    # criteria scores against the rating.
    return MetaReviewReport(
        summary=document["summary"],
        decision=document["decision"],
        justification=document["justification"],
        criteria_scores=dict(document["criteria_scores"]),
        rating=document["rating"],
    )


def run_meta_review(
    version: SubmissionVersion,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    standard: ReviewStandard | None = None,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> MetaReviewReport:
    std = standard or default_standard(kind)
    specs = plan_reviewers(version, std, model_id, gateway)
    reviews = run_sub_reviews(
        specs,
        version,
        std,
        model_id,
        gateway,
        use_rag=use_rag,
        retriever=retriever,
        budgets=budgets,
    )
    return summarize(reviews, std, model_id, gateway)
