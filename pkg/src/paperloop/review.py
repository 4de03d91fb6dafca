"""Single Review Mode: one agent, four kind-specific dimensions, no scores."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import prompts, schemas
from .gateway import ChatMessage, ChatRequest, LLMGateway
from .model import SubmissionKind, SubmissionVersion
from .retrieval import LiteratureRetriever, SearchUnavailable
from .tokens import truncate_to_budget


@dataclass(frozen=True)
class Budgets:
    """Prompt token budgets, per document kind plus literature."""

    proposal: int = 3000
    paper: int = 8000
    literature: int = 5000

    def for_kind(self, kind: SubmissionKind) -> int:
        return self.proposal if kind == SubmissionKind.PROPOSAL else self.paper


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class DimensionFeedback:
    strengths: tuple[str, ...]
    weaknesses: tuple[str, ...]
    suggestions: tuple[str, ...]


@dataclass
class ReviewReport:
    dimensions: dict[str, DimensionFeedback]
    summary: str
    major_concerns: list[str]
    minor_issues: list[str]
    questions_for_authors: list[str]
    improvement_recommendations: list[str]
    kind: SubmissionKind
    reviewer_model: str
    used_rag: bool = False
    rag_degraded: bool = False

    def to_dict(self) -> dict:
        d: dict = {
            name: {
                "strengths": list(f.strengths),
                "weaknesses": list(f.weaknesses),
                "suggestions": list(f.suggestions),
            }
            for name, f in self.dimensions.items()
        }
        d.update(
            {
                "summary": self.summary,
                "major_concerns": self.major_concerns,
                "minor_issues": self.minor_issues,
                "questions_for_authors": self.questions_for_authors,
                "improvement_recommendations": self.improvement_recommendations,
                "kind": self.kind.value,
                "reviewer_model": self.reviewer_model,
                "used_rag": self.used_rag,
                "rag_degraded": self.rag_degraded,
            }
        )
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReviewReport":
        kind = SubmissionKind(d["kind"])
        names = dimension_names(kind)
        return cls(
            dimensions={
                name: DimensionFeedback(
                    strengths=tuple(d[name]["strengths"]),
                    weaknesses=tuple(d[name]["weaknesses"]),
                    suggestions=tuple(d[name]["suggestions"]),
                )
                for name in names
            },
            summary=d["summary"],
            major_concerns=list(d["major_concerns"]),
            minor_issues=list(d["minor_issues"]),
            questions_for_authors=list(d["questions_for_authors"]),
            improvement_recommendations=list(d["improvement_recommendations"]),
            kind=kind,
            reviewer_model=d["reviewer_model"],
            used_rag=d.get("used_rag", False),
            rag_degraded=d.get("rag_degraded", False),
        )


def dimension_names(kind: SubmissionKind) -> tuple[str, ...]:
    if kind == SubmissionKind.PROPOSAL:
        return schemas.PROPOSAL_DIMENSIONS
    return schemas.PAPER_DIMENSIONS


def review_schema_id(kind: SubmissionKind) -> str:
    return "review-proposal" if kind == SubmissionKind.PROPOSAL else "review-paper"


def _literature_text(
    retriever: LiteratureRetriever | None,
    document_text: str,
    budget: int,
) -> tuple[str, bool, bool]:
    """Return (text, used, degraded)."""
    if retriever is None:
        return "", False, False
    try:
        block = retriever.literature_block(document_text, budget)
    except SearchUnavailable:
        return "", False, True
    if block.source_count == 0:
        return "", False, False
    return "Related literature:\n" + block.text, True, False


def review_single(
    version: SubmissionVersion,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> ReviewReport:
    doc = truncate_to_budget(version.body, budgets.for_kind(kind))
    lit_text, used, degraded = ("", False, False)
    if use_rag:
        lit_text, used, degraded = _literature_text(retriever, doc, budgets.literature)
    if kind == SubmissionKind.PROPOSAL:
        prompt = prompts.PROPOSAL_REVIEW.format(
            proposal_text=doc, related_literature=lit_text
        )
    else:
        prompt = prompts.PAPER_REVIEW.format(paper_text=doc, related_literature=lit_text)
    request = ChatRequest(
        model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
    )
    document = gateway.complete_structured(request, review_schema_id(kind))
    names = dimension_names(kind)
    return ReviewReport(
        dimensions={
            name: DimensionFeedback(
                strengths=tuple(document[name]["strengths"]),
                weaknesses=tuple(document[name]["weaknesses"]),
                suggestions=tuple(document[name]["suggestions"]),
            )
            for name in names
        },
        summary=document["summary"],
        major_concerns=list(document["major_concerns"]),
        minor_issues=list(document["minor_issues"]),
        questions_for_authors=list(document["questions_for_authors"]),
        improvement_recommendations=list(document["improvement_recommendations"]),
        kind=kind,
        reviewer_model=model_id,
        used_rag=used,
        rag_degraded=degraded,
    )


RESPONSE_LETTER_HEADER = "## Response letter (fill in replies to the review)"


def build_revision_packet(
    report: ReviewReport,
    prior_version: SubmissionVersion,
    include_response_letter_slot: bool = True,
) -> str:
    """Deterministic concatenation handed to the author agent for revision."""
    serialized = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    sections = [
        "## Current draft",
        prior_version.body,
        "## Review",
        serialized,
    ]
    if include_response_letter_slot:
        sections += [RESPONSE_LETTER_HEADER, ""]
    return "\n\n".join(sections)
