import json

import pytest

from paperloop import schemas
from paperloop.gateway import LLMGateway, RetryPolicy, ScriptedBackend


def fast_retry(max_attempts: int = 3) -> RetryPolicy:
    return RetryPolicy(max_attempts=max_attempts, backoff_base=0.0, sleep=lambda s: None)


def make_gateway(reply, **kwargs) -> LLMGateway:
    return LLMGateway(ScriptedBackend(reply), retry=fast_retry(), **kwargs)


def proposal_review_doc(summary: str = "A solid proposal.") -> dict:
    doc = {
        name: {"strengths": ["s1"], "weaknesses": ["w1"], "suggestions": ["g1"]}
        for name in schemas.PROPOSAL_DIMENSIONS
    }
    doc.update(
        summary=summary,
        major_concerns=["concern"],
        minor_issues=[],
        questions_for_authors=["q1"],
        improvement_recommendations=["r1"],
    )
    return doc


def paper_review_doc(summary: str = "A solid paper.") -> dict:
    doc = {
        name: {"strengths": ["s1"], "weaknesses": ["w1"], "suggestions": ["g1"]}
        for name in schemas.PAPER_DIMENSIONS
    }
    doc.update(
        summary=summary,
        major_concerns=[],
        minor_issues=["typo"],
        questions_for_authors=[],
        improvement_recommendations=["r1"],
    )
    return doc


def vote_doc(kind: str = "proposal", decision: str = "accept", confidence: float = 0.8) -> dict:
    keys = (
        schemas.PROPOSAL_SCORE_KEYS if kind == "proposal" else schemas.PAPER_SCORE_KEYS
    )
    return {
        "decision": decision,
        "confidence": confidence,
        "reasons": ["because"],
        "scores": {k: 7 for k in keys},
        "meta": {"used_lit_search": False},
    }


def meta_review_doc(rating: int = 5, decision: str = "reject") -> dict:
    return {
        "summary": "Mixed reviews.",
        "decision": decision,
        "justification": "Scores are middling.",
        "criteria_scores": {"soundness": 2, "presentation": 2, "contribution": 2},
        "rating": rating,
    }


def planner_doc(n: int) -> dict:
    return {
        "reviewers": [
            {
                "role": f"Reviewer {i}",
                "expertise": f"field {i}",
                "instructions": "Review the submission.",
            }
            for i in range(n)
        ]
    }


def sub_review_doc(score: int = 3) -> dict:
    return {
        "criteria": {
            "soundness": {"score": score, "comment": "ok"},
            "presentation": {"score": score, "comment": "ok"},
            "contribution": {"score": score, "comment": "ok"},
        },
        "notes": "notes",
    }


def as_reply(doc: dict) -> str:
    return json.dumps(doc)


def semantic_stub_reply(request) -> str:
    """Scripted semantic-stage model for guard tests.

    Classifies a candidate as an attack when it carries a known payload
    (canonical, contextual, or after translating a known multilingual
    phrase); everything else is benign.
    """
    from paperloop.guard.payloads import (
        CONTEXTUAL_PAYLOADS,
        ENGLISH_PAYLOADS,
        MULTILINGUAL_PAYLOADS,
        normalize,
    )

    text = request.prompt_text
    if "Translate the following" in text:
        passage = text.split("Passage:", 1)[1].strip()
        for payload, gloss in MULTILINGUAL_PAYLOADS.values():
            if normalize(payload) in normalize(passage):
                return json.dumps({"translation": gloss})
        return json.dumps({"translation": passage})
    candidate = text.split("Candidate passage:", 1)[1]
    candidate = candidate.split("Surrounding context:", 1)[0].strip()
    attack = any(p in candidate for p in CONTEXTUAL_PAYLOADS) or any(
        normalize(p) in normalize(candidate) for p in ENGLISH_PAYLOADS
    )
    return json.dumps(
        {
            "verdict": "attack" if attack else "benign",
            "severity": "high" if attack else "low",
            "rationale": "scripted",
        }
    )


def semantic_stub_gateway() -> LLMGateway:
    return make_gateway(semantic_stub_reply)


def clean_pdf(i: int = 0, extra_lines: tuple[str, ...] = ()) -> bytes:
    from paperloop.pdfio import PdfBuilder

    builder = PdfBuilder(title=f"Study {i}", author="A. Researcher")
    page = builder.add_page()
    page.text(72, 720, f"Study {i}: Benchmarks for Sparse Models", size=14)
    page.text(72, 696, "We present an empirical analysis of sparse training.", size=11)
    page.text(72, 678, "Experiments cover three standard benchmark suites.", size=11)
    for j, line in enumerate(extra_lines):
        page.text(72, 660 - 18 * j, line, size=11)
    return builder.to_bytes()
