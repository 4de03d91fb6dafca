"""Deterministic scripted model for demos and offline operation.

Inspects the prompt to decide which schema is being requested and
answers with a plausible, deterministic document. Useful for running the
whole closed loop without any model backend.
"""

from __future__ import annotations

import hashlib
import json

from .. import schemas
from ..gateway import ChatRequest, LLMGateway, RetryPolicy, ScriptedBackend


def _seed_from(text: str, lo: int, hi: int) -> int:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return lo + digest[0] % (hi - lo + 1)


def _review_doc(dimensions: tuple[str, ...]) -> dict:
    doc = {
        name: {
            "strengths": [f"The {name.replace('_', ' ')} is handled competently."],
            "weaknesses": [f"The {name.replace('_', ' ')} would benefit from detail."],
            "suggestions": [f"Expand the discussion of {name.replace('_', ' ')}."],
        }
        for name in dimensions
    }
    doc.update(
        summary="A competent submission with room to sharpen its argument.",
        major_concerns=["The evaluation protocol needs a stronger baseline."],
        minor_issues=["Several figures lack axis labels."],
        questions_for_authors=["How sensitive are results to the main hyperparameter?"],
        improvement_recommendations=["Add an ablation over the key design choice."],
    )
    return doc


def demo_reply(request: ChatRequest) -> str:
    text = request.prompt_text
    if "Candidate passage:" in text:
        return json.dumps(
            {"verdict": "benign", "severity": "low", "rationale": "demo stub"}
        )
    if "Translate the following" in text:
        passage = text.split("Passage:", 1)[-1].strip()
        return json.dumps({"translation": passage})
    if "betterproposal" in text:
        return json.dumps({"betterproposal": "Proposal1"})
    if "betterpaper" in text:
        return json.dumps({"betterpaper": "Paper1"})
    if "Planner Agent" in text:
        return json.dumps(
            {
                "reviewers": [
                    {
                        "role": f"Domain reviewer {i}",
                        "expertise": f"subfield {i}",
                        "instructions": "Assess the submission against the criteria.",
                    }
                    for i in range(1, 4)
                ]
            }
        )
    if "Summarizer Agent" in text:
        return json.dumps(
            {
                "summary": "Sub-reviews broadly agree on solid but unexceptional work.",
                "decision": "reject",
                "justification": "Scores cluster at the middle of the scale.",
                "criteria_scores": {"soundness": 2, "presentation": 2, "contribution": 2},
                "rating": _seed_from(text, 4, 6),
            }
        )
    if '"criteria"' in text:
        return json.dumps(
            {
                "criteria": {
                    "soundness": {"score": 2, "comment": "Method is plausible."},
                    "presentation": {"score": 3, "comment": "Readable throughout."},
                    "contribution": {"score": 2, "comment": "Incremental advance."},
                },
                "notes": "No blocking issues found.",
            }
        )
    if '"decision"' in text and '"scores"' in text:
        proposal = '"feasibility"' in text
        keys = schemas.PROPOSAL_SCORE_KEYS if proposal else schemas.PAPER_SCORE_KEYS
        accept = _seed_from(request.model_id + text[:200], 0, 99) < 60
        return json.dumps(
            {
                "decision": "accept" if accept else "reject",
                "confidence": 0.7,
                "reasons": ["Deterministic demo vote."],
                "scores": {k: 6 for k in keys},
                "meta": {"used_lit_search": False},
            }
        )
    if "{" in text and "methodological_quality" in text:
        return json.dumps(_review_doc(schemas.PROPOSAL_DIMENSIONS))
    return json.dumps(_review_doc(schemas.PAPER_DIMENSIONS))


def demo_gateway() -> LLMGateway:
    retry = RetryPolicy(max_attempts=3, backoff_base=0.0, sleep=lambda s: None)
    return LLMGateway(ScriptedBackend(demo_reply), retry=retry)
