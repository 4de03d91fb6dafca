"""Registered JSON schemas for structured model output.

Every structured call through the gateway names one of these schemas;
the gateway refuses to return a document that does not validate.
"""

from __future__ import annotations

import jsonschema

PROPOSAL_DIMENSIONS = (
    "methodological_quality",
    "novelty_significance",
    "clarity_organization",
    "feasibility_planning",
)

PAPER_DIMENSIONS = (
    "clarity",
    "originality_novelty",
    "quality_soundness",
    "significance_impact",
)

PROPOSAL_SCORE_KEYS = ("novelty", "soundness", "impact", "clarity", "feasibility")
PAPER_SCORE_KEYS = (
    "clarity",
    "originality",
    "quality_soundness",
    "significance_impact",
    "rating",
)

_STRING_LIST = {"type": "array", "items": {"type": "string"}}

_DIMENSION = {
    "type": "object",
    "properties": {
        "strengths": _STRING_LIST,
        "weaknesses": _STRING_LIST,
        "suggestions": _STRING_LIST,
    },
    "required": ["strengths", "weaknesses", "suggestions"],
    "additionalProperties": False,
}


def _review_schema(dimensions: tuple[str, ...]) -> dict:
    props: dict = {name: _DIMENSION for name in dimensions}
    props.update(
        {
            "summary": {"type": "string", "minLength": 1},
            "major_concerns": _STRING_LIST,
            "minor_issues": _STRING_LIST,
            "questions_for_authors": _STRING_LIST,
            "improvement_recommendations": _STRING_LIST,
        }
    )
    return {
        "type": "object",
        "properties": props,
        "required": list(props),
        "additionalProperties": False,
    }


def _score(lo: int, hi: int, integer: bool = True) -> dict:
    return {
        "type": "integer" if integer else "number",
        "minimum": lo,
        "maximum": hi,
    }


def _vote_schema(score_keys: tuple[str, ...]) -> dict:
    return {
        "type": "object",
        "properties": {
            "decision": {"enum": ["accept", "reject"]},
            "confidence": {"type": "number", "minimum": 0, "maximum": 1},
            "reasons": _STRING_LIST,
            "scores": {
                "type": "object",
                "properties": {k: _score(0, 10, integer=False) for k in score_keys},
                "required": list(score_keys),
                "additionalProperties": False,
            },
            "meta": {
                "type": "object",
                "properties": {"used_lit_search": {"type": "boolean"}},
                "required": ["used_lit_search"],
                "additionalProperties": False,
            },
        },
        "required": ["decision", "confidence", "reasons", "scores", "meta"],
        "additionalProperties": False,
    }


SCHEMAS: dict[str, dict] = {
    "review-proposal": _review_schema(PROPOSAL_DIMENSIONS),
    "review-paper": _review_schema(PAPER_DIMENSIONS),
    "meta-review": {
        "type": "object",
        "properties": {
            "summary": {"type": "string", "minLength": 1},
            "decision": {"enum": ["accept", "reject"]},
            "justification": {"type": "string"},
            "criteria_scores": {
                "type": "object",
                "properties": {
                    "soundness": _score(0, 4),
                    "presentation": _score(0, 4),
                    "contribution": _score(0, 4),
                },
                "required": ["soundness", "presentation", "contribution"],
                "additionalProperties": False,
            },
            "rating": _score(1, 10),
        },
        "required": ["summary", "decision", "justification", "criteria_scores", "rating"],
        "additionalProperties": False,
    },
    "pairwise": {
        "type": "object",
        "oneOf": [
            {
                "properties": {"betterproposal": {"enum": ["Proposal1", "Proposal2"]}},
                "required": ["betterproposal"],
                "additionalProperties": False,
            },
            {
                "properties": {"betterpaper": {"enum": ["Paper1", "Paper2"]}},
                "required": ["betterpaper"],
                "additionalProperties": False,
            },
        ],
    },
    "vote-proposal": _vote_schema(PROPOSAL_SCORE_KEYS),
    "vote-paper": _vote_schema(PAPER_SCORE_KEYS),
    "planner": {
        "type": "object",
        "properties": {
            "reviewers": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "role": {"type": "string", "minLength": 1},
                        "expertise": {"type": "string", "minLength": 1},
                        "instructions": {"type": "string", "minLength": 1},
                    },
                    "required": ["role", "expertise", "instructions"],
                    "additionalProperties": False,
                },
            }
        },
        "required": ["reviewers"],
        "additionalProperties": False,
    },
    # Validated per sub-reviewer inside meta review; not one of the seven
    # top-level call schemas but registered through the same machinery.
    "sub-review": {
        "type": "object",
        "properties": {
            "criteria": {
                "type": "object",
                "minProperties": 1,
                "additionalProperties": {
                    "type": "object",
                    "properties": {
                        "score": _score(0, 4),
                        "comment": {"type": "string"},
                    },
                    "required": ["score", "comment"],
                    "additionalProperties": False,
                },
            },
            "notes": {"type": "string"},
        },
        "required": ["criteria", "notes"],
        "additionalProperties": False,
    },
    # Injection-guard semantic stage: span classification and machine
    # translation both go through the gateway's structured path.
    "guard-classify": {
        "type": "object",
        "properties": {
            "verdict": {"enum": ["attack", "benign"]},
            "severity": {"enum": ["low", "medium", "high"]},
            "rationale": {"type": "string"},
        },
        "required": ["verdict", "severity", "rationale"],
        "additionalProperties": False,
    },
    "guard-translate": {
        "type": "object",
        "properties": {"translation": {"type": "string"}},
        "required": ["translation"],
        "additionalProperties": False,
    },
}

_VALIDATORS = {
    name: jsonschema.Draft202012Validator(schema) for name, schema in SCHEMAS.items()
}


def validate(schema_id: str, document: object) -> list[str]:
    """Return validation error messages; empty list means valid."""
    if schema_id not in _VALIDATORS:
        raise KeyError(f"unknown schema {schema_id!r}")
    return [e.message for e in _VALIDATORS[schema_id].iter_errors(document)]
