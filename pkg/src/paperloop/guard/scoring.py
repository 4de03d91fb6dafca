"""Stages 4-5 wiring: risk scoring and the full scan pipeline.

Score = Σ severity_multiplier × category_weight × location_weight over
anomalies. The numeric defaults are configurable inventions: category
weights follow the prevalence ranking of the attack taxonomy, and the
default threshold equals the smallest possible single-High contribution
(9 × 0.5 × 1.0 = 4.5) so one confirmed High anomaly always flags.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field

from ..gateway import LLMGateway
from .anomaly import Anomaly, AttackCategory, Severity
from .categorize import categorize
from .extract import extract
from .rules import DEFAULT_RULESET, Ruleset, coarse_scan
from .semantic import semantic_verify

REPORT_VERSION = 1

DEFAULT_SEVERITY_MULTIPLIERS: dict[Severity, float] = {
    Severity.LOW: 1.0,
    Severity.MEDIUM: 3.0,
    Severity.HIGH: 9.0,
}

DEFAULT_CATEGORY_WEIGHTS: dict[AttackCategory, float] = {
    AttackCategory.WHITE_TEXT: 1.0,
    AttackCategory.METADATA: 0.9,
    AttackCategory.INVISIBLE_CHARS: 0.8,
    AttackCategory.MIXED_LANGUAGE: 0.7,
    AttackCategory.STEGANOGRAPHIC: 0.6,
    AttackCategory.CONTEXTUAL_ATTACK: 0.5,
}

DEFAULT_THRESHOLD = 4.5


@dataclass(frozen=True)
class Weights:
    severity: dict[Severity, float] = field(
        default_factory=lambda: dict(DEFAULT_SEVERITY_MULTIPLIERS)
    )
    category: dict[AttackCategory, float] = field(
        default_factory=lambda: dict(DEFAULT_CATEGORY_WEIGHTS)
    )
    hidden_location: float = 1.5  # metadata fields and invisible-char regions
    default_location: float = 1.0


DEFAULT_WEIGHTS = Weights()


def _location_weight(anomaly: Anomaly, weights: Weights) -> float:
    hidden = (
        anomaly.location.is_metadata
        or anomaly.category_hint == AttackCategory.INVISIBLE_CHARS
    )
    return weights.hidden_location if hidden else weights.default_location


def risk_score(anomalies: Iterable[Anomaly], weights: Weights = DEFAULT_WEIGHTS) -> float:
    return sum(
        weights.severity[a.severity]
        * weights.category[a.category_hint]
        * _location_weight(a, weights)
        for a in anomalies
    )


@dataclass(frozen=True)
class GuardConfig:
    ruleset: Ruleset = DEFAULT_RULESET
    weights: Weights = DEFAULT_WEIGHTS
    threshold: float = DEFAULT_THRESHOLD
    semantic: bool = True
    semantic_model_id: str = "guard-semantic"


DEFAULT_CONFIG = GuardConfig()


@dataclass
class ScanReport:
    anomalies: list[Anomaly]
    categories: set[AttackCategory]
    risk_score: float
    threshold: float
    flagged: bool
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "flagged": self.flagged,
            "risk_score": self.risk_score,
            "threshold": self.threshold,
            "degraded": self.degraded,
            "categories": sorted(c.value for c in self.categories),
            "anomalies": [a.to_dict() for a in self.anomalies],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def scan(
    pdf_bytes: bytes,
    config: GuardConfig = DEFAULT_CONFIG,
    gateway: LLMGateway | None = None,
) -> ScanReport:
    doc = extract(pdf_bytes)
    anomalies = coarse_scan(doc, config.ruleset)
    degraded = False
    if config.semantic and gateway is not None:
        result = semantic_verify(doc, anomalies, config.semantic_model_id, gateway)
        anomalies = result.anomalies
        degraded = result.degraded
    score = risk_score(anomalies, config.weights)
    return ScanReport(
        anomalies=anomalies,
        categories=categorize(anomalies),
        risk_score=score,
        threshold=config.threshold,
        flagged=score >= config.threshold,
        degraded=degraded,
    )
