"""Five-stage prompt-injection detection and defense over PDFs."""

from .anomaly import (
    Anomaly,
    AttackCategory,
    Location,
    RuleFamily,
    Severity,
    Stage,
)
from .categorize import categorize, matrix_category
from .extract import ExtractedDocument, TextSpan, extract
from .rules import DEFAULT_RULESET, Ruleset, coarse_scan
from .scoring import (
    DEFAULT_CONFIG,
    DEFAULT_THRESHOLD,
    DEFAULT_WEIGHTS,
    GuardConfig,
    ScanReport,
    Weights,
    risk_score,
    scan,
)
from .semantic import SemanticResult, semantic_verify
from .synthesize import (
    CATEGORY_PROPORTIONS,
    CorpusEntry,
    apportion,
    build_corpus,
    synthesize_attack,
)

__all__ = [
    "Anomaly",
    "AttackCategory",
    "CATEGORY_PROPORTIONS",
    "CorpusEntry",
    "DEFAULT_CONFIG",
    "DEFAULT_RULESET",
    "DEFAULT_THRESHOLD",
    "DEFAULT_WEIGHTS",
    "ExtractedDocument",
    "GuardConfig",
    "Location",
    "RuleFamily",
    "Ruleset",
    "ScanReport",
    "SemanticResult",
    "Severity",
    "Stage",
    "TextSpan",
    "Weights",
    "apportion",
    "build_corpus",
    "categorize",
    "coarse_scan",
    "extract",
    "matrix_category",
    "risk_score",
    "scan",
    "semantic_verify",
    "synthesize_attack",
]
