"""Finding types shared by every guard stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class AttackCategory(Enum):
    WHITE_TEXT = "WhiteText"
    METADATA = "Metadata"
    INVISIBLE_CHARS = "InvisibleChars"
    MIXED_LANGUAGE = "MixedLanguage"
    STEGANOGRAPHIC = "Steganographic"
    CONTEXTUAL_ATTACK = "ContextualAttack"


class Severity(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class Stage(Enum):
    COARSE = "Coarse"
    SEMANTIC = "Semantic"


class RuleFamily(Enum):
    """Coarse rule families (a)-(f), plus the semantic sampler."""

    KEYWORD = "keyword"
    NEAR_BACKGROUND = "near_background"
    TINY_FONT = "tiny_font"
    INVISIBLE_CHARS = "invisible_chars"
    METADATA = "metadata"
    OUT_OF_PAGE = "out_of_page"
    SEMANTIC_CUE = "semantic_cue"


@dataclass(frozen=True)
class Location:
    page: int | None = None
    bbox: tuple[float, float, float, float] | None = None
    metadata_key: str | None = None

    def __post_init__(self) -> None:
        if (self.page is None) == (self.metadata_key is None):
            raise ValueError("location is either a page region or a metadata key")

    @property
    def is_metadata(self) -> bool:
        return self.metadata_key is not None


_SEVERITY_ORDER = {Severity.LOW: 0, Severity.MEDIUM: 1, Severity.HIGH: 2}


def cap_severity(severity: Severity, cap: Severity) -> Severity:
    return severity if _SEVERITY_ORDER[severity] <= _SEVERITY_ORDER[cap] else cap


@dataclass(frozen=True)
class Anomaly:
    category_hint: AttackCategory
    severity: Severity
    location: Location
    evidence: str
    stage: Stage
    family: RuleFamily
    # Span attributes the classification matrix keyed on; kept for audit.
    attributes: tuple[tuple[str, object], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.evidence:
            raise ValueError("evidence must be non-empty")

    def attr(self, key: str, default=None):
        return dict(self.attributes).get(key, default)

    def to_dict(self) -> dict:
        return {
            "category": self.category_hint.value,
            "severity": self.severity.value,
            "stage": self.stage.value,
            "family": self.family.value,
            "evidence": self.evidence,
            "location": {
                "page": self.location.page,
                "bbox": list(self.location.bbox) if self.location.bbox else None,
                "metadata_key": self.location.metadata_key,
            },
            "attributes": {k: v for k, v in self.attributes},
        }
