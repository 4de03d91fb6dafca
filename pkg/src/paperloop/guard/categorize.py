"""Stage 4: deterministic classification matrix.

Each anomaly maps to exactly one category from its rule family plus the
span attributes recorded at detection time; a document's category set is
the union over its anomalies, so one document can trigger several.
"""

from __future__ import annotations

from collections.abc import Iterable

from .anomaly import Anomaly, AttackCategory, RuleFamily

_FIXED = {
    RuleFamily.NEAR_BACKGROUND: AttackCategory.WHITE_TEXT,
    RuleFamily.TINY_FONT: AttackCategory.WHITE_TEXT,
    RuleFamily.INVISIBLE_CHARS: AttackCategory.INVISIBLE_CHARS,
    RuleFamily.METADATA: AttackCategory.METADATA,
    RuleFamily.OUT_OF_PAGE: AttackCategory.STEGANOGRAPHIC,
    RuleFamily.SEMANTIC_CUE: AttackCategory.CONTEXTUAL_ATTACK,
}


def matrix_category(
    family: RuleFamily,
    *,
    language: str = "en",
    zero_width: bool = False,
    near_background: bool = False,
    tiny: bool = False,
    out_of_page: bool = False,
    in_metadata: bool = False,
    in_url: bool = False,
) -> AttackCategory:
    if family in _FIXED:
        return _FIXED[family]
    # Keyword hits classify by where and how the payload was hidden. A
    # zero-width hit inside a URL stays InvisibleChars (URL-encoding
    # injection is treated as a sub-rule, not its own category).
    if in_metadata:
        return AttackCategory.METADATA
    if language != "en":
        return AttackCategory.MIXED_LANGUAGE
    if zero_width or in_url:
        return AttackCategory.INVISIBLE_CHARS
    if near_background or tiny:
        return AttackCategory.WHITE_TEXT
    if out_of_page:
        return AttackCategory.STEGANOGRAPHIC
    return AttackCategory.CONTEXTUAL_ATTACK


def categorize(anomalies: Iterable[Anomaly]) -> set[AttackCategory]:
    return {a.category_hint for a in anomalies}
