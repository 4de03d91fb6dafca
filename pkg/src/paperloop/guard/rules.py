"""Stage 2: coarse rule-based scan.

Six independent rule families run concurrently over a read-only
extracted document. Disabling a family removes exactly its anomalies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .anomaly import Anomaly, Location, RuleFamily, Severity, Stage
from .categorize import matrix_category
from .extract import ExtractedDocument, TextSpan
from .payloads import ZERO_WIDTH_CHARS, match_keywords

ALL_FAMILIES = frozenset(
    {
        RuleFamily.KEYWORD,
        RuleFamily.NEAR_BACKGROUND,
        RuleFamily.TINY_FONT,
        RuleFamily.INVISIBLE_CHARS,
        RuleFamily.METADATA,
        RuleFamily.OUT_OF_PAGE,
    }
)


@dataclass(frozen=True)
class Ruleset:
    color_distance_threshold: float = 0.05
    tiny_font_pt: float = 2.0
    zero_width_chars: frozenset[str] = ZERO_WIDTH_CHARS
    enabled_families: frozenset[RuleFamily] = ALL_FAMILIES

    def without(self, family: RuleFamily) -> "Ruleset":
        return Ruleset(
            color_distance_threshold=self.color_distance_threshold,
            tiny_font_pt=self.tiny_font_pt,
            zero_width_chars=self.zero_width_chars,
            enabled_families=self.enabled_families - {family},
        )


DEFAULT_RULESET = Ruleset()


def color_distance(a: tuple[float, float, float], b: tuple[float, float, float]) -> float:
    return math.dist(a, b)


def _excerpt(text: str, limit: int = 240) -> str:
    return text if len(text) <= limit else text[: limit - 1] + "…"


def _span_attrs(span: TextSpan, doc: ExtractedDocument, ruleset: Ruleset) -> dict:
    background = doc.background_for(span.page)
    return {
        "zero_width": any(ch in ruleset.zero_width_chars for ch in span.text),
        "near_background": color_distance(span.color, background)
        < ruleset.color_distance_threshold,
        "tiny": span.font_size < ruleset.tiny_font_pt,
        "out_of_page": _is_out_of_page(span, doc),
        "in_url": "http://" in span.text or "https://" in span.text,
    }


def _is_out_of_page(span: TextSpan, doc: ExtractedDocument) -> bool:
    box = doc.page_boxes.get(span.page)
    if box is None:
        return False
    px0, py0, px1, py1 = box
    x0, y0, x1, y1 = span.bbox
    return x1 <= px0 or x0 >= px1 or y1 <= py0 or y0 >= py1


def _rule_keyword(doc: ExtractedDocument, ruleset: Ruleset) -> list[Anomaly]:
    out = []
    for span in doc.spans:
        for pattern, language in match_keywords(span.text):
            attrs = _span_attrs(span, doc, ruleset)
            out.append(
                Anomaly(
                    category_hint=matrix_category(
                        RuleFamily.KEYWORD, language=language, **attrs
                    ),
                    severity=Severity.HIGH,
                    location=Location(page=span.page, bbox=span.bbox),
                    evidence=_excerpt(span.text),
                    stage=Stage.COARSE,
                    family=RuleFamily.KEYWORD,
                    attributes=tuple(
                        sorted({"pattern": pattern, "language": language, **attrs}.items())
                    ),
                )
            )
    return out


def _style_rule(family: RuleFamily, key: str, severity: Severity):
    def run(doc: ExtractedDocument, ruleset: Ruleset) -> list[Anomaly]:
        out = []
        for span in doc.spans:
            attrs = _span_attrs(span, doc, ruleset)
            if attrs[key]:
                out.append(
                    Anomaly(
                        category_hint=matrix_category(family),
                        severity=severity,
                        location=Location(page=span.page, bbox=span.bbox),
                        evidence=_excerpt(span.text),
                        stage=Stage.COARSE,
                        family=family,
                        attributes=tuple(sorted(attrs.items())),
                    )
                )
        return out

    return run


_rule_near_background = _style_rule(
    RuleFamily.NEAR_BACKGROUND, "near_background", Severity.MEDIUM
)
_rule_tiny_font = _style_rule(RuleFamily.TINY_FONT, "tiny", Severity.MEDIUM)
_rule_out_of_page = _style_rule(RuleFamily.OUT_OF_PAGE, "out_of_page", Severity.MEDIUM)


def _rule_invisible_chars(doc: ExtractedDocument, ruleset: Ruleset) -> list[Anomaly]:
    out = []
    for span in doc.spans:
        zw_count = sum(ch in ruleset.zero_width_chars for ch in span.text)
        confusable = "confusable" in span.encoding_flags
        control = "control" in span.encoding_flags and zw_count == 0
        if not (zw_count or confusable or control):
            continue
        attrs = _span_attrs(span, doc, ruleset)
        out.append(
            Anomaly(
                category_hint=matrix_category(RuleFamily.INVISIBLE_CHARS),
                severity=Severity.MEDIUM if zw_count else Severity.LOW,
                location=Location(page=span.page, bbox=span.bbox),
                evidence=_excerpt(span.text),
                stage=Stage.COARSE,
                family=RuleFamily.INVISIBLE_CHARS,
                attributes=tuple(
                    sorted(
                        {
                            "count": zw_count,
                            "confusable": confusable,
                            "control": control,
                            **attrs,
                        }.items()
                    )
                ),
            )
        )
    return out


def _rule_metadata(doc: ExtractedDocument, ruleset: Ruleset) -> list[Anomaly]:
    out = []
    for key, value in doc.metadata.items():
        for pattern, language in match_keywords(value):
            out.append(
                Anomaly(
                    category_hint=matrix_category(RuleFamily.METADATA),
                    severity=Severity.HIGH,
                    location=Location(metadata_key=key),
                    evidence=_excerpt(value),
                    stage=Stage.COARSE,
                    family=RuleFamily.METADATA,
                    attributes=tuple(
                        sorted({"pattern": pattern, "language": language}.items())
                    ),
                )
            )
    return out


_RULES = {
    RuleFamily.KEYWORD: _rule_keyword,
    RuleFamily.NEAR_BACKGROUND: _rule_near_background,
    RuleFamily.TINY_FONT: _rule_tiny_font,
    RuleFamily.INVISIBLE_CHARS: _rule_invisible_chars,
    RuleFamily.METADATA: _rule_metadata,
    RuleFamily.OUT_OF_PAGE: _rule_out_of_page,
}


def coarse_scan(doc: ExtractedDocument, ruleset: Ruleset = DEFAULT_RULESET) -> list[Anomaly]:
    families = [f for f in _RULES if f in ruleset.enabled_families]
    with ThreadPoolExecutor(max_workers=len(_RULES)) as pool:
        results = pool.map(lambda f: _RULES[f](doc, ruleset), families)
    anomalies: list[Anomaly] = []
    for chunk in results:
        anomalies.extend(chunk)
    return anomalies
