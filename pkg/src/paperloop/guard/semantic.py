"""Stage 3: semantic verification through the model gateway.

Three checks per candidate region: imperative/benign classification,
contextual consistency (the surrounding text rides along in the prompt),
and translate-and-rescan for non-dominant-language spans. Backend
failures never drop a candidate: it passes through unconfirmed with its
severity capped at Medium, and the scan report notes the degradation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..gateway import ChatMessage, ChatRequest, GatewayError, LLMGateway
from .. import prompts
from .anomaly import Anomaly, Location, RuleFamily, Severity, Stage, cap_severity
from .categorize import matrix_category
from .extract import ExtractedDocument
from .payloads import has_semantic_cue, match_keywords

_MODEL_SEVERITY = {
    "low": Severity.LOW,
    "medium": Severity.MEDIUM,
    "high": Severity.HIGH,
}


@dataclass
class SemanticResult:
    anomalies: list[Anomaly]
    degraded: bool = False


def _context_for(doc: ExtractedDocument, anomaly: Anomaly, window: int = 2) -> str:
    loc = anomaly.location
    if loc.is_metadata:
        return "document metadata field " + str(loc.metadata_key)
    spans = [s for s in doc.spans if s.page == loc.page]
    try:
        idx = next(i for i, s in enumerate(spans) if s.bbox == loc.bbox)
    except StopIteration:
        idx = 0
    neighbours = spans[max(0, idx - window) : idx] + spans[idx + 1 : idx + 1 + window]
    return " ".join(s.text for s in neighbours) or "(no surrounding text)"


def sample_cue_spans(doc: ExtractedDocument, existing: list[Anomaly]) -> list[Anomaly]:
    """Unflagged imperative-looking spans also deserve a semantic look."""
    covered = {
        (a.location.page, a.location.bbox) for a in existing if not a.location.is_metadata
    }
    extra = []
    for span in doc.spans:
        if (span.page, span.bbox) in covered or not has_semantic_cue(span.text):
            continue
        extra.append(
            Anomaly(
                category_hint=matrix_category(RuleFamily.SEMANTIC_CUE),
                severity=Severity.LOW,
                location=Location(page=span.page, bbox=span.bbox),
                evidence=span.text[:240],
                stage=Stage.COARSE,
                family=RuleFamily.SEMANTIC_CUE,
            )
        )
    return extra


def _verify_one(
    doc: ExtractedDocument,
    candidate: Anomaly,
    model_id: str,
    gateway: LLMGateway,
) -> tuple[Anomaly | None, bool]:
    """Returns (anomaly or None if dismissed, degraded flag)."""
    try:
        language = candidate.attr("language", "en")
        if language != "en":
            request = ChatRequest(
                model_id=model_id,
                messages=(
                    ChatMessage(
                        role="user",
                        text=prompts.GUARD_TRANSLATE.format(passage=candidate.evidence),
                    ),
                ),
            )
            translation = gateway.complete_structured(request, "guard-translate")
            if match_keywords(str(translation["translation"])):
                return (
                    replace(candidate, severity=Severity.HIGH, stage=Stage.SEMANTIC),
                    False,
                )
            return None, False

        request = ChatRequest(
            model_id=model_id,
            messages=(
                ChatMessage(
                    role="user",
                    text=prompts.GUARD_CLASSIFY.format(
                        candidate=candidate.evidence,
                        context=_context_for(doc, candidate),
                    ),
                ),
            ),
        )
        verdict = gateway.complete_structured(request, "guard-classify")
        if verdict["verdict"] == "benign":
            return None, False
        return (
            replace(
                candidate,
                severity=_MODEL_SEVERITY[verdict["severity"]],
                stage=Stage.SEMANTIC,
            ),
            False,
        )
    except GatewayError:
        return replace(candidate, severity=cap_severity(candidate.severity, Severity.MEDIUM)), True


def semantic_verify(
    doc: ExtractedDocument,
    candidates: list[Anomaly],
    model_id: str,
    gateway: LLMGateway,
    *,
    max_workers: int = 4,
) -> SemanticResult:
    candidates = list(candidates) + sample_cue_spans(doc, candidates)
    if not candidates:
        return SemanticResult(anomalies=[])
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(
            pool.map(lambda c: _verify_one(doc, c, model_id, gateway), candidates)
        )
    anomalies = [a for a, _ in results if a is not None]
    degraded = any(d for _, d in results)
    return SemanticResult(anomalies=anomalies, degraded=degraded)
