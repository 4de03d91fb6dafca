"""Stage 1: layout-aware extraction of text, style, and metadata."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from ..pdfio import EncryptedPdf, MalformedPdf, parse_pdf  # noqa: F401 (re-export)
from .payloads import CONFUSABLES, ZERO_WIDTH_CHARS


@dataclass(frozen=True)
class TextSpan:
    text: str
    page: int
    bbox: tuple[float, float, float, float]
    font_size: float
    color: tuple[float, float, float]
    encoding_flags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.font_size <= 0:
            raise ValueError("font_size must be positive")
        x0, y0, x1, y1 = self.bbox
        if x0 > x1 or y0 > y1:
            raise ValueError("bbox must be well-ordered")


@dataclass
class ExtractedDocument:
    spans: list[TextSpan]
    metadata: dict[str, str]
    page_backgrounds: dict[int, tuple[float, float, float]] = field(default_factory=dict)
    page_boxes: dict[int, tuple[float, float, float, float]] = field(default_factory=dict)

    def background_for(self, page: int) -> tuple[float, float, float]:
        return self.page_backgrounds.get(page, (1.0, 1.0, 1.0))


def encoding_flags(text: str) -> frozenset[str]:
    flags = set()
    for ch in text:
        if ch in ZERO_WIDTH_CHARS:
            flags.add("zero-width")
        elif ch in CONFUSABLES:
            flags.add("confusable")
        elif unicodedata.category(ch) in ("Cc", "Cf") and ch not in "\n\r\t":
            flags.add("control")
    return frozenset(flags)


def extract(pdf_bytes: bytes) -> ExtractedDocument:
    parsed = parse_pdf(pdf_bytes)
    spans = [
        TextSpan(
            text=raw.text,
            page=raw.page,
            bbox=raw.bbox,
            font_size=max(raw.font_size, 1e-6),
            color=raw.color,
            encoding_flags=encoding_flags(raw.text),
        )
        for raw in parsed.spans
    ]
    metadata = dict(parsed.info)
    for tag, value in parsed.xmp_fields.items():
        metadata[f"xmp:{tag}"] = value
    return ExtractedDocument(
        spans=spans,
        metadata=metadata,
        page_backgrounds={p.number: p.background for p in parsed.pages},
        page_boxes={p.number: p.media_box for p in parsed.pages},
    )
