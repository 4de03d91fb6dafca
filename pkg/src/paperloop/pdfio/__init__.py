"""Minimal PDF reading and writing.

The writer emits deterministic classic-xref PDFs and can graft extra
content onto an existing file via incremental updates, which keeps
injected material strictly additive. The parser recovers text spans with
style attributes (position, font size, fill color) plus document-info and
XMP metadata.
"""

from .parser import (
    EncryptedPdf,
    MalformedPdf,
    PdfDocument,
    PdfPage,
    RawTextSpan,
    parse_pdf,
)
from .writer import PdfBuilder, IncrementalWriter, UnsupportedPdfStructure

__all__ = [
    "EncryptedPdf",
    "IncrementalWriter",
    "MalformedPdf",
    "PdfBuilder",
    "PdfDocument",
    "PdfPage",
    "RawTextSpan",
    "UnsupportedPdfStructure",
    "parse_pdf",
]
