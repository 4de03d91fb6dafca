"""PDF object model shared by the parser and the writer.

Mapping: Python dict -> PDF dictionary, list -> array, Name -> /Name,
Ref -> indirect reference, bytes -> literal string, str -> text string
(encoded as PDFDocEncoding-compatible latin-1 or UTF-16BE), int/float ->
numbers, bool/None -> keywords.
"""

from __future__ import annotations

from dataclasses import dataclass


class Name(str):
    """A PDF name object (/Like /This)."""

    __slots__ = ()


@dataclass(frozen=True)
class Ref:
    num: int
    gen: int = 0


@dataclass
class Stream:
    dictionary: dict
    data: bytes


def _escape_literal(data: bytes) -> bytes:
    out = bytearray()
    for b in data:
        if b in (0x28, 0x29, 0x5C):  # ( ) \
            out += b"\\" + bytes([b])
        elif b in (0x0A, 0x0D):
            out += b"\\n" if b == 0x0A else b"\\r"
        else:
            out.append(b)
    return bytes(out)


def encode_text_string(text: str) -> bytes:
    try:
        return text.encode("latin-1")
    except UnicodeEncodeError:
        return b"\xfe\xff" + text.encode("utf-16-be")


def serialize(obj) -> bytes:
    if isinstance(obj, Name):
        return b"/" + obj.encode("ascii")
    if isinstance(obj, bool):
        return b"true" if obj else b"false"
    if obj is None:
        return b"null"
    if isinstance(obj, int):
        return str(obj).encode("ascii")
    if isinstance(obj, float):
        return f"{obj:.4f}".rstrip("0").rstrip(".").encode("ascii")
    if isinstance(obj, Ref):
        return f"{obj.num} {obj.gen} R".encode("ascii")
    if isinstance(obj, bytes):
        return b"(" + _escape_literal(obj) + b")"
    if isinstance(obj, str):
        return b"(" + _escape_literal(encode_text_string(obj)) + b")"
    if isinstance(obj, list):
        return b"[" + b" ".join(serialize(x) for x in obj) + b"]"
    if isinstance(obj, dict):
        parts = []
        for key, value in obj.items():
            parts.append(b"/" + key.encode("ascii") + b" " + serialize(value))
        return b"<< " + b" ".join(parts) + b" >>"
    if isinstance(obj, Stream):
        d = dict(obj.dictionary)
        d["Length"] = len(obj.data)
        return serialize(d) + b"\nstream\n" + obj.data + b"\nendstream"
    raise TypeError(f"cannot serialize {type(obj)!r}")
