"""Deterministic PDF generation.

``PdfBuilder`` produces classic-xref PDFs byte-for-byte reproducibly:
fixed creation dates, no file /ID, stable object ordering. Text can use
either a simple WinAnsi Helvetica font or an Identity-H Type0 font whose
CIDs equal Unicode code points, which is what lets tests plant zero-width
characters precisely.

``IncrementalWriter`` grafts new objects onto an existing file through an
incremental update (original bytes are preserved verbatim), the natural
vehicle for additive content injection.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

from .objects import Name, Ref, Stream, serialize
from . import parser as _parser


class UnsupportedPdfStructure(Exception):
    pass


DEFAULT_CREATION_DATE = "D:20260101000000Z"
_HEADER = b"%PDF-1.7\n%\xe2\xe3\xcf\xd3\n"


def _fmt(value: float) -> str:
    return serialize(float(value)).decode("ascii")


def _text_show_ops(
    font_res: str,
    x: float,
    y: float,
    text: str,
    size: float,
    color: tuple[float, float, float],
    *,
    hex_codes: bool,
) -> bytes:
    r, g, b = (_fmt(c) for c in color)
    if hex_codes:
        shown = "<" + "".join(f"{ord(ch):04X}" for ch in text) + ">"
    else:
        shown = serialize(text.encode("latin-1")).decode("latin-1")
    ops = (
        f"BT /{font_res} {_fmt(size)} Tf {r} {g} {b} rg "
        f"{_fmt(x)} {_fmt(y)} Td {shown} Tj ET"
    )
    return ops.encode("latin-1")


def _rect_ops(x, y, w, h, color) -> bytes:
    r, g, b = (_fmt(c) for c in color)
    return (
        f"{r} {g} {b} rg {_fmt(x)} {_fmt(y)} {_fmt(w)} {_fmt(h)} re f"
    ).encode("ascii")


def _tounicode_cmap(codes: set[int]) -> bytes:
    lines = [
        "/CIDInit /ProcSet findresource begin",
        "12 dict begin",
        "begincmap",
        "/CIDSystemInfo << /Registry (Adobe) /Ordering (UCS) /Supplement 0 >> def",
        "/CMapName /Adobe-Identity-UCS def",
        "/CMapType 2 def",
        "1 begincodespacerange",
        "<0000> <FFFF>",
        "endcodespacerange",
    ]
    ordered = sorted(codes)
    for start in range(0, len(ordered), 100):
        chunk = ordered[start : start + 100]
        lines.append(f"{len(chunk)} beginbfchar")
        lines.extend(f"<{c:04X}> <{c:04X}>" for c in chunk)
        lines.append("endbfchar")
    lines += ["endcmap", "CMapName currentdict /CMap defineresource pop", "end", "end"]
    return "\n".join(lines).encode("ascii")


def _simple_font_obj() -> dict:
    return {
        "Type": Name("Font"),
        "Subtype": Name("Type1"),
        "BaseFont": Name("Helvetica"),
        "Encoding": Name("WinAnsiEncoding"),
    }


def _type0_font_objs(descendant: Ref, descriptor: Ref, tounicode: Ref) -> tuple[dict, dict, dict]:
    """(Type0 dict, CIDFontType2 dict, FontDescriptor dict)."""
    type0 = {
        "Type": Name("Font"),
        "Subtype": Name("Type0"),
        "BaseFont": Name("UniversalSans"),
        "Encoding": Name("Identity-H"),
        "DescendantFonts": [descendant],
        "ToUnicode": tounicode,
    }
    cidfont = {
        "Type": Name("Font"),
        "Subtype": Name("CIDFontType2"),
        "BaseFont": Name("UniversalSans"),
        "CIDSystemInfo": {"Registry": b"Adobe", "Ordering": b"Identity", "Supplement": 0},
        "FontDescriptor": descriptor,
        "DW": 500,
        "CIDToGIDMap": Name("Identity"),
    }
    descriptor_obj = {
        "Type": Name("FontDescriptor"),
        "FontName": Name("UniversalSans"),
        "Flags": 4,
        "FontBBox": [-100, -250, 1100, 950],
        "ItalicAngle": 0,
        "Ascent": 800,
        "Descent": -200,
        "CapHeight": 700,
        "StemV": 80,
    }
    return type0, cidfont, descriptor_obj


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def build_xmp(fields: dict[str, str]) -> str:
    """Minimal XMP packet; keys are prefixed tag names like ``dc:title``."""
    body = "\n".join(
        f"      <{tag}>{_xml_escape(value)}</{tag}>" for tag, value in fields.items()
    )
    return (
        '<?xpacket begin="﻿" id="W5M0MpCehiHzreSzNTczkc9d"?>\n'
        '<x:xmpmeta xmlns:x="adobe:ns:meta/">\n'
        '  <rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">\n'
        '    <rdf:Description rdf:about=""'
        ' xmlns:dc="http://purl.org/dc/elements/1.1/"'
        ' xmlns:pdf="http://ns.adobe.com/pdf/1.3/"'
        ' xmlns:xmp="http://ns.adobe.com/xap/1.0/">\n'
        f"{body}\n"
        "    </rdf:Description>\n"
        "  </rdf:RDF>\n"
        "</x:xmpmeta>\n"
        '<?xpacket end="w"?>'
    )


@dataclass
class _PageDraft:
    width: float
    height: float
    ops: list[bytes] = field(default_factory=list)
    uses_unicode: bool = False


class PageBuilder:
    def __init__(self, draft: _PageDraft, owner: "PdfBuilder") -> None:
        self._draft = draft
        self._owner = owner

    def fill_rect(self, x, y, w, h, color=(1.0, 1.0, 1.0)) -> "PageBuilder":
        self._draft.ops.append(_rect_ops(x, y, w, h, color))
        return self

    def text(
        self,
        x: float,
        y: float,
        content: str,
        *,
        size: float = 11.0,
        color: tuple[float, float, float] = (0.0, 0.0, 0.0),
        unicode_font: bool | None = None,
    ) -> "PageBuilder":
        if unicode_font is None:
            unicode_font = not _latin1_ok(content)
        if unicode_font:
            if any(ord(ch) > 0xFFFF for ch in content):
                raise ValueError("only BMP code points are supported")
            self._draft.uses_unicode = True
            self._owner._used_codes.update(ord(ch) for ch in content)
            ops = _text_show_ops("F2", x, y, content, size, color, hex_codes=True)
        else:
            ops = _text_show_ops("F1", x, y, content, size, color, hex_codes=False)
        self._draft.ops.append(ops)
        return self

    def text_lines(self, x, y, lines, *, size=11.0, leading=14.0, color=(0.0, 0.0, 0.0)):
        for i, line in enumerate(lines):
            if line:
                self.text(x, y - i * leading, line, size=size, color=color)
        return self


def _latin1_ok(text: str) -> bool:
    try:
        text.encode("latin-1")
        return True
    except UnicodeEncodeError:
        return False


class PdfBuilder:
    def __init__(
        self,
        *,
        title: str | None = None,
        author: str | None = None,
        subject: str | None = None,
        keywords: str | None = None,
        creation_date: str = DEFAULT_CREATION_DATE,
        xmp_fields: dict[str, str] | None = None,
        compress: bool = True,
    ) -> None:
        self._pages: list[_PageDraft] = []
        self._used_codes: set[int] = set()
        self._compress = compress
        self.info: dict[str, str] = {"Producer": "paperloop", "CreationDate": creation_date}
        for key, value in (
            ("Title", title), ("Author", author), ("Subject", subject), ("Keywords", keywords)
        ):
            if value is not None:
                self.info[key] = value
        self.xmp_fields = dict(xmp_fields) if xmp_fields else {}

    def add_page(self, width: float = 612, height: float = 792) -> PageBuilder:
        draft = _PageDraft(width=width, height=height)
        self._pages.append(draft)
        return PageBuilder(draft, self)

    def _content_stream(self, draft: _PageDraft) -> Stream:
        payload = b"\n".join(draft.ops)
        if self._compress:
            return Stream(
                {"Filter": Name("FlateDecode")}, zlib.compress(payload, 9)
            )
        return Stream({}, payload)

    def to_bytes(self) -> bytes:
        if not self._pages:
            raise ValueError("document needs at least one page")
        objects: list[object] = []

        def alloc(obj) -> Ref:
            objects.append(obj)
            return Ref(len(objects), 0)

        catalog: dict = {"Type": Name("Catalog")}
        catalog_ref = alloc(catalog)
        pages_dict: dict = {"Type": Name("Pages"), "Kids": [], "Count": len(self._pages)}
        pages_ref = alloc(pages_dict)
        catalog["Pages"] = pages_ref

        f1_ref = alloc(_simple_font_obj())
        need_f2 = any(p.uses_unicode for p in self._pages)
        font_res: dict = {"F1": f1_ref}
        if need_f2:
            tounicode_ref = alloc(Stream({}, _tounicode_cmap(self._used_codes)))
            descriptor_ref = alloc(None)
            cidfont_ref = alloc(None)
            type0, cidfont, descriptor = _type0_font_objs(
                cidfont_ref, descriptor_ref, tounicode_ref
            )
            objects[descriptor_ref.num - 1] = descriptor
            objects[cidfont_ref.num - 1] = cidfont
            font_res["F2"] = alloc(type0)

        resources_ref = alloc({"Font": font_res})
        for draft in self._pages:
            content_ref = alloc(self._content_stream(draft))
            page_ref = alloc(
                {
                    "Type": Name("Page"),
                    "Parent": pages_ref,
                    "MediaBox": [0, 0, draft.width, draft.height],
                    "Resources": resources_ref,
                    "Contents": content_ref,
                }
            )
            pages_dict["Kids"].append(page_ref)

        if self.xmp_fields:
            xmp = build_xmp(self.xmp_fields).encode("utf-8")
            catalog["Metadata"] = alloc(
                Stream({"Type": Name("Metadata"), "Subtype": Name("XML")}, xmp)
            )

        info_ref = alloc({k: v.encode("latin-1", "replace") for k, v in self.info.items()})

        out = bytearray(_HEADER)
        offsets = []
        for num, obj in enumerate(objects, 1):
            offsets.append(len(out))
            out += f"{num} 0 obj\n".encode("ascii") + serialize(obj) + b"\nendobj\n"
        xref_pos = len(out)
        out += f"xref\n0 {len(objects) + 1}\n".encode("ascii")
        out += b"0000000000 65535 f \n"
        for off in offsets:
            out += f"{off:010d} 00000 n \n".encode("ascii")
        trailer = {
            "Size": len(objects) + 1,
            "Root": catalog_ref,
            "Info": info_ref,
        }
        out += b"trailer\n" + serialize(trailer)
        out += f"\nstartxref\n{xref_pos}\n%%EOF\n".encode("ascii")
        return bytes(out)


class IncrementalWriter:
    """Append-only edits to an existing classic-xref PDF."""

    def __init__(self, original: bytes) -> None:
        self.original = original
        try:
            self._doc = _parser._Document(original)
        except _parser.MalformedPdf as exc:
            raise UnsupportedPdfStructure(str(exc)) from exc
        if b"trailer" not in original:
            raise UnsupportedPdfStructure(
                "cross-reference streams are not supported for incremental updates"
            )
        marker = original.rfind(b"startxref")
        if marker == -1:
            raise UnsupportedPdfStructure("missing startxref")
        self._prev_xref = int(original[marker + len(b"startxref") :].split()[0])
        self._next_num = max(self._doc.objects) + 1
        self._new_objects: dict[int, object] = {}
        self._changed: dict[int, object] = {}
        self._trailer_overrides: dict[str, object] = {}
        self._page_refs = self._collect_page_refs()
        self._fonts_added = False
        self._used_codes: set[int] = set()
        self._tounicode_num: int | None = None

    # -- plumbing --------------------------------------------------------

    def _alloc(self, obj) -> Ref:
        num = self._next_num
        self._next_num += 1
        self._new_objects[num] = obj
        return Ref(num, 0)

    def _collect_page_refs(self) -> list[Ref]:
        doc = self._doc
        root = doc.resolve(doc.trailer["Root"])
        refs: list[Ref] = []

        def walk(ref) -> None:
            node = doc.resolve(ref)
            if not isinstance(node, dict):
                return
            if "Kids" in node or str(node.get("Type", "")) == "Pages":
                for kid in doc.resolve(node.get("Kids")) or []:
                    walk(kid)
            elif isinstance(ref, Ref):
                refs.append(ref)

        walk(root.get("Pages"))
        if not refs:
            raise UnsupportedPdfStructure("no pages found")
        return refs

    def _live(self, num: int):
        if num in self._changed:
            return self._changed[num]
        if num in self._new_objects:
            return self._new_objects[num]
        return self._doc.objects.get(num)

    def _editable_page(self, page_index: int) -> tuple[int, dict]:
        ref = self._page_refs[page_index]
        page = self._live(ref.num)
        if ref.num not in self._changed:
            page = dict(page)
            self._changed[ref.num] = page
        return ref.num, page

    def _ensure_fonts(self, page: dict) -> None:
        """Make sure the page's own Resources carries GF1/GF2 entries."""
        if not self._fonts_added:
            self._gf1 = self._alloc(_simple_font_obj())
            tounicode = self._alloc(Stream({}, b""))  # CMap filled in at save()
            self._tounicode_num = tounicode.num
            descriptor = self._alloc(None)
            cidfont = self._alloc(None)
            type0, cidobj, descobj = _type0_font_objs(cidfont, descriptor, tounicode)
            self._new_objects[descriptor.num] = descobj
            self._new_objects[cidfont.num] = cidobj
            self._gf2 = self._alloc(type0)
            self._fonts_added = True
        resources = self._doc.resolve(page.get("Resources")) or {}
        resources = dict(resources)
        fonts = dict(self._doc.resolve(resources.get("Font")) or {})
        fonts.setdefault("GF1", self._gf1)
        fonts.setdefault("GF2", self._gf2)
        resources["Font"] = fonts
        page["Resources"] = resources

    def _append_content(self, page_num: int, page: dict, ops: bytes) -> None:
        stream_ref = self._alloc(Stream({}, ops))
        contents = page.get("Contents")
        if isinstance(contents, list):
            page["Contents"] = list(contents) + [stream_ref]
        elif contents is None:
            page["Contents"] = [stream_ref]
        else:
            page["Contents"] = [contents, stream_ref]

    # -- edits -----------------------------------------------------------

    def add_text(
        self,
        page_index: int,
        x: float,
        y: float,
        text: str,
        *,
        size: float = 11.0,
        color: tuple[float, float, float] = (0.0, 0.0, 0.0),
        unicode_font: bool | None = None,
    ) -> None:
        if unicode_font is None:
            unicode_font = not _latin1_ok(text)
        num, page = self._editable_page(page_index)
        self._ensure_fonts(page)
        if unicode_font:
            if any(ord(ch) > 0xFFFF for ch in text):
                raise ValueError("only BMP code points are supported")
            self._used_codes.update(ord(ch) for ch in text)
            ops = _text_show_ops("GF2", x, y, text, size, color, hex_codes=True)
        else:
            ops = _text_show_ops("GF1", x, y, text, size, color, hex_codes=False)
        self._append_content(num, page, ops)

    def add_rect(self, page_index: int, x, y, w, h, color) -> None:
        num, page = self._editable_page(page_index)
        self._append_content(num, page, _rect_ops(x, y, w, h, color))

    def set_info(self, **fields: str) -> None:
        """Replace document-info entries, keeping unspecified originals."""
        existing = self._doc.resolve(self._doc.trailer.get("Info")) or {}
        merged = dict(existing)
        for key, value in fields.items():
            merged[key] = value.encode("latin-1", "replace") if _latin1_ok(value) else value
        self._trailer_overrides["Info"] = self._alloc(merged)

    def set_xmp(self, fields: dict[str, str]) -> None:
        root_ref = self._doc.trailer["Root"]
        root = dict(self._doc.resolve(root_ref))
        xmp = build_xmp(fields).encode("utf-8")
        root["Metadata"] = self._alloc(
            Stream({"Type": Name("Metadata"), "Subtype": Name("XML")}, xmp)
        )
        self._changed[root_ref.num] = root

    # -- output ----------------------------------------------------------

    def to_bytes(self) -> bytes:
        if self._tounicode_num is not None:
            self._new_objects[self._tounicode_num] = Stream(
                {}, _tounicode_cmap(self._used_codes)
            )
        updates = dict(self._changed)
        updates.update(self._new_objects)
        if not updates and not self._trailer_overrides:
            return self.original

        out = bytearray(self.original)
        if not out.endswith(b"\n"):
            out += b"\n"
        offsets: dict[int, int] = {}
        for num in sorted(updates):
            offsets[num] = len(out)
            out += f"{num} 0 obj\n".encode("ascii") + serialize(updates[num]) + b"\nendobj\n"

        xref_pos = len(out)
        out += b"xref\n"
        nums = sorted(offsets)
        i = 0
        while i < len(nums):  # group consecutive numbers into subsections
            j = i
            while j + 1 < len(nums) and nums[j + 1] == nums[j] + 1:
                j += 1
            out += f"{nums[i]} {j - i + 1}\n".encode("ascii")
            for num in nums[i : j + 1]:
                out += f"{offsets[num]:010d} 00000 n \n".encode("ascii")
            i = j + 1

        trailer = {
            "Size": self._next_num,
            "Root": self._doc.trailer["Root"],
            "Prev": self._prev_xref,
        }
        if "Info" in self._trailer_overrides:
            trailer["Info"] = self._trailer_overrides["Info"]
        elif "Info" in self._doc.trailer:
            trailer["Info"] = self._doc.trailer["Info"]
        out += b"trailer\n" + serialize(trailer)
        out += f"\nstartxref\n{xref_pos}\n%%EOF\n".encode("ascii")
        return bytes(out)
