"""Related-literature retrieval for RAG-grounded review.

Three modes share one interface: a live Semantic Scholar-compatible HTTP
client, a record/replay cassette, and an offline fixture corpus. Results
are formatted into a token-budgeted literature block.
"""

from __future__ import annotations

import json
import re
import threading
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .tokens import estimate_tokens

STOPWORDS = frozenset(
    """a an and are as at be by for from has have in is it its of on or that the
    this to was we were will with our their can not using based new""".split()
)

DEFAULT_K = 5


class SearchUnavailable(Exception):
    pass


@dataclass(frozen=True)
class RelatedPaper:
    title: str
    abstract: str
    year: int
    venue: str
    citation_count: int

    def __post_init__(self) -> None:
        if not self.title:
            raise ValueError("title must be non-empty")
        if self.citation_count < 0:
            raise ValueError("citation_count must be non-negative")


@dataclass(frozen=True)
class LiteratureBlock:
    text: str
    source_count: int


def build_query(document_text: str, top_terms: int = 5) -> str:
    """Title line of the document plus its most frequent content words."""
    lines = [ln.strip() for ln in document_text.splitlines() if ln.strip()]
    title = lines[0] if lines else ""
    words = re.findall(r"[a-zA-Z][a-zA-Z-]+", document_text.lower())
    counts = Counter(w for w in words if w not in STOPWORDS and len(w) > 2)
    title_words = set(re.findall(r"[a-zA-Z][a-zA-Z-]+", title.lower()))
    keywords = [w for w, _ in counts.most_common() if w not in title_words]
    return " ".join([title] + keywords[:top_terms]).strip()


def format_literature_block(papers: list[RelatedPaper], budget: int) -> LiteratureBlock:
    """Numbered entries, dropping whole entries from the tail to fit."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    kept = list(papers)
    while kept:
        entries = [
            f"{i}. {p.title} ({p.year}, {p.venue}, {p.citation_count} citations): {p.abstract}"
            for i, p in enumerate(kept, 1)
        ]
        text = "\n".join(entries)
        if estimate_tokens(text) <= budget:
            return LiteratureBlock(text=text, source_count=len(kept))
        kept.pop()
    return LiteratureBlock(text="", source_count=0)


def _paper_from_dict(d: dict) -> RelatedPaper:
    return RelatedPaper(
        title=d.get("title", ""),
        abstract=d.get("abstract") or "",
        year=int(d.get("year") or 0),
        venue=d.get("venue") or "unknown",
        citation_count=int(d.get("citationCount", d.get("citation_count", 0)) or 0),
    )


class FixtureSearch:
    """Offline corpus: a JSON file holding a list of paper dicts, returned
    in file order regardless of the query."""

    def __init__(self, corpus_path: str | Path) -> None:
        self.papers = [
            _paper_from_dict(d)
            for d in json.loads(Path(corpus_path).read_text(encoding="utf-8"))
        ]

    def search(self, query: str, k: int) -> list[RelatedPaper]:
        return self.papers[:k]


class HttpSearch:
    """Semantic Scholar-compatible paper search over HTTPS."""

    def __init__(
        self,
        base_url: str = "https://api.semanticscholar.org/graph/v1",
        api_key: str = "",
        *,
        timeout: float = 20.0,
        client=None,
    ) -> None:
        import httpx

        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self._client = client or httpx.Client(timeout=timeout)

    def search(self, query: str, k: int) -> list[RelatedPaper]:
        import httpx

        headers = {"x-api-key": self.api_key} if self.api_key else {}
        try:
            resp = self._client.get(
                f"{self.base_url}/paper/search",
                params={
                    "query": query,
                    "limit": k,
                    "fields": "title,abstract,year,venue,citationCount",
                },
                headers=headers,
            )
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise SearchUnavailable(str(exc)) from exc
        data = resp.json().get("data", [])
        return [_paper_from_dict(d) for d in data if d.get("title")]


class CassetteSearch:
    """Record/replay wrapper keyed by query string.

    In replay mode a missing query raises SearchUnavailable so tests stay
    offline and deterministic.
    """

    def __init__(self, cassette_path: str | Path, inner=None, record: bool = False):
        self.path = Path(cassette_path)
        self.inner = inner
        self.record = record
        self._data: dict[str, list[dict]] = {}
        if self.path.exists():
            self._data = json.loads(self.path.read_text(encoding="utf-8"))

    def search(self, query: str, k: int) -> list[RelatedPaper]:
        key = f"{query}|{k}"
        if key in self._data:
            return [_paper_from_dict(d) for d in self._data[key]]
        if not (self.record and self.inner):
            raise SearchUnavailable(f"no cassette entry for {key!r}")
        papers = self.inner.search(query, k)
        self._data[key] = [
            {
                "title": p.title,
                "abstract": p.abstract,
                "year": p.year,
                "venue": p.venue,
                "citationCount": p.citation_count,
            }
            for p in papers
        ]
        self.path.write_text(json.dumps(self._data, indent=2), encoding="utf-8")
        return papers


class LiteratureRetriever:
    """Front door: query construction + TTL cache over a search backend."""

    def __init__(self, backend, *, cache_ttl: float = 3600.0, clock=time.monotonic):
        self.backend = backend
        self.cache_ttl = cache_ttl
        self._clock = clock
        self._cache: dict[str, tuple[float, list[RelatedPaper]]] = {}
        self._lock = threading.Lock()

    def search_related(self, document_text: str, k: int = DEFAULT_K) -> list[RelatedPaper]:
        if k < 1:
            raise ValueError("k must be >= 1")
        query = build_query(document_text)
        key = f"{query}|{k}"
        now = self._clock()
        with self._lock:
            hit = self._cache.get(key)
            if hit and now - hit[0] < self.cache_ttl:
                return hit[1]
        papers = self.backend.search(query, k)[:k]
        with self._lock:
            self._cache[key] = (now, papers)
        return papers

    def literature_block(
        self, document_text: str, budget: int, k: int = DEFAULT_K
    ) -> LiteratureBlock:
        return format_literature_block(self.search_related(document_text, k), budget)
