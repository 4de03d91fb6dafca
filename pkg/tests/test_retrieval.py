import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paperloop.retrieval import (
    CassetteSearch,
    FixtureSearch,
    LiteratureRetriever,
    RelatedPaper,
    SearchUnavailable,
    build_query,
    format_literature_block,
)
from paperloop.tokens import estimate_tokens

PAPERS = [
    {"title": "Grokking dynamics", "abstract": "We study grokking.", "year": 2023,
     "venue": "ICLR", "citationCount": 40},
    {"title": "Slow generalization", "abstract": "Delayed generalization.", "year": 2022,
     "venue": "NeurIPS", "citationCount": 15},
    {"title": "Circuits emerge", "abstract": "Mechanistic account.", "year": 2024,
     "venue": "arXiv", "citationCount": 3},
]


@pytest.fixture
def fixture_retriever(tmp_path):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps(PAPERS))
    return LiteratureRetriever(FixtureSearch(corpus))


def test_fixture_corpus_passthrough(fixture_retriever):
    papers = fixture_retriever.search_related("grokking neural networks", k=5)
    assert [p.title for p in papers] == [p["title"] for p in PAPERS]


def test_k_zero_is_a_precondition_violation(fixture_retriever):
    with pytest.raises(ValueError):
        fixture_retriever.search_related("anything", k=0)


def test_fixture_mode_is_deterministic(fixture_retriever):
    a = fixture_retriever.search_related("grokking", k=2)
    b = fixture_retriever.search_related("grokking", k=2)
    assert a == b
    assert len(a) == 2


def test_cache_hits_skip_backend(tmp_path):
    corpus = tmp_path / "c.json"
    corpus.write_text(json.dumps(PAPERS))
    backend = FixtureSearch(corpus)
    calls = []
    original = backend.search
    backend.search = lambda q, k: calls.append(q) or original(q, k)
    r = LiteratureRetriever(backend)
    r.search_related("doc text here", k=3)
    r.search_related("doc text here", k=3)
    assert len(calls) == 1


def test_cassette_replay_and_miss(tmp_path):
    cassette = tmp_path / "cassette.json"
    query = build_query("grokking neural networks")
    cassette.write_text(json.dumps({f"{query}|5": PAPERS}))
    search = CassetteSearch(cassette)
    papers = search.search(query, 5)
    assert len(papers) == 3
    assert all(p.title for p in papers)
    with pytest.raises(SearchUnavailable):
        search.search("unrecorded query", 5)


def test_build_query_uses_title_line_and_keywords():
    doc = "Deep Nets Memorize\n\n" + "memorization generalization " * 10 + "gradient " * 5
    q = build_query(doc)
    assert q.startswith("Deep Nets Memorize")
    assert "memorization" in q and "generalization" in q


class TestLiteratureBlock:
    def test_empty_list(self):
        block = format_literature_block([], 5000)
        assert block.source_count == 0 and block.text == ""

    def test_two_short_papers_both_kept(self):
        papers = [RelatedPaper("T1", "a" * 40, 2020, "ICLR", 5),
                  RelatedPaper("T2", "b" * 40, 2021, "ICML", 9)]
        block = format_literature_block(papers, 5000)
        assert block.source_count == 2
        assert "1. T1 (2020, ICLR, 5 citations)" in block.text
        assert "2. T2 (2021, ICML, 9 citations)" in block.text

    def test_overflow_drops_whole_entries_from_tail(self):
        papers = [RelatedPaper(f"T{i}", "x" * 2000, 2020, "V", i) for i in range(50)]
        block = format_literature_block(papers, 5000)
        assert estimate_tokens(block.text) <= 5000
        assert 0 < block.source_count < 50
        # kept entries are a prefix of the input order
        for i in range(block.source_count):
            assert f"T{i} " in block.text

    @given(
        st.lists(
            st.tuples(
                st.text(min_size=1, max_size=30).filter(str.strip),
                st.text(max_size=200),
                st.integers(1990, 2030),
                st.integers(0, 10_000),
            ),
            max_size=20,
        ),
        st.integers(min_value=1, max_value=2000),
    )
    def test_block_never_exceeds_budget(self, rows, budget):
        papers = [
            RelatedPaper(title=t, abstract=a, year=y, venue="V", citation_count=c)
            for t, a, y, c in rows
        ]
        block = format_literature_block(papers, budget)
        assert estimate_tokens(block.text) <= budget
        assert 0 <= block.source_count <= len(papers)
