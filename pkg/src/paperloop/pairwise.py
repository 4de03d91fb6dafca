"""Pairwise Review Mode and the benchmark harness.

Positional bias is mitigated either by seeded order randomization or by
running both presentation orders and calling disagreement a tie. Ties
count as half credit in benchmark accuracy, which is exactly what
averaging two contradictory binary verdicts gives.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import prompts
from .gateway import ChatMessage, ChatRequest, GatewayError, LLMGateway
from .model import SubmissionKind, SubmissionVersion
from .retrieval import LiteratureRetriever, SearchUnavailable
from .review import Budgets, DEFAULT_BUDGETS, ReviewReport
from .tokens import truncate_to_budget


class Winner(Enum):
    A = "A"
    B = "B"
    TIE = "tie"


class Mitigation(Enum):
    RANDOMIZE_ORDER = "randomize_order"
    BOTH_ORDERS = "both_orders"


@dataclass(frozen=True)
class OrientationResult:
    order: tuple[str, str]  # labels as presented, e.g. ("A", "B")
    raw_winner: str  # label of the slot the judge picked, already mapped


@dataclass(frozen=True)
class PairwiseVerdict:
    winner: Winner
    orientation_results: tuple[OrientationResult, ...]
    mitigation: Mitigation


@dataclass(frozen=True)
class LabeledPair:
    doc_a: str
    doc_b: str
    better: str  # "A" | "B"
    kind: SubmissionKind
    mean_rating: float | None = None  # optional, used by the borderline filter

    def __post_init__(self) -> None:
        if self.doc_a == self.doc_b:
            raise ValueError("pair documents must differ")
        if self.better not in ("A", "B"):
            raise ValueError("better must be 'A' or 'B'")


@dataclass
class PairRecord:
    index: int
    winner: str | None  # "A" | "B" | "tie" | None on failure
    correct: bool
    tie: bool
    error: str | None = None


@dataclass
class BenchmarkResult:
    accuracy: float
    n_pairs: int
    tie_count: int
    records: list[PairRecord]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "n_pairs": self.n_pairs,
            "tie_count": self.tie_count,
            "records": [vars(r) for r in self.records],
        }


def _slot_labels(kind: SubmissionKind) -> tuple[str, str, str]:
    if kind == SubmissionKind.PROPOSAL:
        return "betterproposal", "Proposal1", "Proposal2"
    return "betterpaper", "Paper1", "Paper2"


def _judge_once(
    first: str,
    second: str,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    use_rag: bool,
    retriever: LiteratureRetriever | None,
    budgets: Budgets,
) -> int:
    """Present (first, second); return 0 if the judge picks slot 1, else 1."""
    doc_budget = budgets.for_kind(kind)
    d1 = truncate_to_budget(first, doc_budget)
    d2 = truncate_to_budget(second, doc_budget)
    lit1 = lit2 = ""
    if use_rag and retriever is not None:
        try:
            lit1 = retriever.literature_block(d1, budgets.literature).text
            lit2 = retriever.literature_block(d2, budgets.literature).text
        except SearchUnavailable:
            lit1 = lit2 = ""
    template = (
        prompts.PAIRWISE_PROPOSAL
        if kind == SubmissionKind.PROPOSAL
        else prompts.PAIRWISE_PAPER
    )
    prompt = template.format(doc_1=d1, literature_1=lit1, doc_2=d2, literature_2=lit2)
    request = ChatRequest(
        model_id=model_id, messages=(ChatMessage(role="user", text=prompt),)
    )
    document = gateway.complete_structured(request, "pairwise")
    key, slot1, _slot2 = _slot_labels(kind)
    if key not in document:
        # Wrong key family for this kind still satisfies the shared pairwise
        # schema; treat it as a violation here.
        raise GatewayError(f"judge answered with {list(document)} for kind {kind.value}")
    return 0 if document[key] == slot1 else 1


def compare(
    doc_a: str,
    doc_b: str,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    mitigation: Mitigation = Mitigation.BOTH_ORDERS,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    rng: random.Random | None = None,
) -> PairwiseVerdict:
    if not doc_a or not doc_b:
        raise ValueError("both documents must be non-empty")
    kwargs = dict(use_rag=use_rag, retriever=retriever, budgets=budgets)

    if mitigation == Mitigation.RANDOMIZE_ORDER:
        rng = rng or random.Random()
        swap = rng.random() < 0.5
        order = ("B", "A") if swap else ("A", "B")
        first, second = (doc_b, doc_a) if swap else (doc_a, doc_b)
        pick = _judge_once(first, second, kind, model_id, gateway, **kwargs)
        raw = order[pick]
        return PairwiseVerdict(
            winner=Winner(raw),
            orientation_results=(OrientationResult(order=order, raw_winner=raw),),
            mitigation=mitigation,
        )

    pick_fwd = _judge_once(doc_a, doc_b, kind, model_id, gateway, **kwargs)
    pick_rev = _judge_once(doc_b, doc_a, kind, model_id, gateway, **kwargs)
    fwd = ("A", "B")[pick_fwd]
    rev = ("B", "A")[pick_rev]
    winner = Winner(fwd) if fwd == rev else Winner.TIE
    return PairwiseVerdict(
        winner=winner,
        orientation_results=(
            OrientationResult(order=("A", "B"), raw_winner=fwd),
            OrientationResult(order=("B", "A"), raw_winner=rev),
        ),
        mitigation=Mitigation.BOTH_ORDERS,
    )


def evaluate_benchmark(
    pairs: list[LabeledPair],
    model_id: str,
    gateway: LLMGateway,
    *,
    mitigation: Mitigation = Mitigation.BOTH_ORDERS,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    seed: int = 0,
    max_workers: int = 8,
) -> BenchmarkResult:
    if not pairs:
        raise ValueError("pairs must be non-empty")

    def one(index: int, pair: LabeledPair) -> PairRecord:
        # Each pair gets its own seeded stream so aggregation order is moot.
        rng = random.Random(f"{seed}:{index}")
        try:
            verdict = compare(
                pair.doc_a,
                pair.doc_b,
                pair.kind,
                model_id,
                gateway,
                mitigation=mitigation,
                use_rag=use_rag,
                retriever=retriever,
                budgets=budgets,
                rng=rng,
            )
        except GatewayError as exc:
            return PairRecord(index=index, winner=None, correct=False, tie=False, error=str(exc))
        tie = verdict.winner == Winner.TIE
        correct = not tie and verdict.winner.value == pair.better
        return PairRecord(index=index, winner=verdict.winner.value, correct=correct, tie=tie)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        records = list(pool.map(lambda t: one(*t), enumerate(pairs)))

    scored = [r for r in records if r.error is None]
    n = len(scored)
    ties = sum(r.tie for r in scored)
    correct = sum(r.correct for r in scored)
    accuracy = (correct + 0.5 * ties) / n if n else 0.0
    return BenchmarkResult(accuracy=accuracy, n_pairs=n, tie_count=ties, records=records)


def compare_versions(
    old_version: SubmissionVersion,
    new_version: SubmissionVersion,
    kind: SubmissionKind,
    model_id: str,
    gateway: LLMGateway,
    *,
    prior_review: ReviewReport | None = None,
    include_response_letter: bool = False,
    use_rag: bool = False,
    retriever: LiteratureRetriever | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> PairwiseVerdict:
    """Old vs revised version of the same submission, always both orders."""
    if old_version.version >= new_version.version:
        raise ValueError("old version must precede new version")
    parts = [new_version.body]
    if prior_review is not None:
        parts += ["## Previous review", json.dumps(prior_review.to_dict(), sort_keys=True)]
    if include_response_letter and new_version.response_letter:
        parts += ["## Response letter", new_version.response_letter]
    new_doc = "\n\n".join(parts)
    return compare(
        old_version.body,
        new_doc,
        kind,
        model_id,
        gateway,
        mitigation=Mitigation.BOTH_ORDERS,
        use_rag=use_rag,
        retriever=retriever,
        budgets=budgets,
    )


def load_pairs(path: str | Path, *, filter_borderline: bool = False) -> list[LabeledPair]:
    """Line-delimited JSON {doc_a, doc_b, better, kind[, mean_rating]}."""
    pairs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        d = json.loads(line)
        pair = LabeledPair(
            doc_a=d["doc_a"],
            doc_b=d["doc_b"],
            better=d["better"],
            kind=SubmissionKind(d["kind"]),
            mean_rating=d.get("mean_rating"),
        )
        if (
            filter_borderline
            and pair.mean_rating is not None
            and 5.0 <= pair.mean_rating <= 6.0
        ):
            continue
        pairs.append(pair)
    return pairs


def format_result_table(results: dict[str, BenchmarkResult]) -> str:
    """Plain-text summary table, one row per configuration label."""
    width = max([len(k) for k in results] + [5])
    lines = [f"{'model':<{width}}  accuracy  pairs  ties"]
    for label, res in results.items():
        lines.append(
            f"{label:<{width}}  {res.accuracy:7.2%}  {res.n_pairs:5d}  {res.tie_count:4d}"
        )
    return "\n".join(lines)
