"""Adversarial-attack synthesis for guard evaluation.

Injection is strictly additive (incremental PDF updates), so every clean
span survives. The synthesizer draws payloads from the same tables the
detector matches against; that shared definition is what underwrites the
synthesize-then-scan round-trip guarantee for the deterministic
categories. ContextualAttack payloads are deliberately phrased to evade
the coarse rules and require the semantic stage.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from collections.abc import Sequence

from ..pdfio import IncrementalWriter, UnsupportedPdfStructure  # noqa: F401
from .anomaly import AttackCategory
from .extract import extract
from .payloads import (
    CONTEXTUAL_PAYLOADS,
    ENGLISH_PAYLOADS,
    MULTILINGUAL_PAYLOADS,
    ZERO_WIDTH_CHARS,
)

# Attack prevalence proportions used when building evaluation corpora.
CATEGORY_PROPORTIONS: dict[AttackCategory, float] = {
    AttackCategory.WHITE_TEXT: 0.30,
    AttackCategory.METADATA: 0.25,
    AttackCategory.INVISIBLE_CHARS: 0.20,
    AttackCategory.MIXED_LANGUAGE: 0.15,
    AttackCategory.STEGANOGRAPHIC: 0.07,
    AttackCategory.CONTEXTUAL_ATTACK: 0.03,
}

_CATEGORY_ORDER = tuple(CATEGORY_PROPORTIONS)


def _seeded_position(rng: random.Random, box) -> tuple[float, float]:
    x0, y0, x1, y1 = box
    x = x0 + 40 + rng.random() * max(1.0, (x1 - x0) - 320)
    y = y0 + 40 + rng.random() * max(1.0, (y1 - y0) - 80)
    return round(x, 2), round(y, 2)


def _nudge(color: tuple[float, float, float]) -> tuple[float, float, float]:
    """A color visually identical to the given one but not exactly it."""
    return tuple(round(c - 0.01, 4) if c > 0.5 else round(c + 0.01, 4) for c in color)


def synthesize_attack(
    clean_pdf: bytes, category: AttackCategory, seed: int
) -> bytes:
    rng = random.Random(f"{category.value}:{seed}")
    doc = extract(clean_pdf)
    writer = IncrementalWriter(clean_pdf)
    box = doc.page_boxes.get(1, (0, 0, 612, 792))
    x, y = _seeded_position(rng, box)

    if category == AttackCategory.WHITE_TEXT:
        payload = rng.choice(ENGLISH_PAYLOADS)
        writer.add_text(0, x, y, payload, size=9, color=_nudge(doc.background_for(1)))
    elif category == AttackCategory.METADATA:
        payload = rng.choice(ENGLISH_PAYLOADS)
        writer.set_info(Subject=payload)
    elif category == AttackCategory.INVISIBLE_CHARS:
        payload = rng.choice(ENGLISH_PAYLOADS)
        chars = list(payload)
        zw = sorted(ZERO_WIDTH_CHARS)
        for pos in sorted(rng.sample(range(1, len(chars)), k=rng.randint(3, 6)), reverse=True):
            chars.insert(pos, rng.choice(zw))
        writer.add_text(0, x, y, "".join(chars), size=9)
    elif category == AttackCategory.MIXED_LANGUAGE:
        language = rng.choice(sorted(MULTILINGUAL_PAYLOADS))
        payload, _gloss = MULTILINGUAL_PAYLOADS[language]
        writer.add_text(0, x, y, payload, size=9)
    elif category == AttackCategory.STEGANOGRAPHIC:
        payload = rng.choice(ENGLISH_PAYLOADS)
        writer.add_text(0, box[2] + 60, y, payload, size=9)
    elif category == AttackCategory.CONTEXTUAL_ATTACK:
        payload = rng.choice(CONTEXTUAL_PAYLOADS)
        writer.add_text(0, x, y, payload, size=9)
    else:  # pragma: no cover - exhaustive over the enum
        raise ValueError(f"unknown category {category!r}")
    return writer.to_bytes()


def apportion(total: int, proportions: dict[AttackCategory, float]) -> dict[AttackCategory, int]:
    """Largest-remainder apportionment; deterministic tie-break by table order."""
    if total < 0:
        raise ValueError("total must be non-negative")
    quotas = {c: total * p for c, p in proportions.items()}
    counts = {c: int(q) for c, q in quotas.items()}
    leftover = total - sum(counts.values())
    by_remainder = sorted(
        proportions,
        key=lambda c: (-(quotas[c] - counts[c]), _CATEGORY_ORDER.index(c)),
    )
    for c in by_remainder[:leftover]:
        counts[c] += 1
    return counts


@dataclass(frozen=True)
class CorpusEntry:
    data: bytes
    category: AttackCategory | None  # None for clean documents
    source_index: int


def build_corpus(
    clean_pdfs: Sequence[bytes], *, attack_rate: float = 0.35, seed: int = 0
) -> list[CorpusEntry]:
    if not 0 <= attack_rate <= 1:
        raise ValueError("attack_rate must be within [0, 1]")
    n = len(clean_pdfs)
    n_attacks = int(n * attack_rate)
    counts = apportion(n_attacks, CATEGORY_PROPORTIONS)
    assignments: list[AttackCategory] = []
    for category in _CATEGORY_ORDER:
        assignments.extend([category] * counts[category])

    rng = random.Random(f"corpus:{seed}")
    targets = sorted(rng.sample(range(n), n_attacks))
    rng.shuffle(assignments)

    category_by_index = dict(zip(targets, assignments))
    entries = []
    for i, clean in enumerate(clean_pdfs):
        category = category_by_index.get(i)
        if category is None:
            entries.append(CorpusEntry(data=clean, category=None, source_index=i))
        else:
            entries.append(
                CorpusEntry(
                    data=synthesize_attack(clean, category, seed=seed * 100003 + i),
                    category=category,
                    source_index=i,
                )
            )
    return entries
