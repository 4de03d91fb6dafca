"""Approximate token accounting.

Counting is deterministic and backend-independent: one token per four
characters, rounded up. Good enough for enforcing prompt budgets.
"""

from __future__ import annotations

import math

CHARS_PER_TOKEN = 4


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text) / CHARS_PER_TOKEN)


def truncate_to_budget(text: str, budget: int) -> str:
    """Return a verbatim prefix of `text` estimated at <= `budget` tokens.

    Cuts at the last whitespace boundary before the limit so words are
    never split. Idempotent: truncating an already-fitting text is the
    identity.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    limit = budget * CHARS_PER_TOKEN
    if len(text) <= limit:
        return text
    head = text[:limit]
    cut = max(head.rfind(ch) for ch in (" ", "\t", "\n"))
    if cut > 0:
        head = head[:cut]
    return head
