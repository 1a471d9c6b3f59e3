"""Pairwise text scorers.

Lexical and semantic scorers are plain callables ``(candidate, reference) -> float``
returning values in [0, 1]. The defaults are hermetic: ROUGE-L F1 over tokens and
cosine similarity of term-frequency vectors. An embedding-based scorer plugs in
with the same signature.
"""

from __future__ import annotations

import math
from collections.abc import Callable

from deckscore.text import term_counts, tokenize

PairScorer = Callable[[str, str], float]


class ScorerContractError(ValueError):
    pass


def lcs_length(a: list[str], b: list[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str) -> float:
    """ROUGE-L F1 from the token-level longest common subsequence."""
    c, r = tokenize(candidate), tokenize(reference)
    if not c or not r:
        return 0.0
    lcs = lcs_length(c, r)
    if lcs == 0:
        return 0.0
    p, rec = lcs / len(c), lcs / len(r)
    return 2 * p * rec / (p + rec)


def tf_cosine(a: str, b: str) -> float:
    ta, tb = term_counts(a), term_counts(b)
    if not ta or not tb:
        return 0.0
    dot = sum(v * tb[t] for t, v in ta.items() if t in tb)
    na2 = sum(v * v for v in ta.values())
    nb2 = sum(v * v for v in tb.values())
    # one sqrt keeps identical vectors at exactly 1; the clamp absorbs residual noise
    return min(1.0, dot / math.sqrt(na2 * nb2))


def scorer_name(fn: object) -> str:
    return getattr(fn, "__name__", None) or type(fn).__name__


def checked(fn: PairScorer, a: str, b: str) -> float:
    value = fn(a, b)
    if not (0.0 <= value <= 1.0):
        raise ScorerContractError(f"scorer {scorer_name(fn)} returned {value!r}, outside [0, 1]")
    return float(value)


def check_unit(value: float, who: str) -> float:
    if not (0.0 <= value <= 1.0):
        raise ScorerContractError(f"{who} returned {value!r}, outside [0, 1]")
    return float(value)
