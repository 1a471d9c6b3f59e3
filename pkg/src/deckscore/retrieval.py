"""Okapi-BM25 over content-tree nodes, fused with parent/child scores and a depth bias."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, fields

from deckscore.text import strip_markup, tokenize
from deckscore.tree import ContentTree


@dataclass(frozen=True)
class RetrievalParams:
    k1: float = 1.5
    b: float = 0.75
    alpha_tree: float = 0.3
    beta_tree: float = 0.1
    gamma_tree: float = 0.1
    delta_tree: float = 0.1
    m0: int = 3
    l_max: int = 8192
    top_k: int = 5

    def __post_init__(self) -> None:
        if not self.k1 > 0:
            raise ValueError(f"k1 must be positive, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must lie in [0, 1], got {self.b}")
        for name in ("alpha_tree", "beta_tree", "gamma_tree", "delta_tree"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if int(self.m0) != self.m0 or self.m0 < 0:
            raise ValueError(f"m0 must be a non-negative integer, got {self.m0}")
        if int(self.l_max) != self.l_max or self.l_max <= 0:
            raise ValueError(f"l_max must be a positive integer, got {self.l_max}")
        if int(self.top_k) != self.top_k or self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class CorpusStats:
    df: dict[str, int]
    dl: list[int]
    avgdl: float
    node_count: int
    tf: list[Counter[str]] = field(repr=False)
    # term -> [(node id, tf)], ascending node id
    postings: dict[str, list[tuple[int, int]]] = field(repr=False)


@dataclass(frozen=True)
class RankedResult:
    node_id: int
    score: float
    base_score: float


def node_tokens(content: str, l_max: int) -> list[str]:
    return tokenize(strip_markup(content))[:l_max]


def build_index(tree: ContentTree, params: RetrievalParams) -> CorpusStats:
    if len(tree) == 0:
        raise ValueError("cannot index an empty tree")
    tf: list[Counter[str]] = []
    df: Counter[str] = Counter()
    postings: dict[str, list[tuple[int, int]]] = {}
    for node in tree.nodes:
        counts = Counter(node_tokens(node.content, params.l_max))
        tf.append(counts)
        df.update(counts.keys())
        for term, c in counts.items():
            postings.setdefault(term, []).append((node.id, c))
    dl = [sum(c.values()) for c in tf]
    return CorpusStats(
        df=dict(df),
        dl=dl,
        avgdl=sum(dl) / len(dl),
        node_count=len(dl),
        tf=tf,
        postings=postings,
    )


def idf(term: str, stats: CorpusStats) -> float:
    df = stats.df.get(term, 0)
    return math.log(1.0 + (stats.node_count - df + 0.5) / (df + 0.5))


def bm25_base(query_tokens: Sequence[str], stats: CorpusStats, params: RetrievalParams) -> list[float]:
    """Base score per node id. Repeated query terms contribute once per occurrence."""
    scores = [0.0] * stats.node_count
    if stats.avgdl <= 0:
        return scores
    k1, b = params.k1, params.b
    norm = [k1 * (1.0 - b + b * dl / stats.avgdl) for dl in stats.dl]
    for term in query_tokens:
        posting = stats.postings.get(term)
        if not posting:
            continue
        w = idf(term, stats)
        for nid, tf in posting:
            scores[nid] += w * tf * (k1 + 1.0) / (tf + norm[nid])
    return scores


def tree_aware_scores(
    s0: Sequence[float], tree: ContentTree, query_len: int, params: RetrievalParams
) -> list[float]:
    overview = query_len <= params.m0
    out = []
    for n in tree.nodes:
        fused = s0[n.id]
        if n.children:
            fused += params.alpha_tree * sum(s0[c] for c in n.children)
        if n.parent is not None:
            fused += params.beta_tree * s0[n.parent]
        if overview:
            fused /= 1.0 + params.gamma_tree * n.depth
        else:
            fused *= 1.0 + params.delta_tree * n.depth
        out.append(fused)
    return out


def rank(scores: Sequence[float], base: Sequence[float], k: int) -> list[RankedResult]:
    positive = [i for i, s in enumerate(scores) if s > 0]
    positive.sort(key=lambda i: (-scores[i], i))
    return [RankedResult(i, scores[i], base[i]) for i in positive[:k]]


def retrieve(
    query: str,
    tree: ContentTree,
    stats: CorpusStats,
    params: RetrievalParams,
    *,
    top_k: int | None = None,
) -> list[RankedResult]:
    q = tokenize(query)
    if not q:
        return []
    s0 = bm25_base(q, stats, params)
    s = tree_aware_scores(s0, tree, len(q), params)
    return rank(s, s0, params.top_k if top_k is None else top_k)


@dataclass
class TreeIndex:
    """A tree and its corpus statistics, bundled for repeated querying."""

    tree: ContentTree
    params: RetrievalParams
    stats: CorpusStats = field(init=False)

    def __post_init__(self) -> None:
        self.stats = build_index(self.tree, self.params)

    def query(self, text: str, top_k: int | None = None) -> list[RankedResult]:
        return retrieve(text, self.tree, self.stats, self.params, top_k=top_k)

    def stats_record(self) -> Mapping:
        return {
            "record": "stats",
            "node_count": self.stats.node_count,
            "avgdl": self.stats.avgdl,
            "dl": self.stats.dl,
            "df": dict(sorted(self.stats.df.items())),
        }
