"""Independent reference implementations used to cross-check the package."""

import math
import re

from deckscore.ingest import ContentSlice, SliceType


def nest_by_descent(levels):
    """Recursive-descent nesting: a node owns every following node deeper than itself.

    Returns (parents, roots) with the same conventions as the stack builder.
    """
    parents = [None] * len(levels)
    roots = []

    def children_of(parent, floor, i):
        # consume nodes strictly deeper than ``floor`` starting at i
        while i < len(levels) and levels[i] > floor:
            node = i
            if parent is None:
                roots.append(node)
            else:
                parents[node] = parent
            i = children_of(node, levels[node], i + 1)
        return i

    i = 0
    while i < len(levels):
        i = children_of(None, -math.inf, i)
    return parents, roots


def heading_slices(levels, titles=None):
    titles = titles or [f"h{i}" for i in range(len(levels))]
    return [
        ContentSlice(index=i, slice_type=SliceType.HEADING, level=lvl, title=t, body=t)
        for i, (lvl, t) in enumerate(zip(levels, titles))
    ]


def toks(text):
    return [t for t in re.findall(r"[a-z0-9]+", text.lower()) if len(t) >= 2]


def brute_bm25(query, docs, k1=1.5, b=0.75):
    """Textbook BM25 evaluated term by term over plain token lists."""
    q = toks(query)
    n = len(docs)
    lens = [len(d) for d in docs]
    avg = sum(lens) / n
    out = []
    for d in docs:
        total = 0.0
        for t in q:
            tf = d.count(t)
            if tf == 0:
                continue
            df = sum(1 for other in docs if t in other)
            w = math.log(1 + (n - df + 0.5) / (df + 0.5))
            total += w * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(d) / avg))
        out.append(total)
    return out


def brute_rank(query, docs, parents, depths, params):
    """Fuse scores along tree edges, apply the depth bias, sort by (-score, id)."""
    s0 = brute_bm25(query, docs, params.k1, params.b)
    n = len(docs)
    qlen = len(toks(query))
    scores = []
    for i in range(n):
        kids = [j for j in range(n) if parents[j] == i]
        s = s0[i] + params.alpha_tree * sum(s0[j] for j in kids)
        if parents[i] is not None:
            s += params.beta_tree * s0[parents[i]]
        if qlen <= params.m0:
            s = s / (1 + params.gamma_tree * depths[i])
        else:
            s = s * (1 + params.delta_tree * depths[i])
        scores.append(s)
    order = sorted((i for i in range(n) if scores[i] > 0), key=lambda i: (-scores[i], i))
    return [(i, scores[i]) for i in order[: params.top_k]]


def depths_from_parents(parents):
    depths = []
    for p in parents:
        depths.append(0 if p is None else depths[p] + 1)
    return depths
