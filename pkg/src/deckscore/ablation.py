"""One-at-a-time sweeps of truncation length and retrieval depth."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import replace

from deckscore.config import Config
from deckscore.deck import DeckPackage, RequirementProfile
from deckscore.pipeline import evaluate
from deckscore.retrieval import TreeIndex
from deckscore.tree import ContentTree

L_MAX_SWEEP = (4096, 8192, 16384)
TOP_K_SWEEP = (3, 5, 7)
COLUMNS = ("param", "value", "S_A", "S_D", "F_t", "F_v")


def sweep(
    tree: ContentTree,
    pkg: DeckPackage,
    profile: RequirementProfile,
    config: Config,
    l_max_values: Sequence[int] = L_MAX_SWEEP,
    top_k_values: Sequence[int] = TOP_K_SWEEP,
) -> list[dict]:
    rows = []
    for param, values in (("l_max", l_max_values), ("top_k", top_k_values)):
        for v in values:
            cfg = replace(config, retrieval=replace(config.retrieval, **{param: v}))
            report = evaluate(TreeIndex(tree, cfg.retrieval), pkg, profile, cfg)
            a, d = report["artifact"], report["delivery"]
            rows.append({"param": param, "value": v, "S_A": a["S_A"], "S_D": d["S_D"], "F_t": a["F_t"], "F_v": a["F_v"]})
    return rows


def format_table(rows: Sequence[dict]) -> str:
    out = ["\t".join(COLUMNS)]
    for r in rows:
        out.append("\t".join([r["param"], str(r["value"]), *(f"{r[c]:.6f}" for c in COLUMNS[2:])]))
    return "\n".join(out) + "\n"
