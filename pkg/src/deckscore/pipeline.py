"""End-to-end glue: source -> index file, index + package -> report, report rendering."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Any

from deckscore.advice import rehearsal_advice
from deckscore.artifact import score_artifact
from deckscore.config import Config
from deckscore.deck import DeckPackage, RequirementProfile, align_to_source, runs_or_default
from deckscore.delivery import score_delivery
from deckscore.ingest import ContentSlice, FirstSentenceSummarizer, normalize_source, segment, with_abstracts
from deckscore.retrieval import TreeIndex
from deckscore.tree import ContentTree, build_tree

INDEX_FORMAT = "deckscore-index/1"
REPORT_FORMAT = "deckscore-report/1"
_Q = Decimal("0.000001")


class IndexFileError(ValueError):
    pass


def round6(x: float) -> float:
    """Round to 6 decimal places, ties to even, on the float's exact decimal value."""
    return float(Decimal(x).quantize(_Q, rounding=ROUND_HALF_EVEN))


def _rounded(obj: Any) -> Any:
    if isinstance(obj, float):
        return round6(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# indexing
# ---------------------------------------------------------------------------

def ingest(source: str | Path, config: Config) -> tuple[list[ContentSlice], ContentTree]:
    doc = normalize_source(source)
    slices = with_abstracts(segment(doc), FirstSentenceSummarizer(config.summary_cap))
    return slices, build_tree(slices)


def index_text(tree: ContentTree, index: TreeIndex, source_name: str) -> str:
    records: list[dict] = [{"record": "meta", "format": INDEX_FORMAT, "source": source_name, "nodes": len(tree)}]
    records.extend(tree.to_records())
    records.append(_rounded(dict(index.stats_record())))
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


def read_index(path: str | Path, config: Config) -> TreeIndex:
    records = []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise IndexFileError(f"{path}:{n}: {exc}") from exc
    if not records or records[0].get("format") != INDEX_FORMAT:
        raise IndexFileError(f"{path}: not a {INDEX_FORMAT} file")
    try:
        tree = ContentTree.from_records(records)
    except (KeyError, IndexError, TypeError) as exc:
        raise IndexFileError(f"{path}: malformed node/edge record: {exc}") from exc
    if not len(tree):
        raise IndexFileError(f"{path}: index holds no nodes")
    return TreeIndex(tree, config.retrieval)


# ---------------------------------------------------------------------------
# scoring
# ---------------------------------------------------------------------------

def evaluate(index: TreeIndex, pkg: DeckPackage, profile: RequirementProfile, config: Config) -> dict:
    alignments = align_to_source(pkg, index.tree, index.stats, index.params)
    art = score_artifact(pkg, runs_or_default(pkg), alignments, config.artifact)
    dlv = score_delivery(pkg, profile, art.P, art.F_t, art.F_v, config.delivery)
    advice = rehearsal_advice(pkg, art, dlv)
    slides = []
    for k, (slide, al, adv) in enumerate(zip(pkg.slides, alignments, advice)):
        slides.append(
            {
                "index": slide.index,
                "title": slide.title,
                "word_count": slide.word_count,
                "penalty": art.penalties[k],
                "estimated_seconds": dlv.durations[k],
                "sim": dlv.sims[k],
                "redundancy": dlv.redundancy[k],
                "coverage": dlv.coverage[k],
                "source_node_ids": list(al.source_node_ids),
                "empty_alignment": al.empty,
                "findings": list(adv.findings),
                "tips": list(adv.tips),
                "questions": list(adv.questions),
            }
        )
    artifact = dict(art.components(), penalties=list(art.penalties))
    delivery = dict(dlv.components(), marker_count=dlv.marker_count)
    return _rounded(
        {
            "format": REPORT_FORMAT,
            "config": config.as_dict(),
            "artifact": artifact,
            "delivery": delivery,
            "slides": slides,
        }
    )


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

CSV_HEADER = (
    "index", "title", "penalty", "estimated_seconds", "sim", "redundancy", "coverage", "tips", "questions",
)


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in report["slides"]:
        w.writerow(
            [
                s["index"],
                s["title"],
                s["penalty"],
                f"{s['estimated_seconds']:.6f}",
                f"{s['sim']:.6f}",
                f"{s['redundancy']:.6f}",
                f"{s['coverage']:.6f}",
                " | ".join(s["tips"]),
                " | ".join(s["questions"]),
            ]
        )
    return buf.getvalue()


def render_text(report: dict) -> str:
    a, d = report["artifact"], report["delivery"]
    lines = [
        f"S_A = {a['S_A']:.6f}   (P {a['P']:.6f}, F_t {a['F_t']:.6f}, F_v {a['F_v']:.6f}, "
        f"L {a['L']:.6f}, Ae {a['Ae']:.6f})",
        f"S_D = {d['S_D']:.6f}   (R {d['R']:.6f}, N {d['N']:.6f}, C {d['C']:.6f}, "
        f"T_temporal {d['T_temporal']:.6f}, T_attention {d['T_attention']:.6f}, R' {d['R_prime']:.6f})",
        f"seconds per slide {d['seconds_per_slide']:.6f}, R_time {d['R_time']:.6f}",
        "",
    ]
    for s in report["slides"]:
        title = s["title"] or "(untitled)"
        lines.append(f"Slide {s['index']}: {title}")
        lines.append(
            f"  penalty {s['penalty']}  est {s['estimated_seconds']:.6f}s  sim {s['sim']:.6f}  "
            f"coverage {s['coverage']:.6f}"
        )
        lines.append("  Tips:")
        lines.extend(f"    - {t}" for t in s["tips"])
        lines.append("  Likely questions:")
        lines.extend(f"    ? {q}" for q in s["questions"])
        lines.append("")
    return "\n".join(lines)
