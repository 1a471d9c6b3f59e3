"""Command-line entry point.

Exit codes: 0 success, 1 validation error (bad document, package, config or
parameters), 2 I/O error (missing or unreadable files).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from deckscore import ablation
from deckscore.config import Config, load_config
from deckscore.deck import load_package
from deckscore.delivery import seconds_per_slide
from deckscore.ingest import dump_slices
from deckscore.orchestration import (
    ALL_EFFECTS,
    Effect,
    NodeBudget,
    StyleSummary,
    markov_sequence,
    simulate_pacing,
    validate_render,
)
from deckscore.pipeline import (
    atomic_write,
    evaluate,
    index_text,
    ingest,
    read_index,
    render_csv,
    render_text,
    report_json,
)
from deckscore.retrieval import TreeIndex
from deckscore.tree import outline

log = logging.getLogger("deckscore")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _config(args: argparse.Namespace) -> Config:
    return load_config(getattr(args, "config", None))


def cmd_index(args: argparse.Namespace) -> int:
    cfg = _config(args)
    slices, tree = ingest(args.source, cfg)
    idx = TreeIndex(tree, cfg.retrieval)
    atomic_write(args.out, index_text(tree, idx, Path(args.source).name))
    if args.slices:
        atomic_write(args.slices, dump_slices(slices))
    if args.outline:
        print(outline(tree, args.outline))
    log.info("indexed %d nodes (%d roots) into %s", len(tree), len(tree.roots), args.out)
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    cfg = _config(args)
    overrides = {
        "top_k": args.k,
        "alpha_tree": args.alpha,
        "beta_tree": args.beta,
        "gamma_tree": args.gamma,
        "delta_tree": args.delta,
        "m0": args.m0,
    }
    cfg = cfg.with_retrieval(**{k: v for k, v in overrides.items() if v is not None})
    idx = read_index(args.index, cfg)
    for hit in idx.query(args.query):
        print(f"{hit.node_id}\t{hit.score:.6f}\t{idx.tree[hit.node_id].title}")
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    cfg = load_config(args.weights, _config(args))
    idx = read_index(args.index, cfg)
    pkg, profile = load_package(args.package)
    _emit(report_json(evaluate(idx, pkg, profile, cfg)), args.out)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    if not args.report:
        raise FileNotFoundError("empty report path")
    try:
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.report}: not a JSON report: {exc}") from exc
    text = render_csv(report) if args.format == "csv" else render_text(report)
    _emit(text, args.out)
    return EXIT_OK


def _read_budgets(path: str, overrun: float) -> tuple[list[NodeBudget], list[list[int]]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a list of {{node, budget_seconds, slides}} records")
    budgets, assignments = [], []
    for i, rec in enumerate(data):
        try:
            budgets.append(NodeBudget(str(rec["node"]), float(rec["budget_seconds"]), overrun=overrun))
            assignments.append([int(k) for k in rec["slides"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{path}[{i}]: bad budget record: {exc}") from exc
    return budgets, assignments


def cmd_pace(args: argparse.Namespace) -> int:
    cfg = _config(args)
    pkg, profile = load_package(args.package)
    estimates = [p.estimated_duration for p in pkg.scripts]
    if args.budgets:
        budgets, assignments = _read_budgets(args.budgets, cfg.overrun)
        for slides in assignments:
            for k in slides:
                if not 1 <= k <= pkg.m:
                    raise ValueError(f"budget refers to slide {k}, deck has {pkg.m}")
    else:
        per_slide = seconds_per_slide(pkg, profile)
        budgets = [NodeBudget(f"slide-{k}", per_slide, overrun=cfg.overrun) for k in range(1, pkg.m + 1)]
        assignments = [[k] for k in range(1, pkg.m + 1)]
    lines = ["node\tslide\testimate\tconsumed\tremaining\tstate"]
    for ev in simulate_pacing(budgets, assignments, estimates):
        lines.append(
            f"{ev.node_id}\t{ev.slide_index}\t{ev.estimate:.6f}\t{ev.consumed:.6f}\t{ev.remaining:.6f}\t{ev.state.name}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _effects(names: list[str] | None) -> frozenset[Effect]:
    out = set()
    for n in names or ():
        try:
            out.add(Effect(n))
        except ValueError:
            raise ValueError(f"unknown effect {n!r}; choose from {', '.join(e.value for e in Effect)}") from None
    return frozenset(out)


def cmd_augment(args: argparse.Namespace) -> int:
    pkg, profile = load_package(args.package)
    enabled = _effects(args.enable) if args.enable else ALL_EFFECTS
    enabled -= _effects(args.disable)
    result = markov_sequence(pkg.slides, profile, StyleSummary(profile.style or "default", is_deck=True), enabled=enabled)
    issues = validate_render(result.slides)
    doc = {
        "enabled": sorted(e.value for e in enabled),
        "deck_style": result.styles[0].descriptor,
        "slides": [
            {"index": k, **d.to_dict(), "style": s.descriptor}
            for k, (d, s) in enumerate(zip(result.decisions, result.styles[1:]), start=1)
        ],
        "rejected_plans": result.rejected,
        "issues": [{"slide": i.slide_index, "field": i.field, "message": i.message} for i in issues],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = load_config(args.weights, _config(args))
    idx = read_index(args.index, cfg)
    pkg, profile = load_package(args.package)
    rows = ablation.sweep(idx.tree, pkg, profile, cfg)
    _emit(ablation.format_table(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="INI config file overriding defaults")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="reserved; all defaults are deterministic")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="deckscore", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="build a content-tree index from a .tex/.md source")
    p.add_argument("source")
    p.add_argument("-o", "--out", required=True, help="index file to write")
    p.add_argument("--slices", help="also write the slice records (JSON lines)")
    p.add_argument("--outline", type=int, metavar="DEPTH", help="print the heading outline to DEPTH")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", parents=[common], help="tree-aware BM25 query against an index")
    p.add_argument("index")
    p.add_argument("query")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--m0", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("score", parents=[common], help="score a deck package against an index")
    p.add_argument("index")
    p.add_argument("package")
    p.add_argument("--weights", help="INI file with [artifact]/[delivery] overrides")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", parents=[common], help="render a score report as text or CSV")
    p.add_argument("report")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pace-simulate", parents=[common], help="replay the pacing timer over a package")
    p.add_argument("package")
    p.add_argument("--budgets", help="JSON list of {node, budget_seconds, slides}")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_pace)

    p = sub.add_parser("augment-plan", parents=[common], help="emit gated augmentation decisions")
    p.add_argument("package")
    p.add_argument("--enable", nargs="*", metavar="EFFECT", help="enabled effect set (default: all)")
    p.add_argument("--disable", nargs="*", metavar="EFFECT")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("ablate", parents=[common], help="sweep l_max and K, print a score table")
    p.add_argument("index")
    p.add_argument("package")
    p.add_argument("--weights")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
