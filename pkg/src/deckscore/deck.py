"""Evaluated package: slides, aligned scripts, requirement profile, run records."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from deckscore.ingest import SliceType
from deckscore.retrieval import CorpusStats, RetrievalParams, retrieve
from deckscore.text import collapse_ws, strip_markup, truncate_tokens, word_count
from deckscore.tree import ContentTree

WORDS_PER_MINUTE = 150
VISUAL_KINDS = ("image", "table", "figure", "chart")
IMAGE_KINDS = frozenset({"image", "figure"})


class PackageError(ValueError):
    """Package file does not satisfy the interchange schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class CountMismatchError(PackageError):
    pass


class EvaluationError(ValueError):
    """A metric is undefined for the given input (e.g. an empty deck)."""


@dataclass(frozen=True)
class Visual:
    kind: str
    source_ref: str | None = None


@dataclass(frozen=True)
class Slide:
    index: int
    title: str = ""
    text_blocks: tuple[str, ...] = ()
    min_font_size: float | None = None
    visuals: tuple[Visual, ...] = ()

    @property
    def text(self) -> str:
        return "\n".join(p for p in (self.title, *self.text_blocks) if p)

    @property
    def body_text(self) -> str:
        return "\n".join(self.text_blocks)

    @property
    def word_count(self) -> int:
        return word_count(self.text)

    def has_kind(self, kinds: str | frozenset[str]) -> bool:
        kinds = frozenset({kinds}) if isinstance(kinds, str) else kinds
        return any(v.kind in kinds for v in self.visuals)


@dataclass(frozen=True)
class SpeakerScript:
    index: int
    text: str = ""

    @property
    def word_count(self) -> int:
        return word_count(self.text)

    @property
    def estimated_duration(self) -> float:
        return estimate_duration(self)


def estimate_duration(script: SpeakerScript) -> float:
    """Seconds of narration at 150 words per minute."""
    return script.word_count / WORDS_PER_MINUTE * 60


@dataclass(frozen=True)
class RequirementProfile:
    duration_minutes: float
    audience: str = ""
    focus: tuple[str, ...] = ()
    style: str = ""

    def __post_init__(self) -> None:
        if not self.duration_minutes > 0:
            raise PackageError("requirements.duration_minutes", "must be > 0")


@dataclass(frozen=True)
class RunRecord:
    run_index: int
    succeeded: bool
    failure_reason: str | None = None


@dataclass(frozen=True)
class DeckPackage:
    slides: tuple[Slide, ...]
    scripts: tuple[SpeakerScript, ...]
    runs: tuple[RunRecord, ...] = ()

    def __post_init__(self) -> None:
        if len(self.slides) != len(self.scripts):
            raise CountMismatchError(
                "scripts", f"{len(self.slides)} slides but {len(self.scripts)} scripts"
            )
        for k, (f, p) in enumerate(zip(self.slides, self.scripts), start=1):
            if f.index != k or p.index != k:
                raise PackageError(f"slides[{k - 1}]", "slide/script indices must run 1..m in order")

    @property
    def m(self) -> int:
        return len(self.slides)

    def pairs(self):
        return zip(self.slides, self.scripts)


@dataclass(frozen=True)
class SourceAlignment:
    index: int
    reference_text: str
    source_node_ids: tuple[int, ...] = ()
    source_node_types: tuple[SliceType, ...] = ()
    empty: bool = False


# ---------------------------------------------------------------------------
# interchange format
# ---------------------------------------------------------------------------

_STR = {"type": "string"}
PACKAGE_SCHEMA = {
    "type": "object",
    "required": ["requirements", "slides", "scripts"],
    "additionalProperties": False,
    "properties": {
        "requirements": {
            "type": "object",
            "required": ["duration_minutes"],
            "additionalProperties": False,
            "properties": {
                "audience": _STR,
                "duration_minutes": {"type": "number", "exclusiveMinimum": 0},
                "focus": {"type": "array", "items": _STR},
                "style": _STR,
            },
        },
        "slides": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "title": _STR,
                    "text_blocks": {"type": "array", "items": _STR},
                    "min_font_size": {"type": ["number", "null"], "exclusiveMinimum": 0},
                    "visuals": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["kind"],
                            "additionalProperties": False,
                            "properties": {
                                "kind": {"enum": list(VISUAL_KINDS)},
                                "source_ref": {"type": ["string", "null"]},
                            },
                        },
                    },
                },
            },
        },
        "scripts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["text"],
                "additionalProperties": False,
                "properties": {"text": _STR},
            },
        },
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["succeeded"],
                "additionalProperties": False,
                "properties": {
                    "succeeded": {"type": "boolean"},
                    "failure_reason": {"type": ["string", "null"]},
                },
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(PACKAGE_SCHEMA)


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def parse_package(data: dict) -> tuple[DeckPackage, RequirementProfile]:
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise PackageError(_json_path(e.absolute_path) or "<root>", e.message)
    req = data["requirements"]
    profile = RequirementProfile(
        duration_minutes=float(req["duration_minutes"]),
        audience=req.get("audience", ""),
        focus=tuple(req.get("focus", ())),
        style=req.get("style", ""),
    )
    slides = []
    for k, s in enumerate(data["slides"], start=1):
        slide = Slide(
            index=k,
            title=s.get("title", ""),
            text_blocks=tuple(s.get("text_blocks", ())),
            min_font_size=s.get("min_font_size"),
            visuals=tuple(Visual(v["kind"], v.get("source_ref")) for v in s.get("visuals", ())),
        )
        if slide.word_count and slide.min_font_size is None:
            raise PackageError(f"slides[{k - 1}].min_font_size", "required when the slide has text")
        slides.append(slide)
    scripts = [SpeakerScript(k, s["text"]) for k, s in enumerate(data["scripts"], start=1)]
    runs = [
        RunRecord(r, bool(x["succeeded"]), x.get("failure_reason"))
        for r, x in enumerate(data.get("runs", ()), start=1)
    ]
    return DeckPackage(tuple(slides), tuple(scripts), tuple(runs)), profile


def load_package(path: str | Path) -> tuple[DeckPackage, RequirementProfile]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PackageError("<root>", f"invalid JSON: {exc}") from exc
    return parse_package(data)


def package_to_dict(pkg: DeckPackage, profile: RequirementProfile) -> dict:
    out: dict = {
        "requirements": {
            "audience": profile.audience,
            "duration_minutes": profile.duration_minutes,
            "focus": list(profile.focus),
            "style": profile.style,
        },
        "slides": [
            {
                "title": s.title,
                "text_blocks": list(s.text_blocks),
                "min_font_size": s.min_font_size,
                "visuals": [{"kind": v.kind, "source_ref": v.source_ref} for v in s.visuals],
            }
            for s in pkg.slides
        ],
        "scripts": [{"text": p.text} for p in pkg.scripts],
    }
    if pkg.runs:
        out["runs"] = [{"succeeded": r.succeeded, "failure_reason": r.failure_reason} for r in pkg.runs]
    return out


def dump_package(pkg: DeckPackage, profile: RequirementProfile) -> str:
    return json.dumps(package_to_dict(pkg, profile), indent=2, ensure_ascii=False) + "\n"


def make_package(
    slides: Sequence[Slide | dict], scripts: Sequence[str], runs: Sequence[bool] = ()
) -> DeckPackage:
    """Convenience constructor that numbers slides and scripts 1..m."""
    built = []
    for k, s in enumerate(slides, start=1):
        if isinstance(s, dict):
            s = Slide(
                index=k,
                title=s.get("title", ""),
                text_blocks=tuple(s.get("text_blocks", ())),
                min_font_size=s.get("min_font_size", 24.0),
                visuals=tuple(Visual(*v) if isinstance(v, tuple) else Visual(v) for v in s.get("visuals", ())),
            )
        built.append(s)
    return DeckPackage(
        tuple(built),
        tuple(SpeakerScript(k, t) for k, t in enumerate(scripts, start=1)),
        tuple(RunRecord(r, ok) for r, ok in enumerate(runs, start=1)),
    )


# ---------------------------------------------------------------------------
# source alignment
# ---------------------------------------------------------------------------

def align_to_source(
    pkg: DeckPackage, tree: ContentTree, stats: CorpusStats, params: RetrievalParams
) -> list[SourceAlignment]:
    out = []
    for slide, script in pkg.pairs():
        hits = retrieve(slide.text + "\n" + script.text, tree, stats, params)
        ids = tuple(h.node_id for h in hits)
        ref = "\n".join(collapse_ws(strip_markup(tree[i].content)) for i in ids)
        out.append(
            SourceAlignment(
                index=slide.index,
                reference_text=truncate_tokens(ref, params.l_max),
                source_node_ids=ids,
                source_node_types=tuple(tree[i].node_type for i in ids),
                empty=not ids,
            )
        )
    return out


def runs_or_default(pkg: DeckPackage) -> tuple[RunRecord, ...]:
    """Runs from the package; a package without run records counts as one successful run."""
    return pkg.runs or (RunRecord(1, True),)


__all__ = [
    "CountMismatchError",
    "DeckPackage",
    "PackageError",
    "RequirementProfile",
    "RunRecord",
    "Slide",
    "SourceAlignment",
    "SpeakerScript",
    "Visual",
    "align_to_source",
    "dump_package",
    "estimate_duration",
    "load_package",
    "make_package",
    "parse_package",
]
