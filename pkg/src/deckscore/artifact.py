"""Artifact scoreboard: stability, textual/visual fidelity, legibility, aesthetics."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, fields

from deckscore.deck import IMAGE_KINDS, DeckPackage, EvaluationError, RunRecord, SourceAlignment
from deckscore.ingest import SliceType
from deckscore.scorers import PairScorer, checked, rouge_l, tf_cosine

MIN_FONT_PT = 12
MAX_WORDS = 140
IMAGE_TARGET = 0.6

_SUM_TOL = 1e-9

# visual kind -> slice types in the aligned source that can back it
_KIND_SUPPORT = {
    "image": {SliceType.FIGURE},
    "figure": {SliceType.FIGURE},
    "chart": {SliceType.FIGURE, SliceType.TABLE},
    "table": {SliceType.TABLE},
}


def _unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class ArtifactWeights:
    omega_rouge: float = 0.5
    omega_bert: float = 0.5
    alpha_stab: float = 0.2
    alpha_fid: float = 0.4
    alpha_read: float = 0.4
    beta: float = 0.7
    gamma: float = 0.5

    def __post_init__(self) -> None:
        for f in fields(self):
            _unit(f.name, getattr(self, f.name))
        if not math.isclose(self.omega_rouge + self.omega_bert, 1.0, abs_tol=_SUM_TOL):
            raise ValueError("omega_rouge + omega_bert must equal 1")
        if not math.isclose(self.alpha_stab + self.alpha_fid + self.alpha_read, 1.0, abs_tol=_SUM_TOL):
            raise ValueError("alpha_stab + alpha_fid + alpha_read must equal 1")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ArtifactScorecard:
    P: float
    F_t: float
    F_v: float
    L: float
    Ae: float
    S_A: float
    frac_img: float
    frac_script: float
    penalties: tuple[int, ...] = field(default=())
    weights: ArtifactWeights = field(default_factory=ArtifactWeights)

    def components(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("P", "F_t", "F_v", "L", "Ae", "S_A", "frac_img", "frac_script")}


def stability(runs: Sequence[RunRecord]) -> float:
    if not runs:
        raise EvaluationError("stability needs at least one run")
    return sum(1 for r in runs if r.succeeded) / len(runs)


def textual_fidelity(
    pkg: DeckPackage,
    alignments: Sequence[SourceAlignment],
    weights: ArtifactWeights,
    lexical: PairScorer = rouge_l,
    semantic: PairScorer = tf_cosine,
) -> float:
    m = pkg.m
    if m == 0:
        raise EvaluationError("empty deck")
    if len(alignments) != m:
        raise EvaluationError(f"expected {m} alignments, got {len(alignments)}")
    lex = sem = 0.0
    for (slide, script), al in zip(pkg.pairs(), alignments):
        ref = al.reference_text
        lex += checked(lexical, slide.text, ref) + checked(lexical, script.text, ref)
        sem += checked(semantic, slide.text, ref) + checked(semantic, script.text, ref)
    return weights.omega_rouge / (2 * m) * lex + weights.omega_bert / (2 * m) * sem


def visual_match(slide, alignment: SourceAlignment) -> bool:
    """Some visual on the slide is backed by the aligned source.

    Backed means its ``source_ref`` names one of the aligned node ids, or its kind
    matches a figure/table slice among the aligned nodes.
    """
    ids = {str(i) for i in alignment.source_node_ids}
    types = set(alignment.source_node_types)
    for v in slide.visuals:
        if v.source_ref is not None and v.source_ref.strip() in ids:
            return True
        if types & _KIND_SUPPORT[v.kind]:
            return True
    return False


def visual_fidelity(pkg: DeckPackage, alignments: Sequence[SourceAlignment]) -> float:
    if pkg.m == 0:
        raise EvaluationError("empty deck")
    return sum(1 for s, al in zip(pkg.slides, alignments) if visual_match(s, al)) / pkg.m


def slide_penalty(slide) -> int:
    font = slide.min_font_size
    return int(font is not None and font < MIN_FONT_PT) + int(slide.word_count > MAX_WORDS)


def legibility(pkg: DeckPackage) -> tuple[float, list[int]]:
    if pkg.m == 0:
        raise EvaluationError("empty deck")
    penalties = [slide_penalty(s) for s in pkg.slides]
    return 1.0 - sum(min(1, p) for p in penalties) / pkg.m, penalties


def image_fraction(pkg: DeckPackage) -> float:
    if pkg.m == 0:
        raise EvaluationError("empty deck: image fraction undefined")
    return sum(1 for s in pkg.slides if s.has_kind(IMAGE_KINDS)) / pkg.m


def script_fraction(pkg: DeckPackage) -> float:
    if pkg.m == 0:
        raise EvaluationError("empty deck: script fraction undefined")
    return sum(1 for p in pkg.scripts if p.text.strip()) / pkg.m


def aesthetic_formula(L: float, frac_img: float, frac_script: float) -> float:
    raw = 0.6 * L + 0.2 * (1 - abs(frac_img - IMAGE_TARGET)) + 0.2 * frac_script
    return min(1.0, max(0.0, raw))


def aesthetics(pkg: DeckPackage, L: float) -> float:
    return aesthetic_formula(L, image_fraction(pkg), script_fraction(pkg))


def aggregate_artifact(P: float, F_t: float, F_v: float, L: float, Ae: float, weights: ArtifactWeights) -> float:
    for name, v in (("P", P), ("F_t", F_t), ("F_v", F_v), ("L", L), ("Ae", Ae)):
        _unit(name, v)
    w = weights
    total = (
        w.alpha_stab * P
        + w.alpha_fid * (w.beta * F_t + (1 - w.beta) * F_v)
        + w.alpha_read * (w.gamma * L + (1 - w.gamma) * Ae)
    )
    # weights are convex; the clamp only absorbs float rounding
    return min(1.0, max(0.0, total))


def score_artifact(
    pkg: DeckPackage,
    runs: Sequence[RunRecord],
    alignments: Sequence[SourceAlignment],
    weights: ArtifactWeights | None = None,
    lexical: PairScorer = rouge_l,
    semantic: PairScorer = tf_cosine,
) -> ArtifactScorecard:
    weights = weights or ArtifactWeights()
    P = stability(runs)
    F_t = textual_fidelity(pkg, alignments, weights, lexical, semantic)
    F_v = visual_fidelity(pkg, alignments)
    L, penalties = legibility(pkg)
    frac_img, frac_script = image_fraction(pkg), script_fraction(pkg)
    Ae = aesthetic_formula(L, frac_img, frac_script)
    return ArtifactScorecard(
        P=P,
        F_t=F_t,
        F_v=F_v,
        L=L,
        Ae=Ae,
        S_A=aggregate_artifact(P, F_t, F_v, L, Ae, weights),
        frac_img=frac_img,
        frac_script=frac_script,
        penalties=tuple(penalties),
        weights=weights,
    )
