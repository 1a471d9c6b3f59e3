"""Delivery scoreboard: timing, requirements, narrative, complementarity, pacing, judged scores."""

from __future__ import annotations

import re
import statistics
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Protocol

from deckscore.deck import DeckPackage, EvaluationError, RequirementProfile
from deckscore.scorers import PairScorer, check_unit, checked, tf_cosine
from deckscore.text import tokenize

DEFAULT_MARKERS = (
    "next", "now", "moving on", "let's", "in summary", "finally", "first", "second", "turning to",
)
ANCHOR_WORDS = frozenset(
    {
        "figure", "fig", "table", "chart", "plot", "graph", "diagram", "image", "picture",
        "left", "right", "top", "bottom", "highlighted", "highlight", "shown", "here",
    }
)
OMEGA_KEYS = ("R", "N", "C", "T_temporal", "T_attention", "R_prime")
_DEFAULT_OMEGA = {k: 0.8 / 6 for k in OMEGA_KEYS}


@dataclass(frozen=True)
class DeliveryWeights:
    """Delivery hyper-parameters. The omega weights are rescaled to sum to 1 on construction."""

    eta: float = 0.4
    l: float = 0.25  # noqa: E741
    u: float = 0.55
    epsilon: float = 1e-6
    std_max: float | None = None  # None: max(10, seconds per slide / 6)
    omega: Mapping[str, float] = field(default_factory=lambda: dict(_DEFAULT_OMEGA))
    omega_stab: float = 0.1
    omega_fid: float = 0.1
    beta: float = 0.7
    markers: tuple[str, ...] = DEFAULT_MARKERS

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if not 0.0 <= self.l < self.u <= 1.0:
            raise ValueError("need 0 <= l < u <= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.std_max is not None and not self.std_max > 0:
            raise ValueError("std_max must be > 0")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        unknown = set(self.omega) - set(OMEGA_KEYS)
        if unknown:
            raise ValueError(f"unknown omega keys: {sorted(unknown)}")
        omega = {k: float(self.omega.get(k, 0.0)) for k in OMEGA_KEYS}
        values = [*omega.values(), self.omega_stab, self.omega_fid]
        if any(v < 0 for v in values):
            raise ValueError("omega weights must be non-negative")
        total = sum(values)
        if not total > 0:
            raise ValueError("omega weights must not all be zero")
        object.__setattr__(self, "omega", {k: v / total for k, v in omega.items()})
        object.__setattr__(self, "omega_stab", self.omega_stab / total)
        object.__setattr__(self, "omega_fid", self.omega_fid / total)
        object.__setattr__(self, "markers", tuple(self.markers))

    def resolve_std_max(self, seconds_per_slide: float) -> float:
        if self.std_max is not None:
            return self.std_max
        return max(10.0, seconds_per_slide / 6)

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "l": self.l,
            "u": self.u,
            "epsilon": self.epsilon,
            "std_max": self.std_max,
            "omega": dict(self.omega),
            "omega_stab": self.omega_stab,
            "omega_fid": self.omega_fid,
            "beta": self.beta,
            "markers": list(self.markers),
        }


@dataclass(frozen=True)
class DeliveryScorecard:
    seconds_per_slide: float
    R_time: float
    R: float
    N: float
    s_ctrl: float
    s_diver: float
    C: float
    T_temporal: float
    T_attention: float
    R_prime: float
    S_D: float
    sims: tuple[float, ...] = ()
    redundancy: tuple[float, ...] = ()
    coverage: tuple[float, ...] = ()
    durations: tuple[float, ...] = ()
    marker_count: int = 0
    weights: DeliveryWeights = field(default_factory=DeliveryWeights)

    def components(self) -> dict[str, float]:
        keys = ("seconds_per_slide", "R_time", "R", "N", "s_ctrl", "s_diver", "C",
                "T_temporal", "T_attention", "R_prime", "S_D")
        return {k: getattr(self, k) for k in keys}


# ---------------------------------------------------------------------------
# judges
# ---------------------------------------------------------------------------

class Judge(Protocol):
    def content_compliance(self, pkg: DeckPackage, profile: RequirementProfile) -> float: ...

    def delivery(self, pkg: DeckPackage) -> tuple[float, float]:
        """(attention choreography, rehearsal readiness)."""
        ...


def _marker_patterns(markers: Sequence[str]) -> list[re.Pattern]:
    return [re.compile(r"(?<!\w)" + re.escape(m.lower()) + r"(?!\w)") for m in markers]


def count_markers(text: str, markers: Sequence[str] = DEFAULT_MARKERS) -> int:
    text = text.lower().replace("’", "'")
    return sum(len(p.findall(text)) for p in _marker_patterns(markers))


@dataclass(frozen=True)
class HeuristicJudge:
    """Deterministic stand-in for a rubric-driven LLM judge."""

    markers: tuple[str, ...] = DEFAULT_MARKERS
    anchors: frozenset[str] = ANCHOR_WORDS

    def content_compliance(self, pkg: DeckPackage, profile: RequirementProfile) -> float:
        if not profile.focus:
            return 1.0
        vocab = set()
        for slide, script in pkg.pairs():
            vocab.update(tokenize(slide.text))
            vocab.update(tokenize(script.text))
        # a focus token is present if it starts some deck word, so plurals count
        covered = 0
        for term in profile.focus:
            toks = tokenize(term)
            if toks and all(any(w.startswith(t) for w in vocab) for t in toks):
                covered += 1
        return covered / len(profile.focus)

    def delivery(self, pkg: DeckPackage) -> tuple[float, float]:
        m = pkg.m
        anchored = sum(1 for p in pkg.scripts if self.anchors & set(tokenize(p.text)))
        titles = sum(1 for s in pkg.slides if s.title.strip()) / m
        markers = sum(count_markers(p.text, self.markers) for p in pkg.scripts)
        all_scripts = float(all(p.text.strip() for p in pkg.scripts))
        return anchored / m, (titles + min(1.0, markers / 4) + all_scripts) / 3


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def r_time(s: float) -> float:
    """Piecewise-linear seconds-per-slide schedule: 1 on [12, 60], 0 outside (6, 120)."""
    return min(1.0, max(min((s - 6) / 6, (120 - s) / 60), 0.0))


def seconds_per_slide(pkg: DeckPackage, profile: RequirementProfile) -> float:
    if pkg.m == 0:
        raise EvaluationError("empty deck: seconds per slide undefined")
    return profile.duration_minutes * 60 / pkg.m


def timing_compliance(pkg: DeckPackage, profile: RequirementProfile) -> tuple[float, float]:
    s = seconds_per_slide(pkg, profile)
    return s, r_time(s)


def requirement_score(pkg: DeckPackage, profile: RequirementProfile, judge: Judge | None = None) -> float:
    judge = judge or HeuristicJudge()
    _, rt = timing_compliance(pkg, profile)
    content = check_unit(judge.content_compliance(pkg, profile), f"{type(judge).__name__}.content_compliance")
    return (rt + content) / 2


def _slide_and_script(pkg: DeckPackage, k: int) -> str:
    return pkg.slides[k].text + "\n" + pkg.scripts[k].text


def narrative_score(pkg: DeckPackage, semantic: PairScorer = tf_cosine, eta: float = 0.4) -> tuple[float, float]:
    m = pkg.m
    if m == 0:
        raise EvaluationError("empty deck")
    titles = sum(1 for s in pkg.slides if s.title.strip()) / m
    if m == 1:
        smooth = 1.0
    else:
        smooth = sum(
            checked(semantic, _slide_and_script(pkg, k), _slide_and_script(pkg, k + 1)) for k in range(m - 1)
        ) / (m - 1)
    s_ctrl = (titles + smooth) / 2
    s_diver = 0.0
    return eta * s_diver + (1 - eta) * s_ctrl, s_ctrl


def redundancy_term(sim: float, l: float, u: float, epsilon: float) -> float:  # noqa: E741
    return max(0.0, 1 - min(abs(sim - l), abs(sim - u)) / (max(l, 1 - u) + epsilon))


def coverage_term(slide_text: str, script_text: str) -> float:
    words = set(tokenize(slide_text))
    if not words:
        return 0.0
    return len(words & set(tokenize(script_text))) / len(words)


def complementarity_terms(
    pkg: DeckPackage, semantic: PairScorer, weights: DeliveryWeights
) -> tuple[list[float], list[float], list[float]]:
    sims, red, cov = [], [], []
    for slide, script in pkg.pairs():
        sim = checked(semantic, slide.text, script.text)
        sims.append(sim)
        red.append(redundancy_term(sim, weights.l, weights.u, weights.epsilon))
        cov.append(coverage_term(slide.text, script.text))
    return sims, red, cov


def complementarity(pkg: DeckPackage, semantic: PairScorer = tf_cosine, weights: DeliveryWeights | None = None) -> float:
    weights = weights or DeliveryWeights()
    if pkg.m == 0:
        raise EvaluationError("empty deck")
    _, red, cov = complementarity_terms(pkg, semantic, weights)
    return (sum(red) + sum(cov)) / (2 * pkg.m)


def temporal_formula(durations: Sequence[float], marker_count: int, std_max: float, epsilon: float) -> float:
    spread = statistics.pstdev(durations) if len(durations) > 1 else 0.0
    smooth = max(0.0, 1 - spread / (std_max + epsilon))
    return (smooth + min(1.0, marker_count / 4)) / 2


def temporal_quality(pkg: DeckPackage, profile: RequirementProfile, weights: DeliveryWeights | None = None) -> float:
    weights = weights or DeliveryWeights()
    s = seconds_per_slide(pkg, profile)
    durations = [p.estimated_duration for p in pkg.scripts]
    markers = sum(count_markers(p.text, weights.markers) for p in pkg.scripts)
    return temporal_formula(durations, markers, weights.resolve_std_max(s), weights.epsilon)


def judged_scores(pkg: DeckPackage, judge: Judge | None = None) -> tuple[float, float]:
    judge = judge or HeuristicJudge()
    if pkg.m == 0:
        raise EvaluationError("empty deck")
    t_att, r_prime = judge.delivery(pkg)
    name = type(judge).__name__
    return check_unit(t_att, f"{name}.delivery"), check_unit(r_prime, f"{name}.delivery")


def aggregate_delivery(
    components: Mapping[str, float], P: float, F_t: float, F_v: float, weights: DeliveryWeights
) -> float:
    w = weights
    total = sum(w.omega[k] * components[k] for k in OMEGA_KEYS)
    total += w.omega_stab * P + w.omega_fid * (w.beta * F_t + (1 - w.beta) * F_v)
    # weights are convex; the clamp only absorbs float rounding
    return min(1.0, max(0.0, total))


def score_delivery(
    pkg: DeckPackage,
    profile: RequirementProfile,
    P: float,
    F_t: float,
    F_v: float,
    weights: DeliveryWeights | None = None,
    judge: Judge | None = None,
    semantic: PairScorer = tf_cosine,
) -> DeliveryScorecard:
    weights = weights or DeliveryWeights()
    judge = judge or HeuristicJudge(markers=weights.markers)
    s, rt = timing_compliance(pkg, profile)
    R = requirement_score(pkg, profile, judge)
    N, s_ctrl = narrative_score(pkg, semantic, weights.eta)
    sims, red, cov = complementarity_terms(pkg, semantic, weights)
    C = (sum(red) + sum(cov)) / (2 * pkg.m)
    durations = [p.estimated_duration for p in pkg.scripts]
    markers = sum(count_markers(p.text, weights.markers) for p in pkg.scripts)
    T_temporal = temporal_formula(durations, markers, weights.resolve_std_max(s), weights.epsilon)
    T_attention, R_prime = judged_scores(pkg, judge)
    comps = {"R": R, "N": N, "C": C, "T_temporal": T_temporal, "T_attention": T_attention, "R_prime": R_prime}
    return DeliveryScorecard(
        seconds_per_slide=s,
        R_time=rt,
        R=R,
        N=N,
        s_ctrl=s_ctrl,
        s_diver=0.0,
        C=C,
        T_temporal=T_temporal,
        T_attention=T_attention,
        R_prime=R_prime,
        S_D=aggregate_delivery(comps, P, F_t, F_v, weights),
        sims=tuple(sims),
        redundancy=tuple(red),
        coverage=tuple(cov),
        durations=tuple(durations),
        marker_count=markers,
        weights=weights,
    )
