"""Deterministic generation-time machinery.

* a per-node pacing timer (Silent -> Cautionary -> Compress -> Terminate),
* primary-effect gating with a fixed priority,
* first-order sequential augmentation with style inheritance,
* structural validation of augmentation decisions with a re-gating repair loop.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Protocol

from deckscore.artifact import MAX_WORDS
from deckscore.deck import IMAGE_KINDS, RequirementProfile, Slide

log = logging.getLogger(__name__)

DEFAULT_OVERRUN = 0.2
VERBOSE_WORDS = MAX_WORDS


# ---------------------------------------------------------------------------
# pacing
# ---------------------------------------------------------------------------

class TimerState(enum.IntEnum):
    SILENT = 0
    CAUTIONARY = 1
    COMPRESS = 2
    TERMINATE = 3


@dataclass
class NodeBudget:
    node_id: str
    budget_seconds: float
    consumed_seconds: float = 0.0
    overrun: float = DEFAULT_OVERRUN

    def __post_init__(self) -> None:
        if not self.budget_seconds > 0:
            raise ValueError(f"budget for node {self.node_id!r} must be positive")
        if self.consumed_seconds < 0 or self.overrun < 0:
            raise ValueError("consumed time and overrun must be non-negative")

    @property
    def remaining(self) -> float:
        return self.budget_seconds - self.consumed_seconds

    def state(self) -> TimerState:
        remaining = self.remaining
        if remaining > self.budget_seconds / 2:
            return TimerState.SILENT
        if remaining > 0:
            return TimerState.CAUTIONARY
        if self.consumed_seconds <= self.budget_seconds * (1 + self.overrun):
            return TimerState.COMPRESS
        return TimerState.TERMINATE


def timer_update(budget: NodeBudget, new_estimate_seconds: float) -> TimerState:
    if new_estimate_seconds < 0:
        raise ValueError("estimate must be non-negative")
    budget.consumed_seconds += new_estimate_seconds
    return budget.state()


@dataclass(frozen=True)
class PaceEvent:
    node_id: str
    slide_index: int
    estimate: float
    consumed: float
    remaining: float
    state: TimerState


def simulate_pacing(
    budgets: Sequence[NodeBudget], assignments: Sequence[Sequence[int]], estimates: Sequence[float]
) -> list[PaceEvent]:
    """Replay ``timer_update`` for each node over its slides (1-based indices) in order."""
    trace = []
    for budget, slides in zip(budgets, assignments):
        for k in slides:
            state = timer_update(budget, estimates[k - 1])
            trace.append(PaceEvent(budget.node_id, k, estimates[k - 1], budget.consumed_seconds, budget.remaining, state))
    return trace


# ---------------------------------------------------------------------------
# effects and gating
# ---------------------------------------------------------------------------

class Effect(str, enum.Enum):
    IMAGE_FOCUS = "ImageFocus"
    DATA_VISUALIZATION = "DataVisualization"
    TEXT_TO_DIAGRAM = "TextToDiagram"
    KEYNOTE = "Keynote"
    AUTO_LAYOUT = "AutoLayout"
    MOTION = "Motion"
    BACKGROUND = "Background"
    STRUCTURAL_RECOGNITION = "StructuralRecognition"


PRIMARY_PRIORITY = (Effect.IMAGE_FOCUS, Effect.DATA_VISUALIZATION, Effect.TEXT_TO_DIAGRAM)
SECONDARY = frozenset({Effect.KEYNOTE, Effect.AUTO_LAYOUT, Effect.MOTION, Effect.BACKGROUND})
ALL_EFFECTS = frozenset(Effect)

Rect = tuple[float, float, float, float]  # x0, y0, x1, y1 in the unit square

ROI_TEMPLATES: dict[str, tuple[Rect, ...]] = {
    "left-right split": ((0.0, 0.0, 0.5, 1.0), (0.5, 0.0, 1.0, 1.0)),
    "2x2 grid": (
        (0.0, 0.0, 0.5, 0.5),
        (0.5, 0.0, 1.0, 0.5),
        (0.0, 0.5, 0.5, 1.0),
        (0.5, 0.5, 1.0, 1.0),
    ),
}


class GatingError(ValueError):
    pass


@dataclass(frozen=True)
class FocusTemplate:
    name: str
    rois: tuple[Rect, ...]

    @classmethod
    def named(cls, name: str) -> FocusTemplate:
        return cls(name, ROI_TEMPLATES[name])


@dataclass(frozen=True)
class AugmentationDecision:
    primary_effect: Effect | None = None
    secondary_effects: frozenset[Effect] = frozenset()
    focus_template: FocusTemplate | None = None

    def to_dict(self) -> dict:
        return {
            "primary_effect": self.primary_effect.value if self.primary_effect else None,
            "secondary_effects": sorted(e.value for e in self.secondary_effects),
            "focus_template": None
            if self.focus_template is None
            else {"name": self.focus_template.name, "rois": [list(r) for r in self.focus_template.rois]},
        }


def triggers(slide: Slide) -> dict[Effect, bool]:
    return {
        Effect.IMAGE_FOCUS: slide.has_kind(IMAGE_KINDS),
        Effect.DATA_VISUALIZATION: slide.has_kind("table"),
        Effect.TEXT_TO_DIAGRAM: slide.word_count > VERBOSE_WORDS,
    }


def choose_template(slide: Slide) -> FocusTemplate:
    n_images = sum(1 for v in slide.visuals if v.kind in IMAGE_KINDS)
    return FocusTemplate.named("left-right split" if n_images >= 2 else "2x2 grid")


def gate_effects(slide: Slide, enabled: Iterable[Effect] = ALL_EFFECTS) -> AugmentationDecision:
    """At most one primary effect: the highest-priority enabled one whose trigger holds.

    Nothing primary is selected unless structural recognition is enabled. Enabled
    secondary effects pass through untouched.
    """
    enabled = frozenset(enabled)
    secondary = enabled & SECONDARY
    if Effect.STRUCTURAL_RECOGNITION not in enabled:
        return AugmentationDecision(None, secondary)
    fired = triggers(slide)
    for effect in PRIMARY_PRIORITY:
        if effect in enabled and fired[effect]:
            template = choose_template(slide) if effect is Effect.IMAGE_FOCUS else None
            return AugmentationDecision(effect, secondary, template)
    return AugmentationDecision(None, secondary)


# ---------------------------------------------------------------------------
# sequential augmentation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StyleSummary:
    descriptor: str
    is_deck: bool = False


@dataclass(frozen=True)
class SlideState:
    source: Slide
    profile: RequirementProfile
    deck_style: StyleSummary
    previous_style: StyleSummary


@dataclass(frozen=True)
class Plan:
    """Raw planner output; may violate gating and is filtered before rendering."""

    primary_effects: tuple[Effect, ...] = ()
    secondary_effects: frozenset[Effect] = frozenset()
    focus_template: FocusTemplate | None = None


@dataclass(frozen=True)
class AugmentedSlide:
    source: Slide
    decision: AugmentationDecision
    style: str = ""


class Planner(Protocol):
    def __call__(self, state: SlideState) -> Plan: ...


Renderer = Callable[[Slide, AugmentationDecision], Any]
StyleSummarizer = Callable[[Any], StyleSummary]


@dataclass(frozen=True)
class RulePlanner:
    """Proposes exactly the gated skeleton for the current slide; reads nothing but the state."""

    enabled: frozenset[Effect] = ALL_EFFECTS

    def __call__(self, state: SlideState) -> Plan:
        d = gate_effects(state.source, self.enabled)
        primary = (d.primary_effect,) if d.primary_effect else ()
        return Plan(primary, d.secondary_effects, d.focus_template)


def null_planner(state: SlideState) -> Plan:
    return Plan()


def decision_renderer(slide: Slide, decision: AugmentationDecision) -> AugmentedSlide:
    return AugmentedSlide(slide, decision)


def identity_renderer(slide: Slide, decision: AugmentationDecision) -> Slide:
    return slide


def describe_style(rendered: Any) -> StyleSummary:
    if isinstance(rendered, AugmentedSlide):
        d = rendered.decision
        parts = [f"primary={d.primary_effect.value if d.primary_effect else 'none'}"]
        parts.append("secondary=" + (",".join(sorted(e.value for e in d.secondary_effects)) or "none"))
        if d.focus_template:
            parts.append(f"template={d.focus_template.name}")
        return StyleSummary("; ".join(parts))
    title = getattr(rendered, "title", "")
    return StyleSummary(f"plain slide '{title}'")


def filter_plan(plan: Plan, slide: Slide, enabled: Iterable[Effect]) -> AugmentationDecision:
    """Apply gating to a planner proposal.

    The planner may decline the gated primary effect or pick it; anything else
    (two primaries, a primary the gate does not allow) is rejected and replaced by
    the gated decision.
    """
    enabled = frozenset(enabled)
    gate = gate_effects(slide, enabled)
    secondary = plan.secondary_effects & enabled & SECONDARY
    if len(plan.primary_effects) > 1:
        raise GatingError(f"slide {slide.index}: planner proposed {len(plan.primary_effects)} primary effects")
    if not plan.primary_effects:
        return AugmentationDecision(None, secondary)
    (primary,) = plan.primary_effects
    if primary is not gate.primary_effect:
        raise GatingError(f"slide {slide.index}: primary {primary.value} not permitted by gating")
    template = plan.focus_template if primary is Effect.IMAGE_FOCUS else None
    if primary is Effect.IMAGE_FOCUS and template is None:
        template = gate.focus_template
    return AugmentationDecision(primary, secondary, template)


@dataclass
class SequenceResult:
    slides: list[Any]
    decisions: list[AugmentationDecision]
    styles: list[StyleSummary]
    rejected: list[int] = field(default_factory=list)


def markov_sequence(
    slides: Sequence[Slide],
    profile: RequirementProfile,
    deck_style: StyleSummary,
    planner: Planner | None = None,
    renderer: Renderer = decision_renderer,
    summarizer: StyleSummarizer = describe_style,
    enabled: Iterable[Effect] = ALL_EFFECTS,
) -> SequenceResult:
    """Augment slides in order; each decision sees only its own slide state.

    ``styles[0]`` is the deck style; ``styles[k]`` summarizes rendered slide k.
    """
    enabled = frozenset(enabled)
    planner = planner or RulePlanner(enabled)
    styles = [deck_style]
    out: list[Any] = []
    decisions: list[AugmentationDecision] = []
    rejected: list[int] = []
    for slide in slides:
        state = SlideState(slide, profile, deck_style, styles[-1])
        try:
            decision = filter_plan(planner(state), slide, enabled)
        except GatingError as exc:
            log.info("rejected plan, re-gating: %s", exc)
            rejected.append(slide.index)
            decision = gate_effects(slide, enabled)
        rendered = renderer(slide, decision)
        out.append(rendered)
        decisions.append(decision)
        styles.append(summarizer(rendered))
    return SequenceResult(out, decisions, styles, rejected)


# ---------------------------------------------------------------------------
# render validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RenderIssue:
    slide_index: int
    field: str
    message: str


RenderValidator = Callable[[Sequence[AugmentedSlide]], list[RenderIssue]]


def structural_validator(deck: Sequence[AugmentedSlide]) -> list[RenderIssue]:
    issues = []
    for item in deck:
        k, d = item.source.index, item.decision
        if (d.primary_effect is Effect.IMAGE_FOCUS) != (d.focus_template is not None):
            issues.append(RenderIssue(k, "focus_template", "focus template must accompany ImageFocus only"))
        if d.focus_template is not None:
            for j, (x0, y0, x1, y1) in enumerate(d.focus_template.rois):
                inside = all(0.0 <= c <= 1.0 for c in (x0, y0, x1, y1))
                if not inside or x0 >= x1 or y0 >= y1:
                    issues.append(RenderIssue(k, f"focus_template.rois[{j}]", "ROI outside the unit square"))
        if d.primary_effect is not None and not triggers(item.source)[d.primary_effect]:
            issues.append(RenderIssue(k, "primary_effect", f"{d.primary_effect.value} has nothing to act on"))
        if d.secondary_effects - SECONDARY:
            issues.append(RenderIssue(k, "secondary_effects", "primary effect listed as secondary"))
    return issues


def validate_render(deck: Sequence[AugmentedSlide], validator: RenderValidator = structural_validator) -> list[RenderIssue]:
    return validator(deck)


def repair(
    deck: Sequence[AugmentedSlide],
    enabled: Iterable[Effect] = ALL_EFFECTS,
    validator: RenderValidator = structural_validator,
    max_rounds: int = 2,
) -> tuple[list[AugmentedSlide], list[RenderIssue], int]:
    """Re-gate flagged slides until the validator is satisfied or rounds run out.

    Returns the deck, the remaining issues, and the number of repair rounds used.
    """
    enabled = frozenset(enabled)
    deck = list(deck)
    issues = validator(deck)
    rounds = 0
    while issues and rounds < max_rounds:
        flagged = {i.slide_index for i in issues}
        deck = [
            replace(item, decision=gate_effects(item.source, enabled)) if item.source.index in flagged else item
            for item in deck
        ]
        rounds += 1
        issues = validator(deck)
    return deck, issues, rounds
