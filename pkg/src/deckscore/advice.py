"""Rule-table rehearsal tips and likely audience questions per slide."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from deckscore.artifact import MAX_WORDS, MIN_FONT_PT, ArtifactScorecard
from deckscore.deck import DeckPackage
from deckscore.delivery import DeliveryScorecard, count_markers

MIN_TIPS, MAX_TIPS, N_QUESTIONS = 3, 6, 3

GENERIC_TIPS = (
    "Open with the one-sentence takeaway before walking through details.",
    "Pause briefly after the key point so the audience can absorb it.",
    "Point at the element you are discussing instead of reading it aloud.",
    "Close the slide with a bridge sentence that sets up the next one.",
)

GENERIC_QUESTIONS = (
    "What is the single most important takeaway from this slide?",
    "Which assumption here matters most, and what happens if it fails?",
    "How does this connect to the results shown later?",
)


@dataclass(frozen=True)
class SlideAdvice:
    index: int
    tips: tuple[str, ...]
    questions: tuple[str, ...]
    findings: tuple[str, ...]


def _slide_findings(k: int, pkg: DeckPackage, art: ArtifactScorecard, dlv: DeliveryScorecard, budget: float):
    slide, script = pkg.slides[k], pkg.scripts[k]
    est = dlv.durations[k] if dlv.durations else script.estimated_duration
    sim = dlv.sims[k] if dlv.sims else 0.0
    tips: list[str] = []
    questions: list[str] = []
    findings: list[str] = []

    if est > budget:
        findings.append("overtime")
        tips.append(
            f"Narration runs about {est:.0f}s against a {budget:.0f}s budget; cut secondary details "
            f"to fit roughly {budget:.0f}s."
        )
        tips.append("Lead with the conclusion so the slide still lands if you have to stop early.")
    if sim > dlv.weights.u:
        findings.append("redundant")
        tips.append("The script repeats most of the on-slide text; explain the why instead of reading bullets.")
    elif script.text.strip() and sim < dlv.weights.l:
        findings.append("drifting")
        tips.append("The script barely touches the slide content; tie each spoken point to a visible item.")
    penalty = art.penalties[k] if art.penalties else 0
    if penalty > 0:
        findings.append("legibility")
        if slide.min_font_size is not None and slide.min_font_size < MIN_FONT_PT:
            tips.append(f"Raise the smallest font from {slide.min_font_size:g}pt to at least {MIN_FONT_PT}pt.")
        if slide.word_count > MAX_WORDS:
            tips.append(
                f"Trim on-slide text from {slide.word_count} to at most {MAX_WORDS} words; move detail to the script."
            )
    if not slide.title.strip():
        findings.append("untitled")
        tips.append("Add a title line that states the slide's claim.")
    if not script.text.strip():
        findings.append("no-script")
        tips.append("Write speaker notes for this slide before rehearsing.")
    elif count_markers(script.text, dlv.weights.markers) == 0:
        findings.append("no-transition")
        tips.append("Add an explicit transition phrase so the audience hears the change of topic.")

    if slide.has_kind("table") or slide.has_kind("chart"):
        questions.append("Are the differences in these numbers statistically significant?")
        questions.append("Why were these particular baselines chosen for comparison?")
    if slide.has_kind("figure") or slide.has_kind("image"):
        questions.append("What should we look at first in this figure?")
    if "overtime" in findings:
        questions.append("Can you summarize the main point of this slide in one sentence?")
    if "redundant" in findings or "drifting" in findings:
        questions.append("How does what you said relate to what is written on the slide?")
    return tips, questions, findings


def _fill(items: list[str], pool: Sequence[str], low: int, high: int) -> tuple[str, ...]:
    out: list[str] = []
    for it in items:
        if it not in out:
            out.append(it)
    for it in pool:
        if len(out) >= low:
            break
        if it not in out:
            out.append(it)
    return tuple(out[:high])


def rehearsal_advice(
    pkg: DeckPackage,
    artifact: ArtifactScorecard,
    delivery: DeliveryScorecard,
    budgets: Sequence[float] | None = None,
) -> list[SlideAdvice]:
    """3 to 6 tips and exactly 3 questions per slide.

    ``budgets`` gives per-slide time budgets in seconds; by default every slide gets
    the deck's average seconds per slide.
    """
    out = []
    for k in range(pkg.m):
        budget = budgets[k] if budgets is not None else delivery.seconds_per_slide
        tips, questions, findings = _slide_findings(k, pkg, artifact, delivery, budget)
        out.append(
            SlideAdvice(
                index=k + 1,
                tips=_fill(tips, GENERIC_TIPS, MIN_TIPS, MAX_TIPS),
                questions=_fill(questions, GENERIC_QUESTIONS, N_QUESTIONS, N_QUESTIONS),
                findings=tuple(findings),
            )
        )
    return out
