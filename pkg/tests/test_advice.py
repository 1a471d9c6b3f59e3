from deckscore.advice import GENERIC_QUESTIONS, GENERIC_TIPS, rehearsal_advice
from deckscore.artifact import score_artifact
from deckscore.deck import RequirementProfile, SourceAlignment, load_package, make_package, runs_or_default
from deckscore.delivery import score_delivery


def advise(pkg, minutes=1.0, budgets=None):
    al = [SourceAlignment(k, "") for k in range(1, pkg.m + 1)]
    art = score_artifact(pkg, runs_or_default(pkg), al)
    dlv = score_delivery(pkg, RequirementProfile(minutes), art.P, art.F_t, art.F_v)
    return rehearsal_advice(pkg, art, dlv, budgets)


def test_overtime_and_redundant_slide():
    # 188 words read at 150 wpm is about 75 s, mostly repeating the slide
    script = " ".join(["tree ranking fusion"] * 62 + ["tree ranking"])
    pkg = make_package([{"title": "Fusion", "text_blocks": ["tree ranking fusion"]}], [script])
    (adv,) = advise(pkg, budgets=[45.0])
    assert "overtime" in adv.findings and "redundant" in adv.findings
    assert any("75s" in t and "45s" in t for t in adv.tips)
    assert any("repeats" in t for t in adv.tips)
    assert 3 <= len(adv.tips) <= 6 and len(adv.questions) == 3


def test_perfect_slide_gets_generic_padding():
    pkg = make_package(
        [{"title": "Tree ranking", "text_blocks": ["parent child fusion"], "min_font_size": 24}],
        [
            "Next, tree ranking adds parent and child fusion with depth bias on deeper sections "
            "so overview questions land on broad nodes while detail questions reach specific leaves."
        ],
    )
    (adv,) = advise(pkg, minutes=0.5)
    assert adv.findings == ()
    assert adv.tips == GENERIC_TIPS[:3]
    assert adv.questions == GENERIC_QUESTIONS


def test_small_font_gets_legibility_tip():
    pkg = make_package([{"title": "T", "text_blocks": ["x"], "min_font_size": 10}], ["now talk"])
    (adv,) = advise(pkg)
    assert "legibility" in adv.findings
    assert any("10pt" in t and "12pt" in t for t in adv.tips)


def test_untitled_and_silent_slide():
    pkg = make_package([{"title": "", "text_blocks": ["content"]}], [""])
    (adv,) = advise(pkg)
    assert {"untitled", "no-script"} <= set(adv.findings)


def test_fixture_advice_bounds(deck_json):
    pkg, _ = load_package(deck_json)
    for adv in advise(pkg, minutes=4):
        assert 3 <= len(adv.tips) <= 6
        assert len(adv.questions) == 3
        assert len(set(adv.tips)) == len(adv.tips)
