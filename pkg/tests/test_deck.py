import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deckscore.deck import (
    CountMismatchError,
    PackageError,
    SpeakerScript,
    align_to_source,
    dump_package,
    estimate_duration,
    load_package,
    make_package,
    parse_package,
)
from deckscore.ingest import normalize_source, segment
from deckscore.retrieval import RetrievalParams, TreeIndex
from deckscore.tree import build_tree


def minimal(**over):
    data = {
        "requirements": {"audience": "x", "duration_minutes": 1, "focus": [], "style": ""},
        "slides": [{"title": "T", "text_blocks": ["hello"], "min_font_size": 20, "visuals": []}],
        "scripts": [{"text": "hi there"}],
    }
    data.update(over)
    return data


def test_minimal_package():
    pkg, profile = parse_package(minimal())
    assert pkg.m == 1 and profile.duration_minutes == 1
    assert pkg.runs == ()


def test_count_mismatch():
    slide = {"title": "T", "text_blocks": [], "visuals": []}
    with pytest.raises(CountMismatchError):
        parse_package(minimal(slides=[slide] * 3, scripts=[{"text": "a"}] * 2))


def test_schema_error_carries_field_path():
    bad = minimal()
    bad["slides"][0]["min_font_size"] = "big"
    with pytest.raises(PackageError) as exc:
        parse_package(bad)
    assert exc.value.path == "slides[0].min_font_size"


def test_unknown_field_rejected():
    bad = minimal()
    bad["slides"][0]["colour"] = "red"
    with pytest.raises(PackageError):
        parse_package(bad)


def test_font_required_with_text():
    bad = minimal()
    del bad["slides"][0]["min_font_size"]
    with pytest.raises(PackageError) as exc:
        parse_package(bad)
    assert "min_font_size" in exc.value.path


def test_non_positive_duration_rejected():
    bad = minimal()
    bad["requirements"]["duration_minutes"] = 0
    with pytest.raises(PackageError):
        parse_package(bad)


def test_fixture_word_counts(deck_json):
    pkg, profile = load_package(deck_json)
    # counted by hand over title + text blocks, tokens of 2+ characters
    assert [s.word_count for s in pkg.slides] == [14, 11, 16, 11, 8, 4]
    assert pkg.m == 6 and len(pkg.runs) == 5
    assert profile.focus == ("ablation", "baseline")


def test_round_trip(deck_json, tmp_path):
    pkg, profile = load_package(deck_json)
    out = tmp_path / "copy.json"
    out.write_text(dump_package(pkg, profile))
    assert load_package(out) == (pkg, profile)


@given(
    st.lists(
        st.tuples(st.text(max_size=20), st.lists(st.text(max_size=30), max_size=3), st.floats(1, 72)),
        min_size=1,
        max_size=5,
    ),
    st.floats(0.5, 60),
)
def test_round_trip_property(slides, minutes):
    data = {
        "requirements": {"audience": "", "duration_minutes": minutes, "focus": [], "style": ""},
        "slides": [{"title": t, "text_blocks": b, "min_font_size": f, "visuals": []} for t, b, f in slides],
        "scripts": [{"text": t} for t, _, _ in slides],
    }
    pkg, profile = parse_package(data)
    assert parse_package(json.loads(dump_package(pkg, profile))) == (pkg, profile)


@pytest.mark.parametrize("words,seconds", [(150, 60.0), (0, 0.0), (75, 30.0)])
def test_estimate_duration(words, seconds):
    assert estimate_duration(SpeakerScript(1, " ".join(["word"] * words))) == seconds


def _fixture_index(paper_md, **params):
    tree = build_tree(segment(normalize_source(paper_md)))
    return TreeIndex(tree, RetrievalParams(**params))


def test_verbatim_slide_aligns_to_source_node(paper_md):
    idx = _fixture_index(paper_md)
    node = idx.tree[18]
    pkg = make_package([{"title": "", "text_blocks": [node.content]}], [""])
    (al,) = align_to_source(pkg, idx.tree, idx.stats, idx.params)
    assert al.source_node_ids[0] == 18
    assert node.content.split()[0] in al.reference_text


def test_empty_slide_empty_alignment(paper_md):
    idx = _fixture_index(paper_md)
    pkg = make_package([{"title": "", "text_blocks": []}], [""])
    (al,) = align_to_source(pkg, idx.tree, idx.stats, idx.params)
    assert al.empty and al.reference_text == "" and al.source_node_ids == ()


def test_alignment_cardinality_and_determinism(paper_md, deck_json):
    idx = _fixture_index(paper_md)
    pkg, _ = load_package(deck_json)
    first = align_to_source(pkg, idx.tree, idx.stats, idx.params)
    assert [a.index for a in first] == list(range(1, pkg.m + 1))
    assert first == align_to_source(pkg, idx.tree, idx.stats, idx.params)
    assert all(len(a.source_node_ids) <= idx.params.top_k for a in first)


def test_reference_text_truncated(paper_md):
    idx = _fixture_index(paper_md, l_max=5)
    pkg = make_package([{"title": "ranking", "text_blocks": ["bm25 score"]}], ["depth bias"])
    (al,) = align_to_source(pkg, idx.tree, idx.stats, idx.params)
    assert len(al.reference_text.split()) <= 5
