import time

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import heading_slices, nest_by_descent

from deckscore.ingest import ContentSlice, SliceType, normalize_source, segment
from deckscore.tree import ContentTree, TreeValidationError, build_tree, link_levels, outline


def test_single_node():
    t = build_tree(heading_slices([1]))
    assert t.roots == [0] and t.edges == []


def test_nested_levels():
    t = build_tree(heading_slices([1, 2, 3, 2, 1]))
    assert [n.parent for n in t.nodes] == [None, 0, 1, 0, None]
    assert t.roots == [0, 4]
    assert t[0].children == [1, 3]
    assert [n.depth for n in t.nodes] == [0, 1, 2, 1, 0]


def test_deeper_first_node_becomes_root():
    t = build_tree(heading_slices([2, 1]))
    assert t.roots == [0, 1] and t.edges == []


def test_empty_input_gives_empty_tree():
    t = build_tree([])
    assert len(t) == 0 and t.roots == []


def test_non_positive_level_rejected():
    with pytest.raises(TreeValidationError):
        build_tree(heading_slices([1, 0]))


def test_non_heading_nests_under_heading():
    slices = [
        ContentSlice(0, SliceType.HEADING, 1, "S", "S"),
        ContentSlice(1, SliceType.TEXT, 1, body="p"),
        ContentSlice(2, SliceType.HEADING, 2, "Sub", "Sub"),
        ContentSlice(3, SliceType.EQUATION, 2, body="x"),
        ContentSlice(4, SliceType.HEADING, 1, "T", "T"),
    ]
    t = build_tree(slices)
    assert [n.parent for n in t.nodes] == [None, 0, 0, 2, None]
    assert [n.level for n in t.nodes] == [1, 2, 2, 3, 1]


def test_text_before_first_heading_is_root():
    slices = [ContentSlice(0, SliceType.TEXT, 0, body="pre"), ContentSlice(1, SliceType.HEADING, 1, "A", "A")]
    assert build_tree(slices).roots == [0, 1]


@given(st.lists(st.integers(1, 6), max_size=40))
def test_matches_descent_oracle_and_invariants(levels):
    t = build_tree(heading_slices(levels), check=True)
    parents, roots = nest_by_descent(levels)
    assert [n.parent for n in t.nodes] == parents
    assert t.roots == roots
    assert len(t.edges) == len(t) - len(t.roots)
    assert t.preorder() == list(range(len(t)))
    for n in t.nodes:
        if n.parent is not None:
            assert t[n.parent].level < n.level
            assert n.depth == t[n.parent].depth + 1
        else:
            assert n.depth == 0
        assert n.children == sorted(n.children)


def test_records_round_trip():
    t = build_tree(heading_slices([1, 2, 3, 2, 1]))
    back = ContentTree.from_records(t.to_records())
    assert [(n.id, n.parent, n.children, n.depth, n.title) for n in back.nodes] == [
        (n.id, n.parent, n.children, n.depth, n.title) for n in t.nodes
    ]


def test_linear_time():
    # a zig-zag sequence forces many pops; time per node should stay flat
    def run(m):
        levels = [1 + (i % 7) if (i // 7) % 2 == 0 else 7 - (i % 7) for i in range(m)]
        start = time.perf_counter()
        link_levels(levels)
        return time.perf_counter() - start

    run(1000)
    small = min(run(20_000) for _ in range(3))
    large = min(run(200_000) for _ in range(3))
    assert large / small < 20  # 10x input; quadratic would be ~100x


def test_outline_single_root():
    assert outline(build_tree(heading_slices([1], ["Intro"])), 1) == "Intro"


def test_outline_depth_filter():
    t = build_tree(heading_slices([1, 2, 2]))
    assert outline(t, 1) == "h0"


def test_outline_matches_filtered_preorder(paper_md):
    t = build_tree(segment(normalize_source(paper_md)))
    got = outline(t, 2).splitlines()
    expect = ["  " * t[i].depth + t[i].title for i in t.preorder()
              if t[i].node_type is SliceType.HEADING and t[i].depth <= 1]
    assert got == expect
    assert got[:3] == ["Introduction", "  Motivation", "  Contributions"]


def test_outline_rejects_zero_depth():
    with pytest.raises(ValueError):
        outline(build_tree(heading_slices([1])), 0)
