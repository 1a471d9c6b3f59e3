"""Hierarchical content tree built from ordered slices with a single monotonic-stack pass."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field

from deckscore.ingest import ContentSlice, SliceType


class TreeValidationError(ValueError):
    pass


@dataclass
class ContentTreeNode:
    id: int
    title: str
    level: int
    node_type: SliceType
    abstract: str = ""
    content: str = ""
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    depth: int = 0


@dataclass
class ContentTree:
    nodes: list[ContentTreeNode]
    roots: list[int]

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, node_id: int) -> ContentTreeNode:
        return self.nodes[node_id]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(n.parent, n.id) for n in self.nodes if n.parent is not None]

    def preorder(self) -> list[int]:
        order: list[int] = []
        stack = list(reversed(self.roots))
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(reversed(self.nodes[nid].children))
        return order

    def to_records(self) -> list[dict]:
        recs: list[dict] = []
        for n in self.nodes:
            recs.append(
                {
                    "record": "node",
                    "id": n.id,
                    "title": n.title,
                    "level": n.level,
                    "type": n.node_type.value,
                    "depth": n.depth,
                    "abstract": n.abstract,
                    "content": n.content,
                }
            )
        recs.extend({"record": "edge", "parent": p, "child": c} for p, c in self.edges)
        return recs

    @classmethod
    def from_records(cls, records: Sequence[dict]) -> ContentTree:
        nodes = [
            ContentTreeNode(
                id=r["id"],
                title=r["title"],
                level=r["level"],
                node_type=SliceType(r["type"]),
                abstract=r.get("abstract", ""),
                content=r.get("content", ""),
            )
            for r in records
            if r.get("record") == "node"
        ]
        nodes.sort(key=lambda n: n.id)
        if [n.id for n in nodes] != list(range(len(nodes))):
            raise TreeValidationError("node ids must be 0..n-1")
        for r in records:
            if r.get("record") == "edge":
                nodes[r["child"]].parent = r["parent"]
                nodes[r["parent"]].children.append(r["child"])
        for n in nodes:
            n.children.sort()
            n.depth = 0 if n.parent is None else nodes[n.parent].depth + 1
        return cls(nodes=nodes, roots=[n.id for n in nodes if n.parent is None])


def link_levels(levels: Sequence[int], *, check: bool = False) -> tuple[list[int | None], list[int]]:
    """Parent of each position and the root list for a level sequence.

    Each item pops every stack entry whose level is at least its own; whatever is
    left on top becomes its parent, and it is pushed. Every item is pushed once and
    popped at most once, so the pass is linear.
    """
    parents: list[int | None] = [None] * len(levels)
    roots: list[int] = []
    stack: list[int] = []
    for i, lvl in enumerate(levels):
        while stack and levels[stack[-1]] >= lvl:
            stack.pop()
        if stack:
            parents[i] = stack[-1]
        else:
            roots.append(i)
        stack.append(i)
        if check:
            assert all(levels[a] < levels[b] for a, b in zip(stack, stack[1:])), "stack not monotone"
    return parents, roots


def node_level(s: ContentSlice) -> int:
    return s.level if s.slice_type is SliceType.HEADING else s.level + 1


def build_tree(slices: Sequence[ContentSlice], *, check: bool = False) -> ContentTree:
    levels = [node_level(s) for s in slices]
    for s, lvl in zip(slices, levels):
        if lvl < 1:
            raise TreeValidationError(f"slice {s.index} has non-positive level {lvl}")
    parents, roots = link_levels(levels, check=check)
    nodes = [
        ContentTreeNode(
            id=i,
            title=s.title,
            level=lvl,
            node_type=s.slice_type,
            abstract=s.abstract,
            content=s.body,
            parent=parents[i],
        )
        for i, (s, lvl) in enumerate(zip(slices, levels))
    ]
    # parents precede children in document order, so one forward sweep fills depth/children
    for n in nodes:
        if n.parent is not None:
            p = nodes[n.parent]
            p.children.append(n.id)
            n.depth = p.depth + 1
    return ContentTree(nodes=nodes, roots=roots)


def outline(tree: ContentTree, max_depth: int = 2) -> str:
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    lines = [
        "  " * tree[i].depth + tree[i].title
        for i in tree.preorder()
        if tree[i].node_type is SliceType.HEADING and tree[i].depth < max_depth
    ]
    return "\n".join(lines)


def dumps_tree(tree: ContentTree) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in tree.to_records())
