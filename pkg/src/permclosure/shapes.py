"""Binary tree-shapes with a root edge, and the tables the L_tau grammar is built from.

A shape is stored as the nested-tuple binary tree hanging below the root
edge: ``()`` is a leaf and ``(left, right)`` a branch point.  An edge is
named by the path (a tuple of 0/1 steps) to the vertex it leads into, so
the root edge is ``()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True, order=True)
class TreeShape:
    tree: tuple

    @property
    def leaves(self) -> int:
        return _count_leaves(self.tree)

    @property
    def ell(self) -> int:
        """Number of word parts this shape splits a word into."""
        return self.leaves + 1

    @property
    def n_edges(self) -> int:
        return 2 * self.leaves - 1

    def is_degenerate(self) -> bool:
        return self.tree == ()

    def subtree(self, path: tuple) -> tuple:
        node = self.tree
        for step in path:
            node = node[step]
        return node

    def __str__(self):
        return _render(self.tree)


def _count_leaves(node) -> int:
    if node == ():
        return 1
    return _count_leaves(node[0]) + _count_leaves(node[1])


def _render(node) -> str:
    if node == ():
        return "*"
    return f"({_render(node[0])} {_render(node[1])})"


@lru_cache(maxsize=None)
def _trees(leaves: int) -> tuple:
    if leaves == 1:
        return ((),)
    out = []
    for left in range(1, leaves):
        for lt in _trees(left):
            for rt in _trees(leaves - left):
                out.append((lt, rt))
    return tuple(out)


def enumerate_shapes(leaves: int) -> list:
    """Every binary shape with the given number of leaves (Catalan(leaves-1) of them)."""
    if leaves < 2:
        raise ValueError("a tree-shape needs at least 2 leaves")
    return [TreeShape(t) for t in _trees(leaves)]


def degenerate_shape() -> TreeShape:
    """The single root-to-leaf edge used for two-part splits."""
    return TreeShape(())


def shapes_for(ell: int) -> list:
    """Shapes for splitting words into ``ell`` >= 2 parts."""
    if ell < 2:
        raise ValueError("shapes exist only for ell >= 2")
    if ell == 2:
        return [degenerate_shape()]
    return enumerate_shapes(ell - 1)


@dataclass(frozen=True)
class EdgeOrdering:
    edges: tuple  # edges[i-1] is e_i
    m: int  # e_1..e_m are the non-leaf edges

    @property
    def n(self) -> int:
        return len(self.edges)

    def index(self, edge: tuple) -> int:
        return self.edges.index(edge) + 1


def order_edges(t: TreeShape) -> EdgeOrdering:
    """Non-leaf edges in pre-order, then leaf edges left to right."""
    inner, leaves = [], []

    def walk(node, path):
        if node == ():
            leaves.append(path)
            return
        inner.append(path)
        walk(node[0], path + (0,))
        walk(node[1], path + (1,))

    walk(t.tree, ())
    return EdgeOrdering(tuple(inner + leaves), len(inner))


@dataclass(frozen=True)
class BranchPoint:
    index: int
    p: int  # edge coming down into the vertex
    q: int  # left child edge
    r: int  # right child edge

    @property
    def hi(self) -> int:
        return max(self.q, self.r)

    @property
    def lo(self) -> int:
        return min(self.q, self.r)


def branch_points(t: TreeShape, o: EdgeOrdering) -> list:
    """Degree-3 vertices in pre-order, numbered from 1."""
    out = []
    for path in o.edges[: o.m]:
        out.append(BranchPoint(len(out) + 1, o.index(path), o.index(path + (0,)), o.index(path + (1,))))
    return out


@dataclass(frozen=True)
class Outline:
    """The boundary walk, cut at the leaves.

    ``segments[i-1][j-1] == (rho_i(j), d_ij)``.
    """

    segments: tuple

    @property
    def k(self) -> tuple:
        return tuple(len(s) for s in self.segments)

    def rho(self, i: int, j: int) -> int:
        return self.segments[i - 1][j - 1][0]

    def d(self, i: int, j: int) -> str:
        return self.segments[i - 1][j - 1][1]

    def __str__(self):
        return " | ".join(" ".join(f"e{e}{side}" for e, side in seg) for seg in self.segments)


def outline(t: TreeShape, o: EdgeOrdering) -> Outline:
    segments = [[]]

    def walk(node, path):
        e = o.index(path)
        segments[-1].append((e, LEFT))
        if node == ():
            segments.append([])
        else:
            walk(node[0], path + (0,))
            walk(node[1], path + (1,))
        segments[-1].append((e, RIGHT))

    walk(t.tree, ())
    return Outline(tuple(tuple(s) for s in segments))


def to_dot(t: TreeShape, name: str = "shape") -> str:
    """Graphviz description with edges labelled e_i."""
    o = order_edges(t)
    lines = [f"digraph {name} {{", "  node [shape=point];", "  root;"]

    def vid(path):
        return "v" + "".join(map(str, path)) if path else "v"

    def walk(node, path, parent):
        lines.append(f'  {parent} -> {vid(path)} [label="e{o.index(path)}"];')
        if node != ():
            walk(node[0], path + (0,), vid(path))
            walk(node[1], path + (1,), vid(path))

    walk(t.tree, (), "root")
    lines.append("}")
    return "\n".join(lines)
