import pytest

from permclosure import TreeShape, enumerate_shapes
from permclosure.shapes import (
    LEFT,
    RIGHT,
    branch_points,
    degenerate_shape,
    order_edges,
    outline,
    shapes_for,
    to_dot,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132]
FIG5 = TreeShape((((), ()), ()))  # the root's left child branches again


@pytest.mark.parametrize("leaves", range(2, 8))
def test_counts(leaves):
    assert len(enumerate_shapes(leaves)) == CATALAN[leaves - 1]


def test_too_few_leaves():
    with pytest.raises(ValueError):
        enumerate_shapes(1)


def test_three_leaf_pair():
    assert {str(t) for t in enumerate_shapes(3)} == {"((* *) *)", "(* (* *))"}


def test_fig5_ordering():
    o = order_edges(FIG5)
    assert o.n == 5 and o.m == 2
    assert o.edges == ((), (0,), (0, 0), (0, 1), (1,))


def test_two_leaf_shape():
    (t,) = enumerate_shapes(2)
    o = order_edges(t)
    assert o.n == 3 and o.m == 1


def test_degenerate_shape():
    t = degenerate_shape()
    o = order_edges(t)
    assert (o.n, o.m) == (1, 0)
    assert branch_points(t, o) == []
    assert shapes_for(2) == [t]


def test_fig5_outline():
    out = outline(FIG5, order_edges(FIG5))
    L, R = LEFT, RIGHT
    assert out.segments == (
        ((1, L), (2, L), (3, L)),
        ((3, R), (4, L)),
        ((4, R), (2, R), (5, L)),
        ((5, R), (1, R)),
    )
    assert out.k == (3, 2, 3, 2)


def test_fig5_branch_points():
    bps = branch_points(FIG5, order_edges(FIG5))
    assert [(b.p, b.q, b.r) for b in bps] == [(1, 2, 5), (2, 3, 4)]


def test_leaf_left_of_branch_inverts_order():
    t = TreeShape(((), ((), ())))
    (b1, b2) = branch_points(t, order_edges(t))
    assert b1.q > b1.r and b1.hi == b1.q


@pytest.mark.parametrize("leaves", range(2, 7))
def test_structural_invariants(leaves):
    for t in enumerate_shapes(leaves):
        o = order_edges(t)
        ell = t.ell
        assert o.n == 2 * ell - 3 == t.n_edges
        assert o.m == o.n - (ell - 1)
        bps = branch_points(t, o)
        assert len(bps) == ell - 2
        assert all(b.p < b.q and b.p < b.r for b in bps)
        out = outline(t, o)
        assert sum(out.k) == 2 * o.n
        sides = [s for seg in out.segments for s in seg]
        assert sorted(sides) == sorted((e, d) for e in range(1, o.n + 1) for d in (LEFT, RIGHT))
        assert all(out.d(i, 1) == RIGHT for i in range(2, ell + 1))


def test_dot_lists_every_edge():
    text = to_dot(FIG5)
    assert text.startswith("digraph") and all(f'"e{i}"' in text for i in range(1, 6))
