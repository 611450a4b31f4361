from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from berkdyn.errors import NotLiftable
from berkdyn.lamination import FLAVORS, build_lamination, center_lamination, characteristic_interval
from berkdyn.lamtree import (G, Y, LevelTree, Tower, center_tower, fiber_singletons, half_turn,
                             is_isomorphism, lift_isomorphisms, tower_lift)

PQ = [(1, 2), (1, 3), (2, 5), (2, 3)]


def _top(tw):
    return len(tw.trees) - 1


def _kinds_ok(tree):
    g = tree.graph
    return all(g.nodes[a]["kind"] != g.nodes[b]["kind"] for a, b in g.edges)


@pytest.mark.parametrize("p,q", PQ)
def test_level_zero_is_a_star(p, q):
    t = LevelTree(center_lamination(p, q, 0))
    assert t.counts() == (1, q, q)
    assert t.is_tree() and _kinds_ok(t)


def test_center_tree_sizes():
    tw = center_tower(1, 2, 3)
    assert [tw[k].graph.number_of_nodes() for k in range(4)] == [3, 5, 9, 17]


def test_dot_export():
    dot = LevelTree(center_lamination(1, 3, 0)).to_dot()
    assert dot.startswith("graph T {") and dot.count("--") == 3


def test_svg_export():
    svg = LevelTree(center_lamination(1, 3, 3)).geo.svg()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_identity_self_lift():
    hs = tower_lift(center_tower(1, 2, 4))
    assert [len(h) for h in hs] == [3, 5, 9, 17]
    assert all(k == v for h in hs for k, v in h.items())


def test_lift_refuses_bad_base():
    tw = center_tower(1, 2, 1)
    lo, up = tw[0], tw[1]
    inc = tw.include(0)
    m = {v: inc[w] for v, w in tw.doubling(1).items()}
    IT = {inc[w] for w in fiber_singletons(up.graph, tw.doubling(1))}
    h = {inc[a]: inc[a] for a in lo.graph}
    # swapping a Gamma-vertex with a Y-vertex breaks the edges
    a = next(v for v in h if v[0] == G)
    b = next(v for v in h if v[0] == Y)
    h[a], h[b] = h[b], h[a]
    with pytest.raises(NotLiftable):
        lift_isomorphisms(h, up.graph, set(h), m, up.graph, set(h.values()), m, IT, IT)


@st.composite
def towers(draw):
    p, q = draw(st.sampled_from(PQ))
    lo, hi = characteristic_interval(p, q)
    k = draw(st.integers(1, 99))
    theta = lo + (hi - lo) * F(k, 100)
    flavor = draw(st.sampled_from(FLAVORS))
    return Tower.of(build_lamination(p, q, theta, flavor, draw(st.integers(1, 4))))


@given(towers())
def test_trees_are_bipartite_trees(tw):
    for lv in range(_top(tw) + 1):
        assert tw[lv].is_tree()
        assert _kinds_ok(tw[lv])


@given(towers())
def test_projection_inclusion_and_doubling(tw):
    for lv in range(_top(tw)):
        inc, pi = tw.include(lv), tw.project(lv + 1)
        assert all(pi[inc[v]] == v for v in tw[lv].graph)
        assert all(tw[lv + 1].graph.has_edge(inc[a], inc[b]) for a, b in tw[lv].graph.edges)
    for lv in range(2, _top(tw) + 1):
        a, b, c, d = tw.doubling(lv), tw.project(lv), tw.project(lv - 1), tw.doubling(lv - 1)
        assert all(c[a[v]] == d[b[v]] for v in tw[lv].graph)


@given(towers())
def test_branched_involution(tw):
    for lv in range(_top(tw)):
        br = tw.branched(lv)
        g = br.gamma
        up = tw[lv + 1]
        assert all(g[g[v]] == v for v in g)
        m = tw.doubling(lv + 1)
        V = list(up.graph)
        assert all((m[x] == m[y]) == (y in (x, g[x])) for x in V for y in V)
        assert set(br.values) == set(br.stated)
        assert fiber_singletons(up.graph, m) == set(br.stated)
        assert br.fixed == set(up.path(up.v0, up.vinf))


@given(towers())
def test_half_turn_is_an_automorphism(tw):
    t = tw[_top(tw)]
    g = half_turn(t)
    assert is_isomorphism(g, t.graph, t.graph, kinds=True)
