import networkx as nx
import pytest

from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import classify
from berkdyn.juliatree import JuliaTower, conjugacy_search, postcritical_subtree

A0 = "t - (1+t^2)/z + t/z^2"
PHI1 = "-t - (1+t^2)/z + t/z^2"


def _tower(src, L=3):
    phi = QuadraticMap.parse(src)
    return JuliaTower(phi, classify(phi), L)


@pytest.fixture(scope="module")
def jt():
    return _tower(A0)


@pytest.fixture(scope="module")
def search(jt):
    return conjugacy_search(jt, 1, 3)


def test_vertex_counts(jt):
    counts = [jt[lv].counts() for lv in range(4)]
    assert [(c["GO(theta0)"], c["GO(O)"]) for c in counts] == [(1, 2), (2, 3), (4, 5), (7, 8)]


def test_levels_are_trees(jt):
    for lv in range(4):
        assert nx.is_tree(jt[lv].graph)


def test_critical_values_form_the_stated_path(jt):
    for lv in range(3):
        assert set(jt.critical_values(lv)) == set(jt.stated_interval(lv))


def test_w_at_level_three(jt):
    assert repr(jt[3].w) == "x(0, 2)"


def test_postcritical_subtree(jt):
    g, psi = jt[3].graph, jt.psi(3)
    keep = postcritical_subtree(g, psi, jt[3].w, jt.orbit[0])
    assert nx.is_connected(g.subgraph(keep))
    assert all(psi[x] in keep for x in keep)


def test_search_cells(search):
    assert [str(c) for c in search.intervals[3]] == ["{5/12}[minus]", "]5/12, 7/12[", "{7/12}[plus]"]
    assert search.flavor == "plus/minus limit"


def test_cells_are_nested(search):
    for lv in range(1, 4):
        for c in search.intervals[lv]:
            assert any(b.lo <= c.lo and c.hi <= b.hi for b in search.intervals[lv - 1])


def test_all_checks_pass(search):
    assert all(all(v.values()) for v in search.checks.values())
    assert "critical value" in search.checks[0]


def test_isomorphisms_extend(search):
    sizes = [len(h) for h in search.isomorphisms]
    assert sizes == [3, 5, 9, 15]


def test_level_zero_only(jt):
    rep = conjugacy_search(jt, 1, 0)
    assert len(rep.isomorphisms) == 1


def test_one_repelling_tower():
    t = _tower(PHI1)
    assert t[3].graph.number_of_nodes() == 17
    rep = conjugacy_search(t, 1, 3)
    assert all(all(v.values()) for v in rep.checks.values())


def test_refuses_without_repelling_orbit():
    phi = QuadraticMap.parse("z^2 + t^-1")
    with pytest.raises(ValueError):
        JuliaTower(phi, classify(phi), 2)
