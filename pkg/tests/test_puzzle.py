from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import classify
from berkdyn.puzzle import (MarkedGrid, Puzzle, chain_distance, check_weak_third_rule, marked_grid,
                            puzzle_distance_table, tableau, yoccoz_test)

FIB = {1, 2, 3, 5, 8, 13, 21, 34}


def fib_choose(n, forced):
    if n in FIB:
        return (forced if forced is not None else F(0)) + F(n, 2)
    return forced


@pytest.fixture(scope="module")
def puzzle():
    phi = QuadraticMap.parse("t - (1+t^2)/z + t/z^2")
    return Puzzle(phi, classify(phi))


@pytest.fixture(scope="module")
def critical(puzzle):
    return marked_grid(puzzle, puzzle.active_critical_point(), 12)


def test_critical_grid_is_periodic(critical):
    assert critical.flags() == ("periodic", 3)
    assert critical.check_rules(critical) == []
    assert check_weak_third_rule(critical, critical) == []


def test_grid_dump_shape(critical):
    rows = critical.dump().splitlines()
    assert rows[-1] == "    0 X.XX.XX.XX.XX"
    assert len(rows) == 25


def test_distance_recursion(puzzle, critical):
    w = puzzle.active_critical_point()
    tab = puzzle_distance_table(puzzle, w, 12)
    orb = puzzle.orbit_of(w, 12)
    for n in range(6):
        for h in range(3, 2 * (12 - n) + 1):
            m = F(h, 2)
            assert puzzle.boundary_distance(orb[n], m) == chain_distance(critical, n, m, tab)


def test_yoccoz_converges(puzzle, critical):
    tab = puzzle_distance_table(puzzle, puzzle.active_critical_point(), 12)
    res = yoccoz_test(critical, tab)
    assert res.verdict == "Converges"
    assert res.partial_sums[-1] == F(15, 8)


def test_yoccoz_diverges_on_child_tree():
    g = tableau(24, fib_choose)
    res = yoccoz_test(g, lambda n, m: 1)
    assert res.verdict == "Diverges"
    assert res.certificate["contribution"] == 1
    assert res.certificate["generations"][1] == [F(3, 2), F(5, 2)]


def test_ma_violation_is_reported():
    g = MarkedGrid({(0, 0): 1, (0, 1): 2}, F(1, 2))
    assert ("Ma", 0, F(1, 2)) in g.check_rules()


@given(st.integers(6, 20), st.sets(st.integers(1, 20), max_size=6))
def test_tableau_respects_rules(budget, jumps):
    def choose(n, forced):
        base = forced if forced is not None else F(0)
        return base + F(n, 2) if n in jumps else forced
    g = tableau(budget, choose)
    assert g.check_rules(g) == []
