import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from berkdyn.errors import AxiomViolation, NoMatch
from berkdyn.lamination import (FLAVORS, LevelLamination, build_lamination, center_lamination,
                                characteristic_interval, crossing_pair, itinerary, linked, m2,
                                match_lamination, rotation_orbit, support)

PQ = [(1, 2), (1, 3), (2, 5)]


def test_rotation_orbits():
    assert rotation_orbit(1, 2) == [F(1, 3), F(2, 3)]
    assert rotation_orbit(1, 3) == [F(1, 7), F(2, 7), F(4, 7)]
    assert rotation_orbit(2, 3) == [F(3, 7), F(5, 7), F(6, 7)]
    assert sorted(rotation_orbit(2, 5)) == [F(k, 31) for k in (5, 9, 10, 18, 20)]


def test_characteristic_intervals():
    assert characteristic_interval(1, 2) == (F(1, 3), F(2, 3))
    assert characteristic_interval(1, 3) == (F(1, 7), F(2, 7))
    assert characteristic_interval(2, 5) == (F(9, 31), F(10, 31))


def test_bad_rotation_number():
    with pytest.raises(ValueError):
        rotation_orbit(2, 4)


def test_itinerary():
    assert itinerary(F(5, 12), "+", F(1, 3), 4) == "1111"


def test_low_levels():
    assert build_lamination(1, 2, F(1, 2), "plus", 0).nontrivial() == [(F(1, 3), F(2, 3))]
    lam = build_lamination(1, 2, F(1, 2), "plus", 1)
    assert sorted(lam.nontrivial()) == [(F(1, 6), F(5, 6)), (F(1, 3), F(2, 3))]


def test_theta_outside_interval():
    with pytest.raises(ValueError):
        build_lamination(1, 2, F(1, 5), "plus", 2)


def test_endpoint_flavors():
    lo, hi = characteristic_interval(1, 3)
    with pytest.raises(ValueError):
        build_lamination(1, 3, lo, "plus", 2)
    with pytest.raises(ValueError):
        build_lamination(1, 3, hi, "minus", 2)


@pytest.mark.parametrize("p,q", PQ)
def test_endpoint_limits_agree(p, q):
    lo, hi = characteristic_interval(p, q)
    for level in range(5):
        a = build_lamination(p, q, hi, "plus", level)
        assert a == build_lamination(p, q, lo, "minus", level)
        assert a == center_lamination(p, q, level)


def test_axiom_violation_detected():
    lam = build_lamination(1, 2, F(1, 2), "plus", 1)
    bad = LevelLamination(1, 2, 1, lam.support, [(F(1, 6), F(1, 3)), (F(2, 3), F(5, 6))], "broken")
    assert bad.violations()
    with pytest.raises(AxiomViolation):
        bad.verify()


def test_match_center():
    m = match_lamination(center_lamination(1, 2, 4))
    assert m.flavor == "plus"
    assert m.theta == (F(7, 12), F(2, 3))
    m = match_lamination(center_lamination(1, 3, 4))
    assert m.theta == (F(15, 56), F(2, 7))


def test_match_join():
    m = match_lamination(build_lamination(1, 3, F(9, 56), "join", 4))
    assert m.flavor == "join"
    assert m.candidates == [F(9, 56), F(11, 56), F(15, 56)]


def test_match_rejects_linked():
    lam = build_lamination(1, 2, F(1, 2), "plus", 1)
    bad = LevelLamination(1, 2, 1, lam.support, [(F(1, 6), F(1, 3)), (F(1, 4), F(5, 6))]
                          + [(t,) for t in lam.support if t not in (F(1, 6), F(1, 3), F(5, 6))], "linked")
    with pytest.raises(NoMatch):
        match_lamination(bad)


@st.composite
def laminations(draw, max_level=4):
    p, q = draw(st.sampled_from(PQ))
    lo, hi = characteristic_interval(p, q)
    k = draw(st.integers(0, 1000))
    theta = lo + (hi - lo) * F(k, 1000)
    flavor = draw(st.sampled_from(FLAVORS))
    if theta == lo:
        flavor = "minus"
    if theta == hi:
        flavor = "plus"
    level = draw(st.integers(0, max_level))
    return build_lamination(p, q, theta, flavor, level)


@given(laminations())
def test_axioms_hold(lam):
    assert lam.violations() == []
    sizes = {len(c) for c in lam.nontrivial()}
    assert sizes <= {lam.q, 2 * lam.q}


@given(laminations())
def test_levels_are_nested(lam):
    if lam.level == 0:
        return
    lower = lam.restrict(lam.level - 1)
    assert set(lower.support) == set(support(lam.p, lam.q, lam.level - 1))
    assert lower.violations() == []


@given(laminations())
def test_doubling_maps_classes_to_classes(lam):
    for c in lam.nontrivial():
        image = {m2(t) for t in c}
        assert tuple(sorted(image)) in lam.classes


@given(st.integers(0, 10 ** 6))
def test_crossing_sweep_matches_pairwise(seed):
    rng = random.Random(seed)
    pts = rng.sample([F(k, 40) for k in range(40)], 12)
    classes, i = [], 0
    while i < len(pts):
        n = rng.randint(1, 3)
        classes.append(tuple(sorted(pts[i:i + n])))
        i += n
    pairwise = any(linked(a, b) for j, a in enumerate(classes) for b in classes[j + 1:])
    assert (crossing_pair(classes) is not None) == pairwise
