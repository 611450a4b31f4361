from fractions import Fraction as F

from hypothesis import given, strategies as st

from berkdyn import Series, parse_series
from berkdyn.berkovich import (INFTY, Point, QuadraticMap, gauss, hyperbolic_distance, join, local_degree,
                               map_point, on_segment, preimages, tangent_map)

CENTERS = ["0", "1", "-1", "t", "1 + t", "t^(1/2)", "(0,1)"]
points = st.builds(lambda c, a: Point(parse_series(c), a),
                   st.sampled_from(CENTERS), st.builds(F, st.integers(-4, 6), st.sampled_from([1, 2])))


def test_distances():
    x = Point(Series.zero(), F(1))
    y = Point(parse_series("1"), F(2))
    assert hyperbolic_distance(gauss(), x) == 1
    assert hyperbolic_distance(x, y) == 3
    assert join(x, y) == gauss()


def test_slots_and_toward():
    g = gauss()
    assert g.slot(Point(Series.zero(), F(1))) == 0
    assert g.slot(INFTY) is INFTY
    assert g.toward(0, 2) == Point(Series.zero(), F(2))


def test_gauss_is_fixed_with_identity_reduction():
    phi = QuadraticMap.parse("z + 1 + t/z")
    assert map_point(phi, gauss()) == gauss()
    assert str(tangent_map(phi, gauss())) == "(1,0) + (1,0)*z"
    assert local_degree(phi, gauss()) == 1


def test_square_map_preimages():
    psi = QuadraticMap.parse("z^2")
    x = Point(Series.zero(), F(1))
    assert preimages(psi, x) == [(Point(Series.zero(), F(1, 2)), 2)]
    assert map_point(psi, x) == Point(Series.zero(), F(2))


def test_rigid_evaluation():
    phi = QuadraticMap.parse("z + 1 + t/z")
    assert phi(parse_series("t")) == parse_series("2 + t")


@given(points, points)
def test_join_splits_the_distance(x, y):
    j = join(x, y)
    assert j == join(y, x)
    assert hyperbolic_distance(x, y) == hyperbolic_distance(x, j) + hyperbolic_distance(j, y)
    assert on_segment(j, x, y)


@given(points, points, points)
def test_triangle_inequality(x, y, z):
    assert hyperbolic_distance(x, z) <= hyperbolic_distance(x, y) + hyperbolic_distance(y, z)


@given(points, st.sampled_from(["z + 1 + t/z", "z^2 + t^-1", "t - (1+t^2)/z + t/z^2"]))
def test_preimages_map_back_with_total_degree_two(x, src):
    phi = QuadraticMap.parse(src)
    pre = preimages(phi, x)
    assert sum(m for _, m in pre) == 2
    assert all(map_point(phi, y) == x for y, _ in pre)
