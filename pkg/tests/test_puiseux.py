from fractions import Fraction as F

from hypothesis import given, strategies as st

from berkdyn import EXACT, Field, GaussQ, Series, format_series, parse_series

coeff = st.builds(GaussQ, st.integers(-4, 4), st.integers(-4, 4))
expo = st.builds(F, st.integers(-6, 6), st.sampled_from([1, 2, 3]))
series = st.lists(st.tuples(expo, coeff), min_size=1, max_size=4).map(
    lambda ts: Series.from_terms([(e, c) for e, c in ts]))
nonzero = series.filter(lambda s: not s.is_zero())


def test_t_times_inverse_is_one():
    t = Series.t()
    assert t * t.inverse() == Series.one()


def test_ord_and_lead():
    a = parse_series("t^(-1/2) + 3*t")
    assert a.ord() == F(-1, 2)
    assert a.lead() == GaussQ(1)


def test_gaussian_rationals():
    assert GaussQ(1, 2) * GaussQ(0, 1) == GaussQ(-2, 1)
    assert GaussQ(F(1, 2)) + GaussQ(F(1, 2)) == GaussQ(1)


def test_inverse_expansion():
    # 1/(1+t) = 1 - t + t^2 - ...
    s = parse_series("1 + t").inverse(4)
    assert [s.coeff(k) for k in range(4)] == [GaussQ(1), GaussQ(-1), GaussQ(1), GaussQ(-1)]


def test_square_root_series():
    r = parse_series("1 + t").pow_rational(F(1, 2), 6)
    assert (r * r).agrees(parse_series("1 + t"), 6)


def test_float_backend():
    fl = Field("float")
    x = parse_series("1 + t", fl)
    assert (x * x).coeff(1) == fl.scalar(2)
    assert fl != EXACT


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@given(nonzero, nonzero)
def test_valuation_is_additive(a, b):
    assert (a * b).ord() == a.ord() + b.ord()


@given(nonzero)
def test_inverse_agrees_with_one(a):
    inv = a.inverse(6)
    assert (a * inv).agrees(Series.one(), 6)


@given(series)
def test_format_parse_roundtrip(a):
    assert parse_series(format_series(a)) == a
