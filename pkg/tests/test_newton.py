import random
from fractions import Fraction as F

from hypothesis import given, strategies as st

from berkdyn import Field, PrecisionExhausted, PolyL, Series, newton_polygon, parse_series, roots
from berkdyn.newton import root_orders


def test_square_root_of_t():
    p = PolyL([parse_series("-t"), Series.zero(), Series.one()])
    found = roots(p, 4)
    assert sorted(str(r) for r, _ in found) == sorted(str(parse_series(s)) for s in ["t^(1/2)", "-t^(1/2)"])
    assert newton_polygon(p).root_orders() == [F(1, 2), F(1, 2)]


def test_double_root_multiplicity():
    # (z - t)^2
    p = PolyL([parse_series("t^2"), parse_series("-2*t"), Series.one()])
    found = roots(p, 6)
    assert sum(m for _, m in found) == 2
    assert all(r == parse_series("t") for r, _ in found)


def test_polygon_slopes():
    # z^3 + t^-1 z + t: orders -1/2, -1/2, 2
    p = PolyL([parse_series("t"), parse_series("t^-1"), Series.zero(), Series.one()])
    assert sorted(newton_polygon(p).root_orders()) == [F(-1, 2), F(-1, 2), F(2)]


def _random_cubic(rng, fld):
    def rs():
        terms = []
        for _ in range(rng.randint(1, 3)):
            e = F(rng.randint(-3, 3)) + F(rng.randint(0, 3), rng.choice([1, 2, 3]))
            terms.append((e, complex(rng.uniform(-2, 2), rng.uniform(-2, 2))))
        return Series.from_terms(terms, field=fld)
    return PolyL([rs(), rs(), rs(), Series.one(fld)], fld)


@given(st.integers(0, 10 ** 6))
def test_random_cubic_certificate(seed):
    # float lifting may give up on tight clusters, but never returns a bad root
    fld = Field("float", prec=8)
    p = _random_cubic(random.Random(seed), fld)
    try:
        found = roots(p, 8)
    except PrecisionExhausted:
        return
    assert sum(m for _, m in found) == 3
    for r, _ in found:
        assert p.eval(r, limit=8).ord() >= 8
    assert sorted(newton_polygon(p).root_orders()) == sorted(root_orders(found))


@given(st.lists(st.builds(F, st.integers(-4, 4), st.sampled_from([1, 2])), min_size=2, max_size=3))
def test_exact_roots_of_products(exps):
    # prod (z - t^e) has the roots t^e exactly
    p = PolyL([Series.one()])
    for e in exps:
        p = p * PolyL([-Series.monomial(1, e), Series.one()])
    found = roots(p, 30)
    assert all(p.eval(r).ord() >= 30 for r, _ in found)
    got = sorted(r.ord() for r, m in found for _ in range(m))
    assert got == sorted(exps)
