from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import (CASES, classify, critical_points, factor_fibers, fixed_points_with_multipliers,
                                subshift_sigma_q, verify_residue_formula)


def test_square_is_simple():
    rep = classify(QuadraticMap.parse("z^2"))
    assert rep.case == "Simple"
    assert str(rep.simple_point) == "x(0, 0)"


def test_cases_are_exclusive():
    assert len(set(CASES)) == 5
    for src in ["z^2", "z + 1 + t/z", "z^2 + t^-1"]:
        assert classify(QuadraticMap.parse(src)).case in CASES


def test_critical_and_fixed_points_count():
    phi = QuadraticMap.parse("z + 1 + t/z")
    assert sum(m for _, m in critical_points(phi)) == 2
    assert sum(fp.multiplicity for fp in fixed_points_with_multipliers(phi)) == 3


def test_sigma_q_table():
    for q in (1, 2, 3, 5):
        tr = subshift_sigma_q(q)["transitions"]
        assert len(tr) == 2 * q
        assert len(tr[f"X{q - 1}"]) == q + 1
        assert len(tr["Y0"]) == q + 1
    assert len(subshift_sigma_q(3)["symbols"]) == 6


def test_factor_fibers():
    # a word of X's has one lift; a Y after X_{q-1} branches
    assert factor_fibers(2, "XXXX") == 2
    assert factor_fibers(2, "Y") == 2


def test_attracting_shift_model():
    rep = classify(QuadraticMap.parse("z^2 + t^-1"))
    assert rep.case == "AttractingShift"
    assert rep.model["checks"] == {"disjoint": True, "bijective": True, "inside_parent": True}


def test_residue_formula_on_indifferent_ball():
    phi = QuadraticMap.parse("z + 1 + t/z")
    rep = classify(phi)
    for d in rep.rivera:
        ok, wit = verify_residue_formula(phi, d, rep.fixed_points)
        assert ok, wit
