import json

from click.testing import CliRunner

from berkdyn.cli import main

A0 = "t - (1+t^2)/z + t/z^2"


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_classify_phi1_names_gauss_point(tmp_path):
    r = run("--out", str(tmp_path), "classify", "z + 1 + t/z")
    assert r.exit_code == 0, r.output
    assert "case 2" in r.output and "Gauss point" in r.output
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["case"] == "IndifferentOrbit"
    assert data["schema"] == "berkdyn-report/1"


def test_classify_simple():
    r = run("classify", "z^2")
    assert r.exit_code == 0 and "Simple" in r.output


def test_classify_leading_minus_prints_tangent():
    r = run("classify", "-t - (1+t^2)/z + t/z^2")
    assert r.exit_code == 0, r.output
    assert "case 3" in r.output and "tangent map" in r.output


def test_parse_error_has_position():
    r = run("classify", "z + 1 + t/")
    assert r.exit_code != 0 and "position" in r.output


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run("--out", str(a), "classify", A0)
    run("--out", str(b), "classify", A0)
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_rationals_are_strings(tmp_path):
    run("--out", str(tmp_path), "conjugacy", A0, "--level", "1")
    text = (tmp_path / "conjugacy.json").read_text()
    assert '"1/2"' in text
    assert "0.5" not in text


def test_lamination_outputs(tmp_path):
    r = run("--out", str(tmp_path), "lamination", "1", "3", "--center", "--level", "3")
    assert r.exit_code == 0, r.output
    assert (tmp_path / "lamination.svg").read_text().startswith("<svg")
    assert "1/7 2/7 4/7" in (tmp_path / "classes.txt").read_text()


def test_level_zero_dot_is_a_star(tmp_path):
    run("--out", str(tmp_path), "lamination", "1", "3", "--center", "--level", "0")
    assert (tmp_path / "tree.dot").read_text().count("--") == 3


def test_theta_outside_interval_is_usage_error():
    r = run("lamination", "1", "2", "--theta", "1/5")
    assert r.exit_code == 2


def test_conjugacy_tower():
    r = run("conjugacy", A0, "--level", "3")
    assert r.exit_code == 0, r.output
    assert "all checks passed" in r.output and "]5/12, 7/12[" in r.output


def test_conjugacy_level_zero():
    r = run("conjugacy", A0, "--level", "0")
    assert r.exit_code == 0 and "level 0" in r.output


def test_conjugacy_refuses_case_one():
    r = run("conjugacy", "z^2 + t^-1")
    assert r.exit_code == 1 and "no repelling periodic orbit" in r.output


def test_grid_dump():
    r = run("grid", A0)
    assert r.exit_code == 0, r.output
    assert "yoccoz: Converges" in r.output
