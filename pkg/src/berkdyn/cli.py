"""Command-line front end."""

import json
import os
from dataclasses import dataclass
from fractions import Fraction

import click

from .berkovich import QuadraticMap
from .classifier import classify, verify_residue_formula
from .errors import BerkdynError
from .lamination import FLAVORS, build_lamination, center_lamination, characteristic_interval, fmt
from .lamtree import LevelTree
from .puiseux import Field

SCHEMA = "berkdyn-report/1"
CASE_NUMBER = {"AttractingShift": 1, "IndifferentOrbit": 2, "OneRepelling": 3, "TwoRepelling": 4}
# map text may start with a minus sign
MAP_ARGS = {"ignore_unknown_options": True}


@dataclass
class SessionConfig:
    backend: str = "exact"
    prec: Fraction = Fraction(24)
    depth: int = 32
    horizon: int = 64
    out: str = None

    def __post_init__(self):
        if self.prec <= 0 or self.depth <= 0 or self.horizon <= 0:
            raise click.BadParameter("precision, depth and horizon must be positive")

    def field(self):
        return Field(self.backend, prec=self.prec)


def _s(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, dict):
        return {str(k): _s(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_s(v) for v in x]
    return str(x)


def _write(cfg, name, text):
    if cfg.out is None:
        return None
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")
    return path


def _dump_json(data):
    return json.dumps(data, indent=2, sort_keys=True)


def _parse_map(text, cfg):
    try:
        return QuadraticMap.parse(text, cfg.field())
    except BerkdynError as e:
        raise click.ClickException(f"cannot parse map: {e}")


def _classify(phi, cfg):
    try:
        return classify(phi, depth_bound=cfg.depth, horizon=cfg.horizon)
    except BerkdynError as e:
        raise click.ClickException(f"{type(e).__name__}: {e}")


def report_dict(phi, rep):
    """JSON-ready form of a classification report."""
    doms = []
    for d in rep.rivera:
        ok, wit = verify_residue_formula(phi, d, rep.fixed_points)
        doms.append({
            "kind": d.kind, "center": d.center, "orbit": d.orbit, "direction": d.direction,
            "julia": None if d.julia is None else {"status": d.julia.status, "exact": d.julia.exact,
                                                   "witness": d.julia.witness},
            "residue_formula": {"ok": ok, "N": wit["N"], "rhs": wit["rhs"]},
        })
    model = None
    if rep.model is not None:
        model = {k: v for k, v in rep.model.items() if k != "handle"}
    return _s({
        "schema": SCHEMA,
        "map": repr(phi),
        "case": rep.case,
        "exact": rep.exact,
        "bounds": rep.bounds,
        "fixed_points": [{"point": fp.point, "multiplicity": fp.multiplicity, "kind": fp.kind,
                          "multiplier": fp.multiplier} for fp in rep.fixed_points],
        "critical_points": [{"point": c, "multiplicity": m} for c, m in rep.critical_points],
        "period": rep.period,
        "orbit": rep.orbit,
        "center": rep.center,
        "skeleton": rep.skeleton,
        "tangent": rep.tangent,
        "period2": rep.period2,
        "orbit2": rep.orbit2,
        "tangent2": rep.tangent2,
        "simple_point": rep.simple_point,
        "rivera": doms,
        "model": model,
        "notes": rep.notes,
    })


def summary_text(rep):
    lines = [f"case: {rep.case}" + (f" (case {CASE_NUMBER[rep.case]})" if rep.case in CASE_NUMBER else "")]
    if rep.case == "Simple":
        lines.append(f"simple point: {rep.simple_point}")
    if rep.case == "AttractingShift" and rep.model is not None:
        lines.append(f"Julia set: Cantor set, shift model checks {_s(rep.model.get('checks'))}")
    if rep.period is not None:
        lines.append(f"period q = {rep.period}, orbit {rep.orbit}, center {rep.center}")
    if rep.case == "IndifferentOrbit" and str(rep.center) == "x(0, 0)":
        lines.append("the Gauss point x(0, 0) lies in the Julia set (indifferent)")
    if rep.tangent is not None:
        lines.append(f"tangent map: {rep.tangent}")
    if rep.period2 is not None:
        lines.append(f"second orbit q' = {rep.period2}: {rep.orbit2}, tangent map {rep.tangent2}")
    for d in rep.rivera:
        where = f" in direction {d.direction}" if d.direction is not None else ""
        lines.append(f"Rivera domain: {d.kind} at {d.center}{where}")
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines)


@click.group()
@click.option("--backend", type=click.Choice(["exact", "float"]), default="exact", show_default=True)
@click.option("--prec", default="24", show_default=True, help="relative precision of series")
@click.option("--depth", default=32, show_default=True, help="depth bound of the searches")
@click.option("--horizon", default=64, show_default=True, help="orbit horizon")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="output directory")
@click.pass_context
def main(ctx, backend, prec, depth, horizon, out):
    """Dynamics of quadratic rational maps over Puiseux series."""
    try:
        p = Fraction(prec)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational: {prec}", param_hint="--prec")
    ctx.obj = SessionConfig(backend, p, depth, horizon, out)


@main.command("classify", context_settings=MAP_ARGS)
@click.argument("map_text")
@click.pass_obj
def cmd_classify(cfg, map_text):
    """Classify MAP_TEXT, e.g. 'z + 1 + t/z'."""
    phi = _parse_map(map_text, cfg)
    rep = _classify(phi, cfg)
    _write(cfg, "report.json", _dump_json(report_dict(phi, rep)))
    text = summary_text(rep)
    _write(cfg, "summary.txt", text)
    click.echo(text)


def _fraction(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational: {s}", param_hint="--theta")


@main.command("lamination")
@click.argument("p", type=int)
@click.argument("q", type=int)
@click.option("--theta", default=None, help="angle in the characteristic interval, e.g. 5/12")
@click.option("--center", is_flag=True, help="use the center lamination")
@click.option("--flavor", type=click.Choice(FLAVORS), default="plus", show_default=True)
@click.option("--level", default=3, show_default=True)
@click.pass_obj
def cmd_lamination(cfg, p, q, theta, center, flavor, level):
    """Level lamination of rotation number P/Q with its disk picture and tree."""
    try:
        lo, hi = characteristic_interval(p, q)
    except ValueError as e:
        raise click.UsageError(str(e))
    if center == (theta is not None):
        raise click.UsageError("give exactly one of --theta and --center")
    try:
        if center:
            lam = center_lamination(p, q, level)
        else:
            lam = build_lamination(p, q, _fraction(theta), flavor, level)
    except ValueError as e:
        raise click.UsageError(f"{e}; the closed interval is [{fmt(lo)}, {fmt(hi)}]")
    tree = LevelTree(lam)
    dump = lam.dump() or "(no nontrivial classes)"
    _write(cfg, "classes.txt", dump)
    _write(cfg, "lamination.svg", tree.geo.svg())
    _write(cfg, "tree.dot", tree.to_dot())
    g, y, e = tree.counts()
    click.echo(dump)
    click.echo(f"tree: {g} Gamma-vertices, {y} Y-vertices, {e} edges")


@main.command("conjugacy", context_settings=MAP_ARGS)
@click.argument("map_text")
@click.option("--level", "L", default=3, show_default=True, help="top level of the tower")
@click.option("--p", "p", default=1, show_default=True, help="numerator of the rotation number")
@click.pass_obj
def cmd_conjugacy(cfg, map_text, L, p):
    """Tower of isomorphisms between Julia trees and lamination trees."""
    from .juliatree import JuliaTower, conjugacy_search
    from .errors import NoConjugacy

    phi = _parse_map(map_text, cfg)
    rep = _classify(phi, cfg)
    if rep.case not in ("OneRepelling", "TwoRepelling"):
        raise click.ClickException(
            f"case {rep.case}: no repelling periodic orbit in the hyperbolic space "
            "bounds a Rivera domain, so there is no Julia tree to compare")
    try:
        jt = JuliaTower(phi, rep, L)
        res = conjugacy_search(jt, p, L)
    except NoConjugacy as e:
        raise click.ClickException(f"no conjugacy: {e}")
    except BerkdynError as e:
        raise click.ClickException(f"{type(e).__name__}: {e}")
    data = {
        "schema": SCHEMA,
        "map": repr(phi),
        "rotation": f"{p}/{jt.q}",
        "L": L,
        "intervals": [[str(c) for c in cells] for cells in res.intervals],
        "cell": str(res.cell),
        "flavor": res.flavor,
        "checks": res.checks,
        "isomorphisms": [
            sorted([repr(a), res.trees[lv].label(v)] for a, v in h.items())
            for lv, h in enumerate(res.isomorphisms)],
    }
    _write(cfg, "conjugacy.json", _dump_json(_s(data)))
    for lv in range(L + 1):
        _write(cfg, f"julia{lv}.dot", jt[lv].to_dot(f"A{lv}"))
        _write(cfg, f"tree{lv}.dot", res.trees[lv].to_dot(f"T{lv}"))
    click.echo(res.summary())
    ok = all(all(v for v in c.values()) for c in res.checks.values())
    click.echo("all checks passed" if ok else f"checks: {res.checks}")


@main.command("grid", context_settings=MAP_ARGS)
@click.argument("map_text")
@click.option("--level", "depth", default=12, show_default=True, help="grid depth")
@click.pass_obj
def cmd_grid(cfg, map_text, depth):
    """Marked grid of the active critical point and the Yoccoz test."""
    from .puzzle import Puzzle, marked_grid, puzzle_distance_table, yoccoz_test

    phi = _parse_map(map_text, cfg)
    rep = _classify(phi, cfg)
    if rep.case not in ("OneRepelling", "TwoRepelling"):
        raise click.ClickException(f"case {rep.case}: puzzles need a repelling boundary orbit")
    try:
        P = Puzzle(phi, rep)
        w = P.active_critical_point()
        g = marked_grid(P, w, depth)
        res = yoccoz_test(g, puzzle_distance_table(P, w, depth))
    except BerkdynError as e:
        raise click.ClickException(f"{type(e).__name__}: {e}")
    text = "\n".join([f"active critical point: {w}", g.dump(), f"flags: {_s(g.flags())}", f"yoccoz: {res}"])
    _write(cfg, "grid.txt", text)
    click.echo(text)


if __name__ == "__main__":
    main()
