"""Dynamical pieces, marked grids and the convergence test for ends of K(phi).

A piece is stored as its boundary point together with the finitely many
directions at the boundary that it omits.  Every other direction at the
boundary lies in the piece, so membership is a slot lookup.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .berkovich import (
    INFTY,
    Direction,
    Point,
    _same,
    classify_direction,
    hyperbolic_distance,
    map_point,
    preimages,
    tangent_map,
)
from .classifier import _direction_preimages, _rigid_eq
from .errors import AxiomViolation, DepthExceeded

DEFAULT_COLUMNS = 24
DEFAULT_GRID_DEPTH = 12
HALF = Fraction(1, 2)


def _h(level):
    """Level in half units."""
    h = Fraction(level) * 2
    if h.denominator != 1:
        raise ValueError(f"level {level} is not in N0/2")
    return int(h)


def _lv(h):
    return Fraction(h, 2)


@dataclass(eq=False)
class Piece:
    level: Fraction
    boundary: Point
    omitted: tuple = ()       # explicit omitted slots (seed pieces)
    degree: int = 1
    id: int = None
    parent: int = None        # level - 1/2
    parent1: int = None       # level - 1
    image: int = None
    rule: tuple = None        # (tangent map at the boundary, image piece, bad slots)

    def omits(self, s):
        """Is the direction with slot s at the boundary outside the piece?"""
        f = self.boundary.field
        if self.rule is None:
            return any(_same(s, e, f) for e in self.omitted)
        t, target, bad = self.rule
        if any(_same(s, b, f) for b in bad):
            return True
        return target.omits(t(s))

    def contains(self, y):
        if isinstance(y, Point) and y == self.boundary:
            return True
        return not self.omits(self.boundary.slot(y))

    def omitted_count(self):
        """Number of directions at the boundary not in the piece."""
        if self.rule is None:
            return len(self.omitted)
        t, target, bad = self.rule
        n = sum(_preimage_count(t, e) for e in target.omitted_slots())
        return n + sum(1 for b in bad if not target.omits(t(b)))

    def omitted_slots(self):
        """Explicit omitted slots; only available on pieces whose omitted set is rational."""
        if self.rule is None:
            return list(self.omitted)
        t, target, bad = self.rule
        out = list(bad)
        for e in target.omitted_slots():
            for s in _direction_preimages(t, e):
                if not any(_same(s, a, self.boundary.field) for a in out):
                    out.append(s)
        return out

    @property
    def closed_ball(self):
        return self.omitted_count() == 1

    def same(self, other):
        if self.level != other.level or self.boundary != other.boundary:
            return False
        if self.rule is not None or other.rule is not None:
            return (self.rule is not None and other.rule is not None
                    and self.rule[1] is other.rule[1])
        f = self.boundary.field
        return (len(self.omitted) == len(other.omitted)
                and all(any(_same(a, b, f) for b in other.omitted) for a in self.omitted))

    def __repr__(self):
        return f"Piece(#{self.id}, level={self.level}, boundary={self.boundary!r})"


def _preimage_count(t, e):
    """Number of distinct slots mapped to e by the tangent map t."""
    f = t.field
    if e is INFTY:
        p = list(t.den)
    else:
        n = t.num + [f.zero] * (len(t.den) - len(t.num))
        d = t.den + [f.zero] * (len(n) - len(t.den))
        p = [a - e * b for a, b in zip(n, d)]
    while len(p) > 1 and f.is_zero(p[-1]):
        p = p[:-1]
    deg = len(p) - 1
    finite = deg
    if deg == 2 and f.is_zero(p[1] * p[1] - 4 * p[0] * p[2]):
        finite = 1
    return finite + (1 if deg < t.degree else 0)


def _point_key(y):
    if y is INFTY:
        return ("inf",)
    if isinstance(y, Point):
        return ("pt", y)
    return ("rig", y.key())


class Puzzle:
    """Lazily built piece forest of a map with a repelling boundary orbit."""

    def __init__(self, phi, report, prec=None):
        if report.case not in ("OneRepelling", "TwoRepelling"):
            raise ValueError(f"puzzle pieces need a repelling case, got {report.case}")
        self.phi = phi
        self.report = report
        self.prec = prec
        self.field = phi.field
        self.orbit = list(report.orbit)
        self.q = report.period
        self.theta0 = report.center
        self.crit = [c for c, _ in report.critical_points]
        self.pieces = []
        self._levels = {}
        self._children = {}
        self._memo = {}
        self._pre = {}
        self._tan = {}
        self._bad = {}
        self._seed()

    # -- caches

    def _preimages(self, x):
        if x not in self._pre:
            self._pre[x] = preimages(self.phi, x, self.prec)
        return self._pre[x]

    def _tangent(self, x):
        if x not in self._tan:
            self._tan[x] = tangent_map(self.phi, x)
        return self._tan[x]

    def _bad_slots(self, x):
        if x not in self._bad:
            f = self.field
            out = []
            for c in self.crit:
                s = x.slot(c) if not (isinstance(c, Point) and c == x) else None
                if s is None or any(_same(s, b, f) for b in out):
                    continue
                if not classify_direction(self.phi, Direction(x, s), self.prec).good:
                    out.append(s)
            self._bad[x] = out
        return self._bad[x]

    def _intern(self, piece):
        h = _h(piece.level)
        for p in self._levels.setdefault(h, []):
            if p.same(piece):
                return p
        piece.id = len(self.pieces)
        self.pieces.append(piece)
        self._levels[h].append(piece)
        return piece

    # -- seeds

    def _seed(self):
        f = self.field
        th = self.theta0
        for xi in self.orbit:
            self._intern(Piece(Fraction(0), xi, (xi.slot(th),)))
        xi0, xi1 = self.orbit[0], self.orbit[1 % self.q]
        u0, u1 = xi0.slot(th), xi1.slot(th)
        d0 = [s for s in _direction_preimages(self._tangent(xi0), u1) if not _same(s, u0, f)]
        if len(d0) != 1:
            raise AxiomViolation("tangent map at xi_0 does not single out the direction D_0")
        self.d0 = d0[0]
        inside = [y for y, _ in self._preimages(th) if _same(xi0.slot(y), self.d0, f) and y != xi0]
        if len(inside) != 1:
            raise AxiomViolation("theta_0 has no unique preimage in D_0")
        self.theta_half = inside[0]
        # B_0 minus D_0 stays at level 1/2 next to the ball B_1/2 inside D_0;
        # without it the critical points would never be level 1/2 points
        self._intern(Piece(HALF, xi0, (u0, self.d0)))
        self._intern(Piece(HALF, self.theta_half, (self.theta_half.slot(th),)))
        for xi in self.orbit[1:]:
            self._intern(Piece(HALF, xi, (xi.slot(th),)))

    def level(self, level):
        """Pieces of the given level computed so far (all of them after build)."""
        return list(self._levels.get(_h(level), []))

    # -- pullback

    def children(self, piece):
        """Pieces of level + 1 mapped onto ``piece``."""
        if piece.id in self._children:
            return self._children[piece.id]
        out = []
        for chi, mult in self._preimages(piece.boundary):
            rule = (self._tangent(chi), piece, tuple(self._bad_slots(chi)))
            p = Piece(piece.level + 1, chi, degree=mult, image=piece.id, rule=rule)
            out.append(self._intern(p))
        self._children[piece.id] = out
        return out

    def build(self, max_level):
        """All pieces of level <= max_level, level by level."""
        top = _h(max_level)
        for h in range(top - 1):
            for p in self.level(_lv(h)):
                self.children(p)
        for p in self.pieces:
            self.links(p)
        return {_lv(h): self.level(_lv(h)) for h in range(top + 1)}

    def links(self, piece):
        """Fill in the level - 1/2 and level - 1 parents."""
        h = _h(piece.level)
        if h >= 1 and piece.parent is None:
            piece.parent = self.piece_of(piece.boundary, _lv(h - 1)).id
        if h >= 2 and piece.parent1 is None:
            piece.parent1 = self.piece_of(piece.boundary, _lv(h - 2)).id
        return piece

    # -- membership

    def image(self, y):
        if isinstance(y, Point):
            return map_point(self.phi, y)
        return self.phi(y, self.prec)

    def piece_of(self, y, level):
        """The piece of the given level containing y, or None when y is not in L_level."""
        h = _h(level)
        key = (h, _point_key(y))
        if key in self._memo:
            return self._memo[key]
        if h <= 1:
            found = [p for p in self._levels[h] if p.contains(y)]
            res = found[0] if found else None
        else:
            target = self.piece_of(self.image(y), _lv(h - 2))
            res = None
            if target is not None:
                hits = [p for p in self.children(target) if p.contains(y)]
                if not hits:
                    raise AxiomViolation(f"{y!r} maps into a piece but lies in none of its pullbacks")
                res = hits[0]
        self._memo[key] = res
        return res

    def boundary_distance(self, y, level):
        """dist(boundary of P_{level-1/2}(y), boundary of P_level(y))."""
        a = self.piece_of(y, Fraction(level) - HALF)
        b = self.piece_of(y, level)
        if a is None or b is None:
            raise DepthExceeded(f"{y!r} is not a level {level} point")
        return hyperbolic_distance(a.boundary, b.boundary)

    def orbit_of(self, y, n):
        out = [y]
        for _ in range(n):
            out.append(self.image(out[-1]))
        return out

    # -- active critical point

    def active_critical_point(self):
        """The critical point outside the Fatou ball attached to the boundary of B_0.

        A critical direction at xi_0 that is preperiodic under the tangent map of
        the orbit is the active one; ties go to the smaller order of the center.
        """
        fates = {}
        model = self.report.model or {}
        for c, s, (kind, _info) in model.get("critical_slots", []):
            fates[_point_key(c)] = kind
        cands = [c for c in self.crit if fates.get(_point_key(c)) == "preperiodic"] or list(self.crit)

        def order(c):
            return (1, 0) if c is INFTY else (0, c.ord())

        return min(cands, key=order)

    def end_geometry(self, y, depth=DEFAULT_GRID_DEPTH, columns=DEFAULT_COLUMNS):
        """Boundaries of P_l(y) for l = 0, 1/2, ..., depth (stopping where y leaves K)
        and the base distances along the orbit of y."""
        out = []
        for h in range(_h(depth) + 1):
            p = self.piece_of(y, _lv(h))
            if p is None:
                break
            out.append(p.boundary)
        return EndGeometry(out, puzzle_distance_table(self, y, min(columns, int(depth))))


@dataclass
class EndGeometry:
    boundaries: list              # boundary of P_l for l = 0, 1/2, ...
    table: dict = dc_field(default_factory=dict)   # (n, m) -> base distance, m in {1/2, 1}

    def stabilized(self):
        """Level from which the boundary is constant, if that happens in the first half."""
        b = self.boundaries
        if not b:
            return None
        i = len(b) - 1
        while i > 0 and b[i - 1] == b[-1]:
            i -= 1
        return _lv(i) if i <= (len(b) - 1) // 2 else None

    def distances(self):
        b = self.boundaries
        return {_lv(h): hyperbolic_distance(b[h - 1], b[h]) for h in range(1, len(b))}


# ---------------------------------------------------------------------------
# marked grids


class MarkedGrid:
    """Entries M_{n,m} in {1, 2} for m + n <= budget, n <= columns."""

    def __init__(self, entries, budget, columns=None, critical=False, splits=None):
        self.entries = dict(entries)   # (n, h) -> 1 | 2, h = 2m
        self.budget = Fraction(budget)
        self.columns = min(columns if columns is not None else int(self.budget), int(self.budget))
        self.critical = critical
        self.splits = splits           # half-unit levels l with dP_{l-1/2}(w) != dP_l(w)

    @classmethod
    def from_depths(cls, depths, budget, critical=False, splits=None):
        """Grid whose column n is marked exactly up to depths[n] (None: unmarked; inf: full)."""
        budget = Fraction(budget)
        entries = {}
        for n in range(int(budget) + 1):
            d = depths[n] if n < len(depths) else None
            for h in range(_h(budget - n) + 1):
                entries[(n, h)] = 2 if d is not None and _lv(h) <= d else 1
        return cls(entries, budget, critical=critical, splits=splits)

    def inside(self, n, m):
        return 0 <= n <= self.columns and m >= 0 and m + n <= self.budget

    def value(self, n, m):
        return self.entries[(n, _h(m))]

    def marked(self, n, m):
        return self.entries.get((n, _h(m))) == 2

    def column_depth(self, n):
        """Depth of column n: None if unmarked at 0, inf if marked to the budget."""
        top = _h(self.budget - n)
        last = None
        for h in range(top + 1):
            if self.entries.get((n, h)) != 2:
                break
            last = h
        else:
            return float("inf")
        return None if last is None else _lv(last)

    def full_columns(self):
        return [n for n in range(self.columns + 1) if self.column_depth(n) == float("inf")]

    # -- rules

    def check_rules(self, critical=None):
        """Violations of (Ma) and, given the critical grid, (Mb)."""
        out = []
        for n in range(self.columns + 1):
            top = _h(self.budget - n)
            seen_unmarked = False
            for h in range(top + 1):
                v = self.entries.get((n, h))
                if v == 1:
                    seen_unmarked = True
                elif v == 2 and seen_unmarked:
                    out.append(("Ma", n, _lv(h)))
        if critical is not None:
            for (n, h), v in self.entries.items():
                if v != 2:
                    continue
                m = _lv(h)
                j = 0
                while j <= m:
                    if self.inside(n + j, m - j) and critical.inside(j, m - j):
                        if self.value(n + j, m - j) != critical.value(j, m - j):
                            out.append(("Mb", n, m, j))
                    j += 1
        return out

    # -- flags

    def flags(self):
        full = set(self.full_columns())
        top = self.columns
        for p in range(1, top // 2 + 1):
            if all(n in full for n in range(0, top + 1, p)) and all(
                    self.column_depth(n) != float("inf") or n % p == 0 for n in range(top + 1)):
                if 0 in full:
                    return ("periodic", p)
        if full - {0}:
            for k in sorted(full - {0}):
                for p in range(1, (top - k) // 2 + 1):
                    if all(n in full for n in range(k, top + 1, p)):
                        return ("preperiodic", (k, p))
        if self.critical:
            # record depths of finite columns keep growing
            best, records = Fraction(-1), []
            for n in range(1, top + 1):
                d = self.column_depth(n)
                if d is not None and d != float("inf") and d > best:
                    best = d
                    records.append(n)
            if len(records) >= 3 and best >= self.budget / 4:
                return ("recurrent", None)
        return ("none", None)

    def dump(self):
        """Rows are depths (descending), columns are n; '.' = 1, 'X' = 2."""
        rows = []
        for h in range(_h(self.budget), -1, -1):
            m = _lv(h)
            cells = []
            for n in range(self.columns + 1):
                v = self.entries.get((n, h))
                cells.append(" " if v is None else ("X" if v == 2 else "."))
            label = str(m).rjust(5)
            rows.append(f"{label} {''.join(cells).rstrip()}")
        return "\n".join(rows)

    def __repr__(self):
        return f"MarkedGrid(budget={self.budget}, columns={self.columns}, flags={self.flags()})"


def marked_grid(puzzle, zeta, depth=DEFAULT_GRID_DEPTH, columns=DEFAULT_COLUMNS, omega=None):
    """M_{n,m}(zeta) = 2 iff P_m(phi^n zeta) = P_m(omega), for m + n <= depth."""
    depth = Fraction(depth)
    omega = puzzle.active_critical_point() if omega is None else omega
    ncols = min(columns, int(depth))
    orb = puzzle.orbit_of(zeta, ncols)
    crit_pieces = []
    for h in range(_h(depth) + 1):
        p = puzzle.piece_of(omega, _lv(h))
        if p is None:
            raise DepthExceeded(f"active critical point leaves the pieces at level {_lv(h)}")
        crit_pieces.append(p)
    entries = {}
    for n in range(ncols + 1):
        for h in range(_h(depth - n) + 1):
            p = puzzle.piece_of(orb[n], _lv(h))
            if p is None:
                raise DepthExceeded(f"orbit point {n} leaves the pieces at level {_lv(h)}")
            entries[(n, h)] = 2 if p is crit_pieces[h] else 1
    is_crit = not isinstance(zeta, Point) and not isinstance(omega, Point) and _rigid_eq(zeta, omega)
    splits = {h for h in range(1, _h(depth) + 1) if crit_pieces[h - 1].boundary != crit_pieces[h].boundary}
    grid = MarkedGrid(entries, depth, ncols, critical=is_crit, splits=splits)
    bad = grid.check_rules()
    if bad:
        raise AxiomViolation(f"generated grid breaks the grid rules: {bad[:3]}")
    return grid


def check_weak_third_rule(critical, grid):
    """Violations (n, k, l0) of the weak third rule for the pair (critical grid, grid)."""
    if critical.budget != grid.budget:
        raise ValueError("grids must share the depth budget")
    splits = critical.splits
    if splits is None:
        lmin = 1
    else:
        pos = [h for h in splits if h >= 1]
        if not pos:
            return []
        lmin = min(pos)
    out = []
    top = _h(grid.budget)
    for k in range(1, int(grid.budget) + 1):
        for h0 in range(lmin + 2 * k, top + 1):
            l0 = _lv(h0)
            if any(critical.marked(j, l0 - j) for j in range(1, k) if critical.inside(j, l0 - j)):
                continue
            if not critical.inside(k, l0 - k + HALF) or not critical.marked(k, l0 - k + HALF):
                continue
            for n in range(grid.columns + 1):
                if not grid.inside(n, l0) or not grid.marked(n, l0):
                    continue
                # the rule needs column n to end at depth l0
                if not grid.inside(n, l0 + HALF) or grid.marked(n, l0 + HALF):
                    continue
                if grid.inside(n + k, l0 - k + HALF) and grid.marked(n + k, l0 - k + HALF):
                    out.append((n, k, l0))
    return out


# ---------------------------------------------------------------------------
# convergence of S(zeta)


@dataclass
class YoccozResult:
    verdict: str                 # Converges | Diverges | Undecided
    depth: Fraction
    partial_sums: list           # S_l for l = 1/2, 1, ..., budget
    certificate: dict = dc_field(default_factory=dict)

    def __str__(self):
        if self.verdict == "Undecided":
            return f"Undecided({self.depth})"
        return self.verdict


def _table(distance_table):
    if callable(distance_table):
        return distance_table
    return lambda n, m: distance_table[(n, Fraction(m))]


def chain_distance(grid, n, m, distance_table):
    """dist(dP_{m-1/2}(zeta_n), dP_m(zeta_n)) from base distances by the halving recursion."""
    base = _table(distance_table)
    m = Fraction(m)
    factor = 1
    while m >= Fraction(3, 2):
        factor *= grid.value(n, m)
        n, m = n + 1, m - 1
    return Fraction(base(n, m)) / factor


def partial_sums(grid, distance_table):
    out, s = [], Fraction(0)
    for h in range(1, _h(grid.budget) + 1):
        s += chain_distance(grid, 0, _lv(h), distance_table)
        out.append(s)
    return out


def children(grid, d):
    """The two children levels d + k and d + m of the critical piece of level d, or None."""
    d = Fraction(d)
    k = next((n for n in range(1, grid.columns + 1) if _deep(grid, n, d)), None)
    if k is None:
        return None
    dk = grid.column_depth(k)
    if dk == float("inf"):
        return None
    dprime = dk + HALF
    n = 0
    while dprime - k * (n + 1) > d:
        n += 1
    m = next((j for j in range((n + 1) * k + 1, grid.columns + 1) if _deep(grid, j, d)), None)
    if m is None:
        return None
    return d + k, d + m


def _deep(grid, n, d):
    """Is column n known to have depth at least d?"""
    return grid.inside(n, d) and grid.marked(n, d)


def _generations(grid, d, distance_table, limit=8):
    gens = [[Fraction(d)]]
    while len(gens) < limit:
        nxt = []
        for lv in gens[-1]:
            ch = children(grid, lv)
            if ch is None or any(c > grid.budget for c in ch):
                return gens
            nxt.extend(ch)
        gens.append(nxt)
    return gens


def yoccoz_test(grid, distance_table, min_generations=2):
    """Decide convergence of S(zeta) from the grid, within its budget."""
    sums = partial_sums(grid, distance_table)
    kind, info = grid.flags()
    delta = {_lv(h): chain_distance(grid, 0, _lv(h), distance_table) for h in range(1, _h(grid.budget) + 1)}
    if kind in ("periodic", "preperiodic"):
        p = info if kind == "periodic" else info[1]
        window = [delta[_lv(h)] for h in range(max(1, _h(grid.budget) - 2 * p + 1), _h(grid.budget) + 1)]
        return YoccozResult("Converges", grid.budget, sums,
                            {"flag": (kind, info), "tail_bound": sum(window, Fraction(0))})
    if grid.critical and kind == "recurrent":
        splits = sorted(h for h in range(1, _h(grid.budget) + 1) if delta[_lv(h)] > 0
                        and (grid.splits is None or h in grid.splits))
        for h in splits:
            d = _lv(h)
            gens = _generations(grid, d, distance_table)
            if len(gens) < min_generations:
                continue
            contrib = [sum((delta[lv] if lv in delta else chain_distance(grid, 0, lv, distance_table)
                            for lv in g), Fraction(0)) for g in gens]
            if all(c == contrib[0] for c in contrib) and contrib[0] > 0:
                return YoccozResult("Diverges", grid.budget, sums,
                                    {"argument": "children", "root": d, "generations": gens,
                                     "contribution": contrib[0]})
    # every position of depth >= l0 unmarked, with repeated splittings below
    for h0 in range(1, _h(grid.budget) // 2 + 1):
        l0 = _lv(h0)
        if any(grid.marked(n, _lv(h)) for (n, h) in grid.entries if h >= h0):
            continue
        later = [_lv(h) for h in range(h0 + 2, _h(grid.budget) + 1) if delta[_lv(h)] > 0]
        if len(later) >= 2:
            values = sorted({delta[lv] for lv in later})
            return YoccozResult("Diverges", grid.budget, sums,
                                {"argument": "finitely many values", "l0": l0, "splits": later,
                                 "values": values})
        break
    return YoccozResult("Undecided", grid.budget, sums, {"flag": (kind, info)})


@dataclass
class EndReport:
    kind: str                 # RigidPoint | PeriodicClosedBall | BallMinusDirections | Undecided
    boundary: Point = None
    period: int = None
    yoccoz: YoccozResult = None


def classify_end(grid, geometry):
    """Shape of the end of K(phi) described by the grid and its boundary data."""
    if geometry.stabilized() is not None:
        return EndReport("BallMinusDirections", boundary=geometry.boundaries[-1])
    res = yoccoz_test(grid, geometry.table)
    if res.verdict == "Diverges":
        return EndReport("RigidPoint", yoccoz=res)
    if res.verdict == "Converges":
        kind, info = res.certificate["flag"]
        period = info if kind == "periodic" else info[1]
        return EndReport("PeriodicClosedBall", period=period, yoccoz=res)
    return EndReport("Undecided", yoccoz=res)


def puzzle_distance_table(puzzle, zeta, columns):
    """Base distances dist(dP_{m-1/2}, dP_m) for m in {1/2, 1} along the orbit of zeta."""
    orb = puzzle.orbit_of(zeta, columns)
    table = {}
    for n, y in enumerate(orb):
        for m in (HALF, Fraction(1)):
            try:
                table[(n, m)] = puzzle.boundary_distance(y, m)
            except DepthExceeded:
                pass
    return table


def tableau(budget, choose):
    """Critical grid built column by column; (Mb) forces what it can and
    ``choose(n, forced_depth)`` picks the depth of column n otherwise
    (forced_depth is None when nothing is forced)."""
    budget = Fraction(budget)
    depth = {0: float("inf")}
    cols = {0: [2] * (_h(budget) + 1)}
    for n in range(1, int(budget) + 1):
        top = _h(budget - n)
        forced = {}
        for n2 in range(1, n):
            d, j = depth[n2], n - n2
            if d is None or d < j:
                continue
            for h in range(min(_h(d - j), top) + 1):
                v = cols[j][h]
                if forced.setdefault(h, v) != v:
                    raise AxiomViolation(f"columns force conflicting values at ({n}, {_lv(h)})")
        if forced and 1 in forced.values():
            d = None
            for h in sorted(forced):
                if forced[h] != 2:
                    break
                d = _lv(h)
        else:
            d = choose(n, _lv(max(forced)) if forced else None)
        depth[n] = d
        cols[n] = [2 if d is not None and _lv(h) <= d else 1 for h in range(top + 1)]
    entries = {(n, h): v for n, col in cols.items() for h, v in enumerate(col)}
    return MarkedGrid(entries, budget, critical=True)
