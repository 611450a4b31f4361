"""Classification of quadratic rational maps over L.

The searches here all run along segments of the Berkovich line.  A segment
from a rigid point a to a rigid point b is parametrised by a real t (see
:class:`Path`), and for a type II point x(t) on it the function

    F_k(t) = dist(x(t), phi^k(x(t)))

is piecewise linear with integer slopes.  Zeros of F_k are periodic points.
They are located by bisection or branch and bound and then pinned down by an
exact linear solve; every reported point is checked exactly with
``map_point``.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .berkovich import (
    INFTY, ComplexRational, Direction, Point, QuadraticMap, _image, _mobius_order, _same,
    classify_direction, hyperbolic_distance, map_point, preimages, tangent_map,
)
from .errors import InexactRoot, PrecisionExhausted, SearchBoundExceeded
from .newton import PolyL, roots
from .puiseux import INF, Series, as_fraction

DEFAULT_DEPTH = 32
DEFAULT_HORIZON = 64
DEFAULT_PREC = 24

CASES = ("Simple", "AttractingShift", "IndifferentOrbit", "OneRepelling", "TwoRepelling")


# ---------------------------------------------------------------------------
# rigid data


def _prec(phi, prec):
    return as_fraction(prec if prec is not None else min(phi.field.prec, DEFAULT_PREC))


def critical_points(phi, prec=None):
    """Critical points of phi with multiplicity (total 2); INFTY when the Wronskian drops degree."""
    w = phi.wronskian().trimmed()
    out = list(roots(w, _prec(phi, prec))) if w.degree > 0 else []
    missing = 2 - sum(m for _, m in out)
    if missing > 0:
        out.append((INFTY, missing))
    return out


@dataclass
class FixedPoint:
    point: object
    multiplicity: int
    multiplier: object
    ord: object
    kind: str


def _kind(v):
    if v > 0:
        return "attracting"
    return "indifferent" if v == 0 else "repelling"


def _multiplier_at(phi, z, prec):
    if z is INFTY:
        f = phi.field
        rev = lambda p: PolyL([p[2], p[1], p[0]], f)
        return _multiplier_at(QuadraticMap(rev(phi.den), rev(phi.num), check=False),
                              Series.zero(f), prec)
    d = phi.den.eval(z)
    return phi.wronskian().eval(z).mul(d.mul(d).inverse(rel_prec=prec))


def fixed_points_with_multipliers(phi, prec=None):
    """The three fixed points of phi on P^1(L) with multipliers and kinds."""
    prec = _prec(phi, prec)
    f = phi.field
    zeta = PolyL([Series.zero(f), Series.const(f.one, f)], f)
    eq = (phi.num - phi.den * zeta).trimmed()
    found = list(roots(eq, prec)) if eq.degree > 0 else []
    missing = 3 - sum(m for _, m in found)
    if missing > 0:
        found.append((INFTY, missing))
    out = []
    for z, m in found:
        if m > 1:
            lam = Series.const(f.one, f)
        else:
            lam = _multiplier_at(phi, z, prec)
        v = lam.ord()
        out.append(FixedPoint(z, m, lam, v, "attracting" if v is INF else _kind(v)))
    return out


# ---------------------------------------------------------------------------
# segments


class Path:
    """The segment from rigid a to rigid b, x(t) moving from a (t -> -oo) to b (t -> +oo).

    For finite a, b with j = ord(a - b): x(t) = x(a, j - t) for t <= 0 and
    x(b, j + t) for t >= 0.  If a is INFTY, x(t) = x(b, t); if b is INFTY,
    x(t) = x(a, -t).
    """

    def __init__(self, a, b):
        if a is INFTY and b is INFTY:
            raise ValueError("a segment needs a finite end")
        self.a, self.b = a, b
        self.j = None
        if a is not INFTY and b is not INFTY:
            d = a - b
            if d.is_zero():
                raise ValueError("segment ends coincide")
            self.j = d.ord()
        cap = lambda s: INF if s is INFTY or s.cap is INF else as_fraction(s.cap)
        if a is INFTY:
            self.lo, self.hi = -INF, cap(b)
        elif b is INFTY:
            self.lo, self.hi = (-cap(a) if cap(a) is not INF else -INF), INF
        else:
            ca, cb = cap(a), cap(b)
            self.lo = -INF if ca is INF else self.j - ca
            self.hi = INF if cb is INF else cb - self.j

    def point(self, t):
        t = as_fraction(t)
        if self.a is INFTY:
            return Point(self.b, t)
        if self.b is INFTY:
            return Point(self.a, -t)
        if t <= 0:
            return Point(self.a, self.j - t)
        return Point(self.b, self.j + t)

    def param(self, x):
        """t with point(t) == x, assuming x lies on the segment."""
        if self.a is INFTY:
            return x.alpha
        if self.b is INFTY:
            return -x.alpha
        if (x.center - self.b).ord() >= x.alpha and x.alpha >= self.j:
            return x.alpha - self.j
        return self.j - x.alpha


def _slopes(k):
    out = set()
    for i in range(k + 1):
        out |= {Fraction(2 ** i - 1), Fraction(2 ** i + 1)}
    return sorted(out - {0})


def _distance_fn(phi, path, k):
    cache = {}

    def F(t):
        t = as_fraction(t)
        if t not in cache:
            x = path.point(t)
            y = x
            for _ in range(k):
                y = map_point(phi, y)
            cache[t] = hyperbolic_distance(x, y)
        return cache[t]

    return F


def _extent(F, t0, stop, k, max_steps=80):
    """sup of the zero set of F on [t0, ...), given F(t0) == 0 and F piecewise linear."""
    lo, d, hi = t0, Fraction(1, 4), None
    while hi is None:
        t = lo + d
        if stop is not INF and t >= stop:
            raise SearchBoundExceeded(stop, "segment end reached while walking")
        if F(t) == 0:
            lo, d = t, min(d * 2, Fraction(1))
        else:
            hi = t
    slopes = _slopes(k)
    for _ in range(max_steps):
        fh = F(hi)
        for m in slopes:
            c = hi - fh / m
            if lo <= c < hi and F(c) == 0 and F((c + hi) / 2) == fh / 2 and F((3 * c + hi) / 4) == fh / 4:
                return c
        mid = (lo + hi) / 2
        if F(mid) == 0:
            lo = mid
        else:
            hi = mid
    raise SearchBoundExceeded(max_steps, "boundary of a periodic segment not pinned down")


def _zeros(F, lo, hi, k, step, budget=4000, max_depth=12):
    """Zeros of F on [lo, hi] by Lipschitz branch and bound (slope bound 2^k + 1)."""
    M = 2 ** k + 1
    slopes = _slopes(k)
    n = int((hi - lo) / step) + 1
    grid = [lo + i * step for i in range(n + 1) if lo + i * step <= hi]
    found, spent, unresolved = [], 0, 0

    def val(t):
        nonlocal spent
        spent += 1
        try:
            return F(t)
        except (PrecisionExhausted, InexactRoot):
            return None

    vals = [val(t) for t in grid]
    stack = [(a, b, fa, fb, 0) for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:])]
    for t, v in zip(grid, vals):
        if v == 0:
            found.append(t)
    while stack:
        a, b, fa, fb, depth = stack.pop()
        if fa is None or fb is None:
            unresolved += 1
            continue
        if fa == 0 or fb == 0 or fa + fb > M * (b - a):
            continue
        hit = None
        for m in slopes:
            for c in (a + fa / m, b - fb / m):
                if a < c < b and val(c) == 0:
                    hit = c
                    break
            if hit is not None:
                break
        if hit is not None:
            found.append(hit)
            continue
        if depth >= max_depth or spent > budget:
            unresolved += 1
            continue
        mid = (a + b) / 2
        fm = val(mid)
        if fm == 0:
            found.append(mid)
            continue
        stack.append((a, mid, fa, fm, depth + 1))
        stack.append((mid, b, fm, fb, depth + 1))
    return sorted(set(found)), unresolved


def _scale(phi, *pts):
    den = 1
    for p in list(phi.num.coeffs) + list(phi.den.coeffs) + [p for p in pts if p is not INFTY]:
        den = max(den, p.den)
    return Fraction(1, 2 * den)


# ---------------------------------------------------------------------------
# Julia membership of periodic type II points


@dataclass
class JuliaVerdict:
    status: str          # Julia | Fatou | Undecided
    exact: bool
    witness: str = ""
    bad: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.status == "Julia"


def _mobius_preimage(t, s):
    f = t.field
    if s is INFTY:
        p = t.den
    else:
        p = [a - s * b for a, b in zip(t.num + [f.zero] * 2, t.den + [f.zero] * 2)][:2]
    while len(p) > 1 and f.is_zero(p[-1]):
        p = p[:-1]
    if len(p) < 2:
        return INFTY
    return -p[0] / p[1]


def bad_directions(phi, x, p=1, crit=None):
    """Slots at x of the bad directions of phi^p (x of local degree one along its orbit)."""
    f = phi.field
    crit = crit if crit is not None else critical_points(phi)
    out, y, t = [], x, ComplexRational.identity(f)
    for _ in range(p):
        seen = []
        for c, _m in crit:
            s = y.slot(c)
            if any(_same(s, u, f) for u in seen):
                continue
            seen.append(s)
            if not classify_direction(phi, Direction(y, s)).good:
                back = s
                if t.degree == 1:
                    back = _mobius_preimage(t, s)
                if not any(_same(back, u, f) for u in out):
                    out.append(back)
        im = _image(phi, y)
        t = im.tangent.compose(t)
        y = im.point
    return out


def julia_membership_indifferent(phi, x, p=1, horizon=DEFAULT_HORIZON, crit=None):
    """Julia/Fatou status of a periodic type II point x of period p."""
    f = phi.field
    t = tangent_map(phi, x, p)
    if t.degree >= 2:
        return JuliaVerdict("Julia", True, f"deg T phi^{p} = {t.degree}")
    bad = bad_directions(phi, x, p, crit)
    if not bad:
        return JuliaVerdict("Fatou", True, "no bad direction", bad)
    undecided = False
    for s in bad:
        kind, info = t.fate(s, horizon)
        if kind == "preperiodic":
            continue
        if kind == "wandering":
            return JuliaVerdict("Julia", True, f"bad direction {s} under {t}: {info}", bad)
        if _near_return(t, s, horizon):
            undecided = True
            continue
        return JuliaVerdict("Julia", False, f"bad direction {s} not periodic within {horizon} steps under {t}", bad)
    if undecided:
        return JuliaVerdict("Undecided", False, f"orbit closes only to within float tolerance by {horizon}", bad)
    return JuliaVerdict("Fatou", f.exact, "every bad direction is periodic", bad)


def _near_return(t, s, horizon):
    """Float backend: does the orbit come back to s within the square root of eps?"""
    f = t.field
    if s is INFTY:
        return False
    tol = f.eps ** 0.5
    z = s
    for _ in range(horizon):
        z = t(z)
        if z is INFTY:
            continue
        if abs(complex(f.to_complex(z - s))) < tol:
            return True
    return False


# ---------------------------------------------------------------------------
# Rivera domains


@dataclass
class RiveraDomain:
    kind: str                 # ball | starlike
    center: Point             # theta_0 (for a ball: its boundary point)
    orbit: list               # boundary orbit O = (xi_0, ..., xi_{q-1}); xi_0 toward the critical points
    period: int
    direction: object = None  # for a ball: slot at the boundary point of the ball
    fixed_points: list = dc_field(default_factory=list)
    julia: JuliaVerdict = None

    @property
    def skeleton(self):
        if self.kind == "ball":
            return [self.center]
        return list(self.orbit)

    def contains(self, r):
        """Is the rigid point r in U?"""
        if self.kind == "ball":
            return _same(self.center.slot(r), self.direction, self.center.field)
        f = self.center.field
        for xi in self.orbit:
            if not _same(xi.slot(r), xi.slot(self.center), f):
                return False
        return True

    def key(self):
        return (self.kind, self.center, tuple(sorted(hash(p) for p in self.orbit)),
                None if self.direction is None else str(self.direction))


def _rigid_eq(a, b):
    if a is INFTY or b is INFTY:
        return a is b
    return (a - b).is_zero()


def _start_fixed(phi, path, limit=64):
    """A parameter near the start of the path where phi fixes x(t)."""
    t = Fraction(-1)
    while -t <= limit:
        if t < path.lo:
            break
        try:
            x = path.point(t)
            if map_point(phi, x) == x:
                return t
        except PrecisionExhausted:
            break
        t *= 2
    raise SearchBoundExceeded(limit, "no fixed disc around the indifferent fixed point")


def rivera_domain(phi, zeta0, crit, depth_bound=DEFAULT_DEPTH, horizon=DEFAULT_HORIZON):
    """The fixed Rivera domain containing the indifferent rigid fixed point zeta0."""
    f = phi.field
    omega = next(c for c, _ in crit if not _rigid_eq(c, zeta0))
    path = Path(zeta0, omega)
    F1 = _distance_fn(phi, path, 1)
    t0 = _start_fixed(phi, path, limit=4 * depth_bound)
    stop = path.hi
    t_theta = _extent(F1, t0, stop, 1)
    theta = path.point(t_theta)
    verdict = julia_membership_indifferent(phi, theta, 1, horizon, crit)
    if verdict.status == "Julia":
        return RiveraDomain("ball", theta, [theta], 1, direction=theta.slot(zeta0), julia=verdict)
    if verdict.status == "Undecided":
        raise SearchBoundExceeded(horizon, "Julia membership of the fixed point undecided")
    s = theta.slot(omega)
    t = tangent_map(phi, theta)
    pp = t.preperiod(s, depth_bound)
    if pp is None or pp[0] != 0:
        raise SearchBoundExceeded(depth_bound, "rotation order at the fixed skeleton point")
    q = pp[1]
    Fq = _distance_fn(phi, path, q)
    t_xi = _extent(Fq, t_theta, stop, q)
    xi0 = path.point(t_xi)
    orbit = [xi0]
    for _ in range(q - 1):
        orbit.append(map_point(phi, orbit[-1]))
    verdict = julia_membership_indifferent(phi, xi0, q, horizon, crit)
    return RiveraDomain("starlike", theta, orbit, q, julia=verdict)


def _fixed_on_critical_segment(phi, crit, depth_bound):
    """Type II fixed points on the critical segment (all of local degree 2)."""
    (c0, _), (c1, _) = crit
    path = Path(c0, c1)
    lo = as_fraction(max(path.lo, -depth_bound)) + Fraction(1, 64)
    hi = as_fraction(min(path.hi, depth_bound)) - Fraction(1, 64)
    F = _distance_fn(phi, path, 1)
    zs, unresolved = _zeros(F, lo, hi, 1, _scale(phi, c0, c1))
    pts = []
    for t in zs:
        x = path.point(t)
        if _image(phi, x).tangent.degree == 2:
            pts.append(x)
    return pts, unresolved


# ---------------------------------------------------------------------------
# symbolic models


def subshift_sigma_q(q):
    """Transition table of Sigma_q on X_0..X_{q-1}, Y_0..Y_{q-1}, with the factor map h."""
    if q < 1:
        raise ValueError("q must be positive")
    X = [f"X{j}" for j in range(q)]
    Y = [f"Y{j}" for j in range(q)]
    table = {s: set() for s in X + Y}
    for j in range(q):
        table[X[j]].add(X[(j + 1) % q])
        table[Y[j]].add(X[j])
        table[X[q - 1]].add(Y[j])
        table[Y[0]].add(Y[j])
    h = {s: s[0] for s in X + Y}
    return {"symbols": X + Y, "transitions": {s: sorted(v) for s, v in table.items()}, "factor": h}


def factor_fibers(q, word):
    """Number of Sigma_q sequences (as prefixes) over a finite {X, Y} word."""
    table = subshift_sigma_q(q)["transitions"]
    counts = {s: 1 for s in table if s[0] == word[0]}
    for letter in word[1:]:
        nxt = {}
        for s, c in counts.items():
            for u in table[s]:
                if u[0] == letter:
                    nxt[u] = nxt.get(u, 0) + c
        counts = nxt
    return sum(counts.values())


@dataclass
class ShiftModel:
    """Case (1) data: D = direction at phi(xi) containing xi, phi^-1(D) = D_0 u D_1."""
    xi: Point
    image: Point
    parent: Direction
    branches: list           # two Directions
    modulus: Fraction        # a = dist(boundary of D, boundary of D_i)

    def pullback(self, y, i):
        """The preimage of the type II point y (in D) lying in branch i."""
        for z, _m in preimages_cached(self._phi, y):
            if self.branches[i].contains(z):
                return z
        raise PrecisionExhausted("no preimage in the requested branch")

    def piece_boundary(self, word, memo=None):
        """Boundary point of the nested piece D_n(word) (n = len(word) - 1)."""
        memo = {} if memo is None else memo
        key = tuple(word)
        if key in memo:
            return memo[key]
        if len(word) == 1:
            out = self.branches[word[0]].at
        else:
            out = self.pullback(self.piece_boundary(word[1:], memo), word[0])
        memo[key] = out
        return out


_PRE_CACHE = {}


def preimages_cached(phi, y):
    key = (id(phi), y)
    if key not in _PRE_CACHE:
        _PRE_CACHE[key] = preimages(phi, y)
    return _PRE_CACHE[key]


def _invariant_ball_boundary(phi, zeta_a, crit, depth_bound):
    """Boundary xi of the maximal open ball B around the attracting point with phi(B) in B."""
    f = phi.field
    others = [c for c, _ in crit if not _same(c, zeta_a, f)]
    target = others[0] if others else (Series.zero(f) if zeta_a is INFTY else INFTY)
    path = Path(zeta_a, target)

    def invariant(t):
        x = path.point(t)
        s = x.slot(zeta_a)
        rep = classify_direction(phi, Direction(x, s))
        if not rep.good:
            return False
        y = rep.image.at
        if y == x:
            return _same(rep.image.slot, s, f)
        return _same(x.slot(y), s, f) and not rep.image.contains(x)

    lo = Fraction(-1)
    while not invariant(lo):
        lo *= 2
        if -lo > 4 * depth_bound:
            raise SearchBoundExceeded(depth_bound, "invariant ball around the attracting point")
    hi, d = None, Fraction(1, 4)
    while hi is None:
        t = lo + d
        if path.hi is not INF and t >= path.hi or t - lo > 4 * depth_bound:
            raise SearchBoundExceeded(depth_bound, "invariant ball is not bounded")
        if invariant(t):
            lo, d = t, min(d * 2, Fraction(4))
        else:
            hi = t
    # the boundary has a small denominator: bisect, then test the simplest rational
    for _ in range(40):
        c = _simplest_between(lo, hi)
        if invariant(c) and not invariant(c + (hi - c) / 1024):
            if all(not invariant(c + (hi - c) * Fraction(j, 8)) for j in range(1, 8)):
                return path.point(c)
        mid = (lo + hi) / 2
        if invariant(mid):
            lo = mid
        else:
            hi = mid
    raise SearchBoundExceeded(40, "boundary of the invariant ball")


def _simplest_between(lo, hi):
    """The rational with the smallest denominator in [lo, hi)."""
    den = 1
    while True:
        import math
        n = math.ceil(lo * den)
        if Fraction(n, den) < hi:
            return Fraction(n, den)
        den += 1


def shift_model(phi, zeta_a, crit, depth_bound=DEFAULT_DEPTH):
    """Case (1): two disjoint balls D_0, D_1 mapping bijectively onto D."""
    f = phi.field
    xi = _invariant_ball_boundary(phi, zeta_a, crit, depth_bound)
    y = map_point(phi, xi)
    parent = Direction(y, y.slot(xi))
    branches = []
    for z, _m in preimages(phi, y):
        t = _image(phi, z).tangent
        sols = [(w, 1) for w in _direction_preimages(t, parent.slot)]
        for w, _ in sols:
            d = Direction(z, w)
            if z == xi and _same(w, xi.slot(zeta_a), f):
                continue
            branches.append(d)
    if len(branches) != 2:
        raise SearchBoundExceeded(depth_bound, f"expected two branches over D, found {len(branches)}")
    a = hyperbolic_distance(y, branches[0].at)
    model = ShiftModel(xi, y, parent, branches, a)
    model._phi = phi
    return model


def _direction_preimages(t, s):
    f = t.field
    if s is INFTY:
        p = list(t.den)
    else:
        n = t.num + [f.zero] * (len(t.den) - len(t.num))
        d = t.den + [f.zero] * (len(n) - len(t.den))
        p = [a - s * b for a, b in zip(n, d)]
    while len(p) > 1 and f.is_zero(p[-1]):
        p = p[:-1]
    out = [r for r, _m in f.poly_roots(p)] if len(p) > 1 else []
    if len(p) - 1 < t.degree:
        out.append(INFTY)
    return out


def verify_shift_model(model, phi):
    """Disjointness and bijectivity of the two level-one balls; returns a dict of checks."""
    f = phi.field
    d0, d1 = model.branches
    disjoint = not d0.contains(d1.at) if d0.at != d1.at else not _same(d0.slot, d1.slot, f)
    disjoint = disjoint and (d0.at == d1.at or not d1.contains(d0.at))
    bij = []
    for d in model.branches:
        rep = classify_direction(phi, d)
        bij.append(rep.good and rep.degree == 1 and rep.image == model.parent)
    inside = all(model.parent.contains(d.at) for d in model.branches)
    return {"disjoint": disjoint, "bijective": all(bij), "inside_parent": inside}


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    case: str
    fixed_points: list
    critical_points: list
    orbit: list = dc_field(default_factory=list)
    period: int = None
    orbit2: list = dc_field(default_factory=list)
    period2: int = None
    center: Point = None
    skeleton: list = dc_field(default_factory=list)
    rivera: list = dc_field(default_factory=list)
    tangent: ComplexRational = None
    tangent2: ComplexRational = None
    model: dict = None
    simple_point: Point = None
    julia: JuliaVerdict = None
    exact: bool = True
    bounds: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)


def _tangent_multiple_fixed(t):
    return [z for z, m in t.fixed_points() if m >= 2]


def _critical_slots(report_orbit, crit):
    xi0 = report_orbit[0]
    return [(c, xi0.slot(c)) for c, _ in crit]


def classify(phi, depth_bound=DEFAULT_DEPTH, horizon=DEFAULT_HORIZON, prec=None):
    """Classify phi into one of CASES."""
    f = phi.field
    crit = critical_points(phi, prec)
    fixed = fixed_points_with_multipliers(phi, prec)
    bounds = {"depth_bound": depth_bound, "horizon": horizon, "prec": str(_prec(phi, prec))}
    rep = ClassificationReport(None, fixed, crit, bounds=bounds, exact=f.exact)

    simple, unresolved = _fixed_on_critical_segment(phi, crit, depth_bound)
    if simple:
        rep.case = "Simple"
        rep.simple_point = simple[0]
        rep.tangent = tangent_map(phi, simple[0])
        rep.model = {"kind": "good reduction", "reduction": str(rep.tangent)}
        return rep
    if unresolved:
        rep.notes.append(f"{unresolved} critical-segment intervals unresolved in the simple test")

    attracting = [fp for fp in fixed if fp.kind == "attracting"]
    if attracting:
        rep.case = "AttractingShift"
        model = shift_model(phi, attracting[0].point, crit, depth_bound)
        checks = verify_shift_model(model, phi)
        rep.center = model.xi
        rep.model = {"kind": "full 2-shift", "xi": model.xi, "image": model.image,
                     "parent": model.parent, "branches": model.branches,
                     "a": model.modulus, "checks": checks, "handle": model}
        return rep

    domains = []
    for fp in fixed:
        if fp.kind != "indifferent":
            continue
        if any(d.contains(fp.point) for d in domains):
            continue
        dom = rivera_domain(phi, fp.point, crit, depth_bound, horizon)
        if all(d.key() != dom.key() for d in domains):
            domains.append(dom)
    if not domains:
        raise SearchBoundExceeded(depth_bound, "no indifferent fixed point located")
    for d in domains:
        d.fixed_points = [fp for fp in fixed if d.contains(fp.point)]
    rep.rivera = domains
    main = domains[0]
    rep.center = main.center
    rep.skeleton = [main.center] + (main.orbit if main.kind == "starlike" else [])
    rep.orbit, rep.period = list(main.orbit), main.period
    rep.julia = main.julia
    rep.exact = rep.exact and all(d.julia is None or d.julia.exact for d in domains)
    if main.julia is not None and main.julia.status == "Undecided":
        raise SearchBoundExceeded(horizon, "Julia membership undecided")

    xi0, q = main.orbit[0], main.period
    rep.tangent = tangent_map(phi, xi0, q)
    if rep.tangent.degree == 1 or main.kind == "ball":
        rep.case = "IndifferentOrbit"
        rep.model = {"kind": "Sigma_q", "sigma": subshift_sigma_q(q), "renewal": True}
        return rep

    # repelling boundary orbit
    mult = _tangent_multiple_fixed(rep.tangent)
    u0 = xi0.slot(main.center)
    if not any(_same(z, u0, f) for z in mult):
        rep.notes.append("tangent map lacks a multiple fixed point in the U_0 direction")
    slots = _critical_slots(main.orbit, crit)
    fates = []
    for c, s in slots:
        kind, info = rep.tangent.fate(s, horizon)
        fates.append((kind, info))
        if kind == "unknown":
            rep.exact = False
    rep.model = {"kind": "lamination", "critical_slots": [(c, s, pp) for (c, s), pp in zip(slots, fates)]}
    rep.bounds["critical_orbits"] = horizon
    if all(kind != "preperiodic" for kind, _ in fates):
        rep.case = "OneRepelling"
        rep.notes.append("both critical directions have non-preperiodic orbits under T_O")
        return rep
    active = [c for (c, s), (kind, _) in zip(slots, fates) if kind == "preperiodic"]
    second = _second_orbit(phi, main, active[0], depth_bound)
    if second is None:
        raise SearchBoundExceeded(depth_bound, "second repelling orbit")
    orbit2, q2 = second
    rep.case = "TwoRepelling"
    rep.orbit2, rep.period2 = orbit2, q2
    rep.tangent2 = tangent_map(phi, orbit2[0], q2)
    return rep


def _second_orbit(phi, main, c, depth_bound, window=None):
    """A repelling periodic point of period q' > q on the ray from xi_0 to c."""
    xi0, q = main.orbit[0], main.period
    path = Path(INFTY, c) if c is not INFTY else None
    if path is None:
        return None
    window = window or Fraction(min(depth_bound, 16))
    lo = xi0.alpha + Fraction(1, 64)
    hi = min(as_fraction(path.hi) - Fraction(1, 64) if path.hi is not INF else lo + window, lo + window)
    step = _scale(phi, c)
    for k in range(q + 1, depth_bound + 1):
        F = _distance_fn(phi, path, k)
        zs, _unresolved = _zeros(F, lo, hi, k, step, budget=1500, max_depth=8)
        for t in zs:
            x = path.point(t)
            if any(_distance_fn(phi, path, d)(t) == 0 for d in range(1, k) if k % d == 0):
                continue
            if tangent_map(phi, x, k).degree == 2:
                orbit = [x]
                for _ in range(k - 1):
                    orbit.append(map_point(phi, orbit[-1]))
                return orbit, k
    return None


# ---------------------------------------------------------------------------
# residue formula


def verify_residue_formula(phi, domain, fixed=None):
    """Check N = 2 + sum over fixed boundary points of (eta - 2); returns (ok, witness)."""
    f = phi.field
    fixed = fixed if fixed is not None else fixed_points_with_multipliers(phi)
    inside = [fp for fp in fixed if domain.contains(fp.point)]
    n = sum(fp.multiplicity for fp in inside)
    total = 2
    etas = []
    boundary = [domain.center] if domain.kind == "ball" else domain.orbit
    for xi in boundary:
        if map_point(phi, xi) != xi:
            continue
        t = tangent_map(phi, xi)
        u = domain.direction if domain.kind == "ball" else xi.slot(domain.center)
        eta = next((m for z, m in t.fixed_points() if _same(z, u, f)), 0)
        etas.append((xi, eta))
        total += eta - 2
    witness = {"N": n, "rhs": total, "eta": etas, "fixed_in_U": [fp.point for fp in inside]}
    return n == total, witness
