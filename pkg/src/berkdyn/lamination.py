"""Alpha-laminations of the doubling map, built from itineraries.

Angles are exact Fractions in [0, 1).  A level-l lamination is the
restriction of an equivalence relation on R/Z to the support
A_l = m2^(-l)(A_0), where A_0 is the rotation-number p/q cycle.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import AxiomViolation, NoMatch

HALF = Fraction(1, 2)
FLAVORS = ("plus", "minus", "join")


def angle(x):
    """Reduce a rational to [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def m2(t):
    return angle(2 * t)


def fmt(t):
    return f"{t.numerator}/{t.denominator}"


def _check_pq(p, q):
    if not (1 <= p < q) or gcd(p, q) != 1:
        raise ValueError(f"need coprime 1 <= p < q, got p={p}, q={q}")


def rotation_orbit(p, q):
    """The period-q cycle of m2 on which m2 acts as rotation by p/q."""
    _check_pq(p, q)
    den = 2 ** q - 1
    seen = set()
    for k in range(1, den):
        t = Fraction(k, den)
        if t in seen:
            continue
        orbit = [t]
        for _ in range(q - 1):
            orbit.append(m2(orbit[-1]))
        seen.update(orbit)
        if len(set(orbit)) != q or m2(orbit[-1]) != t:
            continue
        ts = sorted(orbit)
        if all(m2(ts[j]) == ts[(j + p) % q] for j in range(q)):
            return ts
    raise ValueError(f"no rotation orbit for {p}/{q}")


def characteristic_interval(p, q):
    """The shortest complementary arc (theta0, theta1) of the rotation cycle."""
    ts = rotation_orbit(p, q)
    if q == 2:
        # both gaps have length 1/3; take the arc not containing 0
        return ts[0], ts[1]
    gaps = [((ts[(j + 1) % q] - ts[j]) % 1, ts[j], ts[(j + 1) % q]) for j in range(q)]
    gaps.sort()
    if gaps[0][0] == gaps[1][0]:
        raise ValueError(f"tie for the shortest gap of the {p}/{q} cycle")
    return gaps[0][1], gaps[0][2]


def in_closed_interval(theta, p, q):
    lo, hi = characteristic_interval(p, q)
    return lo <= theta <= hi


def symbol(theta, eps, t):
    """Which element of the eps-partition of theta contains t."""
    x = angle(t - theta / 2)
    if eps == "+":
        return 1 if x < HALF else 0
    if eps == "-":
        return 1 if 0 < x <= HALF else 0
    raise ValueError(f"eps must be '+' or '-', got {eps!r}")


def itinerary(theta, eps, t, depth):
    theta, t = angle(theta), angle(t)
    word = []
    for _ in range(depth):
        word.append(str(symbol(theta, eps, t)))
        t = m2(t)
    return "".join(word)


def support(p, q, level):
    """A_level as a sorted list."""
    pts = set(rotation_orbit(p, q))
    layer = set(pts)
    for _ in range(level):
        layer = {angle(t / 2 + h) for t in layer for h in (0, HALF)} - pts
        pts |= layer
    return sorted(pts)


class _Union:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[b] = a

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(g) for g in out.values()]


def _ccw_between(a, x, b):
    """x lies on the open counterclockwise arc from a to b."""
    return 0 < angle(x - a) < angle(b - a) or (a == b and x != a)


@dataclass
class LevelLamination:
    p: int
    q: int
    level: int
    support: list
    classes: list
    origin: tuple = ("given",)           # (flavor, theta) when built from an angle
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.classes = sorted((tuple(sorted(c)) for c in self.classes), key=lambda c: c[0])
        self._index = {t: c for c in self.classes for t in c}

    def __eq__(self, other):
        if not isinstance(other, LevelLamination):
            return NotImplemented
        return (self.p, self.q, self.level) == (other.p, other.q, other.level) and \
            set(self.classes) == set(other.classes)

    def class_of(self, t):
        return self._index[angle(t)]

    def nontrivial(self):
        return [c for c in self.classes if len(c) > 1]

    def restrict(self, level):
        if level > self.level:
            raise ValueError("can only restrict to a lower level")
        pts = set(support(self.p, self.q, level))
        classes = [c for c in self.classes if c[0] in pts]
        return LevelLamination(self.p, self.q, level, sorted(pts), classes, self.origin)

    def dump(self):
        return "\n".join(" ".join(fmt(t) for t in c) for c in self.nontrivial())

    def violations(self):
        """Failures of the five axioms, as (axiom, class) pairs."""
        out = []
        a0 = tuple(rotation_orbit(self.p, self.q))
        cover = [t for c in self.classes for t in c]
        if sorted(cover) != sorted(self.support) or len(cover) != len(set(cover)):
            out.append(("partition", None))
        classes = set(self.classes)
        if a0 not in classes:
            out.append(("alpha-supported", a0))
        for c in self.classes:
            if len(c) > 1 and not (len(c) <= 2 * self.q):
                out.append(("finite", c))
            image = tuple(sorted(set(m2(t) for t in c)))
            if self.level > 0 or c == a0:
                if image not in classes:
                    out.append(("invariant", c))
            if len(c) > 1:
                if not self._consecutive(c, image):
                    out.append(("consecutive-preserving", c))
                x = image
                for _ in range(self.level):
                    x = tuple(sorted(set(m2(t) for t in x)))
                if x != a0:
                    out.append(("alpha-supported", c))
        pair = crossing_pair(self.nontrivial())
        if pair:
            out.append(("unlinked", pair))
        return out

    @staticmethod
    def _consecutive(c, image):
        if len(image) == 1:
            return False
        for j, t in enumerate(c):
            s = c[(j + 1) % len(c)]
            a, b = m2(t), m2(s)
            if a == b:
                return False
            if any(_ccw_between(a, x, b) for x in image):
                return False
        return True

    def verify(self):
        bad = self.violations()
        if bad:
            raise AxiomViolation(f"level {self.level} lamination fails {bad[0][0]}: {bad[0][1]}")
        return self


def linked(a, b):
    """Two disjoint finite sets on the circle whose hulls cross."""
    for j in range(len(b)):
        for k in range(j + 1, len(b)):
            x, y = b[j], b[k]
            sides = {_ccw_between(x, s, y) for s in a if s not in (x, y)}
            if len(sides) == 2:
                return True
    return False


def crossing_pair(classes):
    """Some linked pair among disjoint classes, or None (one sweep with a stack)."""
    owner = {t: c for c in classes for t in c}
    seen = {}
    stack = []
    for t in sorted(owner):
        c = owner[t]
        seen[c] = seen.get(c, 0) + 1
        if seen[c] == 1:
            if len(c) > 1:
                stack.append(c)
            continue
        if stack[-1] is not c:
            return stack[-1], c
        if seen[c] == len(c):
            stack.pop()
    return None


def _classes_by_itinerary(theta, eps, pts, depth):
    groups = {}
    for t in pts:
        groups.setdefault(itinerary(theta, eps, t, depth), []).append(t)
    return list(groups.values())


def build_lamination(p, q, theta, flavor, level):
    """The level-l restriction of lambda^plus, lambda^minus or their join at theta."""
    _check_pq(p, q)
    theta = angle(theta)
    if not in_closed_interval(theta, p, q):
        lo, hi = characteristic_interval(p, q)
        raise ValueError(f"theta={fmt(theta)} outside [{fmt(lo)}, {fmt(hi)}]")
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    lo, hi = characteristic_interval(p, q)
    if (theta == lo and flavor != "minus") or (theta == hi and flavor != "plus"):
        # at an endpoint the partition cuts A_0; only the one-sided limit survives
        raise ValueError(f"flavor {flavor} is not an alpha-lamination at the endpoint {fmt(theta)}")
    if level < 0:
        raise ValueError("level must be >= 0")
    pts = support(p, q, level)
    depth = level + q
    if flavor == "join":
        uf = _Union(pts)
        for eps in "+-":
            for g in _classes_by_itinerary(theta, eps, pts, depth):
                for t in g[1:]:
                    uf.union(g[0], t)
        classes = uf.groups()
    else:
        classes = _classes_by_itinerary(theta, "+" if flavor == "plus" else "-", pts, depth)
    lam = LevelLamination(p, q, level, pts, classes, (flavor, theta))
    return lam.verify()


def center_lamination(p, q, level):
    """lambda^+(theta1), the lamination of the center of the p/q limb."""
    return build_lamination(p, q, characteristic_interval(p, q)[1], "plus", level)


def _meets_diameter(c, phi):
    ends = (phi, angle(phi + HALF))
    if any(t in ends for t in c):
        return True
    return len({_ccw_between(ends[0], t, ends[1]) for t in c}) == 2


def good_thetas(lam):
    """Angles theta whose diameter {theta/2, theta/2+1/2} misses every hull.

    Returned as a sorted list of (lo, hi, open) pieces: open intervals when
    open is True, single points (lo == hi) otherwise.
    """
    big = lam.nontrivial()
    cuts = sorted({angle(t) % HALF for c in big for t in c} | {Fraction(0)})
    cuts.append(HALF)
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        if not any(_meets_diameter(c, a) for c in big):
            pieces.append((2 * a, 2 * a, False))
        if not any(_meets_diameter(c, (a + b) / 2) for c in big):
            pieces.append((2 * a, 2 * b, True))
    return _merge(pieces)


def _merge(pieces):
    out = []
    for lo, hi, op in pieces:
        if out and out[-1][1] == lo:
            plo, _, pop = out[-1]
            out[-1] = (plo, hi, pop or op)
        else:
            out.append((lo, hi, op))
    return out


@dataclass
class Match:
    theta: tuple            # closed interval (lo, hi) of admissible theta
    flavor: str
    intervals: list         # per level, the pieces of I^(l) inside the limb
    candidates: list = field(default_factory=list)


def match_lamination(target):
    """Find theta and a flavor whose lamination reproduces the target levels."""
    levels = target if isinstance(target, (list, tuple)) else [target.restrict(k) for k in range(target.level + 1)]
    top = levels[-1]
    for lam in levels:
        for kind, c in lam.violations():
            if kind == "unlinked":
                raise NoMatch(f"classes {c[0]} and {c[1]} are linked at level {lam.level}")
        if lam != top.restrict(lam.level):
            raise NoMatch(f"level {lam.level} is not a restriction of level {top.level}")
    p, q, L = top.p, top.q, top.level
    lo0, hi0 = characteristic_interval(p, q)
    intervals = []
    for lam in levels:
        inside = []
        for lo, hi, op in good_thetas(lam):
            a, b = max(lo, lo0), min(hi, hi0)
            if a < b or (a == b and (not op or lo < a < hi)):
                inside.append((a, b))
        intervals.append(inside)
        if not inside:
            break
    if intervals[-1]:
        if len(intervals) < len(levels):
            raise NoMatch("interval computation stopped early")
        comps = intervals[-1]
        for lo, hi in reversed(comps):
            for flavor, th in (("plus", hi), ("minus", lo), ("plus", (lo + hi) / 2)):
                if build_lamination(p, q, th, flavor, L) == top:
                    return Match((lo, hi), flavor, intervals, comps)
        raise NoMatch("no theta in the nested intervals reproduces the target")
    first = len(intervals) - 1
    lam = top.restrict(first)
    cands = []
    for c in lam.nontrivial():
        if any(angle(t + HALF) in c for t in c):
            cands.extend(t for t in sorted(set(m2(t) for t in c)) if lo0 <= t <= hi0)
    good = [t for t in cands if build_lamination(p, q, t, "join", L) == top]
    if not good:
        raise NoMatch(f"I^({first}) is empty and no two-to-one class reproduces the target")
    return Match((good[0], good[0]), "join", intervals, good)
