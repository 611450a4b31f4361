"""Type II points of the Berkovich line over L and the action of rational maps.

A type II point x(c, alpha) is the boundary point of the closed disc
{ord(z - c) >= alpha}, i.e. the disc of radius |t|^alpha about c.  Every type
II point of the projective line is of this form, so one chart suffices for
points; rigid infinity is the sentinel ``INFTY``.

Directions at x(c, alpha) are labelled by P^1(C): the direction containing a
rigid point r with ord(r - c) >= alpha is the residue of (r - c)/t^alpha,
everything outside the disc lies in the direction ``INFTY``.
"""

from fractions import Fraction

from .errors import InexactRoot, PrecisionExhausted
from .newton import PolyL, roots
from .puiseux import EXACT, INF, Series, as_fraction, format_scalar


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_infinity, ())


def _infinity():
    return INFTY


INFTY = _Infinity()


def is_infinity(x):
    return x is INFTY


# ---------------------------------------------------------------------------
# polynomials over the residue field (lists of scalars, low degree first)


def _strip(p, field):
    p = list(p)
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def _padd(a, b, field):
    n = max(len(a), len(b))
    z = field.zero
    return _strip([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)], field)


def _pscale(a, c, field):
    return _strip([x * c for x in a], field)


def _pmul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _strip(out, field)


def _ppow(a, n, field):
    out = [field.one]
    for _ in range(n):
        out = _pmul(out, a, field)
    return out


def _pderiv(a, field):
    return _strip([a[k] * k for k in range(1, len(a))], field)


def _peval(a, z, field):
    acc = field.zero
    for c in reversed(a):
        acc = acc * z + c
    return acc


def _pdivmod(a, b, field):
    a = list(a)
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv = field.one / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = a[i + k] - c * y
        a.pop()
        a = _strip(a, field)
    return _strip(q, field), a


def _pgcd(a, b, field):
    """Monic gcd; the float backend matches roots within eps instead of running Euclid."""
    a, b = _strip(a, field), _strip(b, field)
    if not a:
        return b
    if not b:
        return a
    if field.exact:
        while b:
            _, r = _pdivmod(a, b, field)
            a, b = b, r
        return _pscale(a, field.one / a[-1], field)
    if len(a) < 2 or len(b) < 2:
        return [field.one]
    out = [field.one]
    rb = [r for r, m in field.poly_roots(b) for _ in range(m)]
    for r, m in field.poly_roots(a):
        for _ in range(m):
            for i, s in enumerate(rb):
                if abs(complex(r - s)) <= 1e3 * field.eps ** 0.5:
                    out = _pmul(out, [-r, field.one], field)
                    rb.pop(i)
                    break
    return out




class ComplexRational:
    """Rational map num/den over the residue field, reduced and normalized.

    Normalization: the leading coefficient of the denominator is 1.
    """

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field=EXACT):
        num = _strip([field.scalar(c) for c in num], field)
        den = _strip([field.scalar(c) for c in den], field)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = [field.one]
        else:
            g = _pgcd(num, den, field)
            if len(g) > 1:
                num, _ = _pdivmod(num, g, field)
                den, _ = _pdivmod(den, g, field)
        inv = field.one / den[-1]
        self.num = _pscale(num, inv, field)
        self.den = _pscale(den, inv, field)
        self.field = field

    @classmethod
    def identity(cls, field=EXACT):
        return cls([0, 1], [1], field)

    @property
    def degree(self):
        return max(len(self.num), len(self.den)) - 1 if self.num else 0

    def __call__(self, z):
        f = self.field
        if z is INFTY:
            dn, dd = len(self.num) - 1, len(self.den) - 1
            if dn > dd:
                return INFTY
            if dn < dd:
                return f.zero
            return self.num[-1] / self.den[-1]
        d = _peval(self.den, z, f)
        if f.is_zero(d):
            return INFTY
        return _peval(self.num, z, f) / d

    def compose(self, inner):
        """self o inner."""
        f = self.field
        d = self.degree
        p, q = inner.num, inner.den
        num, den = [], []
        for k in range(d + 1):
            block = _pmul(_ppow(p, k, f), _ppow(q, d - k, f), f)
            if k < len(self.num):
                num = _padd(num, _pscale(block, self.num[k], f), f)
            if k < len(self.den):
                den = _padd(den, _pscale(block, self.den[k], f), f)
        return ComplexRational(num, den, f)

    def __eq__(self, other):
        if not isinstance(other, ComplexRational):
            return NotImplemented
        f = self.field
        if len(self.num) != len(other.num) or len(self.den) != len(other.den):
            return False
        return all(f.eq(a, b) for a, b in zip(self.num + self.den, other.num + other.den))

    def __hash__(self):
        return hash((len(self.num), len(self.den)))

    def fixed_points(self):
        """Fixed points in P^1(C) with multiplicity (d + 1 in total)."""
        f = self.field
        eq = _padd(self.num, _pscale(_pmul(self.den, [f.zero, f.one], f), -f.one, f), f)
        out = list(f.poly_roots(eq)) if len(eq) > 1 else []
        at_inf = self.degree + 1 - (len(eq) - 1 if eq else 0)
        if at_inf > 0:
            out.append((INFTY, at_inf))
        return out

    def multiplier(self, z):
        f = self.field
        if z is INFTY:
            # conjugate by 1/z: S(w) = 1/T(1/w), multiplier S'(0)
            return self._flipped().multiplier(f.zero)
        d = _peval(self.den, z, f)
        dn = _peval(_pderiv(self.num, f), z, f)
        dd = _peval(_pderiv(self.den, f), z, f)
        n = _peval(self.num, z, f)
        return (dn * d - n * dd) / (d * d)

    def _flipped(self):
        f = self.field
        d = self.degree
        rev = lambda p: list(reversed(p + [f.zero] * (d + 1 - len(p))))
        return ComplexRational(rev(self.den), rev(self.num), f)

    def critical_points(self):
        f = self.field
        w = _padd(_pmul(_pderiv(self.num, f), self.den, f),
                  _pscale(_pmul(self.num, _pderiv(self.den, f), f), -f.one, f), f)
        out = list(f.poly_roots(w)) if len(w) > 1 else []
        missing = 2 * self.degree - 2 - sum(m for _, m in out)
        if missing > 0:
            out.append((INFTY, missing))
        return out

    def local_degree_at(self, z):
        """Multiplicity of z as a solution of T(w) = T(z)."""
        f = self.field
        if z is INFTY:
            return self._flipped().local_degree_at(f.zero)
        v = self(z)
        if v is INFTY:
            p = self.den
        else:
            p = _padd(self.num, _pscale(self.den, -v, f), f)
        k = 0
        while p and f.is_zero(_peval(p, z, f)):
            k += 1
            p = _pderiv(p, f)
        return max(k, 1)

    def orbit(self, z, n):
        out = [z]
        for _ in range(n):
            z = out[-1]
            out.append(INFTY if z is INFTY and self(z) is INFTY else self(z))
        return out

    def preperiod(self, z, horizon):
        """(k, p) with T^k(z) periodic of period p, or None within ``horizon`` steps."""
        f = self.field
        orbit = [z]
        for n in range(1, horizon + 1):
            w = self(orbit[-1])
            for k, u in enumerate(orbit):
                if _same(u, w, f):
                    return k, n - k
            orbit.append(w)
        return None

    def fate(self, z, horizon):
        """Forward orbit type of z.

        Returns ("preperiodic", (k, p)), ("wandering", witness) or ("unknown", horizon).
        Over Q(i) the answer is always decided: Mobius maps through their order,
        higher degree through the height bound of ``heights``.
        """
        f = self.field
        if f.exact and self.degree == 1:
            if _mobius_order(self) is None:
                fixed = [w for w, _ in self.fixed_points()]
                if any(_same(w, z, f) for w in fixed):
                    return "preperiodic", (0, 1)
                return "wandering", "Mobius map of infinite order, point not fixed"
            return "preperiodic", self.preperiod(z, 12)
        bound = None
        if f.exact and self.degree >= 2:
            from .heights import escape_constant, height
            bound = escape_constant(self.num, self.den)
        orbit = [z]
        for n in range(1, horizon + 1):
            w = self(orbit[-1])
            for k, u in enumerate(orbit):
                if _same(u, w, f):
                    return "preperiodic", (k, n - k)
            orbit.append(w)
            if bound is not None and height(None if w is INFTY else w) > bound:
                return "wandering", f"height of T^{n}(z) exceeds {bound:.3f}"
        return "unknown", horizon

    def __repr__(self):
        return f"ComplexRational({self})"

    def __str__(self):
        def poly(p):
            terms = []
            for k, c in enumerate(p):
                if self.field.is_zero(c):
                    continue
                mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                terms.append(format_scalar(c) + ("*" + mono if mono else ""))
            return " + ".join(terms) or "0"

        if len(self.den) == 1:
            return poly(self.num)
        return f"({poly(self.num)})/({poly(self.den)})"


def _same(u, w, field):
    if u is INFTY or w is INFTY:
        return u is w
    return field.eq(u, w)


# ---------------------------------------------------------------------------
# points


def _canonical(center, alpha):
    if center.cap is not INF and center.cap < alpha:
        raise PrecisionExhausted(f"center known to order {center.cap}, point needs {alpha}")
    bound = alpha * center.den
    kept = [(n, c) for n, c in center.terms if n < bound]
    return Series._build(center.field, center.den, kept, INF)


class Point:
    """The type II point x(center, alpha)."""

    __slots__ = ("center", "alpha")

    def __init__(self, center, alpha, field=EXACT):
        alpha = as_fraction(alpha)
        if not isinstance(center, Series):
            center = Series.const(field.scalar(center), field)
        self.center = _canonical(center, alpha)
        self.alpha = alpha

    @property
    def field(self):
        return self.center.field

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.alpha == other.alpha and (self.center - other.center).ord() >= self.alpha

    def __hash__(self):
        return hash((self.alpha, self.center.key()))

    def __repr__(self):
        return f"x({self.center}, {self.alpha})"

    def label(self):
        a = self.alpha
        a = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return f"x[{self.center}; {a}]"

    def is_gauss(self):
        return self.alpha == 0 and self.center.is_zero()

    def contains(self, r):
        """Is the rigid point r in the closed disc of this point?"""
        if r is INFTY:
            return False
        d = r - self.center
        if d.cap is not INF and d.cap < self.alpha and d.ord() >= d.cap:
            raise PrecisionExhausted("rigid point not known precisely enough")
        return d.ord() >= self.alpha

    def below(self, y):
        """Is the type II point y in the closed disc of this point (y != self allowed)?"""
        return y.alpha >= self.alpha and (y.center - self.center).ord() >= self.alpha

    def slot(self, y):
        """Label in P^1(C) of the direction at this point containing y."""
        f = self.field
        if y is INFTY:
            return INFTY
        if isinstance(y, Point):
            if y == self:
                raise ValueError("a point does not lie in a direction at itself")
            if not self.below(y) or y.alpha == self.alpha:
                return INFTY
            return (y.center - self.center).coeff(self.alpha)
        if not self.contains(y):
            return INFTY
        d = y - self.center
        if d.cap is not INF and d.cap <= self.alpha and d.ord() >= d.cap:
            raise PrecisionExhausted("direction of a rigid point not certified")
        return d.coeff(self.alpha) if d.ord() == self.alpha else f.zero

    def toward(self, s, depth=1):
        """The point at distance ``depth`` from here inside the direction s."""
        depth = as_fraction(depth)
        if s is INFTY:
            return Point(self.center, self.alpha - depth)
        c = self.center + Series.monomial(s, self.alpha, self.field)
        return Point(c, self.alpha + depth)


def gauss(field=EXACT):
    return Point(Series.zero(field), 0)


def join_exponent(x, y):
    """Exponent of the smallest disc containing both points."""
    return min(x.alpha, y.alpha, (x.center - y.center).ord())


def hyperbolic_distance(x, y):
    j = join_exponent(x, y)
    return (x.alpha - j) + (y.alpha - j)


def join(x, y):
    return Point(x.center, join_exponent(x, y))


def on_segment(p, a, b):
    """Is the type II point p on the segment [a, b] (a, b rigid or type II)?"""
    if isinstance(a, Point) and a == p or isinstance(b, Point) and b == p:
        return True
    sa, sb = p.slot(a), p.slot(b)
    return not _same(sa, sb, p.field)


def segment_points(a, b, step=Fraction(1)):
    """Sample type II points of [a, b] (type II endpoints) at integer-ish spacing."""
    j = join(a, b)
    out = []
    for end in (a, b):
        e = end.alpha
        while e > j.alpha:
            out.append(Point(end.center, e))
            e -= step
    out.append(j)
    return out


# ---------------------------------------------------------------------------
# maps


def _resultant2(n, d):
    """Resultant of two polynomials read as binary forms of degree 2."""
    a0, a1, a2 = n[0], n[1], n[2]
    b0, b1, b2 = d[0], d[1], d[2]
    return ((a2 * b0 - a0 * b2) ** 2
            - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1))


class QuadraticMap:
    """phi = num/den with num, den of degree <= 2 over L."""

    __slots__ = ("num", "den", "source")

    def __init__(self, num, den, source=None, check=True):
        self.num = num if isinstance(num, PolyL) else PolyL(num)
        self.den = den if isinstance(den, PolyL) else PolyL(den, self.num.field)
        self.source = source
        if check:
            if max(self.num.degree, self.den.degree) > 2:
                raise ValueError("map has degree larger than 2")
            if _resultant2(self.num, self.den).is_zero():
                raise ValueError("map is degenerate: numerator and denominator share a root")

    @classmethod
    def parse(cls, text, field=EXACT):
        from .parse import parse_expression

        rf = parse_expression(text, field)
        return cls(rf.num, rf.den, source=text)

    @property
    def field(self):
        return self.num.field

    def __repr__(self):
        if self.source:
            return f"QuadraticMap({self.source!r})"
        return f"QuadraticMap({self.num!r} / {self.den!r})"

    def __call__(self, z, prec=None):
        f = self.field
        if z is INFTY:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INFTY
            if dn < dd:
                return Series.zero(f)
            return self.num.lead() / self.den.lead()
        d = self.den.eval(z)
        if d.is_zero():
            if d.cap is INF:
                return INFTY
            raise PrecisionExhausted("cannot tell whether the point is a pole")
        n = self.num.eval(z)
        return n.mul(d.inverse(rel_prec=prec))

    def wronskian(self):
        n, d = self.num, self.den
        return n.deriv() * d - n * d.deriv()

    def swapped(self):
        """The same map in the chart xi = 1/zeta on both sides' source: phi(1/xi)."""
        f = self.field
        rev = lambda p: PolyL(list(reversed([p[i] for i in range(3)])), f)
        return QuadraticMap(rev(self.num), rev(self.den), check=False)


def _gauss_reduction(p):
    """(ord, residue coefficients) of a PolyL with respect to the Gauss norm."""
    f = p.field
    v = INF
    for c in p.coeffs:
        o = c.ord()
        if o is not INF and o < v:
            v = o
    if v is INF:
        raise PrecisionExhausted("polynomial vanishes modulo its precision")
    out = []
    for c in p.coeffs:
        if c.cap is not INF and c.cap <= v and c.ord() >= c.cap:
            raise PrecisionExhausted("coefficient not known to the Gauss order")
        out.append(c.coeff(v) if c.ord() == v else f.zero)
    return v, _strip(out, f)


def _proportional(n, d, field):
    """c with n = c * d as polynomials, or None."""
    k = next(i for i, x in enumerate(d) if not field.is_zero(x))
    if len(n) != len(d):
        return None
    c = n[k] / d[k]
    if all(field.eq(a, c * b) for a, b in zip(n, d)):
        return c
    return None


class _Image:
    __slots__ = ("point", "tangent", "num", "den")

    def __init__(self, point, tangent, num, den):
        self.point, self.tangent, self.num, self.den = point, tangent, num, den


_MAX_PEEL = 400


def _image(phi, x):
    f = phi.field
    scale = Series.monomial(1, x.alpha, f)
    num = phi.num.compose_affine(x.center, scale)
    den = phi.den.compose_affine(x.center, scale)
    center = Series.zero(f)
    for _ in range(_MAX_PEEL):
        vn, rn = _gauss_reduction(num)
        vd, rd = _gauss_reduction(den)
        a = vn - vd
        c = _proportional(rn, rd, f)
        if c is None:
            tangent = ComplexRational(rn, rd, f)
            return _Image(Point(center, a), tangent, num, den)
        shift = Series.monomial(c, a, f)
        center = center + shift
        num = num - den * shift
    raise PrecisionExhausted("image point not reached")


def map_point(phi, x):
    """phi(x) for a type II point x."""
    return _image(phi, x).point


def tangent_map(phi, x, n=1):
    """Tangent map of phi^n at x in the canonical coordinates of x and phi^n(x)."""
    t = ComplexRational.identity(phi.field)
    for _ in range(n):
        im = _image(phi, x)
        t = im.tangent.compose(t)
        x = im.point
    return t


def iterate_point(phi, x, n=1):
    for _ in range(n):
        x = map_point(phi, x)
    return x


def orbit(phi, x, n):
    out = [x]
    for _ in range(n):
        out.append(map_point(phi, out[-1]))
    return out


def local_degree(phi, x):
    return _image(phi, x).tangent.degree


# directions


class Direction:
    __slots__ = ("at", "slot")

    def __init__(self, at, slot):
        self.at, self.slot = at, slot

    def __repr__(self):
        return f"Direction({self.at!r}, {self.slot!r})"

    def __eq__(self, other):
        return (isinstance(other, Direction) and self.at == other.at
                and _same(self.slot, other.slot, self.at.field))

    def contains(self, y):
        if isinstance(y, Point) and y == self.at:
            return False
        return _same(self.at.slot(y), self.slot, self.at.field)


class DirectionReport:
    __slots__ = ("good", "image", "degree", "surplus")

    def __init__(self, good, image, degree, surplus):
        self.good, self.image, self.degree, self.surplus = good, image, degree, surplus

    def __repr__(self):
        if self.good:
            return f"good(image={self.image!r}, k={self.degree})"
        return f"bad(surplus={self.surplus})"


# residues tried when a generic point of a direction is needed; on the exact
# backend some of them give roots outside Q(i) and are skipped
_PROBES = tuple([1, -1, 2, 3, (0, 1), -2, 5, (1, 1), 7, (2, -1)]
                + [(a, b) for a in range(-6, 7) for b in range(-6, 7) if abs(a) + abs(b) > 2]
                + [Fraction(a, b) for b in (2, 3, 4, 5) for a in range(-12, 13) if a % b])


def _fiber(phi, w, prec):
    """Rigid solutions of phi(z) = w with multiplicity, INFTY included."""
    f = phi.field
    if w is INFTY:
        p = phi.den
    else:
        p = phi.num - phi.den * w
    p = p.trimmed()
    out = []
    if p.degree >= 1:
        out = roots(p, prec)
    deficit = 2 - sum(m for _, m in out)
    if deficit > 0:
        out.append((INFTY, deficit))
    return out


def _probe_values(x, avoid=()):
    f = x.field
    for u in _PROBES:
        s = f.scalar(u)
        if any(a is not INFTY and f.eq(a, s) for a in avoid):
            continue
        yield s


def classify_direction(phi, d, prec=None):
    """Good/bad status of the direction d, with image, degree and surplus."""
    f = phi.field
    x = d.at
    im = _image(phi, x)
    t = im.tangent
    target = t(d.slot)
    k = t.local_degree_at(d.slot)
    y = im.point
    prec = _work_prec(x, y, prec)
    for u in _probe_values(y, avoid=(target,)):
        w = y.center + Series.monomial(u, y.alpha, f)
        try:
            fib = _fiber(phi, w, prec)
            surplus = sum(m for z, m in fib if _same(x.slot(z), d.slot, f))
        except (PrecisionExhausted, InexactRoot):
            continue
        image = Direction(y, target)
        return DirectionReport(surplus == 0, image, k, surplus)
    raise PrecisionExhausted("no probe value separated the direction")


def _work_prec(x, y, prec):
    base = x.field.prec if prec is None else as_fraction(prec)
    return base + abs(x.alpha) + abs(y.alpha)


def _ball_preimage(phi, z, x, w):
    """Point x(z, beta) mapping onto x, for a root z of phi = w; None if the disc holds a pole."""
    shifted = (phi.num - phi.den * w).taylor_shift(z)
    dshift = phi.den.taylor_shift(z)
    od = dshift[0].ord()
    if od is INF:
        return None
    target = x.alpha + od
    cands = []
    for k in (1, 2):
        o = shifted[k].ord()
        if o is not INF:
            cands.append((target - o) / k)
    if not cands:
        return None
    beta = max(cands)
    try:
        y = Point(z, beta)
    except PrecisionExhausted:
        raise
    if map_point(phi, y) == x:
        return y
    return None


def _from_swapped(p):
    """Convert x(c, beta) in the chart xi = 1/zeta back to the zeta chart."""
    c, beta = p.center, p.alpha
    v = c.ord()
    if v >= beta:
        return Point(Series.zero(c.field), -beta)
    inv = c.inverse(rel_prec=beta - v + 1)
    return Point(inv, beta - 2 * v)


def preimages(phi, x, prec=None):
    """Type II points y with phi(y) = x, with multiplicity (summing to 2)."""
    full = _work_prec(x, x, prec) + 4
    last_error = None
    # cheap precision first; most preimage centers are needed only to a few terms
    for p in sorted({min(full, abs(x.alpha) + 4), min(full, 2 * abs(x.alpha) + 10), full}):
        try:
            return _preimages(phi, x, p)
        except (PrecisionExhausted, InexactRoot) as exc:
            last_error = exc
    raise last_error


def _preimages(phi, x, prec):
    f = phi.field
    psi = phi.swapped()
    found = []
    last_error = None
    for u in _probe_values(x):
        w = x.center + Series.monomial(u, x.alpha, f)
        try:
            found = []
            for chart, m, back in ((phi, phi, None), (psi, psi, _from_swapped)):
                for z, mult in _fiber(chart, w, prec):
                    if z is INFTY:
                        continue
                    y = _ball_preimage(chart, z, x, w)
                    if y is None:
                        continue
                    if back is not None:
                        y = back(y)
                    if map_point(phi, y) == x and y not in found:
                        found.append(y)
            if found:
                break
        except (PrecisionExhausted, InexactRoot) as exc:
            last_error = exc
            continue
    if not found:
        raise last_error or PrecisionExhausted("no preimage certified")
    if len(found) == 1:
        return [(found[0], 2)]
    if len(found) == 2:
        return [(found[0], 1), (found[1], 1)]
    raise PrecisionExhausted("more than two preimages found")


def _mobius_order(t, limit=12):
    """Order of a Mobius map when it is at most ``limit`` (12 covers every finite order over Q(i))."""
    ident = ComplexRational.identity(t.field)
    g = ident
    for n in range(1, limit + 1):
        g = t.compose(g)
        if g == ident:
            return n
    return None
