"""Polynomials over L, Newton polygons and Newton-Puiseux root lifting."""

from fractions import Fraction

from .errors import PrecisionExhausted
from .puiseux import EXACT, INF, Series, as_fraction


class PolyL:
    """Polynomial with Series coefficients, lowest degree first."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=None):
        coeffs = list(coeffs)
        if field is None:
            field = next((c.field for c in coeffs if isinstance(c, Series)), EXACT)
        coeffs = [c if isinstance(c, Series) else Series.const(field.scalar(c), field) for c in coeffs]
        # only exact zeros are dropped; O(t^e) tails stay visible
        while coeffs and coeffs[-1].is_zero() and coeffs[-1].cap is INF:
            coeffs.pop()
        self.coeffs = coeffs
        self.field = field

    @classmethod
    def from_scalars(cls, values, field=EXACT):
        return cls([Series.const(field.scalar(v), field) for v in values], field)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Series.zero(self.field)

    def is_zero(self):
        return not self.coeffs

    def trimmed(self):
        """Drop leading coefficients that vanish modulo their caps."""
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return PolyL(coeffs, self.field)

    def lead(self):
        return self.coeffs[-1]

    def __repr__(self):
        return "PolyL([" + ", ".join(str(c) for c in self.coeffs) + "])"

    def __eq__(self, other):
        if not isinstance(other, PolyL):
            return NotImplemented
        n = max(len(self), len(other))
        return all(self[i] == other[i] for i in range(n))

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self), len(other))
        return PolyL([self[i] + other[i] for i in range(n)], self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        n = max(len(self), len(other))
        return PolyL([self[i] - other[i] for i in range(n)], self.field)

    def __neg__(self):
        return PolyL([-c for c in self.coeffs], self.field)

    def __mul__(self, other):
        if isinstance(other, Series) or not isinstance(other, PolyL):
            s = other if isinstance(other, Series) else Series.const(self.field.scalar(other), self.field)
            return PolyL([c * s for c in self.coeffs], self.field)
        if not self.coeffs or not other.coeffs:
            return PolyL([], self.field)
        out = [Series.zero(self.field) for _ in range(len(self) + len(other) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolyL(out, self.field)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, PolyL):
            return other
        if not isinstance(other, Series):
            other = Series.const(self.field.scalar(other), self.field)
        return PolyL([other], self.field)

    def deriv(self):
        return PolyL([c * k for k, c in enumerate(self.coeffs)][1:], self.field)

    def eval(self, x, limit=INF):
        """Horner evaluation, truncated below ``limit`` when it is finite."""
        if not isinstance(x, Series):
            x = Series.const(self.field.scalar(x), self.field)
        if not self.coeffs:
            return Series.zero(self.field)
        v = x.ord()
        n = len(self.coeffs) - 1
        acc = self.coeffs[-1]
        for k in range(n - 1, -1, -1):
            if limit is INF:
                lim = INF
            elif v is INF:
                lim = limit
            else:
                lim = limit - k * v if v < 0 else limit
            acc = acc.mul(x, limit=lim) + self.coeffs[k]
            if lim is not INF:
                acc = acc.truncate(lim)
        return acc

    __call__ = eval

    def taylor_shift(self, x):
        """Coefficients of p(x + z) as a polynomial in z."""
        if not isinstance(x, Series):
            x = Series.const(self.field.scalar(x), self.field)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + c[j + 1] * x
        return PolyL(c, self.field)

    def compose_affine(self, c, a):
        """p(c + a z)."""
        shifted = self.taylor_shift(c)
        out, power = [], Series.one(self.field)
        for k, coeff in enumerate(shifted.coeffs):
            out.append(coeff * power)
            power = power * a
        return PolyL(out, self.field)

    def ord_gauss(self):
        return min((c.ord() for c in self.coeffs), default=INF)

    def newton_polygon(self):
        return newton_polygon(self)

    def roots(self, target=None):
        return roots(self, target)


class NewtonPolygon:
    """Lower convex hull of the points (i, ord a_i).

    ``segments`` holds (slope, length) pairs; a segment of slope -s and
    length k accounts for k roots of order s.  ``zero_roots`` counts the
    roots at z = 0 coming from vanishing low coefficients.
    """

    def __init__(self, vertices, zero_roots=0):
        self.vertices = vertices
        self.zero_roots = zero_roots
        self.segments = []
        for (i0, v0), (i1, v1) in zip(vertices, vertices[1:]):
            self.segments.append((Fraction(v1 - v0) / (i1 - i0), i1 - i0))

    def root_orders(self):
        """Multiset of root orders announced by the polygon (INF for exact zeros)."""
        out = [INF] * self.zero_roots
        for slope, length in self.segments:
            out.extend([-slope] * length)
        return out

    def __repr__(self):
        return f"NewtonPolygon(segments={self.segments}, zero_roots={self.zero_roots})"


def _lower_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or above the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(p):
    if p.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    points = [(i, c.ord()) for i, c in enumerate(p.coeffs) if c.ord() is not INF]
    zero_roots = points[0][0]
    hull = _lower_hull(points)
    # a coefficient that vanishes only modulo its cap must stay above the hull
    for i, c in enumerate(p.coeffs):
        if c.ord() is INF and c.cap is not INF and i > zero_roots:
            if _below_hull(hull, i, c.cap):
                raise PrecisionExhausted(f"coefficient {i} is too imprecise to fix the Newton polygon")
    return NewtonPolygon(hull, zero_roots)


def _below_hull(hull, i, v):
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        if i0 <= i <= i1:
            return v < v0 + Fraction(v1 - v0) * (i - i0) / (i1 - i0)
    return False


def _residual(p, i0, v0, slope, i1):
    out = []
    for i in range(i0, i1 + 1):
        c = p.coeffs[i]
        if c.ord() is not INF and c.ord() == v0 + slope * (i - i0):
            out.append(c.lead())
        else:
            out.append(p.field.zero)
    return out


def _zero_cap(p, k):
    """Precision to which the k vanishing low coefficients pin the root 0."""
    ak = p.coeffs[k].ord()
    bound = INF
    for j in range(k):
        cj = p.coeffs[j].cap
        if cj is not INF:
            bound = min(bound, Fraction(cj - ak) / (k - j))
    return bound


def _horner_order(q, v):
    """Lower bound, over k >= 1, of ord(q_k) + (k - 1) v."""
    return min(c.ord() + (k - 1) * v for k, c in enumerate(q.coeffs) if k and c.ord() is not INF)


def _newton_lift(q, r, level):
    """Refine the simple root r of q until ord q(r) >= level.

    Each step only computes the terms the quadratic convergence can
    certify, so the working precision roughly doubles per step.  The
    flag returned with the root says whether the last residual already
    met ``level``.
    """
    field = q.field
    dq = q.deriv()
    vd = dq.eval(r).ord()
    if vd is INF:
        raise PrecisionExhausted("derivative vanishes at a simple root")
    goal = level - vd
    v2 = dq.deriv().eval(r).ord() if q.degree > 1 else INF
    gain = INF if v2 is INF else v2 - vd
    last, stalled = None, 0
    dv = None
    done = False
    for _ in range(200):
        reach = goal if dv is None or gain is INF else min(goal, max(2 * dv + gain, dv + 1))
        val = q.eval(r, limit=reach + vd)
        if val.is_zero():
            if reach >= goal:
                done = val.cap is INF or val.cap >= level
                break
            dv = reach
            continue
        dv = val.ord() - vd
        if dv >= goal:
            done = True
            break
        # corrections below the float zero threshold cannot be stored
        stalled = stalled + 1 if dv == last else 0
        if stalled >= 2:
            raise PrecisionExhausted("lifting stalled at the zero threshold of the float backend")
        last = dv
        reach = goal if gain is INF else min(goal, max(2 * dv + gain, dv + 1))
        need = reach - dv
        der = dq.eval(r, limit=vd + need)
        delta = val.mul(der.inverse(rel_prec=need), limit=reach)
        delta = Series._build(field, delta.den, delta.terms, INF)
        if not delta.terms:
            break
        r = r - delta
    else:
        raise PrecisionExhausted("Newton lifting did not converge")
    return r.truncate(goal), done


def _lift(p, lo, level, depth=0):
    """Roots of p of order > lo, refined until ord p(r) reaches ``level``."""
    field = p.field
    out = []
    k = 0
    while k < p.degree and p.coeffs[k].is_zero():
        k += 1
    if k:
        cap = _zero_cap(p, k)
        out.append((Series.zero(field, cap), k, False))
    poly = newton_polygon(p)
    for (i0, v0), (i1, v1) in zip(poly.vertices, poly.vertices[1:]):
        slope = Fraction(v1 - v0) / (i1 - i0)
        s = -slope
        if lo is not None and s <= lo:
            continue
        res = _residual(p, i0, v0, slope, i1)
        for c, m in field.poly_roots(res):
            r0 = Series.monomial(c, s, field)
            if m == 1:
                r, done = _newton_lift(p, r0, level)
                out.append((r, 1, done and depth == 0))
                continue
            if s >= level or depth > 400:
                out.append((r0.truncate(s), m, False))
                continue
            q = p.taylor_shift(r0)
            inner = _lift(q, s, level, depth + 1)
            got = sum(mm for _, mm, _ in inner)
            if got != m:
                raise PrecisionExhausted("lifting lost track of a root cluster")
            for r1, mm, _ in inner:
                out.append((r0 + r1, mm, False))
    return out


def _certify(p, r, level):
    """ord p(r) >= level, r being read as the exact finite sum it stores."""
    r = Series._build(r.field, r.den, r.terms, INF)
    val = p.eval(r, limit=level)
    if val.cap is not INF and val.cap < level:
        return False
    return val.ord() >= level


def roots(p, target=None):
    """Roots with multiplicity; each passes ord(p(r)) >= target + ord(lead)."""
    field = p.field
    if p.coeffs and p.lead().is_zero():
        raise PrecisionExhausted("leading coefficient vanishes modulo its precision")
    if p.degree < 1:
        raise ValueError("roots of a constant polynomial")
    target = field.prec if target is None else as_fraction(target)
    level = target + p.lead().ord()
    work = level
    for _ in range(6):
        found = _lift(p, None, work)
        if sum(m for _, m, _ in found) != p.degree:
            raise PrecisionExhausted("multiplicities do not add up to the degree")
        # top-level Newton roots were certified by their final residual
        bad = [r for r, m, done in found if not (done and work == level) and not _certify(p, r, level)]
        if not bad:
            return [(_exactify(p, r), m) for r, m, _ in found]
        work = work + max(Fraction(4), abs(work) / 2)
    raise PrecisionExhausted("root certificate not reached")


def _exactify(p, r):
    """Mark r exact when it is an exact root of an exact polynomial."""
    if r.cap is INF or not field_exact(p) or len(r) > 8:
        return r
    exact = Series._build(r.field, r.den, r.terms, INF)
    if all(c.cap is INF for c in p.coeffs) and p.eval(exact).is_zero() and p.eval(exact).cap is INF:
        return exact
    return r


def field_exact(p):
    return p.field.exact


def root_orders(found):
    out = []
    for r, m in found:
        out.extend([r.ord()] * m)
    return out
