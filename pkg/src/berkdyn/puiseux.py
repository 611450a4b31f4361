"""Truncated Puiseux series over Q(i) (exact) or C (floating point).

A series is a finite sum of terms c * t^e with rational exponents e, known
modulo O(t^cap).  The cap is ``INF`` for series that are known exactly, such
as the coefficients of a map typed in by hand.

Exponents are stored as integers over a common denominator; the
denominator is the lcm of the reduced term denominators.
"""

import cmath

import gmpy2
import math
from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, InexactRoot, NotIntegral, PrecisionExhausted

INF = math.inf

# working precision of the float backend, in bits
FLOAT_BITS = 128
_CTX = gmpy2.context(precision=FLOAT_BITS)
gmpy2.set_context(_CTX)
_MPC = type(gmpy2.mpc(0))


def _mpc(re, im=0):
    if isinstance(re, Fraction):
        re = gmpy2.mpq(re.numerator, re.denominator)
    if isinstance(im, Fraction):
        im = gmpy2.mpq(im.numerator, im.denominator)
    return gmpy2.mpc(gmpy2.mpfr(re), gmpy2.mpfr(im))


def _lcm(a, b):
    return a * b // gcd(a, b)


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot read {x!r} as a rational")


class GaussQ:
    """Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussQ(x, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return GaussQ(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussQ(a * c, 0)
            return GaussQ(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussQ(self.re * other, self.im * other)
        return complex(self) * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero scalar")
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussQ((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return GaussQ(1) / (self ** (-n))
        result, base = GaussQ(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(float(self.norm()))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _rationalize(z, tol=1e-7):
    """Candidate Gaussian rationals near the complex number z."""
    out = []
    for bound in (1, 2, 4, 12, 60, 840, 10**4, 10**6, 10**8):
        re = Fraction(z.real).limit_denominator(bound)
        im = Fraction(z.imag).limit_denominator(bound)
        if abs(float(re) - z.real) <= tol * (1 + abs(z)) and abs(float(im) - z.imag) <= tol * (1 + abs(z)):
            cand = GaussQ(re, im)
            if not out or out[-1] != cand:
                out.append(cand)
    return out


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs):
    return [c * k for k, c in enumerate(coeffs)][1:]


class Field:
    """Residue-field backend plus the session precision.

    ``kind`` is ``"exact"`` (scalars are GaussQ) or ``"float"`` (gmpy2 mpc
    at FLOAT_BITS of working precision).
    ``eps`` is the zero-test threshold of the float backend and ``prec`` the
    relative precision used when an operation produces an infinite series.
    """

    def __init__(self, kind="exact", eps=1e-20, prec=24):
        if kind not in ("exact", "float"):
            raise ValueError(f"unknown backend {kind!r}")
        self.kind = kind
        self.eps = eps
        self.prec = as_fraction(prec)

    @property
    def exact(self):
        return self.kind == "exact"

    def __repr__(self):
        if self.exact:
            return f"Field('exact', prec={self.prec})"
        return f"Field('float', eps={self.eps}, prec={self.prec})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.eps, self.prec) == (other.kind, other.eps, other.prec)

    def __hash__(self):
        return hash((self.kind, self.eps, self.prec))

    def with_prec(self, prec):
        return Field(self.kind, self.eps, prec)

    # scalars

    def scalar(self, x, im=None):
        if im is not None:
            x = (x, im)
        if isinstance(x, tuple):
            re, im = x
            if self.exact:
                return GaussQ(as_fraction(re), as_fraction(im))
            return _mpc(as_fraction(re) if isinstance(re, (int, Fraction)) else float(re),
                        as_fraction(im) if isinstance(im, (int, Fraction)) else float(im))
        if self.exact:
            if isinstance(x, GaussQ):
                return x
            if isinstance(x, (int, Fraction)):
                return GaussQ(x)
            if isinstance(x, float):
                return GaussQ(as_fraction(x))
            raise InexactRoot(f"exact backend cannot hold the scalar {x!r}")
        if isinstance(x, _MPC):
            return x
        if isinstance(x, GaussQ):
            return _mpc(x.re, x.im)
        if isinstance(x, (int, Fraction)):
            return _mpc(as_fraction(x))
        x = complex(x)
        return _mpc(x.real, x.imag)

    @property
    def zero(self):
        return GaussQ(0) if self.exact else _mpc(0)

    @property
    def one(self):
        return GaussQ(1) if self.exact else _mpc(1)

    def is_zero(self, c):
        if isinstance(c, GaussQ):
            return not c
        if isinstance(c, _MPC):
            return gmpy2.norm(c) <= self.eps * self.eps
        return abs(c) <= self.eps

    def eq(self, a, b):
        return self.is_zero(a - b)

    def to_complex(self, c):
        return complex(c)

    def nth_root(self, c, m):
        """Principal m-th root: exp(log(c)/m) with arg in (-pi, pi]."""
        if m == 1:
            return c
        z = complex(c)
        if z == 0:
            return self.zero
        if not self.exact:
            return gmpy2.exp(gmpy2.log(c) / m)
        r = cmath.exp(cmath.log(z) / m)
        for cand in _rationalize(r):
            if cand ** m == c:
                return cand
        raise InexactRoot(f"{c!r} has no {m}-th root in Q(i)")

    def power(self, c, r):
        r = as_fraction(r)
        root = self.nth_root(c, r.denominator)
        return root ** r.numerator

    def poly_roots(self, coeffs):
        """Roots with multiplicity of a polynomial given low to high degree."""
        coeffs = list(coeffs)
        while coeffs and self.is_zero(coeffs[-1]):
            coeffs.pop()
        n = len(coeffs) - 1
        if n < 1:
            return []
        approx = _numeric_roots([complex(c) for c in coeffs])
        work = [complex(c) for c in coeffs] if self.exact else coeffs
        if not self.exact:
            approx = [_mpc(z.real, z.imag) for z in approx]
        clusters = _cluster(approx, work)
        out = []
        for center, m in clusters:
            if self.exact:
                out.append((self._exact_root(coeffs, center, m), m))
            else:
                out.append((center, m))
        return out

    def _exact_root(self, coeffs, center, m):
        for cand in _rationalize(center, tol=1e-5):
            ders = coeffs
            ok = True
            for _ in range(m):
                if _horner(ders, cand):
                    ok = False
                    break
                ders = _derivative(ders)
            if ok:
                return cand
        raise InexactRoot(f"root near {center:.6g} is not in Q(i)")


def _numeric_roots(coeffs):
    import numpy as np

    roots = np.roots(list(reversed(coeffs)))
    return [complex(r) for r in roots]


def _polish(coeffs, z, m):
    """Newton on the (m-1)-th derivative, where a root of multiplicity m is simple."""
    d = coeffs
    for _ in range(m - 1):
        d = _derivative(d)
    dd = _derivative(d)
    for _ in range(30):
        fz = _horner(d, z)
        dz = _horner(dd, z)
        if dz == 0:
            break
        step = fz / dz
        z -= step
        if abs(step) <= 1e-40 * (1 + abs(z)):
            break
    return z


def _cluster(approx, coeffs):
    scale = max(abs(c) for c in coeffs)
    lead = abs(coeffs[-1])
    approx = sorted(approx, key=lambda z: (float(z.real), float(z.imag)))
    groups = []
    for z in approx:
        for g in groups:
            if abs(g[0] - z) <= 1e-4 * (1 + abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    out = []
    for g in groups:
        m = len(g)
        center = sum(g) / m
        if m > 1:
            center = _polish(coeffs, center, m)
            # confirm the multiplicity, otherwise split the cluster
            d = coeffs
            ok = True
            for _ in range(m - 1):
                if abs(_horner(d, center)) > 1e-6 * scale * (1 + abs(center)) ** len(d):
                    ok = False
                d = _derivative(d)
            if not ok:
                for z in g:
                    out.append((_polish(coeffs, z, 1), 1))
                continue
        else:
            center = _polish(coeffs, center, 1) if lead else center
        out.append((center, m))
    return out


EXACT = Field("exact")
FLOAT = Field("float")


def _exp_key(num, den):
    return Fraction(num, den)


class Series:
    """Element of L known modulo O(t^cap)."""

    __slots__ = ("field", "den", "terms", "cap")

    def __init__(self, field, den, terms, cap):
        self.field = field
        self.den = den
        self.terms = terms
        self.cap = INF if isinstance(cap, float) else cap

    # construction

    @classmethod
    def _build(cls, field, den, items, cap, scales=None):
        """items: iterable of (integer numerator over den, coeff).

        ``scales`` (float backend) maps a numerator to the size of the
        operands that produced it; cancellation is then judged relative
        to that size so rounding noise is not mistaken for a term.
        """
        if isinstance(cap, float):
            cap = INF
        bound = None if cap is INF else math.ceil(cap * den)
        if scales is not None and not field.exact:
            eps2 = field.eps * field.eps
            norm, get = gmpy2.norm, scales.get
            kept = [(n, c) for n, c in items
                    if (bound is None or n < bound) and norm(c) > eps2 * max(1.0, get(n, 0.0)) ** 2]
        else:
            is_zero = field.is_zero
            kept = [(n, c) for n, c in items if (bound is None or n < bound) and not is_zero(c)]
        kept.sort(key=lambda nc: nc[0])
        if kept:
            g = den
            for n, _ in kept:
                g = gcd(g, n)
                if g == 1:
                    break
            if g > 1:
                den //= g
                kept = [(n // g, c) for n, c in kept]
        else:
            den = 1
        return cls(field, den, tuple(kept), cap)

    @classmethod
    def from_terms(cls, pairs, cap=INF, field=EXACT):
        """Build from (exponent, coefficient) pairs; repeated exponents add up."""
        pairs = [(as_fraction(e), field.scalar(c)) for e, c in pairs]
        cap = cap if cap is INF else as_fraction(cap)
        den = 1
        for e, _ in pairs:
            den = _lcm(den, e.denominator)
        acc = {}
        for e, c in pairs:
            n = e.numerator * (den // e.denominator)
            acc[n] = acc[n] + c if n in acc else c
        return cls._build(field, den, acc.items(), cap)

    @classmethod
    def const(cls, c, field=EXACT):
        return cls.from_terms([(0, c)], INF, field)

    @classmethod
    def monomial(cls, c, e, field=EXACT):
        return cls.from_terms([(e, c)], INF, field)

    @classmethod
    def zero(cls, field=EXACT, cap=INF):
        return cls(field, 1, (), cap if cap is INF else as_fraction(cap))

    @classmethod
    def one(cls, field=EXACT):
        return cls.const(1, field)

    @classmethod
    def t(cls, field=EXACT):
        return cls.monomial(1, 1, field)

    # accessors

    def items(self):
        """(Fraction exponent, coefficient) pairs in increasing order."""
        return [(Fraction(n, self.den), c) for n, c in self.terms]

    def exponents(self):
        return [Fraction(n, self.den) for n, _ in self.terms]

    def ord(self):
        """Least stored exponent; INF for a series that is zero modulo its cap."""
        if not self.terms:
            return INF
        return Fraction(self.terms[0][0], self.den)

    def lead(self):
        if not self.terms:
            raise PrecisionExhausted("leading coefficient of a zero series")
        return self.terms[0][1]

    def coeff(self, e):
        e = as_fraction(e)
        if e.denominator == 0:
            return self.field.zero
        n = e * self.den
        if n.denominator != 1:
            return self.field.zero
        n = int(n)
        for m, c in self.terms:
            if m == n:
                return c
            if m > n:
                break
        return self.field.zero

    def residue(self):
        """Reduction modulo the maximal ideal."""
        v = self.ord()
        if v is INF:
            if self.cap is not INF and self.cap <= 0:
                raise PrecisionExhausted("residue of a series not known to order 0")
            return self.field.zero
        if v < 0:
            raise NotIntegral(f"series of order {v} has no residue")
        if v > 0:
            if self.cap is not INF and self.cap <= 0:
                raise PrecisionExhausted("residue not certified")
            return self.field.zero
        return self.terms[0][1]

    def is_zero(self):
        """True when no term survives below the cap."""
        return not self.terms

    def is_exact(self):
        return self.cap is INF

    def is_monomial(self):
        return len(self.terms) == 1 and self.cap is INF

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Series):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing series from different backends")
            return other
        return Series.const(self.field.scalar(other), self.field)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms and other.cap is INF:
            return self
        if not self.terms and self.cap is INF:
            return other
        den = _lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        acc = {}
        for n, c in self.terms:
            acc[n * a] = c
        if self.field.exact:
            for n, c in other.terms:
                k = n * b
                acc[k] = acc[k] + c if k in acc else c
            return Series._build(self.field, den, acc.items(), min(self.cap, other.cap))
        scales = {}
        for n, c in other.terms:
            k = n * b
            if k in acc:
                scales[k] = max(float(abs(acc[k])), float(abs(c)))
                acc[k] = acc[k] + c
            else:
                acc[k] = c
        return Series._build(self.field, den, acc.items(), min(self.cap, other.cap), scales)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.field, self.den, tuple((n, -c) for n, c in self.terms), self.cap)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = self.field.scalar(c)
        if self.field.is_zero(c):
            return Series.zero(self.field, self.cap if self.cap is INF else INF)
        return Series._build(self.field, self.den, [(n, x * c) for n, x in self.terms], self.cap)

    def shift(self, e):
        """Multiply by t^e."""
        e = as_fraction(e)
        den = _lcm(self.den, e.denominator)
        a = den // self.den
        s = e.numerator * (den // e.denominator)
        cap = self.cap if self.cap is INF else self.cap + e
        return Series._build(self.field, den, [(n * a + s, c) for n, c in self.terms], cap)

    def mul(self, other, limit=INF):
        """Product, additionally truncated below ``limit``."""
        other = self._coerce(other)
        v1, v2 = self.ord(), other.ord()
        cap = min(self.cap + v2 if self.cap is not INF else INF,
                  other.cap + v1 if other.cap is not INF else INF)
        if isinstance(cap, float) and math.isnan(cap):
            cap = INF
        if not self.terms or not other.terms:
            # zero times something: exact zero stays exact
            if cap is INF or (isinstance(cap, float) and math.isinf(cap)):
                cap = INF
            return Series.zero(self.field, min(cap, limit))
        cap = min(cap, limit)
        if isinstance(cap, float):
            cap = INF
        den = _lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        bound = None if cap is INF else math.ceil(cap * den)
        acc = {}
        right = [(n * b, c) for n, c in other.terms]
        if self.field.exact:
            scales = None
            for n1, c1 in self.terms:
                k1 = n1 * a
                for n2, c2 in right:
                    k = k1 + n2
                    if bound is not None and k >= bound:
                        break
                    prod = c1 * c2
                    acc[k] = acc[k] + prod if k in acc else prod
        else:
            # operand sizes as plain floats; they only steer the zero test
            scales = {}
            right = [(n2, c2, float(abs(c2))) for n2, c2 in right]
            for n1, c1 in self.terms:
                k1 = n1 * a
                m1 = float(abs(c1))
                for n2, c2, m2 in right:
                    k = k1 + n2
                    if bound is not None and k >= bound:
                        break
                    if k in acc:
                        acc[k] += c1 * c2
                        scales[k] += m1 * m2
                    else:
                        acc[k] = c1 * c2
                        scales[k] = m1 * m2
        return Series._build(self.field, den, acc.items(), cap, scales)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def truncate(self, limit):
        """Forget everything from t^limit on."""
        if limit is INF:
            return self
        limit = as_fraction(limit)
        cap = min(self.cap, limit)
        return Series._build(self.field, self.den, self.terms, cap)

    def inverse(self, rel_prec=None):
        v = self.ord()
        if v is INF:
            raise DivisionByZero("divisor is zero modulo its precision")
        c = self.terms[0][1]
        if len(self.terms) == 1 and self.cap is INF:
            return Series.monomial(self.field.one / c, -v, self.field)
        return self._unit_power(-1, rel_prec)

    def _unit_power(self, r, rel_prec):
        """self^r to relative precision rel_prec, for a rational r.

        Writes self = c t^v (1 + h) and runs the recurrence for the
        coefficients of (1 + h)^r in s = t^(1/den); the cost is linear in
        the number of output terms times the number of terms of h.
        """
        field = self.field
        v = self.ord()
        c0 = self.terms[0][1]
        rp = field.prec if rel_prec is None else as_fraction(rel_prec)
        if self.cap is not INF:
            rp = min(rp, self.cap - v)
        if rp <= 0:
            raise PrecisionExhausted("no certified terms left")
        den = self.den
        n0 = self.terms[0][0]
        inv0 = field.one / c0
        a = [(n - n0, x * inv0) for n, x in self.terms[1:]]
        total = math.ceil(rp * den)
        coeffs = [field.zero] * total
        coeffs[0] = field.one
        exact = field.exact
        scales = None if exact else {0: 1}
        rr = field.scalar(as_fraction(r) + 1)
        for k in range(1, total):
            acc = field.zero
            size = 0
            for nj, aj in a:
                if nj > k:
                    break
                ck = coeffs[k - nj]
                if not ck:
                    continue
                term = aj * ck * (rr * nj - k)
                acc = acc + term
                if not exact:
                    size += abs(term)
            acc = acc / k
            coeffs[k] = acc
            if not exact:
                scales[k] = size / k
                if abs(acc) <= field.eps * max(1, size / k):
                    coeffs[k] = field.zero
        lead = field.power(c0, r)
        items = [(k, x * lead) for k, x in enumerate(coeffs) if x]
        unit = Series._build(field, den, items, Fraction(total, den), scales)
        return unit.truncate(rp).shift(v * as_fraction(r))

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self.mul(other.inverse())
        c = self.field.scalar(other)
        if self.field.is_zero(c):
            raise DivisionByZero("division by a zero scalar")
        return self.scale(self.field.one / c)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator != 1:
            return self.pow_rational(n)
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Series.one(self.field), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def pow_rational(self, r, rel_prec=None):
        """f^r using the principal root of the leading coefficient."""
        r = as_fraction(r)
        if r.denominator == 1:
            return self ** int(r)
        v = self.ord()
        if v is INF:
            if r > 0:
                cap = INF if self.cap is INF else self.cap * r
                return Series.zero(self.field, cap)
            raise DivisionByZero("negative power of a zero series")
        c = self.terms[0][1]
        if len(self.terms) == 1 and self.cap is INF:
            return Series.monomial(self.field.power(c, r), v * r, self.field)
        return self._unit_power(r, rel_prec)

    # comparison

    def __eq__(self, other):
        if not isinstance(other, Series):
            try:
                other = self._coerce(other)
            except Exception:
                return NotImplemented
        if self.cap != other.cap:
            return False
        if self.field.exact and other.field.exact:
            return self.den == other.den and self.terms == other.terms
        return (self - other).is_zero()

    def __hash__(self):
        if not self.field.exact:
            raise TypeError("float-backend series are not hashable")
        return hash((self.den, self.terms, self.cap))

    def agrees(self, other, upto):
        """ord(self - other) >= upto, with both known at least that far."""
        d = self - other
        if d.cap is not INF and d.cap < upto:
            raise PrecisionExhausted(f"difference only known to order {d.cap}")
        return d.ord() >= upto

    def __repr__(self):
        return f"Series({format_series(self)!r})"

    def __str__(self):
        return format_series(self)

    def key(self):
        """Hashable key, exact backend only (float keys are rounded)."""
        if self.field.exact:
            return (self.den, self.terms, self.cap)
        return (self.den, tuple((n, round(float(c.real), 7), round(float(c.imag), 7)) for n, c in self.terms), self.cap)


def _fmt_rat(x):
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(c):
    if isinstance(c, GaussQ):
        return f"({_fmt_rat(c.re)},{_fmt_rat(c.im)})"
    c = complex(c)
    return f"({c.real!r},{c.imag!r})"


def format_series(f):
    """Canonical text form, e.g. ``(1,0)*t^(1/2) + (-1,0)*t^(1/1) + O(t^(3/1))``."""
    parts = []
    for e, c in f.items():
        parts.append(f"{format_scalar(c)}*t^({e.numerator}/{e.denominator})")
    if f.cap is not INF:
        parts.append(f"O(t^({f.cap.numerator}/{f.cap.denominator}))")
    if not parts:
        return "0"
    return " + ".join(parts)


def parse_series(text, field=EXACT):
    """Inverse of :func:`format_series`; also accepts expressions such as ``1 + t^(1/2)``."""
    from .parse import parse_expression

    rf = parse_expression(text, field)
    if rf.degree_in_z() != 0:
        raise ValueError(f"{text!r} depends on z")
    return rf.constant_series()
