"""Parser for series and rational functions of z over L.

Grammar (whitespace ignored, implicit multiplication allowed)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | 't' | 'tau' | 'z' | 'zeta' | 'i'
            | '(' expr ')' | '(' expr ',' expr ')' | 'O' '(' expr ')'

``(a,b)`` is the complex scalar a + bi and ``O(t^e)`` a zero term with
precision cap e.  Exponents are rational numbers, optionally signed and
parenthesised, e.g. ``t^(1/2)`` or ``z^-1``.
"""

import re
from fractions import Fraction

from .errors import ParseError
from .newton import PolyL
from .puiseux import EXACT, INF, Series

_TOKEN = re.compile(r"\s*(?:((?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)|([A-Za-z_]+)|(\S))")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class RF:
    """Quotient num/den of polynomials in z with Series coefficients."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field):
        self.num, self.den, self.field = num, den, field
        self._cancel_z()

    @classmethod
    def const(cls, s):
        f = s.field
        return cls(PolyL([s], f), PolyL([Series.one(f)], f), f)

    @classmethod
    def z(cls, field):
        return cls(PolyL([Series.zero(field), Series.one(field)], field), PolyL([Series.one(field)], field), field)

    def _cancel_z(self):
        if self.den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        k = 0
        while (k < self.num.degree and k < self.den.degree
               and _exact_zero(self.num[k]) and _exact_zero(self.den[k])):
            k += 1
        if k:
            self.num = PolyL(self.num.coeffs[k:], self.field)
            self.den = PolyL(self.den.coeffs[k:], self.field)

    def degree_in_z(self):
        return max(self.num.degree, self.den.degree, 0)

    def constant_series(self):
        if self.num.is_zero():
            return Series.zero(self.field)
        return self.num[0] / self.den[0]

    def is_constant(self):
        return self.degree_in_z() == 0

    def __add__(self, o):
        if self.den == o.den:
            return RF(self.num + o.num, self.den, self.field)
        return RF(self.num * o.den + o.num * self.den, self.den * o.den, self.field)

    def __neg__(self):
        return RF(-self.num, self.den, self.field)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return RF(self.num * o.num, self.den * o.den, self.field)

    def __truediv__(self, o):
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return RF(self.num * o.den, self.den * o.num, self.field)

    def power(self, e):
        if e.denominator != 1:
            if not self.is_constant():
                raise ValueError("fractional power of a function of z")
            return RF.const(self.constant_series().pow_rational(e))
        n = int(e)
        base = self if n >= 0 else RF(self.den, self.num, self.field)
        out = RF.const(Series.one(self.field))
        for _ in range(abs(n)):
            out = out * base
        return out


def _exact_zero(s):
    return s.is_zero() and s.cap is INF


class _Parser:
    def __init__(self, text, field):
        self.text = text
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def fail(self, message):
        raise ParseError(message, self.peek()[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def _starts_atom(self):
        kind, val, _ = self.peek()
        return kind in ("num", "name") or val == "("

    def term(self):
        out = self.unary()
        while True:
            val = self.peek()[1]
            if val in ("*", "/"):
                self.take()
                rhs = self.unary()
                try:
                    out = out * rhs if val == "*" else out / rhs
                except ZeroDivisionError:
                    self.fail("division by zero")
            elif self._starts_atom():
                out = out * self.power()
            else:
                return out

    def unary(self):
        val = self.peek()[1]
        if val == "-":
            self.take()
            return -self.unary()
        if val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            e = self.exponent()
            if isinstance(base, tuple):
                # bare t^e keeps rational exponents exact
                return RF.const(Series.monomial(1, e, self.field))
            try:
                return base.power(e)
            except ValueError as exc:
                self.fail(str(exc))
        if isinstance(base, tuple):
            return RF.const(Series.t(self.field))
        return base

    def exponent(self):
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        if self.peek()[1] == "(":
            self.take()
            if self.peek()[1] in ("-", "+"):
                sign *= -1 if self.take()[1] == "-" else 1
            e = self._number()
            if self.peek()[1] == "/":
                self.take()
                d = self._number()
                if d == 0:
                    self.fail("zero denominator in exponent")
                e = e / d
            self.expect(")")
            return sign * e
        return sign * self._number()

    def _number(self):
        kind, val, pos = self.take()
        if kind != "num":
            raise ParseError(f"expected a number, found {val or 'end of input'!r}", pos)
        return Fraction(val)

    def atom(self):
        kind, val, pos = self.take()
        f = self.field
        if kind == "num":
            x = Fraction(val)
            c = f.scalar(x) if f.exact else f.scalar(float(x))
            return RF.const(Series.const(c, f))
        if kind == "name":
            name = val
            if name in ("t", "tau"):
                return ("t",)
            if name in ("z", "zeta"):
                return RF.z(f)
            if name == "i":
                return RF.const(Series.const(f.scalar(0, 1), f))
            if name == "O":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                s = inner.constant_series() if inner.is_constant() else None
                if s is None or not s.is_monomial() or s.cap is not INF:
                    raise ParseError("O(...) needs a monomial t^e", pos)
                return RF.const(Series.zero(f, s.ord()))
            raise ParseError(f"unknown name {name!r}", pos)
        if val == "(":
            first = self.expr()
            if self.peek()[1] == ",":
                self.take()
                second = self.expr()
                self.expect(")")
                re_, im_ = self._scalar(first, pos), self._scalar(second, pos)
                return RF.const(Series.const(re_ + im_ * f.scalar(0, 1), f))
            self.expect(")")
            return first
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def _scalar(self, rf, pos):
        if not rf.is_constant():
            raise ParseError("complex literal parts must be constants", pos)
        s = rf.constant_series()
        if s.is_zero():
            return self.field.zero
        if s.ord() != 0 or len(s) != 1:
            raise ParseError("complex literal parts must be scalars", pos)
        return s.lead()


def parse_expression(text, field=EXACT):
    """Parse ``text`` into an :class:`RF` over ``field``."""
    if not isinstance(text, str):
        raise TypeError("expected a string")
    return _Parser(text, field).parse()
