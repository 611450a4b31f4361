"""Naive heights over Q(i), used to decide that an orbit is not preperiodic.

For a rational map T = [F : G] of degree d >= 2 with Gaussian-integer
coefficients and a point P = [a : b] with a, b coprime in Z[i], a
Nullstellensatz identity R x^(2d-1) = f1 F + g1 G (and the same for y) gives

    h(T(P)) >= d h(P) - C,   C = log(2 d A),

where A bounds the coefficients of f1, g1 and R is the resultant.  Hence
h(T^n P) - C/(d-1) >= d^n (h(P) - C/(d-1)), and a point with h(P) > C/(d-1)
has an orbit of unbounded height, so it is not preperiodic.
"""

import math
from fractions import Fraction

from .puiseux import GaussQ


def _gi(z):
    """Gaussian integer as a pair of ints."""
    return (int(z.re), int(z.im))


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gnorm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gdivmod(a, b):
    n = _gnorm(b)
    num = _gmul(a, (b[0], -b[1]))
    q = (_round_div(num[0], n), _round_div(num[1], n))
    qb = _gmul(q, b)
    return q, (a[0] - qb[0], a[1] - qb[1])


def _round_div(x, n):
    return (2 * x + n) // (2 * n)


def ggcd(a, b):
    while b != (0, 0):
        a, b = b, _gdivmod(a, b)[1]
    return a


def projective(z):
    """Coprime Gaussian integers (a, b) with z = a / b; z may be None for infinity."""
    if z is None:
        return (1, 0), (0, 0)
    L = z.re.denominator * z.im.denominator // math.gcd(z.re.denominator, z.im.denominator)
    a = (int(z.re * L), int(z.im * L))
    b = (L, 0)
    g = ggcd(a, b)
    a, b = _gdivmod(a, g)[0], _gdivmod(b, g)[0]
    return a, b


def height(z):
    """Logarithmic naive height of z in P^1(Q(i)) (None is infinity)."""
    a, b = projective(z)
    return 0.5 * math.log(max(_gnorm(a), _gnorm(b)))


def _integral(coeffs):
    den = 1
    for c in coeffs:
        for part in (c.re, c.im):
            den = den * part.denominator // math.gcd(den, part.denominator)
    return [c * den for c in coeffs]


def _solve(matrix, rhs):
    """Solve a square linear system over Q(i) by Gaussian elimination."""
    n = len(matrix)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular Sylvester system")
        m[col], m[piv] = m[piv], m[col]
        inv = GaussQ(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                k = m[r][col]
                m[r] = [x - k * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def _det(matrix):
    n = len(matrix)
    m = [list(row) for row in matrix]
    det = GaussQ(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return GaussQ(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = GaussQ(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                k = m[r][col] * inv
                m[r] = [x - k * y for x, y in zip(m[r], m[col])]
    return det


def escape_constant(num, den):
    """C/(d-1) for T = num/den (coefficients low to high, GaussQ); None if d < 2."""
    d = max(len(num), len(den)) - 1
    if d < 2:
        return None
    zero = GaussQ(0)
    F = list(num) + [zero] * (d + 1 - len(num))
    G = list(den) + [zero] * (d + 1 - len(den))
    F, G = _integral(F + G)[:d + 1], _integral(F + G)[d + 1:]
    # unknowns: f1_0..f1_{d-1}, g1_0..g1_{d-1}; monomials x^k y^(2d-1-k), k = 0..2d-1
    size = 2 * d
    matrix = [[zero] * size for _ in range(size)]
    for i in range(d):
        for k in range(d + 1):
            matrix[i + k][i] = matrix[i + k][i] + F[k]
            matrix[i + k][d + i] = matrix[i + k][d + i] + G[k]
    R = _det(matrix)
    if not R:
        raise ZeroDivisionError("resultant vanishes")
    A = 0.0
    for target in (0, size - 1):
        rhs = [zero] * size
        rhs[target] = R
        sol = _solve(matrix, rhs)
        A = max(A, max(abs(complex(float(c.re), float(c.im))) for c in sol))
    return math.log(2 * d * max(A, 1.0)) / (d - 1)
