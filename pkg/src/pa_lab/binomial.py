"""Generalized binomial coefficients and rising factorials.

The urn closed forms need C(x, y) for rational x, y and ratios
Gamma(x+n)/Gamma(x).  In every formula we evaluate, either y is an integer or
x - y is, so each coefficient reduces to a rising or falling factorial of
rational arguments and the exact path never materializes an irrational
factor (the sqrt(pi) carried by half-integer Gamma values cancels
symbolically through these reductions).

Float variants work in log space via math.lgamma (platform Lanczos-class
implementation, >= 13 significant digits) and require the translated
arguments to be positive, which holds on the support of every formula here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

NEG_INF = float("-inf")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact arguments must be int or Fraction, got {type(x).__name__}")


@lru_cache(maxsize=None)
def rising(x: Fraction, n: int) -> Fraction:
    """x (x+1) ... (x+n-1) = Gamma(x+n)/Gamma(x), exact."""
    if n < 0:
        raise ValueError(f"rising factorial length must be >= 0, got {n}")
    out = Fraction(1)
    for j in range(n):
        out *= x + j
    return out


@lru_cache(maxsize=None)
def gbinom(x: Fraction, y: Fraction) -> Fraction:
    """Generalized binomial coefficient C(x, y), exact.

    Cases: integer y >= 0 -> falling factorial over y!; integer y < 0 -> 0;
    non-integer y with x - y a non-negative integer -> rising(y+1, x-y)/(x-y)!;
    non-integer y with x - y a negative integer -> 0 (Gamma pole in the
    denominator).  Anything else has no rational value and raises.
    """
    x = _as_fraction(x)
    y = _as_fraction(y)
    if y.denominator == 1:
        k = int(y)
        if k < 0:
            return Fraction(0)
        num = Fraction(1)
        for j in range(k):
            num *= x - j
        return num / math.factorial(k)
    diff = x - y
    if diff.denominator != 1:
        raise ValueError(f"C({x}, {y}) is not rational-reducible")
    m = int(diff)
    if m < 0:
        return Fraction(0)
    return rising(y + 1, m) / math.factorial(m)


def log_comb(a: int, b: int) -> float:
    """log C(a, b) for integers; -inf when the coefficient is 0.

    Negative upper index with b >= 1 would carry a sign that log space cannot
    represent; no formula evaluates there on-support, so it raises.
    """
    if b < 0:
        return NEG_INF
    if b == 0:
        return 0.0
    if a < 0:
        raise ValueError(f"log C({a}, {b}) is signed; outside every on-support case")
    if b > a:
        return NEG_INF
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def log_rising(x: float, n: int) -> float:
    """log Gamma(x+n)/Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"log_rising needs x > 0, got {x}")
    return math.lgamma(x + n) - math.lgamma(x)


def log_gbinom(x: float, y: float) -> float:
    """log C(x, y) mirroring gbinom's reductions; -inf for the zero cases.

    Requires the surviving Gamma arguments to be positive (true on the
    support of every closed form evaluated in float mode).
    """
    ry = round(y)
    if abs(y - ry) < 1e-9:  # integer lower index
        if ry < 0:
            return NEG_INF
        xr = round(x)
        if abs(x - xr) < 1e-9:
            return log_comb(int(xr), int(ry))
        if x + 1 <= 0 or x - ry + 1 <= 0:
            raise ValueError(f"log C({x}, {y}) has a non-positive Gamma argument")
        return math.lgamma(x + 1) - math.lgamma(ry + 1) - math.lgamma(x - ry + 1)
    m = x - y
    rm = round(m)
    if abs(m - rm) > 1e-9:
        raise ValueError(f"C({x}, {y}) is not rational-reducible")
    if rm < 0:
        return NEG_INF
    if y + 1 <= 0:
        raise ValueError(f"log C({x}, {y}) has a non-positive Gamma argument")
    return log_rising(y + 1, int(rm)) - math.lgamma(rm + 1)
