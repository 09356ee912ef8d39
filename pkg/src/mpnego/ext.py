"""Extended rationals: exact Fractions plus the two infinities.

Finite values are always ``Fraction``.  The infinities are the float
sentinels ``math.inf`` / ``-math.inf``; they compare exactly against
Fractions, and nothing finite is ever stored as a float.
"""

import math
from fractions import Fraction

INF = math.inf
NEG_INF = -math.inf


def is_finite(x):
    return x != INF and x != NEG_INF


def rat(x):
    """Parse an int, Fraction, "p/q" string or "inf"/"-inf" into an ext-rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x in (INF, NEG_INF):
            return x
        raise TypeError("refusing to convert finite float %r; use a string" % x)
    s = str(x).strip()
    low = s.lower()
    if low in ("inf", "+inf"):
        return INF
    if low == "-inf":
        return NEG_INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError("not a rational: %r" % s) from None


def fmt(x):
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def add(x, y):
    """Sum where a finite value absorbs into an infinity; inf + -inf is an error."""
    if is_finite(x) and is_finite(y):
        return Fraction(x) + Fraction(y)
    if {x, y} == {INF, NEG_INF}:
        raise ArithmeticError("inf - inf is undefined")
    return x if not is_finite(x) else y
