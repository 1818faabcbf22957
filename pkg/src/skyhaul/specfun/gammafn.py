"""Scalar special functions underlying the channel models.

`log_gamma` and `erfc` delegate to the C library (well past the accuracy
targets here).  The incomplete gammas and the confluent hypergeometric are
implemented directly: the required domains (a <= 0 tails, Kummer transform
for negative arguments) are not covered by a single scipy routine.
"""

from __future__ import annotations

import math

from ..errors import ConvergenceError, GammaPoleError

_MAX_ITER = 10_000


def is_nonpositive_int(x: float, tol: float = 1e-12) -> bool:
    return x <= tol and abs(x - round(x)) < tol


def log_gamma(x: float) -> tuple[float, float]:
    """Return (ln|Gamma(x)|, sign of Gamma(x)).

    Raises GammaPoleError at non-positive integers.
    """
    if is_nonpositive_int(x):
        raise GammaPoleError(f"Gamma pole at x={x}")
    if x > 0:
        return math.lgamma(x), 1.0
    # Gamma alternates sign between consecutive negative integers.
    sign = 1.0 if math.floor(x) % 2 == 0 else -1.0
    return math.lgamma(x), sign


def gamma_fn(x: float) -> float:
    lg, sign = log_gamma(x)
    return sign * math.exp(lg)


def erfc(x: float) -> float:
    """Complementary error function 2/sqrt(pi) * int_x^inf exp(-t^2) dt."""
    return math.erfc(x)


def _lower_series_regularized(a: float, z: float) -> float:
    """P(a, z) by power series; reliable for z < a + 1 (a > 0)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            return total * math.exp(-z + a * math.log(z) - math.lgamma(a))
    raise ConvergenceError("lower incomplete gamma series stalled", "series")


def _upper_cf(a: float, z: float) -> float:
    """Gamma(a, z) by Lentz continued fraction; any a, z not small (z >= ~1)."""
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-z + a * math.log(z))
    raise ConvergenceError("upper incomplete gamma CF stalled", "series")


def upper_inc_gamma(a: float, z: float) -> float:
    """Gamma(a, z) = int_z^inf t^(a-1) e^(-t) dt.

    Valid for a > 0, or a <= 0 with z > 0.
    """
    if z < 0.0:
        raise ValueError(f"upper_inc_gamma requires z >= 0, got {z}")
    if a > 0.0:
        if z == 0.0:
            return gamma_fn(a)
        if z < a + 1.0:
            return math.exp(math.lgamma(a)) * (1.0 - _lower_series_regularized(a, z))
        return _upper_cf(a, z)
    if z == 0.0:
        raise ValueError("upper_inc_gamma(a<=0, 0) diverges")
    if z >= 1.0:
        return _upper_cf(a, z)
    # small z: downward recurrence Gamma(a,z) = (Gamma(a+1,z) - z^a e^-z)/a;
    # the power term dominates benignly for z < 1
    k = math.ceil(-a) + 1
    g = upper_inc_gamma(a + k, z)
    for i in range(k, 0, -1):
        ai = a + i - 1.0
        g = (g - math.exp(ai * math.log(z) - z)) / ai
    return g


def lower_inc_gamma(a: float, z: float) -> float:
    """gamma(a, z) = int_0^z t^(a-1) e^(-t) dt, for a > 0."""
    if a <= 0.0:
        raise ValueError(f"lower_inc_gamma requires a > 0, got a={a}")
    if z < 0.0:
        raise ValueError(f"lower_inc_gamma requires z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    if z < a + 1.0:
        return math.exp(math.lgamma(a)) * _lower_series_regularized(a, z)
    return math.exp(math.lgamma(a)) - _upper_cf(a, z)


def log_lower_inc_gamma(a: float, z: float) -> float:
    """ln gamma(a, z) for a > 0, z > 0; stable for a far beyond exp() range.

    Uses ln gamma(a,z) = a ln z - z + ln sum_n z^n / (a (a+1) ... (a+n))
    when z < a + 1 (the only regime where the linear form can overflow).
    """
    if a <= 0.0 or z <= 0.0:
        raise ValueError("log_lower_inc_gamma requires a > 0 and z > 0")
    if z >= a + 1.0:
        return math.log(lower_inc_gamma(a, z))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= z / ap
        total += term
        if term < total * 1e-17:
            return a * math.log(z) - z + math.log(total)
    raise ConvergenceError("log lower incomplete gamma series stalled", "series")


def kummer_1f1(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric 1F1(a; b; z).

    Uses the Kummer transform 1F1(a;b;z) = e^z 1F1(b-a;b;-z) so the series
    is summed at a non-negative argument (no alternating cancellation for
    the parameter ranges used here).
    """
    if is_nonpositive_int(b):
        raise GammaPoleError(f"1F1 pole at b={b}")
    if z == 0.0:
        return 1.0
    if z < 0.0:
        return math.exp(z) * kummer_1f1(b - a, b, -z)
    term = 1.0
    total = 1.0
    quiet = 0
    for k in range(_MAX_ITER):
        term *= (a + k) * z / ((b + k) * (k + 1.0))
        total += term
        if abs(term) < abs(total) * 1e-17:
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise ConvergenceError("1F1 series stalled", "series")
