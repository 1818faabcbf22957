"""Mechanical reduction of Mellin-type integrals to single Meijer G terms.

Two integral shapes cover every closed form in the metrics layer:

* full-range product integral
      int_0^inf x^(rho-1) G_A(eta x^hA) G_B(omega x^hB) dx
  (Mellin convolution; rational powers handled by the Gauss multiplication
  theorem, so parameter lists and constants are derived, not transcribed);

* head integral
      int_0^X x^(rho-1) G(omega x^h) dx
  via the order-raising identity.

Powers hA, hB, h must be positive rationals (Fraction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidParameterError
from .meijerg import MeijerGParams, meijer_g

_LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class MeijerGTerm:
    """A reduced closed-form contribution exp(log_const) * G(params, z)."""

    params: MeijerGParams
    log_const: float
    z: float

    def log_value(self, strategy: str = "auto") -> tuple[float, float]:
        """(log|value|, sign); (-inf, 0) for an exactly zero value."""
        if self.z == 0.0:
            return -math.inf, 0.0
        g = meijer_g(self.params, self.z, strategy)
        if g == 0.0:
            return -math.inf, 0.0
        return self.log_const + math.log(abs(g)), math.copysign(1.0, g)

    def value(self, strategy: str = "auto") -> float:
        lg, sign = self.log_value(strategy)
        if sign == 0.0:
            return 0.0
        if lg > 709.0:
            raise InvalidParameterError(f"Meijer-G term overflows (log value {lg:.1f})")
        return sign * math.exp(lg)

    def scaled(self, log_factor: float) -> "MeijerGTerm":
        return MeijerGTerm(self.params, self.log_const + log_factor, self.z)


# canonical kernels -----------------------------------------------------------

#: exp(-y) = G^{1,0}_{0,1}(y | - ; 0)
EXP_KERNEL = MeijerGParams(1, 0, 0, 1, (), (0.0,))

#: sqrt(pi) * erfc(sqrt(y)) = G^{2,0}_{1,2}(y | 1 ; 0, 1/2)
ERFC_SQRT_KERNEL = MeijerGParams(2, 0, 1, 2, (1.0,), (0.0, 0.5))
ERFC_LOG_CONST = -0.5 * math.log(math.pi)  # erfc(sqrt(y)) itself


def upper_gamma_kernel(a: float) -> MeijerGParams:
    """Gamma(a, y) = G^{2,0}_{1,2}(y | 1 ; a, 0)."""
    return MeijerGParams(2, 0, 1, 2, (1.0,), (float(a), 0.0))


# factor bookkeeping ----------------------------------------------------------
# a factor is Gamma(u + slope*s)^(+1/-1) inside (1/2 pi i) int ... X^s ds


@dataclass(frozen=True)
class _Factor:
    u: float
    slope: Fraction
    numerator: bool


def _g_factors(params: MeijerGParams) -> list[_Factor]:
    m, n, p, q, a, b = params.m, params.n, params.p, params.q, params.a, params.b
    out = []
    one = Fraction(1)
    for j in range(m):
        out.append(_Factor(b[j], -one, True))
    for j in range(n):
        out.append(_Factor(1.0 - a[j], one, True))
    for j in range(m, q):
        out.append(_Factor(1.0 - b[j], one, False))
    for j in range(n, p):
        out.append(_Factor(a[j], -one, False))
    return out


def _mellin_factors(params: MeijerGParams, r: float, kappa: Fraction) -> list[_Factor]:
    """Factors of M_A(r + kappa*s): the Mellin transform of G_A, shifted."""
    m, n, p, q, a, b = params.m, params.n, params.p, params.q, params.a, params.b
    out = []
    for j in range(m):
        out.append(_Factor(b[j] + r, kappa, True))
    for j in range(n):
        out.append(_Factor(1.0 - a[j] - r, -kappa, True))
    for j in range(m, q):
        out.append(_Factor(1.0 - b[j] - r, -kappa, False))
    for j in range(n, p):
        out.append(_Factor(a[j] + r, kappa, False))
    return out


def _reduce(factors: list[_Factor], x: float, log_const: float) -> MeijerGTerm:
    """Substitute s = Q*t, apply the multiplication theorem, build standard G."""
    q_sub = 1
    for f in factors:
        q_sub = math.lcm(q_sub, f.slope.denominator)

    b_main: list[float] = []
    a_main: list[float] = []
    b_tail: list[float] = []
    a_tail: list[float] = []
    log_arg_mult = 0.0

    for f in factors:
        scaled = f.slope * q_sub
        assert scaled.denominator == 1
        p_i = abs(int(scaled))
        upward = scaled > 0
        sgn = 1.0 if f.numerator else -1.0
        if p_i > 1:
            log_const += sgn * ((1 - p_i) / 2.0 * _LN_2PI + (f.u - 0.5) * math.log(p_i))
            log_arg_mult += sgn * (1.0 if upward else -1.0) * p_i * math.log(p_i)
        for i in range(p_i):
            u_i = (f.u + i) / p_i
            if f.numerator:
                (a_main if upward else b_main).append(1.0 - u_i if upward else u_i)
            else:
                (b_tail if upward else a_tail).append(1.0 - u_i if upward else u_i)

    # cancel exact numerator/denominator pairs of the same slope sign
    for main, tail in ((b_main, a_tail), (a_main, b_tail)):
        i = 0
        while i < len(main):
            hit = next(
                (k for k, t in enumerate(tail) if abs(t - main[i]) < 1e-13), None
            )
            if hit is None:
                i += 1
            else:
                del tail[hit]
                del main[i]

    log_const += math.log(q_sub)  # ds = Q dt
    z = x**q_sub * math.exp(log_arg_mult)
    params = MeijerGParams(
        m=len(b_main),
        n=len(a_main),
        p=len(a_main) + len(a_tail),
        q=len(b_main) + len(b_tail),
        a=tuple(a_main + a_tail),
        b=tuple(b_main + b_tail),
    )
    return MeijerGTerm(params, log_const, z)


# public reductions -----------------------------------------------------------


def merge_product_integral(
    rho: float,
    params_a: MeijerGParams,
    eta: float,
    h_a: Fraction,
    params_b: MeijerGParams,
    omega: float,
    h_b: Fraction,
) -> MeijerGTerm:
    """Reduce int_0^inf x^(rho-1) G_A(eta x^hA) G_B(omega x^hB) dx to one G term.

    G_B stays on the contour, G_A enters through its shifted Mellin transform,
    so the result argument is omega * eta^(-hB/hA) (to a rational power).
    """
    if eta <= 0.0 or omega <= 0.0:
        raise InvalidParameterError("kernel scales must be positive")
    if h_a <= 0 or h_b <= 0:
        raise InvalidParameterError("kernel powers must be positive")
    r = rho / float(h_a)
    kappa = h_b / h_a
    factors = _g_factors(params_b) + _mellin_factors(params_a, r, kappa)
    log_const = -math.log(float(h_a)) - r * math.log(eta)
    x = omega * eta ** (-float(kappa))
    return _reduce(factors, x, log_const)


def incomplete_integral(
    params: MeijerGParams,
    omega: float,
    h: Fraction,
    rho: float,
    x_upper: float,
) -> MeijerGTerm:
    """Reduce int_0^X x^(rho-1) G(omega x^h) dx (X > 0) to one G term.

    Identity: (1/h) X^rho G^{m,n+1}_{p+1,q+1}[ omega X^h | (1-rho/h), a ; b, (-rho/h) ].
    Requires rho + h*min(b_1..b_m) > 0 for convergence at the origin.
    """
    if x_upper <= 0.0:
        raise InvalidParameterError("head integral needs X > 0")
    nu = rho / float(h)
    a = list(params.a)
    b = list(params.b)
    a.insert(params.n, 1.0 - nu)
    b.append(-nu)
    new = MeijerGParams(params.m, params.n + 1, params.p + 1, params.q + 1, tuple(a), tuple(b))
    log_const = -math.log(float(h)) + rho * math.log(x_upper)
    return MeijerGTerm(new, log_const, omega * x_upper ** float(h))
