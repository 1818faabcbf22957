"""Average bit error rate: closed forms with quadrature cross-checks.

Per-link ABER over the active region [gamma_th, inf) splits into a
full-range term and a head correction:

    int_th^inf  =  (full-range integral)  -  (head integral over [0, th])

The full-range kernels (c_a, c_c, c_e) are single Meijer-G terms produced
by the mechanical Mellin merge; the head kernels (c_b, c_d, c_f) expand
erfc in its Maclaurin series, one order-raised G (or incomplete gamma) per
term, truncated adaptively.  The alternating series degrades for
D_i * gamma_th beyond ~30, in which case the defining integral is
evaluated by adaptive quadrature instead; the quadrature path doubles as
the test oracle.

Sign convention: c_b/c_d/c_f return MINUS the head integral, so that
(full + head) is directly the tail integral used by the ABER.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from scipy.integrate import quad

from ..channels import (
    MalagaParams,
    RisRfDerived,
    RisRfParams,
    ThzParams,
    fso_pdf_kernel,
    malaga_cdf,
    malaga_derive,
    rf_pdf,
    thz_derive,
    thz_pdf,
)
from ..errors import ConvergenceError, InvalidParameterError
from ..specfun import erfc, meijer_g, upper_inc_gamma
from ..specfun.gammafn import log_lower_inc_gamma
from ..specfun.mellin import (
    ERFC_LOG_CONST,
    ERFC_SQRT_KERNEL,
    EXP_KERNEL,
    MeijerGTerm,
    incomplete_integral,
    merge_product_integral,
    upper_gamma_kernel,
)
from ..switching import SoftPolicy, fso_soft_cdf, hybrid_cdf_hard, hybrid_cdf_soft
from .modulation import ModulationScheme
from .outage import ThresholdSet, rf_derived

_SERIES_TOL = 1e-12
_SERIES_RUN = 3
_SERIES_MAX = 300
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# head-integral series driver
# ---------------------------------------------------------------------------


def _erfc_head_series(log_t_of_rho, d_coef: float, rho0: float) -> float:
    """-int_0^X x^(rho0-1) erfc(sqrt(D x)) K(x) dx.

    `log_t_of_rho(rho)` returns (log|T|, sign) of T(rho) = int_0^X x^(rho-1) K.
    Expands erfc(sqrt(Dx)) = 1 - (2/sqrt(pi)) sum_j (-1)^j (Dx)^(j+1/2)/(j!(2j+1));
    terms are assembled in log space (X^rho and the j-coefficient overflow
    separately). Raises ConvergenceError("series") on divergence; the caller
    falls back to quadrature.
    """
    lt, sign = log_t_of_rho(rho0)
    total = sign * math.exp(lt) if sign else 0.0
    scale = abs(total)
    quiet = 0
    log_d = math.log(d_coef)
    for j in range(_SERIES_MAX):
        log_coef = (
            math.log(2.0 / math.sqrt(math.pi))
            + (j + 0.5) * log_d
            - math.lgamma(j + 1.0)
            - math.log(2.0 * j + 1.0)
        )
        lt, sign = log_t_of_rho(rho0 + j + 0.5)
        lterm = log_coef + lt
        if lterm > 600.0:
            raise ConvergenceError("erfc head series term overflow", "series")
        term = -((-1.0) ** j) * sign * math.exp(lterm) if sign else 0.0
        total += term
        scale = max(scale, abs(term))
        if abs(term) <= _SERIES_TOL * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= _SERIES_RUN:
                # cancellation guard: the T terms carry ~1e-9 relative error,
                # so the alternating sum is only trusted while the largest
                # term stays within ~1e5 of the result
                if scale > 1e5 * max(abs(total), 1e-300):
                    raise ConvergenceError("erfc head series cancellation", "series")
                return -total
        else:
            quiet = 0
        if abs(term) > 1e12 * max(abs(total), 1.0):
            raise ConvergenceError("erfc head series divergence", "series")
    raise ConvergenceError("erfc head series did not converge", "series")


# ---------------------------------------------------------------------------
# FSO kernels
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _fso_full_term(m: MalagaParams, z_idx: int, d_coef: float) -> MeijerGTerm:
    d = malaga_derive(m)
    omega = d.lambda0 / d.mu_os ** (1.0 / m.s)
    return merge_product_integral(
        0.0,
        ERFC_SQRT_KERNEL,
        d_coef,
        _ONE,
        fso_pdf_kernel(m, z_idx),
        omega,
        Fraction(1, m.s),
    ).scaled(ERFC_LOG_CONST)


def c_a(m: MalagaParams, z_idx: int, d_coef: float) -> float:
    """Full-range FSO kernel: int_0^inf g^-1 erfc(sqrt(D g)) G_z(w g^(1/s)) dg."""
    return _fso_full_term(m, z_idx, d_coef).value()


def c_a_quad(m: MalagaParams, z_idx: int, d_coef: float) -> float:
    """Adaptive-quadrature oracle for c_a (log substitution)."""
    d = malaga_derive(m)
    omega = d.lambda0 / d.mu_os ** (1.0 / m.s)
    kern = fso_pdf_kernel(m, z_idx)

    def f(t: float) -> float:
        g = math.exp(t)
        return erfc(math.sqrt(d_coef * g)) * meijer_g(kern, omega * g ** (1.0 / m.s))

    lo = math.log(1e-14 / d_coef) if d_coef < 1.0 else -32.0
    hi = math.log(40.0 / d_coef)
    val, _ = quad(f, lo, hi, limit=600)
    return val


def _fso_head_t(m: MalagaParams, z_idx: int, gamma_th: float):
    d = malaga_derive(m)
    omega = d.lambda0 / d.mu_os ** (1.0 / m.s)
    kern = fso_pdf_kernel(m, z_idx)
    h = Fraction(1, m.s)

    def log_t_of_rho(rho: float) -> tuple[float, float]:
        return incomplete_integral(kern, omega, h, rho, gamma_th).log_value()

    return log_t_of_rho


def c_b(m: MalagaParams, z_idx: int, d_coef: float, gamma_th: float) -> float:
    """Minus the FSO head integral over [0, gamma_th]; 0 at gamma_th = 0."""
    if gamma_th == 0.0:
        return 0.0
    try:
        return _erfc_head_series(_fso_head_t(m, z_idx, gamma_th), d_coef, 0.0)
    except ConvergenceError:
        return c_b_quad(m, z_idx, d_coef, gamma_th)


def c_b_quad(m: MalagaParams, z_idx: int, d_coef: float, gamma_th: float) -> float:
    if gamma_th == 0.0:
        return 0.0
    d = malaga_derive(m)
    omega = d.lambda0 / d.mu_os ** (1.0 / m.s)
    kern = fso_pdf_kernel(m, z_idx)

    def f(x: float) -> float:  # gamma = gamma_th e^-x
        g = gamma_th * math.exp(-x)
        return erfc(math.sqrt(d_coef * g)) * meijer_g(kern, omega * g ** (1.0 / m.s))

    val, _ = quad(f, 0.0, 34.0, limit=600)
    return -val


# ---------------------------------------------------------------------------
# THz kernels
# ---------------------------------------------------------------------------


def _thz_scale_coef(t: ThzParams) -> tuple[float, float]:
    d = thz_derive(t)
    scale = t.n_antennas * t.gamma_bar_t
    return d.chi3 / scale ** (t.alpha_t / 2.0), d.g_t


@lru_cache(maxsize=4096)
def _thz_full_term(t: ThzParams, d_coef: float) -> MeijerGTerm:
    d = thz_derive(t)
    alpha_int = round(t.alpha_t)
    if abs(t.alpha_t - alpha_int) > 1e-9:
        raise ConvergenceError("closed-form c_c needs integer alpha_t", "series")
    c_scale, g_t = _thz_scale_coef(t)
    return merge_product_integral(
        g_t,
        ERFC_SQRT_KERNEL,
        d_coef,
        _ONE,
        upper_gamma_kernel(d.chi2),
        c_scale,
        Fraction(alpha_int, 2),
    ).scaled(ERFC_LOG_CONST)


def c_c(t: ThzParams, d_coef: float) -> float:
    """Full-range THz kernel: int_0^inf g^(gt-1) erfc(sqrt(D g)) Gamma(chi2, c g^(at/2)) dg.

    Integer alpha_t evaluates in closed form; otherwise quadrature is used.
    """
    try:
        return _thz_full_term(t, d_coef).value()
    except ConvergenceError:
        return c_c_quad(t, d_coef)


def c_c_quad(t: ThzParams, d_coef: float) -> float:
    d = thz_derive(t)
    c_scale, g_t = _thz_scale_coef(t)

    def f(x: float) -> float:
        g = math.exp(x)
        return (
            g**g_t
            * erfc(math.sqrt(d_coef * g))
            * upper_inc_gamma(d.chi2, c_scale * g ** (t.alpha_t / 2.0))
        )

    val, _ = quad(f, -34.0, math.log(40.0 / d_coef), limit=600)
    return val


def _thz_head_t(t: ThzParams, gamma_th: float):
    d = thz_derive(t)
    c_scale, _ = _thz_scale_coef(t)
    kern = upper_gamma_kernel(d.chi2)
    h = t.alpha_t / 2.0

    def log_t_of_rho(rho: float) -> tuple[float, float]:
        return incomplete_integral(kern, c_scale, h, rho, gamma_th).log_value()

    return log_t_of_rho


def c_d(t: ThzParams, d_coef: float, gamma_th: float) -> float:
    """Minus the THz head integral over [0, gamma_th]."""
    if gamma_th == 0.0:
        return 0.0
    g_t = thz_derive(t).g_t
    try:
        return _erfc_head_series(_thz_head_t(t, gamma_th), d_coef, g_t)
    except ConvergenceError:
        return c_d_quad(t, d_coef, gamma_th)


def c_d_quad(t: ThzParams, d_coef: float, gamma_th: float) -> float:
    if gamma_th == 0.0:
        return 0.0
    d = thz_derive(t)
    c_scale, g_t = _thz_scale_coef(t)

    def f(x: float) -> float:
        g = gamma_th * math.exp(-x)
        return (
            g**g_t
            * erfc(math.sqrt(d_coef * g))
            * upper_inc_gamma(d.chi2, c_scale * g ** (t.alpha_t / 2.0))
        )

    val, _ = quad(f, 0.0, 40.0, limit=600)
    return -val


# ---------------------------------------------------------------------------
# RF kernels
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _rf_full_term(v_r: float, psi_r: float, d_coef: float) -> MeijerGTerm:
    return merge_product_integral(
        0.5 * (v_r + 1.0),
        ERFC_SQRT_KERNEL,
        d_coef,
        _ONE,
        EXP_KERNEL,
        math.sqrt(psi_r),
        _HALF,
    ).scaled(ERFC_LOG_CONST)


def c_e(d: RisRfDerived, d_coef: float) -> float:
    """Full-range RF kernel: int_0^inf g^((v-1)/2) e^-sqrt(psi g) erfc(sqrt(D g)) dg."""
    return _rf_full_term(d.v_r, d.psi_r, d_coef).value()


def c_e_quad(d: RisRfDerived, d_coef: float) -> float:
    v, psi = d.v_r, d.psi_r

    def f(x: float) -> float:
        g = math.exp(x)
        return (
            g ** (0.5 * (v + 1.0))
            * math.exp(-math.sqrt(psi * g))
            * erfc(math.sqrt(d_coef * g))
        )

    val, _ = quad(f, -34.0, math.log(40.0 / min(d_coef, 1.0)), limit=600)
    return val


def c_f(d: RisRfDerived, d_coef: float, gamma_th_r: float) -> float:
    """Minus the RF head integral; per-term closed form is an incomplete gamma."""
    if gamma_th_r == 0.0:
        return 0.0
    v, psi = d.v_r, d.psi_r
    sq = math.sqrt(psi * gamma_th_r)

    def log_t_of_rho(rho: float) -> tuple[float, float]:
        lg = log_lower_inc_gamma(2.0 * rho, sq)
        return math.log(2.0) - rho * math.log(psi) + lg, 1.0

    try:
        return _erfc_head_series(log_t_of_rho, d_coef, 0.5 * (v + 1.0))
    except ConvergenceError:
        return c_f_quad(d, d_coef, gamma_th_r)


def c_f_quad(d: RisRfDerived, d_coef: float, gamma_th_r: float) -> float:
    if gamma_th_r == 0.0:
        return 0.0
    v, psi = d.v_r, d.psi_r
    val, _ = quad(
        lambda g: g ** (0.5 * (v - 1.0))
        * math.exp(-math.sqrt(psi * g))
        * erfc(math.sqrt(d_coef * g)),
        0.0,
        gamma_th_r,
        limit=600,
    )
    return -val


# ---------------------------------------------------------------------------
# per-link ABER
# ---------------------------------------------------------------------------


class FsoAber(NamedTuple):
    value: float
    c_a: float  # coefficient-weighted full-range part
    c_b: float  # coefficient-weighted head part (<= 0)


class ThzAber(NamedTuple):
    value: float
    c_c: float
    c_d: float


class RfAber(NamedTuple):
    value: float
    c_e: float
    c_f: float


def _fso_tail_quad(m: MalagaParams, z_idx: int, d_coef: float, gamma_th: float) -> float:
    """Direct tail integral; used when full+head cancels catastrophically."""
    d = malaga_derive(m)
    omega = d.lambda0 / d.mu_os ** (1.0 / m.s)
    kern = fso_pdf_kernel(m, z_idx)

    def f(x: float) -> float:
        g = math.exp(x)
        return erfc(math.sqrt(d_coef * g)) * meijer_g(kern, omega * g ** (1.0 / m.s))

    lo = math.log(gamma_th)
    hi = min(lo + 40.0, math.log(750.0 / d_coef))
    if hi <= lo:
        return 0.0  # erfc is identically zero past the threshold
    val, _ = quad(f, lo, hi, limit=600)
    return val


def aber_fso(m: MalagaParams, mod: ModulationScheme, gamma_th: float) -> FsoAber:
    """FSO-link ABER conditioned on operation above gamma_th (unnormalized
    tail average sum_i A int_th^inf erfc(sqrt(D_i g)) f(g) dg)."""
    d = malaga_derive(m)
    s, eps2 = m.s, m.eps_o**2
    base = d.omega_big * eps2 / 2.0**s
    full = 0.0
    head = 0.0
    for z in range(1, m.beta_o + 1):
        coeff_z = base * d.v[z - 1]
        for d_i in mod.d_coefs:
            ca = c_a(m, z, d_i)
            cb = c_b(m, z, d_i, gamma_th)
            if gamma_th > 0.0 and abs(ca + cb) < 1e-4 * abs(ca):
                # tail lost to cancellation: integrate it directly and fold
                # the adjustment into the head part
                cb = _fso_tail_quad(m, z, d_i, gamma_th) - ca
            full += mod.a_coef * coeff_z * ca
            head += mod.a_coef * coeff_z * cb
    return FsoAber(value=full + head, c_a=full, c_b=head)


def _thz_tail_quad(t: ThzParams, d_coef: float, gamma_th: float) -> float:
    d = thz_derive(t)
    c_scale, g_t = _thz_scale_coef(t)

    def f(x: float) -> float:
        g = math.exp(x)
        return (
            g**g_t
            * erfc(math.sqrt(d_coef * g))
            * upper_inc_gamma(d.chi2, c_scale * g ** (t.alpha_t / 2.0))
        )

    lo = math.log(gamma_th)
    hi = min(lo + 40.0, math.log(750.0 / d_coef))
    if hi <= lo:
        return 0.0
    val, _ = quad(f, lo, hi, limit=600)
    return val


def aber_thz(t: ThzParams, mod: ModulationScheme, gamma_th: float) -> ThzAber:
    d = thz_derive(t)
    scale = t.n_antennas * t.gamma_bar_t
    coeff = d.chi1 / (2.0 * scale**d.g_t)
    full = 0.0
    head = 0.0
    for d_i in mod.d_coefs:
        cc = c_c(t, d_i)
        cd = c_d(t, d_i, gamma_th)
        if gamma_th > 0.0 and abs(cc + cd) < 1e-4 * abs(cc):
            cd = _thz_tail_quad(t, d_i, gamma_th) - cc
        full += mod.a_coef * coeff * cc
        head += mod.a_coef * coeff * cd
    return ThzAber(value=full + head, c_c=full, c_d=head)


def _rf_tail_quad(d: RisRfDerived, d_coef: float, gamma_th_r: float) -> float:
    v, psi = d.v_r, d.psi_r

    def f(x: float) -> float:
        g = math.exp(x)
        return (
            g ** (0.5 * (v + 1.0))
            * math.exp(-math.sqrt(psi * g))
            * erfc(math.sqrt(d_coef * g))
        )

    lo = math.log(gamma_th_r)
    hi = min(lo + 40.0, math.log(750.0 / d_coef))
    if hi <= lo:
        return 0.0
    val, _ = quad(f, lo, hi, limit=600)
    return val


def aber_rf(
    r: RisRfParams | RisRfDerived, mod: ModulationScheme, gamma_th_r: float
) -> RfAber:
    d = rf_derived(r)
    v = d.v_r
    coeff = math.exp(
        0.5 * (v + 1.0) * math.log(d.psi_r) - math.log(2.0) - math.lgamma(v + 1.0)
    )
    full = 0.0
    head = 0.0
    for d_i in mod.d_coefs:
        ce = c_e(d, d_i)
        cf = c_f(d, d_i, gamma_th_r)
        if gamma_th_r > 0.0 and abs(ce + cf) < 1e-4 * abs(ce):
            cf = _rf_tail_quad(d, d_i, gamma_th_r) - ce
        full += mod.a_coef * coeff * ce
        head += mod.a_coef * coeff * cf
    return RfAber(value=full + head, c_e=full, c_f=head)


# ---------------------------------------------------------------------------
# hybrid and end-to-end ABER
# ---------------------------------------------------------------------------


def aber_hybrid_hard(
    m: MalagaParams, t: ThzParams, mod: ModulationScheme, gamma_th: float
) -> float:
    """[P_t F_o(th) + P_o] / (1 - F_hybrid(th)): BEP given the hybrid link is up."""
    from ..switching import HardPolicy

    f_h = hybrid_cdf_hard(m, t, HardPolicy(gamma_th))
    if f_h >= 1.0 - 1e-12:
        raise InvalidParameterError("hybrid link saturated (F_h ~ 1); ABER undefined")
    p_o = aber_fso(m, mod, gamma_th).value
    p_t = aber_thz(t, mod, gamma_th).value
    return (p_t * malaga_cdf(m, gamma_th) + p_o) / (1.0 - f_h)


def combine_df(p_first: float, p_second: float) -> float:
    """Decode-and-forward BER composition: an error survives iff exactly one
    hop errs; p + q - 2pq."""
    return p_first + p_second - 2.0 * p_first * p_second


def aber_e2e_hard(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    mod: ModulationScheme,
    th: ThresholdSet,
) -> float:
    p_hyb = aber_hybrid_hard(m, t, mod, th.hard)
    p_a = aber_rf(r, mod, th.rf).value
    return combine_df(p_hyb, p_a)


def aber_hybrid_soft(
    m: MalagaParams, t: ThzParams, mod: ModulationScheme, policy: SoftPolicy
) -> float:
    """Chain-weighted BEP given the soft hybrid link is up: FSO above the
    upper threshold, FSO inside the hysteresis band (FSO-branch weight),
    or THz on the THZ branch."""
    f_s = hybrid_cdf_soft(m, t, policy)
    if f_s >= 1.0 - 1e-12:
        raise InvalidParameterError("soft hybrid link saturated; ABER undefined")
    p_o_u = aber_fso(m, mod, policy.th_upper).value
    p_o_l = aber_fso(m, mod, policy.th_lower).value
    p_t = aber_thz(t, mod, policy.th_thz).value
    f_u = malaga_cdf(m, policy.th_upper)
    f_l = malaga_cdf(m, policy.th_lower)
    pi_thz = fso_soft_cdf(m, policy)
    band = (p_o_l - p_o_u) * (1.0 - f_u) / (f_l - f_u + 1.0)
    return (p_o_u + pi_thz * p_t + band) / (1.0 - f_s)


def aber_e2e_soft(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    mod: ModulationScheme,
    th: ThresholdSet,
) -> float:
    p_hyb = aber_hybrid_soft(m, t, mod, th.soft_policy)
    p_a = aber_rf(r, mod, th.rf).value
    return combine_df(p_hyb, p_a)


# ---------------------------------------------------------------------------
# expanded transcriptions (inline G sums; reconciled to the compositions)
# ---------------------------------------------------------------------------


def _fso_cdf_sum(m: MalagaParams, gamma: float) -> float:
    from ..channels import fso_cdf_kernel

    d = malaga_derive(m)
    s, eps2 = m.s, m.eps_o**2
    coeff = d.omega_big * eps2 / (2.0 ** (2 * s - 1) * math.pi ** (s - 1))
    return coeff * sum(
        d.w[z - 1] * meijer_g(fso_cdf_kernel(m, z), d.zcal * gamma / d.mu_os)
        for z in range(1, m.beta_o + 1)
    )


def _thz_cdf_sum(t: ThzParams, gamma: float) -> float:
    from ..channels import thz_cdf_kernel

    d = thz_derive(t)
    scale = t.n_antennas * t.gamma_bar_t
    return (
        d.chi1
        * gamma**d.g_t
        / (t.alpha_t * scale**d.g_t)
        * meijer_g(thz_cdf_kernel(t), d.chi3 * (gamma / scale) ** (t.alpha_t / 2.0))
    )


def aber_e2e_hard_expanded(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    mod: ModulationScheme,
    th: ThresholdSet,
) -> float:
    """Literal single-expression transcription of the boxed hard-switching
    ABER (numerator/denominator inlined from the kernel sums)."""
    dm = malaga_derive(m)
    dt = thz_derive(t)
    dr = rf_derived(r)
    s, eps2 = m.s, m.eps_o**2
    scale_t = t.n_antennas * t.gamma_bar_t
    gamma_th = th.hard

    sqrt_pi = math.sqrt(math.pi)
    num = 0.0
    for d_i in mod.d_coefs:
        ccd = c_c(t, d_i) + c_d(t, d_i, gamma_th)
        for z in range(1, m.beta_o + 1):
            m1 = (
                mod.a_coef
                * dm.w[z - 1]
                * dt.chi1
                * dm.omega_big
                * eps2
                / (2.0 * scale_t**dt.g_t * 2.0 ** (2 * s - 1) * math.pi ** (s - 1))
            )
            m2 = mod.a_coef * dm.omega_big * eps2 * dm.v[z - 1] / (sqrt_pi * 2.0**s)
            from ..channels import fso_cdf_kernel

            g_fso = meijer_g(fso_cdf_kernel(m, z), dm.zcal * gamma_th / dm.mu_os)
            cab = sqrt_pi * (c_a(m, z, d_i) + c_b(m, z, d_i, gamma_th))
            num += m1 * ccd * g_fso + m2 * cab

    m3 = (
        dt.chi1
        * dm.omega_big
        * eps2
        / (2.0 ** (2 * s - 1) * math.pi ** (s - 1) * t.alpha_t * scale_t**dt.g_t)
    )
    from ..channels import fso_cdf_kernel, thz_cdf_kernel

    den = 1.0 - m3 * sum(
        gamma_th**dt.g_t
        * dm.w[z - 1]
        * meijer_g(fso_cdf_kernel(m, z), dm.zcal * gamma_th / dm.mu_os)
        * meijer_g(
            thz_cdf_kernel(t), dt.chi3 * (gamma_th / scale_t) ** (t.alpha_t / 2.0)
        )
        for z in range(1, m.beta_o + 1)
    )

    v = dr.v_r
    rf_coeff = math.exp(
        0.5 * (v + 1.0) * math.log(dr.psi_r) - math.log(2.0) - math.lgamma(v + 1.0)
    )
    p_a = sum(
        mod.a_coef * rf_coeff * (c_e(dr, d_i) + c_f(dr, d_i, th.rf))
        for d_i in mod.d_coefs
    )
    return (num / den) * (1.0 - 2.0 * p_a) + p_a


def aber_e2e_soft_expanded(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    mod: ModulationScheme,
    th: ThresholdSet,
) -> float:
    """Literal transcription of the boxed soft-switching ABER."""
    dm = malaga_derive(m)
    dt = thz_derive(t)
    dr = rf_derived(r)
    s, eps2 = m.s, m.eps_o**2
    scale_t = t.n_antennas * t.gamma_bar_t
    pol = th.soft_policy
    sqrt_pi = math.sqrt(math.pi)

    f_u = _fso_cdf_sum(m, pol.th_upper)
    f_l = _fso_cdf_sum(m, pol.th_lower)
    f_t = _thz_cdf_sum(t, pol.th_thz)
    bracket = f_l / (1.0 + f_l - f_u)
    f_s = bracket * f_t

    def p_o_at(gamma_th: float) -> float:
        total = 0.0
        for d_i in mod.d_coefs:
            for z in range(1, m.beta_o + 1):
                m2 = mod.a_coef * dm.omega_big * eps2 * dm.v[z - 1] / (sqrt_pi * 2.0**s)
                total += m2 * sqrt_pi * (c_a(m, z, d_i) + c_b(m, z, d_i, gamma_th))
        return total

    m6 = dt.chi1 / (2.0 * scale_t**dt.g_t)
    p_t = sum(
        mod.a_coef * m6 * (c_c(t, d_i) + c_d(t, d_i, pol.th_thz)) for d_i in mod.d_coefs
    )
    p_o_u = p_o_at(pol.th_upper)
    p_o_l = p_o_at(pol.th_lower)
    band = (p_o_l - p_o_u) * (1.0 - f_u) / (f_l - f_u + 1.0)
    p_hyb = (p_o_u + bracket * p_t + band) / (1.0 - f_s)

    v = dr.v_r
    rf_coeff = math.exp(
        0.5 * (v + 1.0) * math.log(dr.psi_r) - math.log(2.0) - math.lgamma(v + 1.0)
    )
    p_a = sum(
        mod.a_coef * rf_coeff * (c_e(dr, d_i) + c_f(dr, d_i, th.rf))
        for d_i in mod.d_coefs
    )
    return p_hyb - 2.0 * p_a * p_hyb + p_a


# ---------------------------------------------------------------------------
# quadrature oracles for whole-link ABER (tests, spec cross-checks)
# ---------------------------------------------------------------------------


def aber_fso_quad(m: MalagaParams, mod: ModulationScheme, gamma_th: float) -> float:
    from ..channels import malaga_pdf

    def f(x: float) -> float:
        g = math.exp(x)
        return mod.bep(g) * malaga_pdf(m, g) * g

    lo = math.log(malaga_derive(m).mu_os) - 34.0
    lo = min(lo, math.log(gamma_th) if gamma_th > 0 else lo)
    hi = math.log(40.0 / min(mod.d_coefs))
    start = math.log(gamma_th) if gamma_th > 0 else lo
    val, _ = quad(f, start, hi, limit=600)
    return val


def aber_thz_quad(t: ThzParams, mod: ModulationScheme, gamma_th: float) -> float:
    def f(x: float) -> float:
        g = math.exp(x)
        return mod.bep(g) * thz_pdf(t, g) * g

    scale = t.n_antennas * t.gamma_bar_t
    lo = math.log(scale) - 40.0
    start = math.log(gamma_th) if gamma_th > 0 else lo
    hi = math.log(40.0 / min(mod.d_coefs))
    val, _ = quad(f, start, hi, limit=600)
    return val


def aber_rf_quad(
    r: RisRfParams | RisRfDerived, mod: ModulationScheme, gamma_th_r: float
) -> float:
    d = rf_derived(r)

    def f(x: float) -> float:
        g = math.exp(x)
        return mod.bep(g) * rf_pdf(d, g) * g

    lo = -2.0 * math.log(d.psi_r) - 40.0 if d.psi_r > 1 else -40.0
    start = math.log(gamma_th_r) if gamma_th_r > 0 else lo
    hi = math.log(40.0 / min(mod.d_coefs))
    val, _ = quad(f, start, hi, limit=600)
    return val
