"""Analytical single-link channel models.

* FSO: Malaga turbulence with pointing error, heterodyne (s=1) or IM/DD
  (s=2) detection.
* THz: alpha-mu fading with antenna combining and pointing error.
* RF: RIS-composite link; the per-element Rician product sum is gamma
  moment-matched, with UAV geometry driving Rician factors and path loss.

Parameter bundles are immutable; average SNRs are stored as linear power
ratios (configs convert from dB). All evaluation functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple

from .errors import ConvergenceError, InvalidParameterError, MomentValidityError
from .specfun import gamma_fn, kummer_1f1, meijer_g, upper_inc_gamma
from .specfun.meijerg import MeijerGParams

# ============================================================================
#  FSO link: Malaga turbulence + pointing error
# ============================================================================


class Detection(IntEnum):
    """Optical receiver detection technique."""

    HETERODYNE = 1
    IM_DD = 2


#: classic Malaga micro-parameter set (LOS power, total scatter power 2c0,
#: coherent coupling fraction, LOS/coupled phase difference)
MALAGA_CLASSIC = {
    "omega_los": 1.3265,
    "c0": 0.1079 / 2.0,
    "rho0": 0.596,
    "phase_a": math.pi / 2.0,
    "phase_b": 0.0,
}

#: micro-parameters driving the Gamma-Gamma limit (rho0 -> 1, coherent
#: power -> 1); used by the reduction cross-check
MALAGA_GG_LIMIT = {
    "omega_los": 1.0 - 0.1079 * (1.0 - 1e-9),
    "c0": 0.1079 / 2.0,
    "rho0": 1.0 - 1e-9,
    "phase_a": math.pi / 2.0,
    "phase_b": 0.0,
}


@dataclass(frozen=True)
class MalagaParams:
    alpha_o: float  # large-scale turbulence shape
    beta_o: int  # small-scale shape (finite integer: finite-sum PDF)
    eps_o: float  # pointing error severity (larger = milder)
    rho0: float  # fraction of scattered power coherently coupled
    c0: float  # half the total scattered power (2c0 = scatter power)
    omega_los: float  # average LOS power
    phase_a: float  # deterministic LOS phase
    phase_b: float  # deterministic coupled-scatter phase
    mode: Detection
    gamma_bar_o: float  # average SNR, linear

    def __post_init__(self):
        if self.alpha_o <= 0 or self.eps_o <= 0 or self.c0 <= 0 or self.omega_los <= 0:
            raise InvalidParameterError("Malaga shape/power parameters must be positive")
        if not (isinstance(self.beta_o, int) and self.beta_o >= 1):
            raise InvalidParameterError("beta_o must be an integer >= 1")
        if not 0.0 <= self.rho0 <= 1.0:
            raise InvalidParameterError("rho0 must lie in [0, 1]")
        if self.rho0 == 1.0:
            raise InvalidParameterError(
                "rho0 = 1 makes the scatter power vanish (division by zero in the "
                "series constants); use rho0 = 1 - 1e-9 for the Gamma-Gamma limit"
            )
        if self.gamma_bar_o <= 0:
            raise InvalidParameterError("gamma_bar_o must be positive (linear scale)")
        if self.mode not in (Detection.HETERODYNE, Detection.IM_DD):
            raise InvalidParameterError("mode must be Detection.HETERODYNE or IM_DD")

    @property
    def s(self) -> int:
        return int(self.mode)


def malaga_params(
    alpha_o: float,
    beta_o: int,
    eps_o: float,
    mode: Detection,
    gamma_bar_o: float,
    micro: dict | str = "classic",
) -> MalagaParams:
    """Build MalagaParams from a named or explicit micro-parameter set."""
    if micro == "classic":
        micro = MALAGA_CLASSIC
    elif micro == "gg_limit":
        micro = MALAGA_GG_LIMIT
    elif isinstance(micro, str):
        raise InvalidParameterError(f"unknown Malaga micro preset {micro!r}")
    return MalagaParams(
        alpha_o=alpha_o,
        beta_o=beta_o,
        eps_o=eps_o,
        rho0=micro["rho0"],
        c0=micro["c0"],
        omega_los=micro["omega_los"],
        phase_a=micro["phase_a"],
        phase_b=micro["phase_b"],
        mode=mode,
        gamma_bar_o=gamma_bar_o,
    )


@dataclass(frozen=True)
class MalagaDerived:
    j_p: float  # scattered power not coupled to LOS
    omega_coh: float  # combined coherent power (LOS + coupled scatter)
    omega_big: float  # series normalization
    lambda0: float  # PDF kernel scale
    zcal: float  # CDF kernel scale (lambda0^s / s^(2s))
    mu_os: float  # electrical SNR, linear
    v: tuple[float, ...]
    u: tuple[float, ...]
    w: tuple[float, ...]
    t1: tuple[float, ...]
    t2: tuple[tuple[float, ...], ...]  # one block per z = 1..beta_o


@lru_cache(maxsize=512)
def malaga_derive(p: MalagaParams) -> MalagaDerived:
    a, beta, eps2, s = p.alpha_o, p.beta_o, p.eps_o**2, p.s
    j_p = 2.0 * p.c0 * (1.0 - p.rho0)
    omega_coh = (
        2.0 * math.cos(p.phase_a - p.phase_b) * math.sqrt(2.0 * p.c0 * p.omega_los * p.rho0)
        + 2.0 * p.c0 * p.rho0
        + p.omega_los
    )
    if j_p <= 0.0 or omega_coh <= 0.0:
        raise InvalidParameterError("derived scatter/coherent powers must be positive")
    bj = beta * j_p + omega_coh

    # log-space products: the ratios (omega_coh/j_p)^(z-1) and j_p powers
    # overflow naive evaluation near the Gamma-Gamma limit
    log_omega_big = (
        math.log(2.0)
        + 0.5 * a * math.log(a)
        - math.lgamma(a)
        - (0.5 * a + 1.0) * math.log(j_p)
        + (0.5 * a + beta) * math.log(beta * j_p / bj)
    )
    u = []
    v = []
    w = []
    for z in range(1, beta + 1):
        log_uz = (
            math.log(math.comb(beta - 1, z - 1))
            - math.lgamma(z)
            + 0.5 * z * math.log(a / beta)
            + (z - 1.0) * math.log(omega_coh / j_p)
            + (1.0 - 0.5 * z) * math.log(bj)
        )
        log_vz = log_uz - 0.5 * (a + z) * math.log(a * beta / bj)
        u.append(math.exp(log_uz))
        v.append(math.exp(log_vz))
        w.append(math.exp(log_vz + (a + z - 1.0) * math.log(s)))

    lambda0 = a * beta * eps2 * (j_p + omega_coh) / ((eps2 + 1.0) * bj)
    zcal = lambda0**s / s ** (2 * s)

    if s == 1:
        mu_os = p.gamma_bar_o
    else:
        q_moment = 2.0 * j_p * (j_p + 2.0 * omega_coh) + omega_coh**2 * (1.0 + 1.0 / beta)
        mu_os = (
            p.gamma_bar_o
            * a
            * eps2
            * (eps2 + 2.0)
            * (j_p + omega_coh)
            / ((a + 1.0) * (eps2 + 1.0) ** 2 * q_moment)
        )

    t1 = tuple((eps2 + i) / s for i in range(1, s + 1))
    t2 = tuple(
        tuple((eps2 + i) / s for i in range(s))
        + tuple((a + i) / s for i in range(s))
        + tuple((z + i) / s for i in range(s))
        for z in range(1, beta + 1)
    )
    return MalagaDerived(
        j_p=j_p,
        omega_coh=omega_coh,
        omega_big=math.exp(log_omega_big),
        lambda0=lambda0,
        zcal=zcal,
        mu_os=mu_os,
        v=tuple(v),
        u=tuple(u),
        w=tuple(w),
        t1=t1,
        t2=t2,
    )


def fso_pdf_kernel(p: MalagaParams, z_idx: int) -> MeijerGParams:
    """G^{3,0}_{1,3} kernel of the PDF term z = z_idx (1-based)."""
    eps2 = p.eps_o**2
    return MeijerGParams(3, 0, 1, 3, (eps2 + 1.0,), (eps2, p.alpha_o, float(z_idx)))


def fso_cdf_kernel(p: MalagaParams, z_idx: int) -> MeijerGParams:
    """G^{3s,1}_{s+1,3s+1} kernel of the CDF term z = z_idx (1-based)."""
    d = malaga_derive(p)
    s = p.s
    return MeijerGParams(
        3 * s, 1, s + 1, 3 * s + 1, (1.0,) + d.t1, d.t2[z_idx - 1] + (0.0,)
    )


def malaga_pdf(p: MalagaParams, gamma: float) -> float:
    if gamma <= 0.0:
        raise InvalidParameterError("malaga_pdf requires gamma > 0")
    d = malaga_derive(p)
    s, eps2 = p.s, p.eps_o**2
    arg = d.lambda0 * (gamma / d.mu_os) ** (1.0 / s)
    total = 0.0
    for z in range(1, p.beta_o + 1):
        total += d.v[z - 1] * meijer_g(fso_pdf_kernel(p, z), arg)
    return d.omega_big * eps2 / (2.0**s * gamma) * total


def _clamp_cdf(value: float, slack: float = 1e-6) -> float:
    # clamping is only a rounding guard; escaping [0,1] by more than the
    # slack means the evaluation itself went wrong
    if value < -slack or value > 1.0 + slack:
        raise ConvergenceError(f"CDF value {value} outside [0,1] beyond slack", "cdf")
    return min(1.0, max(0.0, value))


def malaga_cdf(p: MalagaParams, gamma: float) -> float:
    if gamma < 0.0:
        raise InvalidParameterError("malaga_cdf requires gamma >= 0")
    if gamma == 0.0:
        return 0.0
    d = malaga_derive(p)
    s, eps2 = p.s, p.eps_o**2
    arg = d.zcal * gamma / d.mu_os
    total = 0.0
    for z in range(1, p.beta_o + 1):
        total += d.w[z - 1] * meijer_g(fso_cdf_kernel(p, z), arg)
    coeff = d.omega_big * eps2 / (2.0 ** (2 * s - 1) * math.pi ** (s - 1))
    return _clamp_cdf(coeff * total)


# ============================================================================
#  THz link: alpha-mu fading + pointing error, N_t-antenna combining
# ============================================================================


@dataclass(frozen=True)
class ThzParams:
    alpha_t: float  # fading nonlinearity
    mu_t: float  # fading clustering
    m_root: float  # alpha-root mean value of the fading envelope
    omega_t: float  # fraction of collected power
    eps_t: float  # pointing error severity
    n_antennas: int
    gamma_bar_t: float  # average SNR, linear

    def __post_init__(self):
        for name in ("alpha_t", "mu_t", "m_root", "omega_t", "eps_t", "gamma_bar_t"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")
        if not (isinstance(self.n_antennas, int) and self.n_antennas >= 1):
            raise InvalidParameterError("n_antennas must be an integer >= 1")
        if _thz_chi2(self) <= 0.0:
            raise InvalidParameterError(
                "alpha_t*mu_t*n_antennas - eps_t^2 must be positive (chi2 > 0)"
            )


def _thz_chi2(p: ThzParams) -> float:
    g_t = p.eps_t**2 / 2.0
    return (p.alpha_t * p.mu_t * p.n_antennas - 2.0 * g_t) / p.alpha_t


class ThzDerived(NamedTuple):
    chi1: float
    chi2: float
    chi3: float
    g_t: float


@lru_cache(maxsize=512)
def thz_derive(p: ThzParams) -> ThzDerived:
    g_t = p.eps_t**2 / 2.0
    mn = p.mu_t * p.n_antennas
    chi1 = (
        2.0
        * g_t
        * mn ** (2.0 * g_t / p.alpha_t)
        / (p.omega_t ** (2.0 * g_t) * p.m_root ** (2.0 * g_t) * gamma_fn(mn))
    )
    chi2 = _thz_chi2(p)
    chi3 = mn / (p.omega_t**p.alpha_t * p.m_root**p.alpha_t)
    return ThzDerived(chi1=chi1, chi2=chi2, chi3=chi3, g_t=g_t)


def thz_cdf_kernel(p: ThzParams) -> MeijerGParams:
    d = thz_derive(p)
    r = 2.0 * d.g_t / p.alpha_t
    return MeijerGParams(2, 1, 2, 3, (1.0 - r, 1.0), (0.0, d.chi2, -r))


def thz_pdf(p: ThzParams, gamma: float) -> float:
    if gamma <= 0.0:
        raise InvalidParameterError("thz_pdf requires gamma > 0")
    d = thz_derive(p)
    scale = p.n_antennas * p.gamma_bar_t
    kernel = upper_inc_gamma(d.chi2, d.chi3 * (gamma / scale) ** (p.alpha_t / 2.0))
    return d.chi1 / (2.0 * scale**d.g_t) * gamma ** (d.g_t - 1.0) * kernel


def thz_cdf(p: ThzParams, gamma: float) -> float:
    if gamma < 0.0:
        raise InvalidParameterError("thz_cdf requires gamma >= 0")
    if gamma == 0.0:
        return 0.0
    d = thz_derive(p)
    scale = p.n_antennas * p.gamma_bar_t
    arg = d.chi3 * (gamma / scale) ** (p.alpha_t / 2.0)
    coeff = d.chi1 * gamma**d.g_t / (p.alpha_t * scale**d.g_t)
    return _clamp_cdf(coeff * meijer_g(thz_cdf_kernel(p), arg))


# ============================================================================
#  RF link: UAV geometry, environment presets, RIS-composite moments
# ============================================================================


@dataclass(frozen=True)
class EnvironmentPreset:
    name: str
    b5: float
    b6: float


ENVIRONMENTS = {
    "suburban": EnvironmentPreset("suburban", 4.88, 0.43),
    "urban": EnvironmentPreset("urban", 9.61, 0.16),
    "dense_urban": EnvironmentPreset("dense_urban", 12.08, 0.11),
    "highrise": EnvironmentPreset("highrise", 27.23, 0.08),
}


def environment(name: str) -> EnvironmentPreset:
    try:
        return ENVIRONMENTS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown environment {name!r}; choose from {sorted(ENVIRONMENTS)}"
        ) from None


@dataclass(frozen=True)
class UavGeometry:
    r1: float  # projection distance AP -> UAV, km
    r2: float  # projection distance UAV -> user, km
    h: float  # UAV altitude, km
    i_excess: float  # path-loss exponent excess b3 (zenith minus ground)
    i_base: float  # path-loss exponent base b4 (ground level)
    rice_min: float  # Rician factor at zero elevation, b1 = J(0)
    rice_max: float  # Rician factor at zenith, J(pi/2)
    env: EnvironmentPreset
    angle_convention: str = "elevation"  # "elevation" (atan(h/r)) or "ground"

    def __post_init__(self):
        for name in ("r1", "r2", "h", "i_excess", "i_base", "rice_min", "rice_max"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.angle_convention not in ("elevation", "ground"):
            raise InvalidParameterError("angle_convention must be 'elevation' or 'ground'")


class GeometryDerived(NamedTuple):
    l1: float
    l2: float
    phi1: float
    phi2: float
    u1: float
    u2: float
    i1: float
    i2: float
    j1: float
    j2: float
    pl: float


def los_probability(env: EnvironmentPreset, phi: float) -> float:
    """LOS probability at elevation phi (radians).

    The (b5, b6) constants are calibrated for elevation expressed in
    degrees; phi is converted internally.
    """
    deg = math.degrees(phi)
    return 1.0 / (env.b5 * math.exp(-env.b6 * (deg - env.b5)) + 1.0)


def geometry_derive(g: UavGeometry) -> GeometryDerived:
    l1 = math.hypot(g.r1, g.h)
    l2 = math.hypot(g.r2, g.h)
    if g.angle_convention == "elevation":
        phi1, phi2 = math.atan2(g.h, g.r1), math.atan2(g.h, g.r2)
    else:
        phi1, phi2 = math.atan2(g.r1, g.h), math.atan2(g.r2, g.h)
    u1, u2 = los_probability(g.env, phi1), los_probability(g.env, phi2)
    i1 = g.i_base + g.i_excess * u1
    i2 = g.i_base + g.i_excess * u2
    b2 = (2.0 / math.pi) * math.log(g.rice_max / g.rice_min)
    j1 = g.rice_min * math.exp(b2 * phi1)
    j2 = g.rice_min * math.exp(b2 * phi2)
    pl = l1**i1 * l2**i2
    return GeometryDerived(l1, l2, phi1, phi2, u1, u2, i1, i2, j1, j2, pl)


@dataclass(frozen=True)
class RisRfParams:
    n_elements: int
    geometry: UavGeometry
    gamma_bar_r: float  # average SNR P_s/N_d, linear

    def __post_init__(self):
        if not (isinstance(self.n_elements, int) and self.n_elements >= 1):
            raise InvalidParameterError("n_elements must be an integer >= 1")
        if self.gamma_bar_r <= 0:
            raise InvalidParameterError("gamma_bar_r must be positive (linear scale)")


@dataclass(frozen=True)
class RisRfDerived:
    mean_y: float  # E(Y) of the RIS cascade sum
    var_y: float  # V(Y)
    lambda_bar: float  # gamma-matching scale V/E
    v_r: float  # gamma-matching shape E^2/V - 1
    psi_r: float  # SNR kernel scale P_L / (lambda_bar^2 gamma_bar)
    pl: float
    i1: float
    i2: float
    j1: float
    j2: float


def rician_envelope_mean(j: float) -> float:
    """E[R] of a unit-total-power Rician envelope with factor J."""
    return gamma_fn(1.5) * kummer_1f1(1.5, 1.0, j) / (math.sqrt(j + 1.0) * math.exp(j))


def rician_envelope_sqmean(j: float) -> float:
    """E[R^2] of the same envelope: 1F1(2;1;J)/((J+1) e^J), identically 1."""
    return kummer_1f1(2.0, 1.0, j) / ((j + 1.0) * math.exp(j))


def _matched_gamma(mean_y: float, var_y: float, pl: float, gamma_bar: float, geo) -> RisRfDerived:
    if var_y <= 0.0:
        raise MomentValidityError(f"composite variance {var_y} must be positive")
    lambda_bar = var_y / mean_y
    v_r = mean_y**2 / var_y - 1.0
    if v_r <= -1.0:
        raise MomentValidityError(f"shape v_r = {v_r} must exceed -1")
    psi_r = pl / (lambda_bar**2 * gamma_bar)
    return RisRfDerived(
        mean_y=mean_y,
        var_y=var_y,
        lambda_bar=lambda_bar,
        v_r=v_r,
        psi_r=psi_r,
        pl=pl,
        i1=geo.i1,
        i2=geo.i2,
        j1=geo.j1,
        j2=geo.j2,
    )


@lru_cache(maxsize=512)
def ris_moments(p: RisRfParams) -> RisRfDerived:
    """Gamma moment matching of Y = sum_k delta_k zeta_k (N_r i.i.d. products)."""
    geo = geometry_derive(p.geometry)
    e1, e2 = rician_envelope_mean(geo.j1), rician_envelope_mean(geo.j2)
    m2_1, m2_2 = rician_envelope_sqmean(geo.j1), rician_envelope_sqmean(geo.j2)
    n = p.n_elements
    mean_y = n * e1 * e2
    var_y = n * (m2_1 * m2_2 - (e1 * e2) ** 2)
    return _matched_gamma(mean_y, var_y, geo.pl, p.gamma_bar_r, geo)


def direct_rf_derived(g: UavGeometry, gamma_bar_r: float) -> RisRfDerived:
    """Baseline without the aerial RIS: one ground-level Rician hop over the
    full horizontal distance r1 + r2 (used by the comparison presets)."""
    j0 = g.rice_min  # zero elevation
    u0 = los_probability(g.env, 0.0)
    i0 = g.i_base + g.i_excess * u0
    pl = (g.r1 + g.r2) ** i0
    e = rician_envelope_mean(j0)
    m2 = rician_envelope_sqmean(j0)
    geo = GeometryDerived(g.r1 + g.r2, 0.0, 0.0, 0.0, u0, u0, i0, i0, j0, j0, pl)
    return _matched_gamma(e, m2 - e**2, pl, gamma_bar_r, geo)


def rf_pdf(d: RisRfDerived, gamma: float) -> float:
    if gamma <= 0.0:
        raise InvalidParameterError("rf_pdf requires gamma > 0")
    v, psi = d.v_r, d.psi_r
    log_val = (
        0.5 * (v + 1.0) * math.log(psi)
        + 0.5 * (v - 1.0) * math.log(gamma)
        - math.sqrt(psi * gamma)
        - math.log(2.0)
        - math.lgamma(v + 1.0)
    )
    return math.exp(log_val)


def rf_cdf(d: RisRfDerived, gamma: float) -> float:
    """Gamma(v_r+1, sqrt(psi_r gamma)) / Gamma(v_r+1), exactly as printed.

    Note this expression equals 1 at gamma = 0 and decreases (a survival
    form); the metrics layer selects how it enters outage compositions via
    the rf_cdf_reading option.
    """
    if gamma < 0.0:
        raise InvalidParameterError("rf_cdf requires gamma >= 0")
    if gamma == 0.0:
        return 1.0
    v = d.v_r
    return upper_inc_gamma(v + 1.0, math.sqrt(d.psi_r * gamma)) / gamma_fn(v + 1.0)
