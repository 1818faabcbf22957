"""End-to-end outage probability for hard and soft switching.

Each metric has two implementations: the composition (factored CDFs, the
primary path) and an "expanded" transcription that inlines every
Meijer-G sum; tests reconcile the two at 1e-10. The printed RF expression
is survival-shaped, so the `rf_cdf_reading` option selects how it enters
the dual-hop composition: "one_minus" (default; matches Monte Carlo) or
"as_printed".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..channels import (
    MalagaParams,
    RisRfDerived,
    RisRfParams,
    ThzParams,
    malaga_derive,
    rf_cdf,
    ris_moments,
    thz_derive,
)
from ..errors import InvalidParameterError
from ..specfun import meijer_g
from ..channels import fso_cdf_kernel, thz_cdf_kernel
from ..switching import HardPolicy, SoftPolicy, hybrid_cdf_hard, hybrid_cdf_soft

RF_READINGS = ("one_minus", "as_printed")


@dataclass(frozen=True)
class ThresholdSet:
    hard: float  # hybrid-link common threshold, linear
    soft_upper: float  # FSO upper threshold, linear
    soft_lower: float  # FSO lower threshold, linear
    soft_thz: float  # THz threshold (soft), linear
    rf: float  # fronthaul RF threshold, linear

    def __post_init__(self):
        for name in ("hard", "soft_upper", "soft_lower", "soft_thz", "rf"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"threshold {name} must be positive")
        if not self.soft_lower < self.soft_upper:
            raise InvalidParameterError("need soft_lower < soft_upper")

    @property
    def hard_policy(self) -> HardPolicy:
        return HardPolicy(self.hard)

    @property
    def soft_policy(self) -> SoftPolicy:
        return SoftPolicy(self.soft_upper, self.soft_lower, self.soft_thz)


def rf_derived(r: RisRfParams | RisRfDerived) -> RisRfDerived:
    return r if isinstance(r, RisRfDerived) else ris_moments(r)


def rf_outage(r: RisRfParams | RisRfDerived, gamma_th_r: float, reading: str) -> float:
    """P(RF hop fails) under the selected reading of the printed expression."""
    if reading not in RF_READINGS:
        raise InvalidParameterError(f"rf_cdf_reading must be one of {RF_READINGS}")
    printed = rf_cdf(rf_derived(r), gamma_th_r)
    return 1.0 - printed if reading == "one_minus" else printed


def op_hard(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    th: ThresholdSet,
    reading: str = "one_minus",
) -> float:
    """P_out = 1 - (1 - F_hybrid)(1 - F_rf): either hop failing is an outage."""
    f_h = hybrid_cdf_hard(m, t, th.hard_policy)
    f_r = rf_outage(r, th.rf, reading)
    return 1.0 - (1.0 - f_h) * (1.0 - f_r)


def op_soft(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    th: ThresholdSet,
    reading: str = "one_minus",
) -> float:
    f_s = hybrid_cdf_soft(m, t, th.soft_policy)
    f_r = rf_outage(r, th.rf, reading)
    return 1.0 - (1.0 - f_s) * (1.0 - f_r)


# ---------------------------------------------------------------------------
# expanded transcriptions (inline G sums; reconciled to the compositions)
# ---------------------------------------------------------------------------


def _fso_cdf_inline(m: MalagaParams, gamma: float) -> float:
    d = malaga_derive(m)
    s, eps2 = m.s, m.eps_o**2
    coeff = d.omega_big * eps2 / (2.0 ** (2 * s - 1) * math.pi ** (s - 1))
    total = 0.0
    for z in range(1, m.beta_o + 1):
        total += d.w[z - 1] * meijer_g(fso_cdf_kernel(m, z), d.zcal * gamma / d.mu_os)
    return coeff * total


def _thz_cdf_inline(t: ThzParams, gamma: float) -> float:
    d = thz_derive(t)
    scale = t.n_antennas * t.gamma_bar_t
    coeff = d.chi1 * gamma**d.g_t / (t.alpha_t * scale**d.g_t)
    return coeff * meijer_g(thz_cdf_kernel(t), d.chi3 * (gamma / scale) ** (t.alpha_t / 2.0))


def op_hard_expanded(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    th: ThresholdSet,
    reading: str = "one_minus",
) -> float:
    """Single-expression form: F_h(th) + F_rf(th_r) [1 - F_h(th)]."""
    f_h = _fso_cdf_inline(m, th.hard) * _thz_cdf_inline(t, th.hard)
    f_r = rf_outage(r, th.rf, reading)
    return f_h + f_r * (1.0 - f_h)


def op_soft_expanded(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    th: ThresholdSet,
    reading: str = "one_minus",
) -> float:
    f_l = _fso_cdf_inline(m, th.soft_lower)
    f_u = _fso_cdf_inline(m, th.soft_upper)
    f_s = (f_l + f_l * (f_u - f_l) / (f_l - f_u + 1.0)) * _thz_cdf_inline(t, th.soft_thz)
    f_r = rf_outage(r, th.rf, reading)
    return f_s + f_r * (1.0 - f_s)
