"""High-SNR outage asymptotics and diversity orders.

The hybrid and RF outage factors are replaced by the leading terms of
their small-argument expansions (the k=0 residues of each Meijer-G
kernel), which is exactly the printed asymptotic double sum; integer
parameter differences hit Gamma poles and are handled by the spec'd
+/- 1e-6 perturbation with averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..channels import (
    MalagaParams,
    RisRfDerived,
    RisRfParams,
    ThzParams,
    fso_cdf_kernel,
    malaga_derive,
    thz_cdf_kernel,
    thz_derive,
)
from ..errors import GammaPoleError
from ..specfun import gamma_fn, residue_leading_coeffs
from ..specfun.meijerg import MeijerGParams, _coalescing_clusters, _perturbed
from .outage import RF_READINGS, ThresholdSet, rf_derived

_PERTURB_EPS = 1e-6


@dataclass(frozen=True)
class AsymptoticResult:
    op_hybrid_inf: float  # leading hybrid-hop outage at the given SNRs
    op_rf_inf: float  # leading RF-hop outage
    op_total: float  # their sum (dual-hop asymptote)
    gd_hybrid: float  # hybrid diversity order (printed min formula)
    gd_rf: float  # RF diversity order (v_r + 1)/2
    param_arrays: dict
    perturbed: bool  # True when a Gamma pole forced parameter perturbation


def _leading_sum(params: MeijerGParams, arg: float) -> tuple[float, bool]:
    """sum_h c_h arg^{b_h} over the k=0 residue terms, with perturbation."""
    try:
        coeffs = residue_leading_coeffs(params)
        return sum(c * arg**b for b, c in coeffs), False
    except GammaPoleError:
        clusters = _coalescing_clusters(params)
        total = 0.0
        for eps in (_PERTURB_EPS, -_PERTURB_EPS):
            coeffs = residue_leading_coeffs(_perturbed(params, clusters, eps))
            total += sum(c * arg**b for b, c in coeffs)
        return 0.5 * total, True


def asymptotic_op(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | RisRfDerived,
    th: ThresholdSet,
    reading: str = "one_minus",
) -> AsymptoticResult:
    if reading not in RF_READINGS:
        raise ValueError(f"rf_cdf_reading must be one of {RF_READINGS}")
    dm = malaga_derive(m)
    dt = thz_derive(t)
    dr = rf_derived(r)
    s, eps2 = m.s, m.eps_o**2
    gamma_th = th.hard
    perturbed = False

    # hybrid hop: product of the two CDFs' leading expansions
    fso_coeff = dm.omega_big * eps2 / (2.0 ** (2 * s - 1) * math.pi ** (s - 1))
    fso_lead = 0.0
    for z in range(1, m.beta_o + 1):
        lead, pert = _leading_sum(
            fso_cdf_kernel(m, z), dm.zcal * gamma_th / dm.mu_os
        )
        fso_lead += dm.w[z - 1] * lead
        perturbed |= pert
    fso_lead *= fso_coeff

    scale_t = t.n_antennas * t.gamma_bar_t
    thz_arg = dt.chi3 * (gamma_th / scale_t) ** (t.alpha_t / 2.0)
    thz_lead, pert = _leading_sum(thz_cdf_kernel(t), thz_arg)
    perturbed |= pert
    thz_lead *= dt.chi1 * gamma_th**dt.g_t / (t.alpha_t * scale_t**dt.g_t)

    op_hybrid = fso_lead * thz_lead

    # RF hop: leading term of the regularized incomplete-gamma expansion
    v = dr.v_r
    x = dr.psi_r * th.rf
    rf_lead = x ** (0.5 * (v + 1.0)) / gamma_fn(v + 2.0)
    op_rf = rf_lead if reading == "one_minus" else 1.0 - rf_lead

    # diversity orders (printed min formula; the z-minimum sits at z = 1)
    gd_candidates = [eps2 / s, m.alpha_o / s]
    gd_candidates += [z / s for z in range(1, m.beta_o + 1)]
    gd_candidates.append(t.alpha_t * t.mu_t * t.n_antennas / 2.0)
    gd_hybrid = min(gd_candidates)
    gd_rf = (v + 1.0) / 2.0

    arrays = {
        "M": {z: [1.0 - b for b in dm.t2[z - 1]] + [1.0] for z in range(1, m.beta_o + 1)},
        "N": [0.0] + [1.0 - a for a in dm.t1],
        "B": [1.0, 1.0 - dt.chi2, 1.0 + 2.0 * dt.g_t / t.alpha_t],
        "D": [2.0 * dt.g_t / t.alpha_t, 0.0],
        "R": [-v, 1.0],
    }
    return AsymptoticResult(
        op_hybrid_inf=op_hybrid,
        op_rf_inf=op_rf,
        op_total=op_hybrid + op_rf,
        gd_hybrid=gd_hybrid,
        gd_rf=gd_rf,
        param_arrays=arrays,
        perturbed=perturbed,
    )
