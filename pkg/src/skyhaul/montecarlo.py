"""Independent stochastic oracle: channel samplers and OP/ABER estimators.

Samplers follow the generative constructions of the three channel models;
the closed forms are the ground truth for sampler acceptance (empirical
CDFs must match), after which the samplers validate the end-to-end
compositions.

RNG: counter-based Philox keyed by (seed, stream_id), so streams are
splittable and platform-stable.  Reductions use fixed-size block sums
combined with exact fsum, making estimates independent of block
processing order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc as _erfc_vec

from .channels import (
    MalagaParams,
    RisRfParams,
    ThzParams,
    UavGeometry,
    geometry_derive,
    los_probability,
    malaga_derive,
    ris_moments,
)
from .errors import InvalidParameterError
from .metrics.modulation import ModulationScheme
from .metrics.outage import ThresholdSet
from .switching import SoftPolicy

_BLOCK = 1 << 16


@dataclass(frozen=True)
class RngStream:
    """Splittable, platform-stable stream identity."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, k: int) -> "RngStream":
        """Derived stream; callers use k < 1024 per nesting level."""
        return RngStream(self.seed, self.stream_id * 1024 + k + 1)


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 1_000_000
    n_warmup_slots: int = 1_000  # hysteresis-chain burn-in

    def __post_init__(self):
        if self.n_samples < 1:
            raise InvalidParameterError("n_samples must be positive")
        if self.n_warmup_slots < 0:
            raise InvalidParameterError("n_warmup_slots must be >= 0")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n: int


def _stable_mean(x: np.ndarray) -> float:
    """Block-sum + fsum reduction: result independent of block order."""
    n = x.size
    blocks = [float(np.sum(x[i : i + _BLOCK])) for i in range(0, n, _BLOCK)]
    return math.fsum(blocks) / n


# ---------------------------------------------------------------------------
# channel samplers
# ---------------------------------------------------------------------------


def sample_fso_snr(m: MalagaParams, rng: RngStream, size: int = 1) -> np.ndarray:
    """Draw gamma_o: gamma large-scale x gamma-shadowed-LOS small-scale
    irradiance, power-law pointing factor, normalized to the electrical SNR
    (gamma = mu_os (I / E[I])^s)."""
    g = rng.generator()
    d = malaga_derive(m)
    x_large = g.gamma(shape=m.alpha_o, scale=1.0 / m.alpha_o, size=size)
    shadow = g.gamma(shape=m.beta_o, scale=1.0 / m.beta_o, size=size)
    los_amp = np.sqrt(shadow * d.omega_coh)
    noise = g.normal(size=(2, size)) * math.sqrt(d.j_p / 2.0)
    i_small = (los_amp + noise[0]) ** 2 + noise[1] ** 2
    eps2 = m.eps_o**2
    i_point = g.uniform(size=size) ** (1.0 / eps2)
    irradiance = x_large * i_small * i_point
    mean_i = (d.omega_coh + d.j_p) * eps2 / (eps2 + 1.0)
    return d.mu_os * (irradiance / mean_i) ** m.s


def sample_thz_snr(t: ThzParams, rng: RngStream, size: int = 1) -> np.ndarray:
    """Draw gamma_t: N_t alpha-mu envelopes (alpha-root mean m*Omega),
    squared and summed, times a squared power-law pointing factor."""
    g = rng.generator()
    power = g.gamma(shape=t.mu_t, scale=1.0 / t.mu_t, size=(t.n_antennas, size))
    r_sq = (t.m_root * t.omega_t) ** 2 * power ** (2.0 / t.alpha_t)
    h_point = g.uniform(size=size) ** (1.0 / t.eps_t**2)
    return t.gamma_bar_t * h_point**2 * np.sum(r_sq, axis=0)


def _rician_envelopes(g: np.random.Generator, j: float, shape) -> np.ndarray:
    """Unit-total-power Rician envelopes with factor J (matches the printed
    per-envelope mean; E[R^2] = 1)."""
    los = math.sqrt(j / (1.0 + j))
    sigma = math.sqrt(1.0 / (2.0 * (1.0 + j)))
    re = g.normal(loc=los, scale=sigma, size=shape)
    im = g.normal(loc=0.0, scale=sigma, size=shape)
    return np.hypot(re, im)


def sample_rf_snr(r: RisRfParams, rng: RngStream, size: int = 1) -> np.ndarray:
    """Draw gamma_r: ideal-phase RIS sum Y = sum_k delta_k zeta_k of Rician
    envelope products; gamma = gamma_bar Y^2 / P_L."""
    g = rng.generator()
    geo = geometry_derive(r.geometry)
    delta = _rician_envelopes(g, geo.j1, (r.n_elements, size))
    zeta = _rician_envelopes(g, geo.j2, (r.n_elements, size))
    y = np.sum(delta * zeta, axis=0)
    return r.gamma_bar_r * y**2 / geo.pl


def sample_rf_direct_snr(
    g_uav: UavGeometry, gamma_bar_r: float, rng: RngStream, size: int = 1
) -> np.ndarray:
    """No-RIS baseline: one ground-level Rician hop over r1 + r2."""
    g = rng.generator()
    j0 = g_uav.rice_min
    i0 = g_uav.i_base + g_uav.i_excess * los_probability(g_uav.env, 0.0)
    pl = (g_uav.r1 + g_uav.r2) ** i0
    env = _rician_envelopes(g, j0, size)
    return gamma_bar_r * env**2 / pl


# ---------------------------------------------------------------------------
# switching chains (vectorized)
# ---------------------------------------------------------------------------


def soft_chain_fso_branch(
    gamma_o: np.ndarray, policy: SoftPolicy, init_fso: bool = False
) -> np.ndarray:
    """Per-slot branch occupancy of the hysteresis chain (True = FSO branch).

    Slots with gamma_o >= upper force FSO, gamma_o < lower force THZ, the
    band in between carries the previous branch (OUTAGE resides on THZ).
    """
    n = gamma_o.size
    up = gamma_o >= policy.th_upper
    down = gamma_o < policy.th_lower
    idx = np.arange(n)
    decisive = up | down
    last = np.maximum.accumulate(np.where(decisive, idx, -1))
    state = np.where(
        last >= 0, up[np.maximum(last, 0)], init_fso
    )
    return state.astype(bool)


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------


def _first_hop_draws(m, t, cfg: McConfig, rng: RngStream, extra: int):
    n = cfg.n_samples + extra
    gamma_o = sample_fso_snr(m, rng.substream(0), n)
    gamma_t = sample_thz_snr(t, rng.substream(1), n)
    return gamma_o, gamma_t


def _first_hop_state(m, t, th: ThresholdSet, policy_kind: str, cfg, rng):
    """Returns (hybrid_outage, gamma_used, alive) arrays of length n_samples."""
    if policy_kind == "hard":
        gamma_o, gamma_t = _first_hop_draws(m, t, cfg, rng, 0)
        fso_up = gamma_o >= th.hard
        thz_up = gamma_t >= th.hard
        out = ~fso_up & ~thz_up
        gamma_used = np.where(fso_up, gamma_o, gamma_t)
        return out, gamma_used, ~out
    if policy_kind == "soft":
        pol = th.soft_policy
        gamma_o, gamma_t = _first_hop_draws(m, t, cfg, rng, cfg.n_warmup_slots)
        on_fso = soft_chain_fso_branch(gamma_o, pol)
        thz_up = gamma_t >= pol.th_thz
        out = ~on_fso & ~thz_up
        gamma_used = np.where(on_fso, gamma_o, gamma_t)
        sl = slice(cfg.n_warmup_slots, None)
        return out[sl], gamma_used[sl], (~out)[sl]
    raise InvalidParameterError("policy_kind must be 'hard' or 'soft'")


def _rf_draws(r, cfg: McConfig, rng: RngStream) -> np.ndarray:
    return sample_rf_snr(r, rng.substream(2), cfg.n_samples)


def estimate_op(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | None,
    th: ThresholdSet,
    policy_kind: str,
    cfg: McConfig,
    rng: RngStream,
    rf_draws: np.ndarray | None = None,
) -> McEstimate:
    """End-to-end outage estimate: first-hop switching outage OR RF-hop
    threshold failure. `r=None` makes the RF hop perfect (hybrid-only).
    `rf_draws` overrides the RF samples (no-RIS baseline studies)."""
    out, _, _ = _first_hop_state(m, t, th, policy_kind, cfg, rng)
    if rf_draws is None and r is not None:
        rf_draws = _rf_draws(r, cfg, rng)
    if rf_draws is not None:
        out = out | (rf_draws < th.rf)
    n = out.size
    p = _stable_mean(out.astype(np.float64))
    return McEstimate(value=p, std_error=math.sqrt(max(p * (1.0 - p), 0.0) / n), n=n)


def _batched_ratio(num: np.ndarray, den: np.ndarray, batches: int = 32):
    """Ratio estimator sum(num)/sum(den) with batch-resampling std error."""
    n = num.size
    edges = np.linspace(0, n, batches + 1, dtype=int)
    vals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        d = float(np.sum(den[lo:hi]))
        vals.append(float(np.sum(num[lo:hi])) / d if d > 0 else 0.0)
    total_den = _stable_mean(den)
    value = _stable_mean(num) / total_den if total_den > 0 else 0.0
    se = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return value, se


def estimate_aber(
    m: MalagaParams,
    t: ThzParams,
    r: RisRfParams | None,
    mod: ModulationScheme,
    th: ThresholdSet,
    policy_kind: str,
    cfg: McConfig,
    rng: RngStream,
    rf_draws: np.ndarray | None = None,
) -> McEstimate:
    """Semi-analytic ABER: the conditional BEP A sum_i erfc(sqrt(D_i g)) is
    averaged over channel draws (variance reduction vs bit-level counting);
    hop BERs combine as p + q - 2pq. The first-hop BEP conditions on the
    switched link being alive; the RF term counts only slots above the RF
    threshold, mirroring the closed-form composition."""

    def bep(gamma: np.ndarray) -> np.ndarray:
        total = np.zeros_like(gamma)
        for d_i in mod.d_coefs:
            total += _erfc_vec(np.sqrt(d_i * gamma))
        return mod.a_coef * total

    out1, gamma_used, alive = _first_hop_state(m, t, th, policy_kind, cfg, rng)
    num = np.where(alive, bep(gamma_used), 0.0)
    p1, se1 = _batched_ratio(num, alive.astype(np.float64))

    q_val, se_q = 0.0, 0.0
    if rf_draws is None and r is not None:
        rf_draws = _rf_draws(r, cfg, rng)
    if rf_draws is not None:
        q = np.where(rf_draws >= th.rf, bep(rf_draws), 0.0)
        q_val = _stable_mean(q)
        se_q = float(np.std(q) / math.sqrt(q.size))

    value = p1 + q_val - 2.0 * p1 * q_val
    # first-order error propagation through p + q - 2pq
    se = math.hypot((1.0 - 2.0 * q_val) * se1, (1.0 - 2.0 * p1) * se_q)
    return McEstimate(value=value, std_error=se, n=cfg.n_samples)
