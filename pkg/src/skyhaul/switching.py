"""Hard and soft (hysteresis) link selection and the hybrid-link CDFs.

Soft switching is a two-state chain over {FSO branch, THZ branch}: the FSO
link stays active while gamma_o >= lower threshold once acquired, and is
re-acquired when gamma_o >= upper threshold.  Under i.i.d. slot draws the
stationary THZ-branch occupancy is F(l) / (1 + F(l) - F(u)), which is
exactly the closed-form bracket used by the soft CDF; OUTAGE slots leave
the chain resident on the THZ branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .channels import MalagaParams, ThzParams, malaga_cdf, thz_cdf
from .errors import InvalidParameterError


class SwitchDecision(Enum):
    FSO = "fso"
    THZ = "thz"
    OUTAGE = "outage"


@dataclass(frozen=True)
class HardPolicy:
    gamma_th: float  # common threshold, linear

    def __post_init__(self):
        if self.gamma_th <= 0:
            raise InvalidParameterError("gamma_th must be positive")


@dataclass(frozen=True)
class SoftPolicy:
    th_upper: float  # FSO re-acquisition threshold, linear
    th_lower: float  # FSO drop threshold, linear
    th_thz: float  # THz activation threshold, linear

    def __post_init__(self):
        if min(self.th_upper, self.th_lower, self.th_thz) <= 0:
            raise InvalidParameterError("thresholds must be positive")
        if not self.th_lower < self.th_upper:
            raise InvalidParameterError("need th_lower < th_upper")


def select_hard(policy: HardPolicy, gamma_o: float, gamma_t: float) -> SwitchDecision:
    """FSO first; THz as backup; ties at the threshold activate the link."""
    if gamma_o < 0 or gamma_t < 0:
        raise InvalidParameterError("SNRs must be non-negative")
    if gamma_o >= policy.gamma_th:
        return SwitchDecision.FSO
    if gamma_t >= policy.gamma_th:
        return SwitchDecision.THZ
    return SwitchDecision.OUTAGE


def select_soft(
    policy: SoftPolicy,
    prev: SwitchDecision,
    gamma_o: float,
    gamma_t: float,
) -> SwitchDecision:
    """One hysteresis-chain step. `prev` is last slot's decision; OUTAGE
    counts as THZ-branch residency (the system was last attempting THz)."""
    if gamma_o < 0 or gamma_t < 0:
        raise InvalidParameterError("SNRs must be non-negative")
    if gamma_o >= policy.th_upper:
        return SwitchDecision.FSO
    on_fso_branch = prev is SwitchDecision.FSO
    if gamma_o >= policy.th_lower and on_fso_branch:
        return SwitchDecision.FSO
    return SwitchDecision.THZ if gamma_t >= policy.th_thz else SwitchDecision.OUTAGE


# ---------------------------------------------------------------------------
# hybrid-link CDFs
# ---------------------------------------------------------------------------


def hybrid_cdf_hard(m: MalagaParams, t: ThzParams, policy: HardPolicy) -> float:
    """P(hybrid down) = F_o(th) * F_t(th): outage needs both links below."""
    return malaga_cdf(m, policy.gamma_th) * thz_cdf(t, policy.gamma_th)


def fso_soft_cdf(m: MalagaParams, policy: SoftPolicy) -> float:
    """Stationary probability the chain is off the FSO link.

    Printed form F(l) + F(l)[F(u) - F(l)] / (F(l) - F(u) + 1); algebraically
    F(l) / (1 + F(l) - F(u)).
    """
    f_l = malaga_cdf(m, policy.th_lower)
    f_u = malaga_cdf(m, policy.th_upper)
    denom = f_l - f_u + 1.0
    return f_l + f_l * (f_u - f_l) / denom


def hybrid_cdf_soft(m: MalagaParams, t: ThzParams, policy: SoftPolicy) -> float:
    """P(soft hybrid down) = P(THZ branch) * F_t(th_thz)."""
    return fso_soft_cdf(m, policy) * thz_cdf(t, policy.th_thz)
