"""Modulation coefficient table for the conditional BEP sum A*erfc(sqrt(D_i g))."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class ModulationScheme:
    kind: str  # OOK | BPSK | MPSK | MQAM
    m_order: int | None
    n: int
    a_coef: float
    d_coefs: tuple[float, ...]

    def __post_init__(self):
        if len(self.d_coefs) != self.n:
            raise InvalidParameterError("d_coefs length must equal n")

    def bep(self, gamma: float) -> float:
        """Conditional bit error probability at instantaneous SNR gamma."""
        return self.a_coef * sum(math.erfc(math.sqrt(d * gamma)) for d in self.d_coefs)

    @property
    def label(self) -> str:
        return self.kind if self.m_order is None else f"{self.m_order}-{self.kind[1:]}"


def _power_of_two(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


def modulation_params(kind: str, m_order: int | None = None) -> ModulationScheme:
    kind = kind.upper()
    if kind == "OOK":
        return ModulationScheme("OOK", None, 1, 0.5, (0.5,))
    if kind == "BPSK":
        return ModulationScheme("BPSK", None, 1, 0.5, (1.0,))
    if kind == "MPSK":
        if m_order is None or not _power_of_two(m_order):
            raise InvalidParameterError("MPSK needs M a power of 2 (>= 2)")
        n = max(m_order // 4, 1)
        a = 1.0 / max(2.0, math.log2(m_order))
        d = tuple(math.sin((2 * i - 1) * math.pi / m_order) ** 2 for i in range(1, n + 1))
        return ModulationScheme("MPSK", m_order, n, a, d)
    if kind == "MQAM":
        if m_order is None or not _power_of_two(m_order):
            raise InvalidParameterError("MQAM needs M a power of 2 (>= 4)")
        root = math.isqrt(m_order)
        if root * root != m_order:
            raise InvalidParameterError("MQAM needs a square constellation")
        n = root // 2
        if n < 1:
            raise InvalidParameterError("MQAM needs M >= 4")
        a = 2.0 * (1.0 - 1.0 / root) / math.log2(m_order)
        d = tuple(3.0 * (2 * i - 1) ** 2 / (2.0 * (m_order - 1)) for i in range(1, n + 1))
        return ModulationScheme("MQAM", m_order, n, a, d)
    raise InvalidParameterError(f"unknown modulation kind {kind!r}")
