"""Closed-form rate lower bounds, asymptotic limits and system comparisons.

All bounds take a :class:`BoundInputs` bundle: the element gain that actually
multiplies the SINR (rho*cos^2(phi) for the atomic receiver, the RF-chain
gain for the conventional one), the effective aperture, the noise power and
the per-user large-scale gains.  The comparison formulas assume the optical
phase is at its maximizing setting (cos^2(phi) = 1), which is how the gap
expressions are defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MRC = "mrc"
ZF = "zf"
RAQ = "raq"
MMIMO = "mmimo"

SCHEMES = (MRC, ZF)
SYSTEMS = (RAQ, MMIMO)


@dataclass(frozen=True)
class BoundInputs:
    """Everything a closed-form bound needs for one system/scheme pair."""

    system: str
    scheme: str
    m_elements: int
    beta: np.ndarray
    transmit_power: float
    aperture: float
    gain: float
    noise_power: float

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise DomainError(f"unknown system {self.system!r}")
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if self.m_elements < 1:
            raise DomainError("array needs at least one element")
        beta = np.asarray(self.beta, dtype=float)
        object.__setattr__(self, "beta", beta)
        if beta.ndim != 1 or beta.size < 1:
            raise DomainError("beta must be a nonempty vector")
        if np.any(beta <= 0):
            raise DomainError("large-scale gains must be positive")
        if self.transmit_power < 0:
            raise DomainError("transmit power must be nonnegative")
        for name in ("aperture", "gain", "noise_power"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if self.scheme == MRC and self.m_elements < 2:
            raise DomainError("the MRC bound needs at least two elements")
        if self.scheme == ZF and self.m_elements < beta.size:
            raise DomainError(
                f"ZF needs at least as many elements ({self.m_elements}) as "
                f"users ({beta.size})"
            )

    @property
    def user_count(self) -> int:
        return int(self.beta.size)

    @property
    def snr_scale(self) -> float:
        """Common factor gain * P_s * A_e / sigma^2 multiplying each beta."""
        return (self.gain * self.transmit_power * self.aperture
                / self.noise_power)


def lower_bound_per_user(inputs: BoundInputs) -> np.ndarray:
    """Closed-form ergodic-rate lower bound for every user (bit/s/Hz).

    MRC: log2(1 + c*(M-1)*beta_k / (1 + c*sum_{i!=k} beta_i)) with
    c = gain*P_s*A_e/sigma^2.  ZF: log2(1 + c*(M-K)*beta_k).  Both follow
    from Jensen's inequality on the inverse SINR under uncorrelated Rayleigh
    fading with perfect CSI.
    """
    m = inputs.m_elements
    k = inputs.user_count
    c = inputs.snr_scale
    beta = inputs.beta
    if inputs.scheme == MRC:
        other = beta.sum() - beta
        sinr = c * (m - 1) * beta / (1.0 + c * other)
    else:
        if m < k:
            raise DomainError("ZF lower bound needs M >= K")
        sinr = c * (m - k) * beta
    return np.log2(1.0 + sinr)


def lower_bound(inputs: BoundInputs, k: int) -> float:
    """Lower bound of user ``k`` (0-based index)."""
    bounds = lower_bound_per_user(inputs)
    if not 0 <= k < bounds.size:
        raise DomainError(f"user index {k} out of range")
    return float(bounds[k])


def asymptotic_limits(inputs: BoundInputs, k: int, case: str,
                      energy_budget: float | None = None) -> float:
    """Asymptotic rate of user ``k`` in one of two regimes.

    ``case="interference"`` (high transmit power, MRC): the noise drops out
    and the rate saturates at log2(1 + (M-1)*beta_k / sum_{i!=k} beta_i),
    identical for both receiver technologies.

    ``case="scaled-power"`` (P_s = E/M with the array growing): the rate
    tends to log2(1 + E*beta_k*A_e*gain/sigma^2) for a fixed energy budget
    ``E``; the conventional system obeys the same form with its own gain,
    aperture and noise.
    """
    if not 0 <= k < inputs.user_count:
        raise DomainError(f"user index {k} out of range")
    beta = inputs.beta
    if case in ("interference", "C1", "c1"):
        if inputs.user_count < 2:
            raise DomainError(
                "the interference-limited case needs at least two users"
            )
        other = beta.sum() - beta[k]
        return float(np.log2(1.0 + (inputs.m_elements - 1) * beta[k] / other))
    if case in ("scaled-power", "C3", "c3"):
        if energy_budget is None or energy_budget <= 0:
            raise DomainError("the scaled-power case needs a positive energy budget")
        sinr = (energy_budget * beta[k] * inputs.aperture * inputs.gain
                / inputs.noise_power)
        return float(math.log2(1.0 + sinr))
    raise DomainError(f"unknown asymptotic case {case!r}")


@dataclass(frozen=True)
class GapReport:
    """Closed-form rate differences between schemes and systems.

    ``ratio1``/``delta_r_k`` compare ZF with saturated MRC of the atomic
    receiver; ``ratio2``/``delta_r_tilde_k`` compare the atomic and the
    conventional receiver under ZF.  ``delta_r`` is the finite-array penalty
    log2(1 - (K-1)/(M-1)) that vanishes as the array grows.
    """

    ratio1: float | None = None
    delta_r_k: float | None = None
    delta_r: float | None = None
    received_power_total: float | None = None
    received_power_user: float | None = None
    ratio2: float | None = None
    delta_r_tilde_k: float | None = None


def gap_zf_vs_mrc(inputs: BoundInputs, k: int) -> GapReport:
    """Extra rate of ZF over (saturated) MRC for user ``k``.

    Evaluated at the maximizing optical phase (cos^2(phi) = 1), so
    ``inputs.gain`` is interpreted as the bare element gain.  Requires
    M > K >= 2; at M = K the gap diverges to -inf and is rejected.
    """
    m, k_users = inputs.m_elements, inputs.user_count
    if k_users < 2:
        raise DomainError("the scheme comparison needs at least two users")
    if m <= k_users:
        raise DomainError("the scheme comparison needs M > K")
    if not 0 <= k < k_users:
        raise DomainError(f"user index {k} out of range")
    if inputs.transmit_power <= 0:
        raise DomainError("the scheme comparison needs positive transmit power")
    p_total = inputs.transmit_power * inputs.aperture * float(inputs.beta.sum())
    p_user = inputs.transmit_power * inputs.aperture * float(inputs.beta[k])
    ratio1 = (inputs.gain * (m - k_users) / (m - 1)
              * (p_total - p_user) / inputs.noise_power)
    delta_r = math.log2(1.0 - (k_users - 1) / (m - 1))
    delta_r_k = (math.log2(inputs.gain)
                 + math.log2((p_total - p_user) / inputs.noise_power)
                 + delta_r)
    return GapReport(
        ratio1=ratio1, delta_r_k=delta_r_k, delta_r=delta_r,
        received_power_total=p_total, received_power_user=p_user,
    )


def gap_raq_vs_mmimo(raq: BoundInputs, mmimo: BoundInputs, k: int) -> GapReport:
    """Extra rate of the atomic receiver over the conventional one under ZF.

    Both sides must describe the same deployment (M, K, beta, P_s); the gap
    is log2 of the SINR ratio, gain, aperture and noise compared factor by
    factor, and is independent of the user index.
    """
    if raq.m_elements != mmimo.m_elements or raq.user_count != mmimo.user_count:
        raise DomainError("system comparison needs identical array and user counts")
    if raq.transmit_power != mmimo.transmit_power:
        raise DomainError("system comparison needs identical transmit power")
    if not np.array_equal(raq.beta, mmimo.beta):
        raise DomainError("system comparison needs identical large-scale gains")
    if not 0 <= k < raq.user_count:
        raise DomainError(f"user index {k} out of range")
    ratio2 = ((raq.gain / mmimo.gain) * (raq.aperture / mmimo.aperture)
              * (mmimo.noise_power / raq.noise_power))
    delta = (math.log2(raq.gain / mmimo.gain)
             + math.log2(raq.aperture / mmimo.aperture)
             - math.log2(raq.noise_power / mmimo.noise_power))
    return GapReport(ratio2=ratio2, delta_r_tilde_k=delta)
