"""Monte Carlo uplink simulation with linear combining.

The received vector is v = sqrt(A_e) * Theta * H * s + w with a diagonal
front-end matrix Theta shared by all users, so maximum-ratio and
zero-forcing combining reduce to dense linear algebra on the effective
channel Theta*H.  Ergodic rates are averaged over independent channel
realizations with counter-based per-trial seeds, which keeps results
bit-identical under any parallel schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LargeScaleProfile, draw_small_scale
from .errors import CombinerError, DomainError
from .frontend import FrontEndResponse, MmimoFrontEnd
from .rates import MMIMO, MRC, RAQ, ZF, BoundInputs, lower_bound_per_user
from .seeding import TRIAL_STREAM, WAVEFORM_STREAM, entropy_key, rng_for

#: Condition-number guard for the zero-forcing Gram matrix.
CONDITION_LIMIT = 1e12

#: Trials processed per vectorized block; bounds peak memory without
#: affecting results (blocks are split on fixed trial indices).
_TRIAL_BLOCK = 128


@dataclass(frozen=True)
class LinkScenario:
    """One system/scheme operating point of the uplink.

    ``theta_diag`` holds the diagonal of the front-end matrix Theta; for a
    well-configured array all entries share the same modulus, which is what
    the closed-form bounds assume and is validated here.
    """

    system: str
    scheme: str
    transmit_power: float
    aperture: float
    noise_power: float
    theta_diag: np.ndarray

    def __post_init__(self):
        if self.system not in (RAQ, MMIMO):
            raise DomainError(f"unknown system {self.system!r}")
        if self.scheme not in (MRC, ZF):
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if self.transmit_power < 0:
            raise DomainError("transmit power must be nonnegative")
        if self.aperture <= 0 or self.noise_power <= 0:
            raise DomainError("aperture and noise power must be positive")
        theta = np.asarray(self.theta_diag, dtype=complex)
        object.__setattr__(self, "theta_diag", theta)
        if theta.ndim != 1 or theta.size < 1:
            raise DomainError("theta_diag must be a nonempty vector")
        moduli = np.abs(theta)
        if moduli[0] == 0 or np.any(np.abs(moduli - moduli[0]) > 1e-9 * moduli[0]):
            raise DomainError(
                "front-end diagonal must have identical nonzero moduli "
                "(well-configured array)"
            )

    @property
    def m_elements(self) -> int:
        return int(self.theta_diag.size)

    @property
    def effective_gain(self) -> float:
        """SINR-relevant element gain |theta_m|^2 (= rho*cos^2 phi)."""
        return float(np.abs(self.theta_diag[0]) ** 2)

    def bound_inputs(self, profile: LargeScaleProfile) -> BoundInputs:
        return BoundInputs(
            system=self.system, scheme=self.scheme,
            m_elements=self.m_elements, beta=profile.beta,
            transmit_power=self.transmit_power, aperture=self.aperture,
            gain=self.effective_gain, noise_power=self.noise_power,
        )


def raq_scenario(front_end: FrontEndResponse, steering_diag: np.ndarray,
                 transmit_power: float, scheme: str) -> LinkScenario:
    """Scenario for the atomic receiver: Theta = sqrt(rho)*Phi_1*D."""
    if front_end.noise_power is None:
        raise DomainError("front end carries no noise power; assemble it first")
    theta = (math.sqrt(front_end.gain) * front_end.element_phase
             * np.asarray(steering_diag, dtype=complex))
    return LinkScenario(
        system=RAQ, scheme=scheme, transmit_power=transmit_power,
        aperture=front_end.aperture, noise_power=front_end.noise_power,
        theta_diag=theta,
    )


def mmimo_scenario(front_end: MmimoFrontEnd, m_elements: int,
                   transmit_power: float, scheme: str) -> LinkScenario:
    """Scenario for the conventional array: Theta = sqrt(rho0)*I."""
    theta = math.sqrt(front_end.gain) * np.ones(m_elements, dtype=complex)
    return LinkScenario(
        system=MMIMO, scheme=scheme, transmit_power=transmit_power,
        aperture=front_end.aperture, noise_power=front_end.noise_power,
        theta_diag=theta,
    )


def combiner(scheme: str, theta_diag: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Linear combining matrix C (M x K) for the effective channel Theta*H.

    MRC returns Theta*H; ZF returns Theta*H*(H^*Theta^*Theta*H)^-1, which
    satisfies C^* Theta H = I.  Rank-deficient ZF Gram matrices are rejected
    with the offending condition number.
    """
    theta = np.asarray(theta_diag, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or theta.ndim != 1 or h.shape[0] != theta.size:
        raise DomainError("theta_diag and channel dimensions do not match")
    b = theta[:, np.newaxis] * h
    if scheme == MRC:
        return b
    if scheme != ZF:
        raise DomainError(f"unknown scheme {scheme!r}")
    m, k = h.shape
    if m < k:
        raise CombinerError(f"zero forcing needs M >= K, got M={m}, K={k}")
    gram = b.conj().T @ b
    cond = float(np.linalg.cond(gram))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise CombinerError("zero-forcing Gram matrix is rank deficient",
                            condition_number=cond)
    # C = B * gram^-1 via a Hermitian solve instead of an explicit inverse.
    return np.linalg.solve(gram, b.conj().T).conj().T


def sinr_per_user(c: np.ndarray, theta_diag: np.ndarray, h: np.ndarray,
                  transmit_power: float, aperture: float,
                  noise_power: float) -> np.ndarray:
    """Per-user SINR of a given combining matrix.

    gamma_k = P_s*A_e*|c_k^* Theta h_k|^2 /
              (P_s*A_e*sum_{i!=k} |c_k^* Theta h_i|^2 + sigma^2*||c_k||^2);
    invariant under rescaling any column of C.
    """
    if noise_power <= 0:
        raise DomainError("noise power must be positive")
    theta = np.asarray(theta_diag, dtype=complex)
    cross = c.conj().T @ (theta[:, np.newaxis] * h)
    cross2 = np.abs(cross) ** 2
    signal = np.diag(cross2).copy()
    interference = cross2.sum(axis=1) - signal
    norms = np.sum(np.abs(c) ** 2, axis=0)
    ps_ae = transmit_power * aperture
    return ps_ae * signal / (ps_ae * interference + noise_power * norms)


@dataclass(frozen=True)
class RateReport:
    """Monte Carlo ergodic rates with their closed-form lower bounds.

    ``mean_rate_std_error`` is the standard error of the user-average rate
    across trials (users share realizations, so it is estimated from the
    per-trial user means rather than per-user errors).
    """

    rates: np.ndarray
    lower_bounds: np.ndarray
    ci_half_width: np.ndarray
    trials: int
    mean_rate_std_error: float = 0.0
    failed_trials: int = 0

    @property
    def mean_rate(self) -> float:
        return float(self.rates.mean())

    @property
    def mean_lower_bound(self) -> float:
        return float(self.lower_bounds.mean())

    @property
    def mean_ci_half_width(self) -> float:
        # Per-user errors share channel realizations, so the CI of the
        # user-average is bounded by the average per-user CI.
        return float(self.ci_half_width.mean())


def _sinr_block(scheme: str, theta: np.ndarray, g_block: np.ndarray,
                sigma_diag: np.ndarray, ps_ae: float, sigma2: float,
                ) -> tuple[np.ndarray, np.ndarray]:
    """SINRs for a block of trials; returns (gamma, valid_mask)."""
    h = g_block * sigma_diag[np.newaxis, np.newaxis, :]
    b = theta[np.newaxis, :, np.newaxis] * h
    gram = np.einsum("tmk,tml->tkl", b.conj(), b)
    t, _, k = gram.shape
    if scheme == MRC:
        gram2 = np.abs(gram) ** 2
        signal = np.einsum("tkk->tk", gram2)
        norms = np.real(np.einsum("tkk->tk", gram))
        interference = gram2.sum(axis=2) - signal
        gamma = ps_ae * signal / (ps_ae * interference + sigma2 * norms)
        return gamma, np.ones(t, dtype=bool)
    cond = np.linalg.cond(gram)
    valid = np.isfinite(cond) & (cond <= CONDITION_LIMIT)
    gamma = np.full((t, k), np.nan)
    if np.any(valid):
        inv = np.linalg.inv(gram[valid])
        inv_diag = np.real(np.einsum("tkk->tk", inv))
        gamma[valid] = ps_ae / (sigma2 * inv_diag)
    return gamma, valid


def ergodic_rates_mc(scenario: LinkScenario, profile: LargeScaleProfile,
                     trials: int, seed) -> RateReport:
    """Ergodic per-user rates averaged over channel realizations.

    Every trial draws its small-scale matrix from a generator keyed on
    (seed, trial index), so the report is bit-identical for a given seed no
    matter how callers distribute trials over workers.  Zero-forcing trials
    whose Gram matrix fails the conditioning guard are counted in
    ``failed_trials`` and excluded from the averages.
    """
    if trials < 1:
        raise DomainError("need at least one trial")
    m, k = scenario.m_elements, profile.count
    if scenario.scheme == ZF and m <= k:
        raise DomainError(f"zero forcing needs M > K, got M={m}, K={k}")
    base = entropy_key(seed, TRIAL_STREAM)
    theta = scenario.theta_diag
    ps_ae = scenario.transmit_power * scenario.aperture
    sigma_diag = profile.sigma_diag
    rates = np.empty((trials, k))
    valid = np.empty(trials, dtype=bool)
    for start in range(0, trials, _TRIAL_BLOCK):
        stop = min(start + _TRIAL_BLOCK, trials)
        g_block = np.empty((stop - start, m, k), dtype=complex)
        for t in range(start, stop):
            g_block[t - start] = draw_small_scale(rng_for(*base, t), m, k)
        gamma, ok = _sinr_block(scenario.scheme, theta, g_block, sigma_diag,
                                ps_ae, scenario.noise_power)
        rates[start:stop] = np.log2(1.0 + gamma)
        valid[start:stop] = ok
    n_valid = int(valid.sum())
    if n_valid == 0:
        raise CombinerError("every trial failed the conditioning guard")
    good = rates[valid]
    mean = good.mean(axis=0)
    if n_valid > 1:
        ci = 1.96 * good.std(axis=0, ddof=1) / math.sqrt(n_valid)
        mean_se = float(good.mean(axis=1).std(ddof=1) / math.sqrt(n_valid))
    else:
        ci = np.zeros(k)
        mean_se = 0.0
    return RateReport(
        rates=mean,
        lower_bounds=lower_bound_per_user(scenario.bound_inputs(profile)),
        ci_half_width=ci,
        trials=n_valid,
        mean_rate_std_error=mean_se,
        failed_trials=trials - n_valid,
    )


@dataclass(frozen=True)
class DetectionResult:
    """Waveform-level detection outcome."""

    empirical_sinr: np.ndarray
    symbols: np.ndarray
    estimates: np.ndarray


def synthesize_and_detect(scheme: str, theta_diag: np.ndarray, h: np.ndarray,
                          transmit_power: float, aperture: float,
                          noise_power: float, n_symbols: int, seed,
                          constellation: str = "gaussian") -> DetectionResult:
    """Generate symbols through the baseband model and detect them.

    Draws unit-power symbols (circularly symmetric Gaussian by default, QPSK
    on request), forms v = sqrt(A_e)*Theta*H*sqrt(P_s)*s + w, applies the
    requested combiner and measures the per-user empirical SINR, which
    matches the analytic SINR within statistical error.  Estimates are
    rescaled by the known amplitude, so noiseless zero forcing returns the
    symbols exactly.
    """
    if n_symbols < 1000:
        raise DomainError("need at least 1000 symbols for a stable estimate")
    if transmit_power <= 0:
        raise DomainError("waveform synthesis needs positive transmit power")
    if noise_power < 0:
        raise DomainError("noise power must be nonnegative")
    theta = np.asarray(theta_diag, dtype=complex)
    h = np.asarray(h, dtype=complex)
    m, k = h.shape
    rng = rng_for(*entropy_key(seed, WAVEFORM_STREAM))
    if constellation == "gaussian":
        s = (rng.standard_normal((k, n_symbols))
             + 1j * rng.standard_normal((k, n_symbols))) / math.sqrt(2.0)
    elif constellation == "qpsk":
        s = (rng.choice((-1.0, 1.0), size=(k, n_symbols))
             + 1j * rng.choice((-1.0, 1.0), size=(k, n_symbols))) / math.sqrt(2.0)
    else:
        raise DomainError(f"unknown constellation {constellation!r}")
    amplitude = math.sqrt(aperture * transmit_power)
    v = amplitude * (theta[:, np.newaxis] * (h @ s))
    if noise_power > 0:
        v = v + math.sqrt(noise_power / 2.0) * (
            rng.standard_normal((m, n_symbols))
            + 1j * rng.standard_normal((m, n_symbols))
        )
    c = combiner(scheme, theta, h)
    r = c.conj().T @ v
    estimates = r / amplitude
    # Least-squares complex gain per user; the residual is interference+noise.
    s_power = np.mean(np.abs(s) ** 2, axis=1)
    g_hat = np.sum(r * s.conj(), axis=1) / np.sum(np.abs(s) ** 2, axis=1)
    residual = r - g_hat[:, np.newaxis] * s
    noise_est = np.mean(np.abs(residual) ** 2, axis=1)
    signal_est = np.abs(g_hat) ** 2 * s_power
    with np.errstate(divide="ignore"):
        sinr = np.where(noise_est > 0, signal_est / noise_est, np.inf)
    return DetectionResult(empirical_sinr=sinr, symbols=s, estimates=estimates)
