"""Independent reference computations used to check the implementation.

These stay deliberately separate from the package code paths they verify:
the continued fraction is written straight from the weak-probe recursion,
and derivatives come from plain central differences.
"""

import numpy as np


def two_level_coherence(omega_p, gamma2, delta_p):
    """Weak-probe steady-state coherence of a driven two-level atom."""
    return (1j * omega_p / 2.0) / (gamma2 / 2.0 - 1j * delta_p)


def continued_fraction_chi(system, omega_rf):
    """Weak-probe susceptibility of the four-level ladder.

    chi = D * rho21 / Omega_p with
    rho21 = (j*Op/2) / (g21 - j*dp + (Oc/2)^2 /
            (g31 - j*(dp+dc) + (Orf/2)^2 / (g41 - j*(dp+dc+dl)))).
    """
    g21, g31, g41 = system.coherence_rates()
    dp, dc, dl = system.delta_p, system.delta_c, system.delta_l
    d3 = g41 - 1j * (dp + dc + dl)
    d2 = g31 - 1j * (dp + dc) + (omega_rf / 2.0) ** 2 / d3
    d1 = g21 - 1j * dp + (system.omega_c_rabi / 2.0) ** 2 / d2
    rho21 = (1j * system.omega_p_rabi / 2.0) / d1
    return system.chi_prefactor * rho21 / system.omega_p_rabi


def central_difference(f, x, h):
    """Plain second-order central difference."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def empirical_mean_ci(samples, z=2.326):
    """One-sided normal-approximation lower bound of a sample mean."""
    samples = np.asarray(samples, dtype=float)
    se = samples.std(ddof=1) / np.sqrt(samples.size)
    return samples.mean() - z * se
