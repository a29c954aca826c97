"""Steady-state optical response of a four-level ladder vapor.

The receiver medium is a thermal vapor whose atoms are driven on a ladder of
transitions |1>-|2>-|3>-|4> by a weak optical probe, a coupling laser and an
RF tone near the |3>-|4> resonance.  The linear response seen by the probe is
the complex susceptibility chi evaluated at the RF Rabi frequency; its slope
at the operating point is what converts small RF amplitude changes into probe
amplitude/phase changes, i.e. it sets the readout gain of the receiver.

Two representations of chi are provided:

* a full density-matrix steady-state solver (:func:`susceptibility_numeric`),
  valid at any drive strength, and
* a rational model in the squared RF Rabi frequency
  (:class:`RationalSusceptibility`), whose coefficients can either be supplied
  externally or derived from a :class:`FourLevelSystem` in the weak-probe
  limit.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc

from .errors import DomainError, SlopeConvergenceError, SteadyStateError, WeakProbeWarning

TWO_PI = 2.0 * math.pi

#: Default linewidth (rad/s) added to the upper levels so the steady state
#: stays unique when their spontaneous decay is set to zero.
DEFAULT_REGULARIZATION = TWO_PI * 1e3


@dataclass(frozen=True)
class FourLevelSystem:
    """Ladder system driven by probe, coupling and RF fields.

    All frequencies and rates are angular (rad/s), dipole moments are in C*m,
    the density in m^-3.  ``delta_p``, ``delta_c`` and ``delta_l`` are the
    detunings of probe, coupling and RF drive from their respective
    transitions; zero means resonant.  Only level |2> is assumed to decay
    appreciably; ``regularization`` is a small artificial linewidth applied to
    levels |3> and |4> so that the zero-decay idealisation keeps a unique
    steady state.  ``population_fraction`` is the fraction of atoms that
    actually participates in the optical response (state preparation and
    velocity selection); it scales the susceptibility and the projection-noise
    atom number alike.
    """

    omega_p_rabi: float
    omega_c_rabi: float
    gamma2: float
    atomic_density: float
    mu12: float
    mu34: float
    t2_coherence: float
    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_l: float = 0.0
    gamma3: float = 0.0
    gamma4: float = 0.0
    population_fraction: float = 1.0
    regularization: float = DEFAULT_REGULARIZATION

    def __post_init__(self):
        if self.omega_p_rabi <= 0:
            raise DomainError("probe Rabi frequency must be positive")
        for name in ("omega_c_rabi", "gamma2", "gamma3", "gamma4",
                     "atomic_density", "mu12", "mu34", "t2_coherence",
                     "regularization"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be nonnegative")
        if not 0.0 < self.population_fraction <= 1.0:
            raise DomainError("population_fraction must lie in (0, 1]")
        d = self.susceptibility_prefactor
        if not (math.isfinite(d) and d > 0):
            raise DomainError("susceptibility prefactor must be finite and positive")
        if self.gamma2 > 0 and self.omega_p_rabi >= self.gamma2:
            warnings.warn(
                "probe Rabi frequency is not below the |2> linewidth; the "
                "weak-probe (linear-response) approximation degrades",
                WeakProbeWarning,
                stacklevel=2,
            )

    @property
    def susceptibility_prefactor(self) -> float:
        """Scale 2*N0*mu12^2/(eps0*hbar) of the vapor susceptibility (rad/s)."""
        return 2.0 * self.atomic_density * self.mu12**2 / (sc.epsilon_0 * sc.hbar)

    @property
    def chi_prefactor(self) -> float:
        """Susceptibility scale of the participating atoms only."""
        return self.susceptibility_prefactor * self.population_fraction

    def coherence_rates(self) -> tuple[float, float, float]:
        """Decay rates of the |2>-|1>, |3>-|1> and |4>-|1> coherences."""
        g21 = 0.5 * self.gamma2
        g31 = 0.5 * (self.gamma3 + self.regularization)
        g41 = 0.5 * (self.gamma4 + self.regularization)
        return g21, g31, g41

    def hamiltonian(self, omega_rf: float) -> np.ndarray:
        """Rotating-frame Hamiltonian over hbar for a given RF Rabi frequency.

        Sign conventions are fixed so that the two-level steady-state
        coherence reduces to (j*Omega_p/2)/(gamma2/2 - j*delta_p).
        """
        dp, dc, dl = self.delta_p, self.delta_c, self.delta_l
        h = np.zeros((4, 4), dtype=complex)
        h[0, 1] = h[1, 0] = -0.5 * self.omega_p_rabi
        h[1, 2] = h[2, 1] = -0.5 * self.omega_c_rabi
        h[2, 3] = h[3, 2] = -0.5 * omega_rf
        h[1, 1] = -dp
        h[2, 2] = -(dp + dc)
        h[3, 3] = -(dp + dc + dl)
        return h


def _collapse_operators(system: FourLevelSystem) -> list[np.ndarray]:
    """Spontaneous-decay cascade |4> -> |3> -> |2> -> |1>."""
    rates = (
        (system.gamma2, 0, 1),
        (system.gamma3 + system.regularization, 1, 2),
        (system.gamma4 + system.regularization, 2, 3),
    )
    ops = []
    for rate, lo, hi in rates:
        if rate > 0:
            c = np.zeros((4, 4), dtype=complex)
            c[lo, hi] = math.sqrt(rate)
            ops.append(c)
    return ops


def _liouvillian(system: FourLevelSystem, omega_rf: float, scale: float) -> np.ndarray:
    """Lindblad generator as a 16x16 matrix acting on row-major vec(rho).

    Entries are divided by ``scale`` so the linear solve is well conditioned;
    the steady state is invariant under this rescaling.
    """
    eye = np.eye(4)
    h = system.hamiltonian(omega_rf) / scale
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for c in _collapse_operators(system):
        c = c / math.sqrt(scale)
        cdc = c.conj().T @ c
        lv += np.kron(c, c.conj())
        lv -= 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))
    return lv


def steady_state(system: FourLevelSystem, omega_rf: float) -> np.ndarray:
    """Steady-state density matrix of the driven four-level ladder.

    Solves L(rho) = 0 with Tr(rho) = 1.  Raises :class:`SteadyStateError`
    with a conditioning report when the solve is singular (e.g. zero decay
    and no regularization) or yields an unphysical state.
    """
    if omega_rf < 0:
        raise DomainError("RF Rabi frequency must be nonnegative")
    scale = max(system.gamma2, system.omega_p_rabi, system.omega_c_rabi,
                omega_rf, system.regularization, abs(system.delta_p),
                abs(system.delta_c), abs(system.delta_l))
    lv = _liouvillian(system, omega_rf, scale)
    a = lv.copy()
    # Trace constraint replaces the (redundant) population row for |1>.
    a[0, :] = 0.0
    a[0, 0::5] = 1.0
    b = np.zeros(16, dtype=complex)
    b[0] = 1.0
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SteadyStateError(
            "singular steady-state system (zero decay without regularization?)",
            condition_number=np.linalg.cond(a),
        ) from exc
    residual = float(np.linalg.norm(lv @ x))
    rho = x.reshape(4, 4)
    cond = float(np.linalg.cond(a))
    if not np.all(np.isfinite(rho)) or residual > 1e-8:
        raise SteadyStateError(
            "steady-state solve did not converge",
            condition_number=cond, residual=residual,
        )
    populations = np.real(np.diag(rho))
    if populations.min() < -1e-9 or abs(populations.sum() - 1.0) > 1e-9:
        raise SteadyStateError(
            "steady state is not a physical density matrix",
            condition_number=cond, residual=residual,
        )
    return rho


def susceptibility_numeric(system: FourLevelSystem, omega_rf: float) -> complex:
    """Vapor susceptibility at a given RF Rabi frequency, from the full solver.

    Returns chi = D * rho21 / Omega_p with rho21 the steady-state coherence of
    the probe transition and D the susceptibility scale of the participating
    atoms.  The imaginary part is nonnegative for any physical system (the
    vapor absorbs, never amplifies).
    """
    rho = steady_state(system, omega_rf)
    chi = system.chi_prefactor * rho[1, 0] / system.omega_p_rabi
    if chi.imag < -1e-10 * abs(chi):
        raise SteadyStateError(
            f"steady state produced a gain medium (Im chi = {chi.imag:.3e})"
        )
    return complex(chi)


@dataclass(frozen=True)
class RationalSusceptibility:
    """Susceptibility as a ratio of quartic polynomials in the RF Rabi rate.

    chi(W) = D * (-A(W) + j*B(W)) / C(W) with
    A(W) = a1*W^4 + a2*W^2 + a3 and likewise for B and C.  The coefficients
    carry an arbitrary common scale; only their ratios and the prefactor D
    are observable.
    """

    prefactor: float
    a_coeffs: tuple[float, float, float]
    b_coeffs: tuple[float, float, float]
    c_coeffs: tuple[float, float, float]

    def __post_init__(self):
        if not (math.isfinite(self.prefactor) and self.prefactor > 0):
            raise DomainError("prefactor must be finite and positive")
        if not any(self.c_coeffs):
            raise DomainError("denominator polynomial must not be identically zero")

    @classmethod
    def from_four_level_system(cls, system: FourLevelSystem) -> "RationalSusceptibility":
        """Exact weak-probe rational coefficients of a ladder system.

        In linear response the ladder coherence is a continued fraction whose
        clearing against the conjugate denominator yields real quartic
        polynomials in the RF Rabi frequency, i.e. exactly the rational form
        of this class.  Coefficients are normalized so the constant term of
        the denominator is 1.
        """
        g21, g31, g41 = system.coherence_rates()
        dp, dc, dl = system.delta_p, system.delta_c, system.delta_l
        z1 = g21 - 1j * dp
        z2 = g31 - 1j * (dp + dc)
        z3 = g41 - 1j * (dp + dc + dl)
        wc = (0.5 * system.omega_c_rabi) ** 2
        d0 = z3 * (z1 * z2 + wc)     # constant term of the cleared denominator
        # chi = pref*(j/2)*(u + z2*z3)/(z1*u + d0) with u = (Omega_RF/2)^2.
        p2 = np.conj(z1)
        p1 = np.conj(d0) + z2 * z3 * np.conj(z1)
        p0 = z2 * z3 * np.conj(d0)
        q2 = abs(z1) ** 2
        q1 = 2.0 * (z1 * np.conj(d0)).real
        q0 = abs(d0) ** 2
        if q0 == 0:
            raise DomainError("degenerate system: cleared denominator vanishes")
        # u = Omega^2/4 turns u-polynomials into Omega^2-polynomials.
        a = (p2.imag / 32.0, p1.imag / 8.0, p0.imag / 2.0)
        b = (p2.real / 32.0, p1.real / 8.0, p0.real / 2.0)
        c = (q2 / 16.0, q1 / 4.0, q0)
        norm = c[2]
        return cls(
            prefactor=system.chi_prefactor,
            a_coeffs=tuple(v / norm for v in a),
            b_coeffs=tuple(v / norm for v in b),
            c_coeffs=tuple(v / norm for v in c),
        )

    def _polys(self, omega_rf):
        w2 = np.asarray(omega_rf, dtype=float) ** 2
        a1, a2, a3 = self.a_coeffs
        b1, b2, b3 = self.b_coeffs
        c1, c2, c3 = self.c_coeffs
        return (
            (a1 * w2 + a2) * w2 + a3,
            (b1 * w2 + b2) * w2 + b3,
            (c1 * w2 + c2) * w2 + c3,
        )


def susceptibility_rational(model: RationalSusceptibility, omega_rf) -> complex:
    """Evaluate the rational susceptibility model.

    Accepts a scalar or an array of RF Rabi frequencies.  Raises
    :class:`DomainError` if the denominator vanishes anywhere on the input.
    """
    a, b, c = model._polys(omega_rf)
    if np.any(c == 0):
        raise DomainError("rational susceptibility denominator vanishes")
    chi = model.prefactor * (-a + 1j * b) / c
    if np.ndim(omega_rf) == 0:
        return complex(chi)
    return chi


def _slope_rational(model: RationalSusceptibility, omega_l: float) -> complex:
    """Analytic derivative of the rational model at the operating point."""
    a1, a2, _ = model.a_coeffs
    b1, b2, _ = model.b_coeffs
    c1, c2, _ = model.c_coeffs
    a, b, c = model._polys(omega_l)
    if c == 0:
        raise DomainError("rational susceptibility denominator vanishes")
    w2 = omega_l**2
    cp = 2.0 * c1 * w2 + c2
    d = model.prefactor
    real = -2.0 * d * omega_l * ((2.0 * a1 * w2 + a2) / c - a * cp / c**2)
    imag = 2.0 * d * omega_l * ((2.0 * b1 * w2 + b2) / c - b * cp / c**2)
    return complex(real, imag)


def _slope_numeric(system: FourLevelSystem, omega_l: float,
                   relative_step: float = 1e-4,
                   agreement: float = 1e-4) -> complex:
    """Central-difference slope with one step-halving refinement.

    The half-step and full-step estimates must agree to ``agreement``
    relative; otherwise both are reported in the raised error.  The returned
    value is the Richardson combination of the two estimates.
    """
    h = relative_step * omega_l

    def central(step):
        hi = susceptibility_numeric(system, omega_l + step)
        lo = susceptibility_numeric(system, max(omega_l - step, 0.0))
        return (hi - lo) / (omega_l + step - max(omega_l - step, 0.0))

    coarse = central(h)
    fine = central(0.5 * h)
    refined = (4.0 * fine - coarse) / 3.0
    # Differences below the resolvable slope scale count as converged.
    floor = 1e-9 * abs(susceptibility_numeric(system, omega_l)) / omega_l
    if abs(fine - coarse) > max(agreement * abs(refined), floor):
        raise SlopeConvergenceError(
            "finite-difference slope did not converge", coarse, fine
        )
    return refined


def susceptibility_slope(source: FourLevelSystem | RationalSusceptibility,
                         omega_l: float) -> complex:
    """Slope of the susceptibility with respect to the RF Rabi frequency.

    Rational models are differentiated analytically; four-level systems use a
    checked central finite difference of the steady-state solver.
    """
    if omega_l <= 0:
        raise DomainError("operating RF Rabi frequency must be positive")
    if isinstance(source, RationalSusceptibility):
        return _slope_rational(source, omega_l)
    if isinstance(source, FourLevelSystem):
        return _slope_numeric(source, omega_l)
    raise TypeError(f"unsupported susceptibility source {type(source)!r}")


def susceptibility(source: FourLevelSystem | RationalSusceptibility,
                   omega_rf: float) -> complex:
    """Evaluate chi from either representation."""
    if isinstance(source, RationalSusceptibility):
        return susceptibility_rational(source, omega_rf)
    if isinstance(source, FourLevelSystem):
        return susceptibility_numeric(source, omega_rf)
    raise TypeError(f"unsupported susceptibility source {type(source)!r}")


@dataclass(frozen=True)
class ProbeField:
    """Optical probe beam entering the vapor cell.

    ``input_amplitude`` is the field amplitude in V/m, ``fwhm`` the beam full
    width at half maximum and ``cell_length`` the propagation length through
    the vapor.
    """

    input_amplitude: float
    wavelength: float
    fwhm: float
    cell_length: float
    input_phase: float = 0.0

    def __post_init__(self):
        if self.input_amplitude < 0:
            raise DomainError("probe amplitude must be nonnegative")
        for name in ("wavelength", "fwhm", "cell_length"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")

    @classmethod
    def from_power(cls, power: float, wavelength: float, fwhm: float,
                   cell_length: float, input_phase: float = 0.0) -> "ProbeField":
        """Build from average beam power (W) instead of field amplitude."""
        if power < 0:
            raise DomainError("probe power must be nonnegative")
        amplitude = math.sqrt(
            8.0 * math.log(2.0) * power / (math.pi * sc.c * sc.epsilon_0 * fwhm**2)
        )
        return cls(amplitude, wavelength, fwhm, cell_length, input_phase)

    @property
    def input_power(self) -> float:
        """Average beam power (W) carried by the input amplitude."""
        return (math.pi * sc.c * sc.epsilon_0 / (8.0 * math.log(2.0))
                * self.fwhm**2 * self.input_amplitude**2)


@dataclass(frozen=True)
class ProbeTransfer:
    """Probe beam at the cell output: amplitude (V/m), phase (rad), power (W)."""

    amplitude: float
    phase: float
    power: float


def probe_transfer(probe: ProbeField, chi: complex) -> ProbeTransfer:
    """Propagate the probe through the vapor of susceptibility ``chi``.

    The imaginary part of chi attenuates the amplitude, the real part shifts
    the phase; the output power follows from the beam geometry.  For an
    absorptive medium (Im chi >= 0) the output power never exceeds the input.
    """
    opacity = math.pi * probe.cell_length / probe.wavelength
    amplitude = probe.input_amplitude * math.exp(-opacity * chi.imag)
    phase = probe.input_phase + opacity * chi.real
    power = (math.pi * sc.c * sc.epsilon_0 / (8.0 * math.log(2.0))
             * probe.fwhm**2 * amplitude**2)
    return ProbeTransfer(amplitude=amplitude, phase=phase, power=power)
