"""Per-element receiver model of the atomic array and its conventional baseline.

The optical readout of the vapor cell turns the atomic response into an
equivalent baseband receive element: a gain sqrt(rho), a complex element
phase Phi, a diagonal steering progression across the uniform linear array,
and an additive noise floor set by atomic projection noise (the standard
quantum limit).  A half-wavelength-dipole front end with an LNA provides the
conventional-array baseline the atomic receiver is compared against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants as sc

from .atomic import (
    FourLevelSystem,
    ProbeField,
    RationalSusceptibility,
    probe_transfer,
    susceptibility,
    susceptibility_slope,
)
from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class LocalOscillator:
    """Strong RF reference tone driving the upper transition.

    ``rabi`` is the LO Rabi frequency (rad/s) at the vapor cell;
    ``carrier_frequency`` (Hz) sets the RF wavelength used for steering.
    ``user_rabi`` is the strongest per-user Rabi frequency; the heterodyne
    linearisation requires it to be far below the LO drive, enforced through
    ``max_user_rabi_ratio``.
    """

    carrier_frequency: float
    rabi: float
    power: float = 0.0
    incidence_angle: float = 0.0
    reference_phase: float = 0.0
    user_rabi: float | None = None
    max_user_rabi_ratio: float = 0.01

    def __post_init__(self):
        if self.carrier_frequency <= 0:
            raise DomainError("carrier frequency must be positive")
        if self.rabi <= 0:
            raise DomainError("LO Rabi frequency must be positive")
        if self.power < 0:
            raise DomainError("LO power must be nonnegative")
        if self.user_rabi is not None:
            ratio = self.user_rabi / self.rabi
            if ratio > self.max_user_rabi_ratio:
                raise ConfigError(
                    f"user Rabi over LO Rabi ratio {ratio:.3e} exceeds the "
                    f"allowed {self.max_user_rabi_ratio:.3e}"
                )

    @property
    def rf_wavelength(self) -> float:
        return sc.c / self.carrier_frequency


@dataclass(frozen=True)
class PhotodetectionChain:
    """Balanced coherent optical detection followed by an LNA.

    ``local_power``/``local_phase`` describe the local optical beam the probe
    is interfered with, ``quantum_efficiency`` the photodiodes, ``gain`` the
    (linear) LNA power gain and ``bandwidth`` the detection bandwidth.
    ``probe_omega`` is the optical angular frequency setting the photon
    energy, i.e. the detector responsivity eta*q/(hbar*omega).
    """

    local_power: float
    local_phase: float
    quantum_efficiency: float
    gain: float
    bandwidth: float
    probe_omega: float

    def __post_init__(self):
        if self.local_power < 0:
            raise DomainError("local optical power must be nonnegative")
        if not 0.0 < self.quantum_efficiency <= 1.0:
            raise DomainError("quantum efficiency must lie in (0, 1]")
        if self.gain < 1.0:
            raise DomainError("amplifier gain must be at least 1")
        if self.bandwidth <= 0:
            raise DomainError("bandwidth must be positive")
        if self.probe_omega <= 0:
            raise DomainError("probe angular frequency must be positive")

    @property
    def responsivity(self) -> float:
        """Photocurrent per optical watt, eta*q/(hbar*omega) (A/W)."""
        return self.quantum_efficiency * sc.e / (sc.hbar * self.probe_omega)


@dataclass(frozen=True)
class FrontEndResponse:
    """Equivalent baseband model of one receive element.

    ``gain`` is rho; ``element_phase`` the complex Phi of this element with
    |Phi| = |cos phi|; ``kappa`` the amplitude-readout slope and ``psi`` its
    phase (None when the slope vanishes and the phase is undefined);
    ``phi`` the composite optical phase at the operating point;
    ``noise_power`` the projection-noise floor (filled in by
    :func:`sql_noise_power`, None until then).
    """

    gain: float
    element_phase: complex
    kappa: float
    psi: float | None
    phi: float | None
    aperture: float
    k_gain: float
    probe_out_power: float
    noise_power: float | None = None

    def __post_init__(self):
        if self.gain < 0:
            raise DomainError("element gain must be nonnegative")
        if self.aperture <= 0:
            raise ConfigError("effective aperture must be positive")
        if self.phi is not None:
            if abs(abs(self.element_phase) - abs(math.cos(self.phi))) > 1e-12:
                raise DomainError("element phase modulus must equal |cos phi|")
        if self.noise_power is not None and self.noise_power < 0:
            raise DomainError("noise power must be nonnegative")

    @property
    def effective_gain(self) -> float:
        """SINR-relevant gain rho*cos^2(phi)."""
        return self.gain * abs(self.element_phase) ** 2


@dataclass(frozen=True)
class MmimoFrontEnd:
    """Half-wavelength-dipole plus LNA baseline front end.

    ``gain`` is the RF-chain power gain, ``aperture`` the dipole effective
    aperture lambda^2/(4*pi) (carrier dependent, unlike the atomic element),
    ``noise_power`` the amplified thermal plus LNA noise.
    """

    gain: float
    aperture: float
    noise_power: float
    antenna_gain: float
    lna_gain: float
    t_room: float
    t_lna: float

    def __post_init__(self):
        for name in ("gain", "aperture", "noise_power"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")


def dispersion_coefficients(chi_slope: complex, cell_length: float,
                            mu34: float, lambda_p: float) -> tuple[float, float | None]:
    """Amplitude-readout slope kappa and its phase psi.

    kappa = (pi*L*mu34/(hbar*lambda_p)) * |chi'|, psi = arccos(Im chi'/|chi'|).
    A vanishing slope yields kappa = 0 with psi = None (undefined), never NaN.
    """
    if cell_length <= 0 or mu34 <= 0 or lambda_p <= 0:
        raise DomainError("cell length, dipole moment and wavelength must be positive")
    magnitude = abs(chi_slope)
    scale = math.pi * cell_length * mu34 / (sc.hbar * lambda_p)
    if magnitude == 0.0:
        return 0.0, None
    psi = math.acos(min(1.0, max(-1.0, chi_slope.imag / magnitude)))
    return scale * magnitude, psi


def element_response(osc: LocalOscillator, chain: PhotodetectionChain,
                     probe_out_power: float, kappa: float, psi: float | None,
                     probe_phase: float, aperture: float,
                     element_index: int = 1, spacing: float | None = None,
                     rf_wavelength: float | None = None) -> FrontEndResponse:
    """Equivalent baseband gain and phase of one receive element.

    ``probe_out_power`` and ``probe_phase`` refer to the probe beam leaving
    the cell with only the LO applied.  ``element_index`` counts from 1;
    ``spacing`` defaults to half the RF wavelength.  Elements are assumed
    identically configured, so they share gain and differ only by the
    plane-wave phase progression of the LO.
    """
    if aperture <= 0:
        raise ConfigError("effective aperture must be positive")
    if probe_out_power < 0:
        raise DomainError("probe output power must be nonnegative")
    if element_index < 1:
        raise DomainError("element index counts from 1")
    wavelength = osc.rf_wavelength if rf_wavelength is None else rf_wavelength
    d = 0.5 * wavelength if spacing is None else spacing
    if not 0.0 < d <= 0.5 * wavelength:
        raise ConfigError(
            f"element spacing {d:.4g} m must lie in (0, lambda/2] = "
            f"(0, {0.5 * wavelength:.4g}] m"
        )
    k_gain = (math.sqrt(chain.gain) * chain.responsivity
              / math.sqrt(sc.c * sc.epsilon_0 * aperture))
    sqrt_rho = 2.0 * k_gain * math.sqrt(chain.local_power * probe_out_power) * kappa
    if kappa == 0.0 or psi is None:
        # Zero readout slope: the element is blind.
        return FrontEndResponse(
            gain=0.0, element_phase=0j, kappa=0.0, psi=None, phi=None,
            aperture=aperture, k_gain=k_gain, probe_out_power=probe_out_power,
        )
    phi = chain.local_phase - probe_phase + psi
    theta_m = (osc.reference_phase
               + 2.0 * math.pi / wavelength * d * (element_index - 1)
               * math.sin(osc.incidence_angle))
    element_phase = 0.5 * (cmath.exp(-1j * (theta_m - phi))
                           + cmath.exp(-1j * (theta_m + phi)))
    return FrontEndResponse(
        gain=sqrt_rho**2, element_phase=element_phase, kappa=kappa, psi=psi,
        phi=phi, aperture=aperture, k_gain=k_gain,
        probe_out_power=probe_out_power,
    )


def steering_matrix(m_elements: int, spacing: float, wavelength: float,
                    incidence_angle: float) -> np.ndarray:
    """Diagonal of the plane-wave steering matrix across the linear array.

    Entry m is exp(-j*2*pi/lambda * d * (m-1) * sin(angle)); all entries have
    unit modulus.  Spacing above half a wavelength is rejected.
    """
    if m_elements < 1:
        raise DomainError("array needs at least one element")
    if not 0.0 < spacing <= 0.5 * wavelength:
        raise ConfigError(
            f"element spacing {spacing:.4g} m must lie in (0, lambda/2] = "
            f"(0, {0.5 * wavelength:.4g}] m"
        )
    step = -2.0 * math.pi / wavelength * spacing * math.sin(incidence_angle)
    return np.exp(1j * step * np.arange(m_elements))


def atom_count(density: float, population_fraction: float, beam_fwhm: float,
               cell_length: float) -> float:
    """Number of participating atoms in the probed cylinder of vapor."""
    if density < 0 or not 0 < population_fraction <= 1:
        raise DomainError("invalid density or population fraction")
    if beam_fwhm <= 0 or cell_length <= 0:
        raise DomainError("beam width and cell length must be positive")
    volume = math.pi * (0.5 * beam_fwhm) ** 2 * cell_length
    return density * population_fraction * volume


def sql_noise_power(chain: PhotodetectionChain, probe_out_power: float,
                    kappa: float, phi: float, mu34: float,
                    n_atoms: float, t2: float) -> float:
    """Projection-noise power at the detector output (standard quantum limit).

    The equivalent noise field spectral density is hbar/(mu34*sqrt(N*T2));
    it is referred to the output through the same optical gain chain as the
    signal, so the noise power scales with cos^2(phi) and linearly with the
    bandwidth.
    """
    if n_atoms <= 0 or t2 <= 0:
        raise DomainError("atom number and coherence time must be positive")
    if mu34 <= 0:
        raise DomainError("RF transition dipole moment must be positive")
    if probe_out_power < 0 or kappa < 0:
        raise DomainError("probe power and kappa must be nonnegative")
    e_sql_per_sqrt_hz = sc.hbar / (mu34 * math.sqrt(n_atoms * t2))
    return (4.0 * chain.gain * chain.responsivity**2
            * chain.local_power * probe_out_power * kappa**2
            * math.cos(phi) ** 2
            * e_sql_per_sqrt_hz**2 * chain.bandwidth)


def sql_field_density(mu34: float, n_atoms: float, t2: float) -> float:
    """Equivalent noise field spectral density (V/m per sqrt(Hz))."""
    if n_atoms <= 0 or t2 <= 0 or mu34 <= 0:
        raise DomainError("atom number, coherence time and dipole moment must be positive")
    return sc.hbar / (mu34 * math.sqrt(n_atoms * t2))


def mmimo_frontend(carrier_frequency: float, antenna_gain: float,
                   lna_gain: float, t_room: float, t_lna: float,
                   bandwidth: float) -> MmimoFrontEnd:
    """Conventional-array front end: dipole aperture, RF-chain gain, noise.

    gain = G_ant * G_lna, aperture = lambda^2/(4*pi), and the noise power is
    the room-temperature thermal floor amplified by the LNA plus the LNA's
    own noise, G_lna*kB*T_room*B + kB*T_lna*B.
    """
    for name, value in (("carrier_frequency", carrier_frequency),
                        ("antenna_gain", antenna_gain),
                        ("lna_gain", lna_gain), ("t_room", t_room),
                        ("t_lna", t_lna), ("bandwidth", bandwidth)):
        if value <= 0:
            raise DomainError(f"{name} must be positive")
    wavelength = sc.c / carrier_frequency
    return MmimoFrontEnd(
        gain=antenna_gain * lna_gain,
        aperture=wavelength**2 / (4.0 * math.pi),
        noise_power=(lna_gain * sc.k * t_room + sc.k * t_lna) * bandwidth,
        antenna_gain=antenna_gain,
        lna_gain=lna_gain,
        t_room=t_room,
        t_lna=t_lna,
    )


def assemble_frontend(system: FourLevelSystem, probe: ProbeField,
                      osc: LocalOscillator, chain: PhotodetectionChain,
                      aperture: float, spacing: float | None = None,
                      maximize_phase: bool = False,
                      susceptibility_source: FourLevelSystem | RationalSusceptibility | None = None,
                      ) -> FrontEndResponse:
    """Full element model from the physics inputs.

    Evaluates the susceptibility and its slope at the LO operating point,
    propagates the probe, forms the readout gain and attaches the
    projection-noise power.  With ``maximize_phase`` the local optical phase
    is set to probe_phase - psi so that cos^2(phi) = 1, the configuration
    that maximizes the readout.  ``susceptibility_source`` overrides the
    response model (e.g. an externally supplied rational model) while the
    dipole moments, density and coherence time still come from ``system``.
    """
    source = system if susceptibility_source is None else susceptibility_source
    chi_op = susceptibility(source, osc.rabi)
    slope = susceptibility_slope(source, osc.rabi)
    transfer = probe_transfer(probe, chi_op)
    kappa, psi = dispersion_coefficients(
        slope, probe.cell_length, system.mu34, probe.wavelength
    )
    if maximize_phase and psi is not None:
        chain = replace(chain, local_phase=transfer.phase - psi)
    response = element_response(
        osc, chain, transfer.power, kappa, psi, transfer.phase, aperture,
        element_index=1, spacing=spacing,
    )
    if response.phi is None:
        return response
    n_atoms = atom_count(system.atomic_density, system.population_fraction,
                         probe.fwhm, probe.cell_length)
    sigma2 = sql_noise_power(chain, transfer.power, kappa, response.phi,
                             system.mu34, n_atoms, system.t2_coherence)
    return replace(response, noise_power=sigma2)
