"""Configuration ingestion, validation and physics-object builders.

The configuration is one JSON file.  Every deployment parameter has a
documented default; the four physical constants the simulator cannot derive
(the two transition dipole moments, the coherence time and the effective
element aperture) must be present explicitly.  Unknown sections or keys are
rejected so typos cannot silently fall back to defaults.

All ``*_hz`` entries are cyclic frequencies; they are multiplied by 2*pi
where angular frequencies are needed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from scipy import constants as sc

from .atomic import FourLevelSystem, ProbeField, RationalSusceptibility
from .channel import LargeScaleProfile, UserGeometry, large_scale_profile
from .errors import ConfigError
from .frontend import (
    FrontEndResponse,
    LocalOscillator,
    MmimoFrontEnd,
    PhotodetectionChain,
    assemble_frontend,
    mmimo_frontend,
    steering_matrix,
)
from .seeding import GEOMETRY_STREAM, rng_for

TWO_PI = 2.0 * math.pi

_REQUIRED = object()


def _positive(x) -> bool:
    return x > 0


def _nonnegative(x) -> bool:
    return x >= 0


def _fraction(x) -> bool:
    return 0 < x <= 1


_NUMBER = (int, float)

# section -> key -> (allowed types, default or _REQUIRED, predicate or None)
_SCHEMA: dict[str, dict[str, tuple]] = {
    "atom": {
        "density_per_m3": (_NUMBER, 3.0e16, _positive),
        "population_fraction": (_NUMBER, 1.0e-3, _fraction),
        "gamma2_hz": (_NUMBER, 5.2227e6, _positive),
        "gamma3_hz": (_NUMBER, 0.0, _nonnegative),
        "gamma4_hz": (_NUMBER, 0.0, _nonnegative),
        "regularization_hz": (_NUMBER, 1.0e3, _positive),
        "mu12_cm": (_NUMBER, _REQUIRED, _positive),
        "mu34_cm": (_NUMBER, _REQUIRED, _positive),
        "t2_s": (_NUMBER, _REQUIRED, _positive),
    },
    "probe": {
        "wavelength_m": (_NUMBER, 852e-9, _positive),
        "power_w": (_NUMBER, 29.8e-6, _positive),
        "fwhm_m": (_NUMBER, 1.7e-3, _positive),
        "rabi_hz": (_NUMBER, 5.7e6, _positive),
        "detuning_hz": (_NUMBER, 0.0, None),
        "input_phase_rad": (_NUMBER, 0.0, None),
    },
    "coupling": {
        "wavelength_m": (_NUMBER, 510e-9, _positive),
        "power_w": (_NUMBER, 17e-6, _nonnegative),
        "rabi_hz": (_NUMBER, 0.97e6, _nonnegative),
        "detuning_hz": (_NUMBER, 0.0, None),
    },
    "cell": {
        "length_m": (_NUMBER, 0.1, _positive),
    },
    "lo": {
        "carrier_hz": (_NUMBER, 6.9458e9, _positive),
        "power_dbm": (_NUMBER, 15.0, None),
        "rabi_hz": (_NUMBER, 3.0e6, _positive),
        "detuning_hz": (_NUMBER, 0.0, None),
        "if_hz": (_NUMBER, 150e3, _positive),
        "incidence_angle_rad": (_NUMBER, 0.0, None),
        "reference_phase_rad": (_NUMBER, 0.0, None),
        "user_rabi_hz": ((*_NUMBER, type(None)), None, None),
        "max_user_rabi_ratio": (_NUMBER, 0.01, _positive),
    },
    "photodetection": {
        "local_power_w": (_NUMBER, 1.0e-3, _positive),
        "local_phase_rad": ((*_NUMBER, str), "maximizing", None),
        "quantum_efficiency": (_NUMBER, 0.8, _fraction),
        "gain_db": (_NUMBER, 30.0, _nonnegative),
        "bandwidth_hz": (_NUMBER, 100e3, _positive),
    },
    "frontend": {
        "effective_aperture_m2": (_NUMBER, _REQUIRED, _positive),
        "element_spacing_fraction": (_NUMBER, 0.5, _fraction),
        "susceptibility": (str, "solver", None),
        "rational_coefficients": ((dict, type(None)), None, None),
    },
    "mmimo": {
        "antenna_gain_db": (_NUMBER, 2.1, None),
        "lna_gain_db": (_NUMBER, 30.0, _nonnegative),
        "t_room_k": (_NUMBER, 290.0, _positive),
        "t_lna_k": (_NUMBER, 100.0, _positive),
    },
    "array": {
        "elements": (int, 300, _positive),
    },
    "users": {
        "count": (int, 20, _positive),
        "center_m": (_NUMBER, 400.0, _positive),
        "radius_m": (_NUMBER, 300.0, _nonnegative),
        "min_distance_m": (_NUMBER, 1.0, _positive),
        "pathloss_intercept_db": (_NUMBER, -30.0, None),
        "pathloss_slope_db_per_decade": (_NUMBER, 38.0, _positive),
        "shadowing_std_db": (_NUMBER, 4.0, _nonnegative),
        "transmit_power_dbm": (_NUMBER, 30.0, None),
    },
    "simulation": {
        "trials": (int, 500, _positive),
        "master_seed": (int, 20240817, _nonnegative),
        "schemes": (list, ["mrc", "zf"], None),
        "systems": (list, ["raq", "mmimo"], None),
        "energy_budget_w": ((*_NUMBER, type(None)), None, None),
    },
    "notes": {},
}

#: Values shipped in the default template for the constants that have no
#: defensible built-in default.  mu12 is the Cs D2 reduced dipole moment,
#: mu34 a representative Rydberg-Rydberg microwave transition moment
#: (1400 e*a0), t2 a transit-time-limited coherence, and the aperture the
#: geometric probe/cell interaction cross section (beam diameter x length).
TEMPLATE_PHYSICS = {
    ("atom", "mu12_cm"): 3.7971e-29,
    ("atom", "mu34_cm"): 1.1870e-26,
    ("atom", "t2_s"): 1.0e-6,
    ("frontend", "effective_aperture_m2"): 1.7e-4,
}

#: Template overrides on top of the schema defaults.  Shadowing defaults to
#: 4 dB in the schema, but the shipped template pins it to zero so headline
#: runs are exactly reproducible from the seed alone.
TEMPLATE_OVERRIDES = {
    ("users", "shadowing_std_db"): 0.0,
}

TEMPLATE_NOTES = [
    "Constants below are not fixed by the deployment description and were",
    "chosen from standard caesium data: mu12_cm is the D2 reduced dipole",
    "moment, mu34_cm corresponds to 1400 e*a0 for the microwave transition",
    "between neighbouring Rydberg states, t2_s is a transit-time-limited",
    "coherence, and effective_aperture_m2 is the probe-beam/cell cross",
    "section (a documented placeholder).  Reported absolute rates and the",
    "ZF system gap (nominally ~8.8 bit/s/Hz/user, tolerance +/-2) move with",
    "these choices; relative trends do not.",
    "lo.rabi_hz sets the RF operating point on the readout slope of the",
    "split transparency feature; the default sits near the maximum slope of",
    "the template atomic configuration.",
    "shadowing_std_db is 0 here for reproducibility; 4 dB is typical.",
]


def default_config_dict() -> dict:
    """Full shipped template: schema defaults plus the documented constants."""
    cfg: dict[str, Any] = {"notes": list(TEMPLATE_NOTES)}
    for section, fields in _SCHEMA.items():
        if not fields:
            continue
        cfg[section] = {}
        for key, (_, default, _check) in fields.items():
            if default is _REQUIRED:
                cfg[section][key] = TEMPLATE_PHYSICS[(section, key)]
            else:
                cfg[section][key] = default
    for (section, key), value in TEMPLATE_OVERRIDES.items():
        cfg[section][key] = value
    return cfg


def write_template(path) -> None:
    Path(path).write_text(json.dumps(default_config_dict(), indent=2) + "\n")


def _validate_tree(raw: dict) -> tuple[dict, list[str]]:
    problems: list[str] = []
    merged: dict[str, Any] = {}
    if not isinstance(raw, dict):
        return {}, ["top-level configuration must be a JSON object"]
    for section in raw:
        if section not in _SCHEMA:
            problems.append(f"unknown section {section!r}")
    notes = raw.get("notes", [])
    if isinstance(notes, str):
        notes = [notes]
    if not (isinstance(notes, list) and all(isinstance(n, str) for n in notes)):
        problems.append("notes must be a string or a list of strings")
        notes = []
    merged["notes"] = notes
    for section, fields in _SCHEMA.items():
        if not fields:
            continue
        given = raw.get(section, {})
        if not isinstance(given, dict):
            problems.append(f"section {section!r} must be an object")
            given = {}
        for key in given:
            if key not in fields:
                problems.append(f"unknown key {section}.{key}")
        merged[section] = {}
        for key, (types, default, check) in fields.items():
            if key in given:
                value = given[key]
                if isinstance(value, bool) or not isinstance(value, types):
                    problems.append(f"{section}.{key} has invalid type "
                                    f"{type(value).__name__}")
                    continue
                if isinstance(value, float) and not math.isfinite(value):
                    problems.append(f"{section}.{key} must be finite")
                    continue
                if check is not None and isinstance(value, _NUMBER) \
                        and not isinstance(value, bool) and not check(value):
                    problems.append(f"{section}.{key} = {value!r} is out of range")
                    continue
                merged[section][key] = value
            elif default is _REQUIRED:
                problems.append(
                    f"missing required entry {section}.{key} (no default exists)"
                )
            else:
                merged[section][key] = default
    return merged, problems


def _cross_checks(cfg: dict, problems: list[str]) -> None:
    sim = cfg.get("simulation", {})
    users = cfg.get("users", {})
    array = cfg.get("array", {})
    schemes = sim.get("schemes", [])
    systems = sim.get("systems", [])
    if not schemes or any(s not in ("mrc", "zf") for s in schemes):
        problems.append("simulation.schemes must be a nonempty subset of ['mrc', 'zf']")
    if not systems or any(s not in ("raq", "mmimo") for s in systems):
        problems.append("simulation.systems must be a nonempty subset of ['raq', 'mmimo']")
    m = array.get("elements")
    k = users.get("count")
    if "zf" in schemes and m is not None and k is not None and m <= k:
        problems.append(
            f"zero forcing needs more elements than users (M={m}, K={k})"
        )
    if users.get("center_m", 1.0) <= users.get("radius_m", 0.0):
        problems.append("users.center_m must exceed users.radius_m")
    lo = cfg.get("lo", {})
    user_rabi = lo.get("user_rabi_hz")
    if user_rabi is not None and lo.get("rabi_hz"):
        ratio = user_rabi / lo["rabi_hz"]
        if ratio > lo.get("max_user_rabi_ratio", 0.01):
            problems.append(
                f"lo.user_rabi_hz/lo.rabi_hz = {ratio:.3e} exceeds "
                f"lo.max_user_rabi_ratio"
            )
    fe = cfg.get("frontend", {})
    mode = fe.get("susceptibility")
    if mode not in ("solver", "rational"):
        problems.append("frontend.susceptibility must be 'solver' or 'rational'")
    if mode == "rational":
        coeffs = fe.get("rational_coefficients")
        wanted = ("prefactor", "a", "b", "c")
        if not isinstance(coeffs, dict) or sorted(coeffs) != sorted(wanted):
            problems.append(
                "frontend.rational_coefficients must provide exactly "
                "prefactor, a, b, c"
            )
        else:
            for name in ("a", "b", "c"):
                v = coeffs[name]
                if not (isinstance(v, list) and len(v) == 3
                        and all(isinstance(x, _NUMBER) and not isinstance(x, bool)
                                for x in v)):
                    problems.append(
                        f"frontend.rational_coefficients.{name} must be three numbers"
                    )
    ph = cfg.get("photodetection", {})
    phase = ph.get("local_phase_rad")
    if isinstance(phase, str) and phase != "maximizing":
        problems.append(
            "photodetection.local_phase_rad must be a number or 'maximizing'"
        )


def _dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class Config:
    """Validated configuration with builders for the physics objects."""

    raw: dict

    # -- scalar accessors -------------------------------------------------
    @property
    def m_elements(self) -> int:
        return self.raw["array"]["elements"]

    @property
    def user_count(self) -> int:
        return self.raw["users"]["count"]

    @property
    def transmit_power_w(self) -> float:
        return _dbm_to_watt(self.raw["users"]["transmit_power_dbm"])

    @property
    def trials(self) -> int:
        return self.raw["simulation"]["trials"]

    @property
    def master_seed(self) -> int:
        return self.raw["simulation"]["master_seed"]

    @property
    def schemes(self) -> tuple[str, ...]:
        return tuple(self.raw["simulation"]["schemes"])

    @property
    def systems(self) -> tuple[str, ...]:
        return tuple(self.raw["simulation"]["systems"])

    @property
    def energy_budget_w(self) -> float:
        budget = self.raw["simulation"]["energy_budget_w"]
        if budget is None:
            return self.transmit_power_w * self.m_elements
        return float(budget)

    @property
    def bandwidth_hz(self) -> float:
        return self.raw["photodetection"]["bandwidth_hz"]

    # -- physics builders --------------------------------------------------
    def four_level_system(self) -> FourLevelSystem:
        atom = self.raw["atom"]
        probe = self.raw["probe"]
        coupling = self.raw["coupling"]
        lo = self.raw["lo"]
        return FourLevelSystem(
            omega_p_rabi=TWO_PI * probe["rabi_hz"],
            omega_c_rabi=TWO_PI * coupling["rabi_hz"],
            gamma2=TWO_PI * atom["gamma2_hz"],
            gamma3=TWO_PI * atom["gamma3_hz"],
            gamma4=TWO_PI * atom["gamma4_hz"],
            delta_p=TWO_PI * probe["detuning_hz"],
            delta_c=TWO_PI * coupling["detuning_hz"],
            delta_l=TWO_PI * lo["detuning_hz"],
            atomic_density=atom["density_per_m3"],
            population_fraction=atom["population_fraction"],
            mu12=atom["mu12_cm"],
            mu34=atom["mu34_cm"],
            t2_coherence=atom["t2_s"],
            regularization=TWO_PI * atom["regularization_hz"],
        )

    def probe_field(self) -> ProbeField:
        probe = self.raw["probe"]
        return ProbeField.from_power(
            power=probe["power_w"],
            wavelength=probe["wavelength_m"],
            fwhm=probe["fwhm_m"],
            cell_length=self.raw["cell"]["length_m"],
            input_phase=probe["input_phase_rad"],
        )

    def local_oscillator(self) -> LocalOscillator:
        lo = self.raw["lo"]
        user_rabi = lo["user_rabi_hz"]
        return LocalOscillator(
            carrier_frequency=lo["carrier_hz"],
            rabi=TWO_PI * lo["rabi_hz"],
            power=_dbm_to_watt(lo["power_dbm"]),
            incidence_angle=lo["incidence_angle_rad"],
            reference_phase=lo["reference_phase_rad"],
            user_rabi=None if user_rabi is None else TWO_PI * user_rabi,
            max_user_rabi_ratio=lo["max_user_rabi_ratio"],
        )

    def photodetection_chain(self) -> PhotodetectionChain:
        ph = self.raw["photodetection"]
        phase = ph["local_phase_rad"]
        return PhotodetectionChain(
            local_power=ph["local_power_w"],
            local_phase=0.0 if isinstance(phase, str) else float(phase),
            quantum_efficiency=ph["quantum_efficiency"],
            gain=_db_to_linear(ph["gain_db"]),
            bandwidth=ph["bandwidth_hz"],
            probe_omega=TWO_PI * sc.c / self.raw["probe"]["wavelength_m"],
        )

    @property
    def maximize_local_phase(self) -> bool:
        return self.raw["photodetection"]["local_phase_rad"] == "maximizing"

    def susceptibility_source(self):
        fe = self.raw["frontend"]
        if fe["susceptibility"] == "rational":
            coeffs = fe["rational_coefficients"]
            return RationalSusceptibility(
                prefactor=coeffs["prefactor"],
                a_coeffs=tuple(coeffs["a"]),
                b_coeffs=tuple(coeffs["b"]),
                c_coeffs=tuple(coeffs["c"]),
            )
        return None

    def raq_frontend(self) -> FrontEndResponse:
        return assemble_frontend(
            system=self.four_level_system(),
            probe=self.probe_field(),
            osc=self.local_oscillator(),
            chain=self.photodetection_chain(),
            aperture=self.raw["frontend"]["effective_aperture_m2"],
            spacing=self.element_spacing,
            maximize_phase=self.maximize_local_phase,
            susceptibility_source=self.susceptibility_source(),
        )

    def mmimo_frontend(self) -> MmimoFrontEnd:
        mm = self.raw["mmimo"]
        return mmimo_frontend(
            carrier_frequency=self.raw["lo"]["carrier_hz"],
            antenna_gain=_db_to_linear(mm["antenna_gain_db"]),
            lna_gain=_db_to_linear(mm["lna_gain_db"]),
            t_room=mm["t_room_k"],
            t_lna=mm["t_lna_k"],
            bandwidth=self.bandwidth_hz,
        )

    @property
    def rf_wavelength(self) -> float:
        return sc.c / self.raw["lo"]["carrier_hz"]

    @property
    def element_spacing(self) -> float:
        return self.raw["frontend"]["element_spacing_fraction"] * self.rf_wavelength

    def steering(self, m_elements: int | None = None) -> np.ndarray:
        return steering_matrix(
            self.m_elements if m_elements is None else m_elements,
            self.element_spacing,
            self.rf_wavelength,
            self.raw["lo"]["incidence_angle_rad"],
        )

    def user_profile(self, count: int | None = None,
                     seed=None) -> tuple[UserGeometry, LargeScaleProfile]:
        users = self.raw["users"]
        if seed is None:
            seed = (self.master_seed, GEOMETRY_STREAM)
        return large_scale_profile(
            count=self.user_count if count is None else count,
            center_distance=users["center_m"],
            drop_radius=users["radius_m"],
            shadow_std_db=users["shadowing_std_db"],
            seed=seed,
            min_distance=users["min_distance_m"],
            intercept_db=users["pathloss_intercept_db"],
            slope_db_per_decade=users["pathloss_slope_db_per_decade"],
        )


def parse_config(raw: dict) -> Config:
    """Validate a configuration mapping and wrap it."""
    merged, problems = _validate_tree(raw)
    if not problems:
        _cross_checks(merged, problems)
    if problems:
        raise ConfigError(problems)
    return Config(raw=merged)


def load_config(path) -> Config:
    """Load and validate a JSON configuration file.

    A missing file or malformed JSON raises :class:`ConfigError`; an empty
    file is treated as an empty object, which then reports every required
    entry at once.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read configuration file: {exc}"]) from exc
    if not text.strip():
        raw: dict = {}
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"configuration is not valid JSON: {exc}"]) from exc
    return parse_config(raw)
