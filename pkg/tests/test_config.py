import json
import math
from pathlib import Path

import pytest

from raqsim.config import default_config_dict, load_config, parse_config
from raqsim.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parents[1]


def write(tmp_path, payload) -> Path:
    path = tmp_path / "config.json"
    if isinstance(payload, str):
        path.write_text(payload)
    else:
        path.write_text(json.dumps(payload))
    return path


class TestLoadConfig:
    def test_empty_file_enumerates_required_keys(self, tmp_path):
        path = write(tmp_path, "")
        with pytest.raises(ConfigError) as err:
            load_config(path)
        text = str(err.value)
        for key in ("atom.mu12_cm", "atom.mu34_cm", "atom.t2_s",
                    "frontend.effective_aperture_m2"):
            assert key in text

    def test_template_validates_cleanly(self, tmp_path):
        path = write(tmp_path, default_config_dict())
        cfg = load_config(path)
        assert cfg.m_elements == 300
        assert cfg.user_count == 20
        assert cfg.transmit_power_w == pytest.approx(1.0)
        assert cfg.bandwidth_hz == 100e3

    def test_shipped_template_file_validates(self):
        cfg = load_config(REPO_ROOT / "configs" / "default.json")
        assert cfg.raw == parse_config(default_config_dict()).raw

    def test_unknown_keys_rejected(self, tmp_path):
        payload = default_config_dict()
        payload["atom"]["typo_key"] = 1.0
        payload["no_such_section"] = {}
        path = write(tmp_path, payload)
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "unknown key atom.typo_key" in str(err.value)
        assert "unknown section 'no_such_section'" in str(err.value)

    def test_zero_forcing_needs_more_elements_than_users(self, tmp_path):
        payload = default_config_dict()
        payload["array"]["elements"] = 20
        payload["users"]["count"] = 20
        path = write(tmp_path, payload)
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "M=20, K=20" in str(err.value)

    def test_mrc_only_allows_square_deployment(self, tmp_path):
        payload = default_config_dict()
        payload["array"]["elements"] = 20
        payload["users"]["count"] = 20
        payload["simulation"]["schemes"] = ["mrc"]
        cfg = load_config(write(tmp_path, payload))
        assert cfg.schemes == ("mrc",)

    def test_malformed_json_reported(self, tmp_path):
        path = write(tmp_path, "{not json")
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "not valid JSON" in str(err.value)

    def test_missing_file_reported(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_out_of_range_value_reported(self, tmp_path):
        payload = default_config_dict()
        payload["photodetection"]["quantum_efficiency"] = 1.5
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, payload))
        assert "quantum_efficiency" in str(err.value)

    def test_multiple_problems_reported_together(self, tmp_path):
        payload = default_config_dict()
        payload["photodetection"]["quantum_efficiency"] = -1.0
        payload["users"]["count"] = 0
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, payload))
        assert len(err.value.problems) >= 2


class TestDefaults:
    def test_reference_deployment_defaults(self):
        raw = default_config_dict()
        assert raw["cell"]["length_m"] == 0.1
        assert raw["atom"]["density_per_m3"] == 3e16
        assert raw["atom"]["population_fraction"] == 1e-3
        assert raw["probe"]["wavelength_m"] == 852e-9
        assert raw["probe"]["power_w"] == 29.8e-6
        assert raw["probe"]["rabi_hz"] == 5.7e6
        assert raw["coupling"]["power_w"] == 17e-6
        assert raw["coupling"]["rabi_hz"] == 0.97e6
        assert raw["lo"]["carrier_hz"] == 6.9458e9
        assert raw["lo"]["power_dbm"] == 15.0
        assert raw["lo"]["if_hz"] == 150e3
        assert raw["photodetection"]["bandwidth_hz"] == 100e3
        assert raw["photodetection"]["gain_db"] == 30.0
        assert raw["photodetection"]["quantum_efficiency"] == 0.8
        assert raw["mmimo"]["antenna_gain_db"] == 2.1
        assert raw["mmimo"]["t_lna_k"] == 100.0
        assert raw["users"]["count"] == 20
        assert raw["users"]["center_m"] == 400.0
        assert raw["users"]["radius_m"] == 300.0
        assert raw["users"]["transmit_power_dbm"] == 30.0
        assert raw["array"]["elements"] == 300

    def test_template_pins_headline_shadowing_to_zero(self):
        assert default_config_dict()["users"]["shadowing_std_db"] == 0.0

    def test_builders_round_trip(self, default_config):
        sys = default_config.four_level_system()
        assert sys.omega_p_rabi == pytest.approx(2 * math.pi * 5.7e6)
        osc = default_config.local_oscillator()
        assert osc.power == pytest.approx(10 ** ((15.0 - 30.0) / 10.0))
        chain = default_config.photodetection_chain()
        assert chain.gain == pytest.approx(1000.0)
        assert default_config.maximize_local_phase

    def test_energy_budget_defaults_to_power_times_elements(self, default_config):
        assert default_config.energy_budget_w == pytest.approx(300.0)

    def test_element_spacing_half_wavelength(self, default_config):
        lam = 299792458.0 / 6.9458e9
        assert default_config.element_spacing == pytest.approx(lam / 2)


class TestRationalSource:
    def test_rational_coefficients_accepted(self, tmp_path):
        payload = default_config_dict()
        payload["frontend"]["susceptibility"] = "rational"
        payload["frontend"]["rational_coefficients"] = {
            "prefactor": 90.0,
            "a": [0.0, 0.0, 0.0],
            "b": [1.0e-22, 1.0e-11, 1.0],
            "c": [1.0e-22, 1.0e-11, 1.0],
        }
        cfg = load_config(write(tmp_path, payload))
        model = cfg.susceptibility_source()
        assert model is not None
        assert model.prefactor == 90.0

    def test_rational_mode_requires_coefficients(self, tmp_path):
        payload = default_config_dict()
        payload["frontend"]["susceptibility"] = "rational"
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, payload))
        assert "rational_coefficients" in str(err.value)

    def test_geometry_profile_deterministic(self, default_config):
        _, a = default_config.user_profile()
        _, b = default_config.user_profile()
        assert (a.beta == b.beta).all()
