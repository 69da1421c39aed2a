"""Configuration parsing, validation, round-trips, sweep overrides."""
import dataclasses

import pytest

from conftest import tiny_config
from ottosim.config import (
    ConfigError,
    LeadConfig,
    NumericsConfig,
    RunConfig,
    config_from_dict,
    config_to_dict,
    load_config,
    save_config,
    with_overrides,
)


class TestDefaults:
    def test_defaults_are_the_operating_point(self):
        cfg = RunConfig().validate()
        assert cfg.protocol.epsilon1 == 2.0
        assert cfg.protocol.epsilon2 == 1.0
        assert cfg.protocol.period == 60.0
        assert cfg.hot.beta == 0.2
        assert cfg.cold.beta == 1.5
        assert cfg.numerics.dt == 0.1
        assert cfg.numerics.cycles == 10

    def test_lead_spec_construction(self):
        spec = LeadConfig(beta=0.2).to_spec()
        assert spec.N == 200
        assert spec.gamma == spec.delta_eps  # gamma defaults to the spacing


class TestValidation:
    def test_gamma_must_exceed_spacing(self):
        with pytest.raises(ConfigError):
            LeadConfig(beta=0.2, Gamma=0.02, delta_eps=0.03).to_spec()

    def test_spacing_must_divide_band(self):
        with pytest.raises(ConfigError):
            LeadConfig(beta=0.2, D=3.0, delta_eps=0.07).to_spec()

    def test_dt_must_divide_strokes(self):
        with pytest.raises(ConfigError):
            tiny_config(numerics=NumericsConfig(dt=0.7))

    def test_initial_occupation_range(self):
        with pytest.raises(ConfigError):
            tiny_config(initial_occupation=1.5)

    def test_sweep_axis_names(self):
        with pytest.raises(ConfigError):
            tiny_config(sweep={"voltage": [1.0]})
        with pytest.raises(ConfigError):
            tiny_config(sweep={"Gamma": []})
        cfg = tiny_config(sweep={"Gamma": [0.5, 0.4]})
        assert cfg.sweep["Gamma"] == [0.5, 0.4]


class TestSerialization:
    def test_dict_round_trip(self):
        cfg = tiny_config(sweep={"dt": [0.5, 0.25]})
        again = config_from_dict(config_to_dict(cfg))
        assert again == cfg

    def test_yaml_round_trip(self, tmp_path):
        cfg = tiny_config()
        path = tmp_path / "run.yaml"
        save_config(cfg, path)
        assert load_config(path) == cfg

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"hotlead": {}})
        with pytest.raises(ConfigError):
            config_from_dict({"hot": {"beta": 0.2, "bandwith": 3.0}})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.yaml")

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("hot: [unclosed\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_config(path) == RunConfig().validate()


class TestOverrides:
    def test_lead_axes_hit_both_leads(self):
        cfg = tiny_config()
        out = with_overrides(cfg, Gamma=0.4, gamma=0.25)
        assert out.hot.Gamma == 0.4 and out.cold.Gamma == 0.4
        assert out.hot.gamma == 0.25 and out.cold.gamma == 0.25
        assert out.sweep == {}

    def test_dt_axis(self):
        out = with_overrides(tiny_config(), dt=0.25)
        assert out.numerics.dt == 0.25

    def test_invalid_override_combination(self):
        with pytest.raises(ConfigError):
            with_overrides(tiny_config(), delta_eps=0.9)  # > Gamma

    def test_unknown_axis(self):
        with pytest.raises(ConfigError):
            with_overrides(tiny_config(), beta=1.0)

    def test_original_untouched(self):
        cfg = tiny_config()
        with_overrides(cfg, Gamma=0.45)
        assert cfg.hot.Gamma == 0.5
        assert dataclasses.is_dataclass(cfg.hot)
