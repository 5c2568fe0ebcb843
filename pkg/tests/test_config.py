import numpy as np
import pytest

from thetasync import ConfigurationError, RunConfig, resolve_config
from thetasync.config import (PRESETS, parse_config_file, parse_config_text,
                              parse_overrides)


class TestParseConfigText:
    def test_comments_blanks_and_whitespace(self):
        text = """
        # a full-line comment
        n_modes = 64   # trailing comment

        alpha=2.5
        """
        assert parse_config_text(text) == {"n_modes": "64", "alpha": "2.5"}

    def test_unknown_key_names_origin_and_line(self):
        with pytest.raises(ConfigurationError, match=r"run\.cfg:2.*frobnicate"):
            parse_config_text("alpha=1.0\nfrobnicate=9", origin="run.cfg")

    def test_missing_separator_rejected(self):
        with pytest.raises(ConfigurationError, match="key=value"):
            parse_config_text("n_modes 64")

    def test_reserved_manifest_keys_are_ignored(self):
        text = "subcommand=optimize\nversion=0.1.0\nseed=3\n"
        assert parse_config_text(text) == {"seed": "3"}

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="cannot read config"):
            parse_config_file(str(tmp_path / "missing.cfg"))


class TestParseOverrides:
    def test_key_value_pairs(self):
        assert parse_overrides(["n_modes=64", "alpha = 2.0"]) == \
            {"n_modes": "64", "alpha": "2.0"}

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown key"):
            parse_overrides(["gamma=1"])

    def test_malformed_pair_rejected(self):
        with pytest.raises(ConfigurationError, match="key=value"):
            parse_overrides(["n_modes"])


class TestResolveConfig:
    def test_defaults(self):
        config = resolve_config()
        assert config.n_modes == 128
        assert config.n_eta == 51
        assert config.horizon == 6.0
        assert config.n_steps == 1200
        assert config.alpha == 1.0
        assert config.epsilon == 0.01
        assert config.max_iters == 50
        assert config.seed == 0
        assert config.particles_n == 20000
        assert config.storage_stride is None
        assert config.preset == "none"
        assert config.dealias is True
        assert config.normalize is True
        assert config.initial_density == "paper_cossin2"
        assert config.target == f"constant:{np.pi!r}"
        assert config.control == "zero"

    def test_preset_values(self):
        desk = resolve_config(preset="desk")
        assert (desk.n_modes, desk.n_eta, desk.n_steps) == (128, 51, 1200)
        assert desk.preset == "desk"
        paper = resolve_config(preset="paper")
        assert (paper.n_modes, paper.n_eta, paper.n_steps) == (512, 501, 3000)
        assert set(PRESETS) == {"desk", "paper"}

    def test_layering_order(self):
        config = resolve_config(
            preset="desk",
            file_values={"n_steps": "600", "seed": "5", "alpha": "2.0"},
            overrides={"n_steps": "300"},
            seed=9)
        assert config.n_steps == 300   # override beats file
        assert config.alpha == 2.0     # file beats preset
        assert config.seed == 9        # seed flag beats everything

    def test_preset_key_inside_file(self):
        config = resolve_config(file_values={"preset": "paper"})
        assert config.preset == "paper"
        assert config.n_modes == 512

    def test_preset_flag_beats_file_key(self):
        config = resolve_config(preset="desk",
                                file_values={"preset": "paper"})
        assert config.preset == "desk"
        assert config.n_modes == 128

    def test_preset_override_beats_file_key(self):
        config = resolve_config(file_values={"preset": "paper"},
                                overrides={"preset": "desk"})
        assert config.preset == "desk"
        assert config.n_modes == 128

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError, match="unknown preset"):
            resolve_config(preset="bench")

    def test_bool_spellings(self):
        assert resolve_config(overrides={"dealias": "0"}).dealias is False
        assert resolve_config(overrides={"dealias": "YES"}).dealias is True
        assert resolve_config(overrides={"normalize": "false"}).normalize is False
        with pytest.raises(ConfigurationError, match="true or false"):
            resolve_config(overrides={"dealias": "maybe"})

    def test_storage_stride_spellings(self):
        assert resolve_config(overrides={"storage_stride": "auto"}) \
            .storage_stride is None
        assert resolve_config(overrides={"storage_stride": "24"}) \
            .storage_stride == 24
        with pytest.raises(ConfigurationError, match="storage_stride"):
            resolve_config(overrides={"storage_stride": "sometimes"})

    def test_storage_stride_must_divide_n_steps(self):
        with pytest.raises(ConfigurationError, match="divide"):
            resolve_config(overrides={"n_steps": "60", "storage_stride": "7"})

    def test_numeric_coercion_errors_name_the_key(self):
        with pytest.raises(ConfigurationError, match="n_modes"):
            resolve_config(overrides={"n_modes": "many"})
        with pytest.raises(ConfigurationError, match="alpha"):
            resolve_config(overrides={"alpha": "strong"})

    @pytest.mark.parametrize("overrides", [
        {"alpha": "0.0"},
        {"epsilon": "-1.0"},
        {"max_iters": "-1"},
        {"particles_n": "0"},
        {"eta_min": "2.0", "eta_max": "1.0"},
        {"n_modes": "13"},
        {"horizon": "0.0"},
    ])
    def test_invalid_values_rejected(self, overrides):
        with pytest.raises(ConfigurationError):
            resolve_config(overrides=overrides)

    def test_target_and_control_specs(self):
        ok = resolve_config(overrides={"target": "constant:1.5",
                                       "control": "table:somewhere.csv"})
        assert ok.target == "constant:1.5"
        with pytest.raises(ConfigurationError, match="target"):
            resolve_config(overrides={"target": "constant:north"})
        with pytest.raises(ConfigurationError, match="target"):
            resolve_config(overrides={"target": "sinusoid:1"})
        with pytest.raises(ConfigurationError, match="control"):
            resolve_config(overrides={"control": "ramp"})

    def test_mapping_round_trip(self):
        config = resolve_config(
            preset="desk",
            overrides={"n_steps": "600", "storage_stride": "10",
                       "alpha": "0.1", "seed": "77"})
        mapping = config.to_mapping()
        again = resolve_config(file_values=mapping)
        assert again == config

    def test_grid_matches_fields(self):
        config = resolve_config(overrides={"n_modes": "32", "n_eta": "5",
                                           "horizon": "1.0", "n_steps": "60"})
        grid = config.grid()
        assert grid.n_modes == 32
        assert grid.n_eta == 5
        assert grid.horizon == 1.0
        assert grid.dt == pytest.approx(1.0 / 60)

    def test_direct_construction_validates(self):
        base = resolve_config().to_mapping()
        values = {k: v for k, v in base.items()}
        with pytest.raises(ConfigurationError):
            resolve_config(file_values={**values, "epsilon": "0.0"})
        config = RunConfig(n_modes=32, n_eta=5, eta_min=0.0, eta_max=1.0,
                           horizon=1.0, n_steps=60, dealias=True, alpha=1.0,
                           epsilon=0.01, max_iters=2, initial_density="uniform",
                           normalize=True, target="constant:0.0",
                           control="zero", storage_stride=None, preset="none",
                           seed=0, particles_n=100)
        assert config.grid().field_shape() == (5, 32)
