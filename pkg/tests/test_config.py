import math

import pytest

from tests.helpers import write_config
from vnslab.config import RunConfig, config_from_mapping, load_config, parse_length, parse_window, validate_config
from vnslab.errors import ConfigError


class TestParsers:
    @pytest.mark.parametrize("text, value", [("6.5", 6.5), ("2pi", 2 * math.pi), ("32*pi", 32 * math.pi), ("pi", math.pi)])
    def test_length(self, text, value):
        assert parse_length(text) == pytest.approx(value)

    def test_window(self):
        assert parse_window("1:50") == (1.0, 50.0)

    def test_window_needs_colon(self):
        with pytest.raises(ValueError, match="a:b"):
            parse_window("1-50")


class TestLoadConfig:
    def test_flat_file(self, tmp_path):
        path = write_config(tmp_path / "run.env", dimension=3, box="4pi", monitor_loglip="no",
                            fit_window="1:10", cutoff="auto", profile="two_beam")
        cfg = load_config(path)
        assert cfg.dimension == 3
        assert cfg.box == pytest.approx(4 * math.pi)
        assert cfg.monitor_loglip is False
        assert cfg.fit_window == (1.0, 10.0)
        assert cfg.cutoff is None
        assert cfg.profile == "two_beam"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.env")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="Invalid configuration"):
            config_from_mapping({"dimensions": "2"})

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="Invalid configuration"):
            config_from_mapping({"monitor_besov": "maybe"})

    def test_echo_is_plain(self):
        echo = RunConfig(fit_window=(1.0, 2.0)).echo()
        assert echo["fit_window"] == [1.0, 2.0]
        assert echo["oracle_window"] == [1.0, 50.0]


class TestValidation:
    @pytest.mark.parametrize("overrides", [
        {"points": 12},
        {"dimension": 4},
        {"particles": 500},
        {"profile": "kappa"},
        {"scheme": "euler"},
        {"dt": 0.0},
        {"moment_q": 2.0},
        {"loglip_eta": 0.5},
        {"cutoff": 100.0},
        {"fit_window": (5.0, 1.0)},
    ])
    def test_rejected(self, overrides):
        with pytest.raises(ConfigError, match="Invalid configuration"):
            validate_config(RunConfig(**overrides))

    def test_defaults_are_valid(self):
        validate_config(RunConfig())

    def test_fluid_only_is_valid(self):
        validate_config(RunConfig(particles=0, velocity="taylor_green"))
