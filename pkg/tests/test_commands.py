import numpy as np
import pytest
import yaml

from tests.helpers import write_config
from vnslab.commands import COMMAND_DEFINITIONS, dispatch_command
from vnslab.errors import EXIT_CONFIG, EXIT_OK
from vnslab.main import build_parser, main


@pytest.fixture
def power_series(tmp_path):
    t = np.linspace(1.0, 20.0, 40)
    path = tmp_path / "series.csv"
    lines = ["t,E0,E1"] + [f"{a:.17g},{a ** -1.5:.17g},{a ** -2.5:.17g}" for a in t]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestDispatch:
    def test_unknown_command(self):
        code, report = dispatch_command("drop_tables", {})
        assert code == EXIT_CONFIG
        assert "Unknown command" in yaml.safe_load(report)["error"]

    def test_every_definition_has_a_handler(self, tmp_path):
        for definition in COMMAND_DEFINITIONS:
            code, report = dispatch_command(definition["function"]["name"],
                                            {"config": str(tmp_path / "absent.env"),
                                             "series": str(tmp_path / "absent.csv"), "eps": 0.0})
            assert code == EXIT_CONFIG
            assert "Unknown command" not in report


class TestFit:
    def test_power_law(self, power_series):
        code, report = dispatch_command("fit", {"series": str(power_series)})
        data = yaml.safe_load(report)
        assert code == EXIT_OK
        assert data["exponent"] == pytest.approx(-1.5, abs=1e-9)
        assert data["column"] == "E0"

    def test_column_and_window(self, power_series):
        code, report = dispatch_command("fit", {"series": str(power_series), "column": "E1", "window": "5:20"})
        data = yaml.safe_load(report)
        assert code == EXIT_OK
        assert data["exponent"] == pytest.approx(-2.5, abs=1e-9)
        assert data["window"][0] >= 5

    def test_bad_window(self, power_series):
        code, report = dispatch_command("fit", {"series": str(power_series), "window": "5-20"})
        assert code == EXIT_CONFIG
        assert "a:b" in yaml.safe_load(report)["error"]

    def test_unknown_column(self, power_series):
        code, _ = dispatch_command("fit", {"series": str(power_series), "column": "E7"})
        assert code == EXIT_CONFIG


class TestRunCommands:
    def test_bad_config_key(self, tmp_path):
        path = write_config(tmp_path / "bad.env", dimensions=2)
        code, report = dispatch_command("run", {"config": str(path)})
        assert code == EXIT_CONFIG
        assert "Invalid configuration" in yaml.safe_load(report)["error"]

    def test_run_report(self, fluid_config, tmp_path):
        code, report = dispatch_command("run", {"config": str(fluid_config())})
        data = yaml.safe_load(report)
        assert code == EXIT_OK
        assert data["status"] == "completed"
        assert data["records"] == 6
        assert (tmp_path / "out" / "series.csv").is_file()

    def test_twin_report(self, fluid_config):
        code, report = dispatch_command("twin", {"config": str(fluid_config()), "eps": 1e-3})
        data = yaml.safe_load(report)
        assert code == EXIT_OK
        assert data["Y"][0] == pytest.approx(1e-6, rel=1e-8)

    def test_picard_rejects_nonpositive_T(self, fluid_config):
        code, report = dispatch_command("picard", {"config": str(fluid_config()), "T": -1.0})
        assert code == EXIT_CONFIG
        assert "T must be positive" in yaml.safe_load(report)["error"]

    def test_heat_decay_slopes(self, tmp_path):
        path = write_config(tmp_path / "heat.env", dimension=2, points=256, box="64pi", particles=0,
                            velocity="zero", oracle_window="1:50")
        code, report = dispatch_command("heat_decay", {"config": str(path)})
        data = yaml.safe_load(report)
        assert code == EXIT_OK
        assert data["l2"]["expected"] == -1.0
        assert data["gradient"]["expected"] == -2.0
        assert data["l2"]["matches"] is True
        assert data["gradient"]["matches"] is True


class TestMain:
    def test_fit_from_argv(self, power_series, capsys):
        assert main(["fit", str(power_series), "--column", "E0"]) == EXIT_OK
        assert "exponent" in capsys.readouterr().out

    def test_subcommand_names(self):
        parser = build_parser()
        args = parser.parse_args(["heat-decay", "cfg.env"])
        assert args.handler == "heat_decay"
        assert args.samples == 40

    def test_eps_is_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["twin", "cfg.env"])

    def test_error_exit_code(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "absent.env")]) == EXIT_CONFIG
        assert "not found" in capsys.readouterr().out
