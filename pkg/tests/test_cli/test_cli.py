import argparse

import pytest

from dgdflow.cli import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_SELFTEST_FAILED,
    build_parser,
    main,
    parse_values,
    parse_vector,
)
from dgdflow.exceptions import ManifoldError
from dgdflow.scenario import ExperimentKind, SelftestCheck, SelftestReport


class TestParsing:
    def test_values_are_typed(self):
        assert parse_values("1, 2.5,true,ring") == [1, 2.5, True, "ring"]

    def test_empty_values(self):
        assert parse_values(" , ") == []

    def test_vector(self):
        assert parse_vector("0,1,0,-1") == [0.0, 1.0, 0.0, -1.0]

    def test_bad_vector(self):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_vector("0,one")

    def test_sweep_needs_a_parameter(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sweep", "--values", "1,2"])


class TestRun:
    def test_command_selects_the_experiment(
        self, mocker, scenario_file, fake_report, capsys
    ):
        run = mocker.patch("dgdflow.cli.run_scenario", return_value=fake_report)
        code = main(["basins", "--config", str(scenario_file), "--jobs", "3"])
        assert code == EXIT_OK
        scenario = run.call_args.args[0]
        assert scenario.kind is ExperimentKind.BASINS
        assert scenario.graph.nodes == 2
        assert run.call_args.kwargs == {"jobs": 3}
        assert "final_residual = 0.5" in capsys.readouterr().out

    def test_flags_override_the_file(
        self, mocker, scenario_file, fake_report, tmp_path
    ):
        run = mocker.patch("dgdflow.cli.run_scenario", return_value=fake_report)
        argv = ["manifold", "--config", str(scenario_file), "--seed", "9"]
        argv += ["--radius", "0.05", "--out", str(tmp_path / "elsewhere")]
        assert main(argv) == EXIT_OK
        scenario = run.call_args.args[0]
        assert scenario.seed == 9
        assert scenario.manifold.radius == 0.05
        assert scenario.output == str(tmp_path / "elsewhere")

    def test_probe_direction(self, mocker, fake_report):
        run = mocker.patch("dgdflow.cli.run_scenario", return_value=fake_report)
        assert main(["probe", "--direction", "0,1,0,1"]) == EXIT_OK
        assert run.call_args.args[0].probe.direction == [0.0, 1.0, 0.0, 1.0]

    def test_bad_config_exits_with_a_diagnostic(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text("[schedule]\ntau_alpha = 2.0\n", encoding="utf-8")
        argv = ["simulate", "--config", str(path), "--out", str(tmp_path / "out")]
        assert main(argv) == EXIT_ERROR
        err = capsys.readouterr().err
        assert err.startswith("dgdflow: error: schedule:")

    def test_unknown_key_exits_with_a_diagnostic(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text("[graph]\ncolour = 1\n", encoding="utf-8")
        assert main(["simulate", "--config", str(path)]) == EXIT_ERROR
        assert "graph.colour: unknown setting" in capsys.readouterr().err

    def test_numerical_failure_names_its_origin(self, mocker, capsys):
        mocker.patch(
            "dgdflow.cli.run_scenario", side_effect=ManifoldError("no saddle here")
        )
        assert main(["manifold"]) == EXIT_ERROR
        err = capsys.readouterr().err
        assert "ManifoldError: no saddle here" in err

    def test_sweep(self, mocker, tmp_path, capsys):
        run = mocker.patch("dgdflow.cli.sweep", return_value=tmp_path / "sweep.csv")
        argv = ["sweep", "--parameter", "schedule.tau_beta", "--values", "0.1,0.2"]
        assert main(argv) == EXIT_OK
        assert run.call_args.args[1:] == ("schedule.tau_beta", [0.1, 0.2])
        assert "sweep.csv" in capsys.readouterr().out


class TestSelftest:
    def test_failure_sets_the_exit_code(self, mocker, capsys):
        report = SelftestReport(
            (
                SelftestCheck("lambda2", 1e-12, "< 1e-09", True),
                SelftestCheck("rk4_order", 2.0, "in [3.8, 4.2]", False),
            )
        )
        run = mocker.patch("dgdflow.cli.run_selftest", return_value=report)
        assert main(["selftest", "--seed", "4"]) == EXIT_SELFTEST_FAILED
        run.assert_called_once_with(4)
        out = capsys.readouterr().out
        assert "FAIL rk4_order" in out
        assert "ok   lambda2" in out

    def test_passing_suite(self, mocker):
        report = SelftestReport((SelftestCheck("lambda2", 0.0, "< 1e-09", True),))
        mocker.patch("dgdflow.cli.run_selftest", return_value=report)
        assert main(["selftest"]) == EXIT_OK
