"""Tests for the command-line interface: parsing, artifacts, exit codes."""

import subprocess
import sys

import pytest

from spbvp.cli import (
    EXIT_NO_CONVERGENCE,
    EXIT_OK,
    EXIT_PROPERTY_FAILURE,
    EXIT_USAGE,
    OUTDIR_ENV,
    epsilon_token,
    main,
    parse_power,
)


class TestParsePower:
    def test_caret_notation(self):
        assert parse_power("2^-10") == 2.0**-10
        assert parse_power("2^-4") == 2.0**-4

    def test_double_star_notation(self):
        assert parse_power("2**-6") == 2.0**-6

    def test_plain_decimals(self):
        assert parse_power("0.25") == 0.25
        assert parse_power("1e-3") == 1e-3

    def test_invalid_input(self):
        import argparse

        with pytest.raises(argparse.ArgumentTypeError):
            parse_power("two")
        with pytest.raises(argparse.ArgumentTypeError):
            parse_power("2^^3")

    def test_epsilon_token(self):
        assert epsilon_token(2.0**-10) == "2m10"
        assert epsilon_token(0.3) == "0p3"


class TestSolveCommand:
    def test_writes_artifacts_and_reports_error(self, tmp_path, capsys):
        code = main([
            "solve", "--problem", "paper-test", "--epsilon", "2^-10",
            "--n", "32", "--mode", "plain", "-o", str(tmp_path),
        ])
        assert code == EXIT_OK
        base = "paper-test_eps2m10_n32_plain"
        for suffix in ("_mesh.csv", "_nodal.csv", "_samples.csv",
                       "_solution.png", "_error.png"):
            assert (tmp_path / f"{base}{suffix}").exists()
        out = capsys.readouterr().out
        assert "E_N = " in out
        assert "region errors:" in out
        assert "converged=true" in out

    def test_exactness_visible_in_output(self, tmp_path, capsys):
        code = main([
            "solve", "--problem", "linear-gamma", "--epsilon", "2^-8",
            "--n", "64", "-o", str(tmp_path), "--no-figures",
        ])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        e_n = float(out.split("E_N = ")[1].split()[0])
        assert e_n <= 1e-12

    def test_no_figures_flag(self, tmp_path):
        main([
            "solve", "--epsilon", "2^-10", "--n", "32",
            "-o", str(tmp_path), "--no-figures",
        ])
        assert not list(tmp_path.glob("*.png"))

    def test_missing_n_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--epsilon", "2^-10"])
        assert exc.value.code == EXIT_USAGE

    def test_epsilon_out_of_range(self, capsys):
        code = main(["solve", "--epsilon", "1.5", "--n", "32"])
        assert code == EXIT_USAGE
        assert "epsilon" in capsys.readouterr().err

    def test_n_not_multiple_of_four(self, capsys):
        code = main(["solve", "--epsilon", "2^-10", "--n", "30"])
        assert code == EXIT_USAGE
        assert "multiple of 4" in capsys.readouterr().err

    def test_repaired_on_uniform_mesh_is_usage_error(self, tmp_path, capsys):
        code = main([
            "solve", "--epsilon", "2^-4", "--n", "32",
            "--mode", "repaired", "-o", str(tmp_path),
        ])
        assert code == EXIT_USAGE
        assert "degenerate" in capsys.readouterr().err

    def test_non_convergence_exit_code(self, tmp_path, capsys):
        # One iteration cannot converge from a constant guess on this run;
        # artifacts are still written, exit code distinguishes the outcome.
        code = main([
            "solve", "--problem", "paper-test", "--epsilon", "2^-10",
            "--n", "32", "--newton-max-iter", "1", "--newton-tol", "1e-300",
            "--initial-guess", "10.0", "-o", str(tmp_path), "--no-figures",
        ])
        assert code == EXIT_NO_CONVERGENCE
        assert "converged=false" in capsys.readouterr().out

    def test_outdir_from_environment(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "from-env"))
        code = main([
            "solve", "--epsilon", "2^-10", "--n", "32", "--no-figures",
        ])
        assert code == EXIT_OK
        assert (tmp_path / "from-env").is_dir()
        assert list((tmp_path / "from-env").glob("*.csv"))


class TestTableCommand:
    def test_pretty_output(self, capsys):
        code = main([
            "table", "--epsilon", "2^-4", "2^-10", "--n", "32", "64",
        ])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "eps=2^-4" in out
        assert "eps=2^-10" in out
        assert "E_N" in out

    def test_single_n_leaves_order_empty(self, capsys):
        code = main(["table", "--epsilon", "2^-10", "--n", "32"])
        assert code == EXIT_OK
        data_line = capsys.readouterr().out.splitlines()[-1]
        assert "-" in data_line

    def test_csv_artifacts(self, tmp_path, capsys):
        code = main([
            "table", "--epsilon", "2^-10", "--n", "32", "64",
            "--format", "csv", "-o", str(tmp_path),
        ])
        assert code == EXIT_OK
        csv_path = tmp_path / "paper-test_plain_report.csv"
        assert csv_path.exists()
        assert (tmp_path / "paper-test_plain_report.png").exists()
        header = csv_path.read_text().splitlines()[0]
        assert header.startswith("epsilon,N,E_N,Ord")

    def test_csv_deterministic(self, tmp_path):
        args = [
            "table", "--epsilon", "2^-10", "--n", "32",
            "--format", "csv", "--no-figures",
        ]
        main(args + ["-o", str(tmp_path / "a")])
        main(args + ["-o", str(tmp_path / "b")])
        a = (tmp_path / "a" / "paper-test_plain_report.csv").read_bytes()
        b = (tmp_path / "b" / "paper-test_plain_report.csv").read_bytes()
        assert a == b

    def test_non_doubling_n_rejected(self, capsys):
        code = main(["table", "--epsilon", "2^-10", "--n", "32", "100"])
        assert code == EXIT_USAGE
        assert "double" in capsys.readouterr().err


class TestCheckCommand:
    def test_all_suites_pass(self, capsys):
        code = main(["check", "--trials", "25", "--seed", "7"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 4
        assert "all checks passed" in out

    def test_sabotage_fails_coefficient_suite(self, capsys):
        code = main([
            "check", "--trials", "25", "--sabotage", "delta-d-naive",
        ])
        assert code == EXIT_PROPERTY_FAILURE
        captured = capsys.readouterr()
        assert "[FAIL] coefficient-identities" in captured.out
        assert "coefficient-identities" in captured.err

    def test_unknown_sabotage_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["check", "--sabotage", "other"])
        assert exc.value.code == EXIT_USAGE


class TestEntryPoint:
    def test_module_invocation(self):
        result = subprocess.run(
            [sys.executable, "-m", "spbvp", "--help"],
            capture_output=True, text=True, timeout=60,
        )
        assert result.returncode == 0
        for subcommand in ("solve", "table", "check"):
            assert subcommand in result.stdout
