"""Tests for the command line entry point."""
from unittest.mock import patch

import numpy as np
import pytest

from lrssecrecy.cli import main
from lrssecrecy.const import EXIT_BAD_ARGUMENTS, EXIT_OK, EXIT_VALIDATION_FAILED
from lrssecrecy.exceptions import NumericalError
from lrssecrecy.montecarlo import TestReport
from lrssecrecy.validation import GateOutcome

SWEEP_ARGS = ["sweep", "--variants", "NR", "--n", "4", "--bits", "2", "--g0b-dB", "0:10:10"]


def test_sweep_to_stdout(capsys):
    """Test a closed-form sweep written to standard output."""
    assert main(SWEEP_ARGS) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,bits,g0b_dB,variant,value,stderr"
    assert [line.split(",")[:4] for line in lines[1:]] == [["4", "2", "0", "NR"], ["4", "2", "10", "NR"]]


def test_sweep_to_file(tmp_path, capsys):
    """Test --out and that the flag output matches the stdout output."""
    target = tmp_path / "sop.csv"
    assert main([*SWEEP_ARGS, "--out", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert main(SWEEP_ARGS) == EXIT_OK
    assert target.read_text() == capsys.readouterr().out


def test_sweep_reads_config_file(tmp_path, capsys):
    """Test that flags override the config file."""
    path = tmp_path / "run.conf"
    path.write_text("variants=NR\nn=4\nbits=1\ng0b-dB=5\n")
    assert main(["sweep", "--config", str(path), "--bits", "inf"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].startswith("4,inf,5,NR,")


def test_sweep_reports_failed_points(capsys):
    """Test exit status 1 when a grid point cannot be evaluated."""
    with patch("lrssecrecy.sweep.coordinator.metrics.sop", side_effect=NumericalError("boom")):
        assert main(SWEEP_ARGS) == EXIT_VALIDATION_FAILED
    assert capsys.readouterr().out.splitlines()[1].split(",")[4] == "nan"


@pytest.mark.parametrize(
    "extra", [["--bits", "0"], ["--g0b-dB", "10:0:1"], ["--trials", "many"], ["--hop-r-e", "gamma"]]
)
def test_bad_arguments(extra):
    """Test exit status 2 for invalid values."""
    assert main([*SWEEP_ARGS, *extra]) == EXIT_BAD_ARGUMENTS


def test_unknown_subcommand():
    """Test that argparse rejects unknown subcommands."""
    with pytest.raises(SystemExit) as excinfo:
        main(["plot"])
    assert excinfo.value.code == 2


def test_validate_prints_outcomes(capsys):
    """Test the validate subcommand output and status."""
    outcome = GateOutcome("asymptotes", TestReport.check(0.5, 0.01, "asymptotic/exact BR SOP - 1"))
    with patch("lrssecrecy.cli.validate", return_value=(EXIT_VALIDATION_FAILED, [outcome])) as mock_validate:
        assert main(["validate", "--trials", "1e4", "--seed", "3"]) == EXIT_VALIDATION_FAILED
    assert mock_validate.call_args.kwargs["trials"] == 10_000
    assert mock_validate.call_args.kwargs["seed"] == 3
    assert capsys.readouterr().out.startswith("FAIL asymptotes:")


def test_simulate_csv(capsys):
    """Test the CSV sample dump on standard output."""
    assert main(["simulate", "--n", "4", "--bits", "2", "--trials", "10"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "gamma_b,gamma_e"
    assert len(lines) == 11


def test_simulate_binary(tmp_path):
    """Test the binary sample dump and its reproducibility."""
    first = tmp_path / "first.bin"
    second = tmp_path / "second.bin"
    args = ["simulate", "--n", "4", "--trials", "10", "--format", "binary", "--seed", "5"]
    assert main([*args, "--out", str(first)]) == EXIT_OK
    assert main([*args, "--out", str(second)]) == EXIT_OK
    assert first.stat().st_size == 160
    assert first.read_bytes() == second.read_bytes()
    pairs = np.frombuffer(first.read_bytes(), dtype="<f8").reshape(-1, 2)
    assert (pairs >= 0.0).all()
