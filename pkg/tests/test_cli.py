"""Integration Tests for the Command Line - every subcommand and every exit code

Self-Explanatory: run -> summarize -> front on a tiny matrix, the 1-D demo, and the error
to exit-code mapping.
Run: pytest tests/test_cli.py
"""

import csv

import pytest

from src.main import EXIT_CONFIG, EXIT_ERROR, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from src.utils.errors import NumericalFailureError, UnsupportedProblemError

TINY = """\
problems: zdt1
dims: 3
algorithms: random-search, nsga2-budget
repeats: 1
pop_size_n3: 10
budget_n3: 20
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.yaml"
    path.write_text(TINY, encoding="utf-8")
    return path


def test_run_summarize_front(tmp_path, tiny_config, capsys):
    out = tmp_path / "results"
    assert main(["run", "--config", str(tiny_config), "--out", str(out)]) == EXIT_OK
    assert "2 records" in capsys.readouterr().out

    summary = tmp_path / "summary.csv"
    assert main(["summarize", "--in", str(out), "--out", str(summary)]) == EXIT_OK
    with summary.open(encoding="utf-8") as handle:
        algorithms = {row["algorithm"] for row in csv.DictReader(handle)}
    assert algorithms == {"random-search", "nsga2-budget"}

    record = out / "records" / "zdt1_n3_random-search_r00.csv"
    front = tmp_path / "front.csv"
    assert main(["front", "--record", str(record), "--out", str(front), "--pf-points", "20"]) == EXIT_OK
    assert front.read_text(encoding="utf-8").startswith("label,f1,f2")


def test_saea_single(capsys):
    code = main(["saea-single", "--problem-1d", "quadratic", "--budget", "12", "--acq", "ucb", "--seed", "3"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith("quadratic: best_value=")


def test_config_error_exit_code(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.yaml"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_io_error_exit_code(tmp_path):
    code = main(["summarize", "--in", str(tmp_path / "nowhere"), "--out", str(tmp_path / "s.csv")])
    assert code == EXIT_IO


def test_numerical_failure_exit_code(tmp_path, tiny_config, mocker):
    mocker.patch("src.main.run_experiment", side_effect=NumericalFailureError("singular", {"n_train": 4}))
    assert main(["run", "--config", str(tiny_config), "--out", str(tmp_path)]) == EXIT_NUMERICAL


def test_other_errors_exit_code(tmp_path, tiny_config, mocker):
    mocker.patch("src.main.run_experiment", side_effect=UnsupportedProblemError("zdt9"))
    assert main(["run", "--config", str(tiny_config), "--out", str(tmp_path)]) == EXIT_ERROR


def test_parser_rejects_unknown_acquisition():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["saea-single", "--acq", "kg"])
