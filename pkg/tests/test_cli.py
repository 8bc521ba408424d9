from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest

from main import cli_main

if TYPE_CHECKING:
    from pathlib import Path

EXPECTED_FILES = {
    "minima_table.txt",
    "means_table.txt",
    "boxstats.csv",
    "ratios.csv",
    "trace_obs.csv",
    "weights_obs.csv",
    "records.csv",
    "summary.json",
}


@pytest.fixture
def series_csv(tmp_path: Path, small_config_file: Path) -> Path:
    path = tmp_path / "obs.csv"
    args = ["synth", "-c", str(small_config_file), "--kind", "temperature", "--length", "200", "--seed", "1"]
    code = cli_main([*args, "--out", str(path)])
    assert code == 0
    return path


def _compare(config: Path, csv: Path, out: Path) -> int:
    return cli_main(
        ["compare", "-c", str(config), "--csv", str(csv), "--column", "value", "--seed", "7", "--out", str(out)],
    )


def test_synth_writes_csv(series_csv: Path) -> None:
    lines = series_csv.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,value"
    assert len(lines) == 201


def test_compare_writes_reports(series_csv: Path, small_config_file: Path, tmp_path: Path) -> None:
    out = tmp_path / "results"
    assert _compare(small_config_file, series_csv, out) == 0
    assert {p.name for p in out.iterdir()} == EXPECTED_FILES
    table = (out / "minima_table.txt").read_text(encoding="utf-8").splitlines()
    assert len(table) == 2
    assert table[1].split()[:2] == ["obs", "-"]
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert 0.0 <= summary["grand_mean_pruning_ratio"] <= 1.0


def test_compare_is_reproducible(series_csv: Path, small_config_file: Path, tmp_path: Path) -> None:
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert _compare(small_config_file, series_csv, first) == 0
    assert _compare(small_config_file, series_csv, second) == 0
    for name in EXPECTED_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_train_then_eval(
    series_csv: Path,
    small_config_file: Path,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    model = tmp_path / "model" / "model.yml"
    assert cli_main(["train", "-c", str(small_config_file), "--csv", str(series_csv), "--out", str(model)]) == 0
    assert model.exists()
    capsys.readouterr()
    assert cli_main(["eval", "--model", str(model), "--csv", str(series_csv), "--n-test", "30"]) == 0
    assert "n=30" in capsys.readouterr().out


def test_eval_rejects_mismatched_lags(
    series_csv: Path,
    small_config_file: Path,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    model = tmp_path / "model.yml"
    assert cli_main(["train", "-c", str(small_config_file), "--csv", str(series_csv), "--out", str(model)]) == 0
    capsys.readouterr()
    assert cli_main(["eval", "--model", str(model), "--csv", str(series_csv), "--lags", "5"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_prune_train_writes_significance(series_csv: Path, small_config_file: Path, tmp_path: Path) -> None:
    model = tmp_path / "pruned" / "model.yml"
    assert cli_main(["prune-train", "-c", str(small_config_file), "--csv", str(series_csv), "--out", str(model)]) == 0
    report = json.loads((model.parent / "significance.json").read_text(encoding="utf-8"))
    assert 0.0 <= report["pruning_ratio"] <= 1.0


def test_missing_csv_is_an_error(small_config_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = cli_main(["train", "-c", str(small_config_file), "--csv", str(tmp_path / "none.csv")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_usage_errors_exit_with_two() -> None:
    assert cli_main(["forecast"]) == 2
    assert cli_main(["synth", "--kind", "temperature", "--bogus"]) == 2
    assert cli_main([]) == 2


def test_eval_reports_unreadable_model(series_csv: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    model = tmp_path / "broken.yml"
    model.write_bytes(b"\xff\xfe\x00\x01")
    assert cli_main(["eval", "--model", str(model), "--csv", str(series_csv)]) == 1
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize("flag", ["--lags", "--hidden", "--n-train"])
def test_explicit_zero_is_rejected(
    flag: str,
    series_csv: Path,
    small_config_file: Path,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    model = tmp_path / "model.yml"
    args = ["train", "-c", str(small_config_file), "--csv", str(series_csv), "--out", str(model), flag, "0"]
    assert cli_main(args) == 1
    assert capsys.readouterr().err.startswith("error:")
    assert not model.exists()


def test_eval_rejects_zero_lags_and_test_size(
    series_csv: Path,
    small_config_file: Path,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    model = tmp_path / "model.yml"
    assert cli_main(["train", "-c", str(small_config_file), "--csv", str(series_csv), "--out", str(model)]) == 0
    capsys.readouterr()
    assert cli_main(["eval", "--model", str(model), "--csv", str(series_csv), "--lags", "0"]) == 1
    assert "--lags 0" in capsys.readouterr().err
    assert cli_main(["eval", "--model", str(model), "--csv", str(series_csv), "--n-test", "0"]) == 1
    assert "--n-test" in capsys.readouterr().err
