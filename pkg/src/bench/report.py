"""Writers for tables, plot data and run records.

表、図用データ、試行結果を書き出すモジュール.

Files contain no timestamps or paths, so identical reports give byte-identical files.
"""

from __future__ import annotations

import json
import re
from typing import TYPE_CHECKING, Any

import pandas as pd

from bench.config import OutputFormat

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from bench.campaign import AggregateReport, RunRecord, TableRow

TABLE_COLUMNS = ("data", "series", "MLP nRMSE", "MLP nMAE", "ratio pruning", "pMLP nRMSE", "pMLP nMAE")
MARK = "*"
RATIO_REFERENCE = 1.0


def _file_stem(name: str) -> str:
    return re.sub(r"[^\w@-]", "_", name)


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")
    return path


def _write_json(payload: object, path: Path) -> Path:
    return _write_text(path, json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def _cell(value: float, *, marked: bool, decimals: int | None) -> str:
    text = f"{value:.{decimals}f}" if decimals is not None else repr(value)
    return text + MARK if marked else text


def _table_frame(rows: Sequence[TableRow], decimals: int | None) -> pd.DataFrame:
    lines: list[list[str]] = []
    for row in rows:
        mlp_rmse, pmlp_rmse = row.nrmse_marks
        mlp_mae, pmlp_mae = row.nmae_marks
        lines.append(
            [
                row.data,
                row.site,
                _cell(row.mlp_nrmse, marked=mlp_rmse, decimals=decimals),
                _cell(row.mlp_nmae, marked=mlp_mae, decimals=decimals),
                _cell(row.pruning_ratio, marked=False, decimals=decimals),
                _cell(row.pmlp_nrmse, marked=pmlp_rmse, decimals=decimals),
                _cell(row.pmlp_nmae, marked=pmlp_mae, decimals=decimals),
            ],
        )
    return pd.DataFrame(lines, columns=list(TABLE_COLUMNS))


def _table_json(rows: Sequence[TableRow]) -> list[dict[str, Any]]:
    out: list[dict[str, Any]] = []
    for row in rows:
        mlp_rmse, pmlp_rmse = row.nrmse_marks
        mlp_mae, pmlp_mae = row.nmae_marks
        out.append(
            {
                "data": row.data,
                "series": row.site,
                "mlp": {"nrmse": row.mlp_nrmse, "nmae": row.mlp_nmae, "nrmse_better": mlp_rmse, "nmae_better": mlp_mae},
                "pruning_ratio": row.pruning_ratio,
                "pmlp": {
                    "nrmse": row.pmlp_nrmse,
                    "nmae": row.pmlp_nmae,
                    "nrmse_better": pmlp_rmse,
                    "nmae_better": pmlp_mae,
                },
            },
        )
    return out


def render_table(rows: Sequence[TableRow]) -> str:
    """Render rows as an aligned text table, 3 decimals, better cells marked with ``*``.

    行を3桁に丸めた整列テキスト表として描画する. 優れたセルには ``*`` を付ける.

    Args:
        rows (Sequence[TableRow]): Table rows / 表の行

    Returns:
        str: Header line plus one line per row / ヘッダ行と各行
    """
    return _table_frame(rows, decimals=3).to_string(index=False) + "\n"


def emit_tables(report: AggregateReport, fmt: OutputFormat | str, out_dir: Path) -> list[Path]:
    """Write the minima and means tables.

    最小値表と平均値表を書き出す.

    Text output rounds to 3 decimals; CSV and JSON keep full precision. Text and CSV mark
    the better cells with an asterisk, JSON carries boolean flags.

    Args:
        report (AggregateReport): Aggregated campaign / 集計結果
        fmt (OutputFormat | str): ``text``, ``csv`` or ``json`` / 出力形式
        out_dir (Path): Output directory / 出力先ディレクトリ

    Returns:
        list[Path]: Written files / 書き出したファイル
    """
    fmt = OutputFormat(fmt)
    written: list[Path] = []
    for stem, rows in (("minima_table", report.minima), ("means_table", report.means)):
        path = out_dir / f"{stem}{fmt.suffix}"
        match fmt:
            case OutputFormat.TEXT:
                written.append(_write_text(path, render_table(rows)))
            case OutputFormat.CSV:
                written.append(_write_frame(_table_frame(rows, decimals=None), path))
            case OutputFormat.JSON:
                written.append(_write_json(_table_json(rows), path))
    return written


def _structured(frame: pd.DataFrame, path_stem: Path, fmt: OutputFormat) -> Path:
    if fmt == OutputFormat.JSON:
        return _write_json(frame.to_dict(orient="records"), path_stem.with_suffix(".json"))
    return _write_frame(frame, path_stem.with_suffix(".csv"))


def emit_plot_data(report: AggregateReport, out_dir: Path, fmt: OutputFormat | str = OutputFormat.CSV) -> list[Path]:
    """Write box statistics, the ratio sequence, traces and weight distributions.

    箱ひげ統計、比の系列、予測プロファイル、重み分布を書き出す.

    JSON is used when ``fmt`` is ``json``; every other format writes CSV.

    Args:
        report (AggregateReport): Aggregated campaign / 集計結果
        out_dir (Path): Output directory / 出力先ディレクトリ
        fmt (OutputFormat | str): Table format of the campaign / キャンペーンの出力形式

    Returns:
        list[Path]: Written files / 書き出したファイル
    """
    fmt = OutputFormat(fmt)
    written: list[Path] = []
    box = pd.DataFrame(
        [
            {
                "variant": str(variant),
                "q1": stats.q1,
                "median": stats.median,
                "q3": stats.q3,
                "whisker_low": stats.whisker_low,
                "whisker_high": stats.whisker_high,
                "outliers": ";".join(repr(v) for v in stats.outliers),
            }
            for variant, stats in report.box
        ],
        columns=["variant", "q1", "median", "q3", "whisker_low", "whisker_high", "outliers"],
    )
    written.append(_structured(box, out_dir / "boxstats", fmt))

    ratios = pd.DataFrame(
        [{"series": p.series, "run": p.run, "ratio": p.ratio, "reference": RATIO_REFERENCE} for p in report.ratios],
        columns=["series", "run", "ratio", "reference"],
    )
    written.append(_structured(ratios, out_dir / "ratios", fmt))

    for trace in report.traces:
        frame = pd.DataFrame(
            {
                "t": range(len(trace.observed)),
                "observed": trace.observed,
                "mlp": trace.mlp,
                "pmlp": trace.pmlp,
            },
        )
        written.append(_structured(frame, out_dir / f"trace_{_file_stem(trace.series)}", fmt))

    for export in report.weights:
        frame = pd.DataFrame(export.samples, columns=list(export.names))
        written.append(_structured(frame, out_dir / f"weights_{_file_stem(export.series)}", fmt))
    return written


def emit_summary(report: AggregateReport, out_dir: Path) -> Path:
    """Write campaign-level figures: win rate, grand means and normality fractions.

    勝率、全体平均、正規性の割合を書き出す.

    Args:
        report (AggregateReport): Aggregated campaign / 集計結果
        out_dir (Path): Output directory / 出力先ディレクトリ

    Returns:
        Path: Written ``summary.json`` / 書き出したファイル
    """
    payload = {
        "win_rate": report.win_rate,
        "grand_mean_pruning_ratio": report.grand_mean_pruning_ratio,
        "grand_mean_nrmse_ratio": report.grand_mean_nrmse_ratio,
        "jb_normal_fraction": dict(report.normal_fractions),
    }
    return _write_json(payload, out_dir / "summary.json")


def emit_records(records: Sequence[RunRecord], out_dir: Path, fmt: OutputFormat | str = OutputFormat.CSV) -> Path:
    """Write every run record at full precision.

    全ての試行結果を完全な精度で書き出す.

    Args:
        records (Sequence[RunRecord]): Campaign records / 試行結果
        out_dir (Path): Output directory / 出力先ディレクトリ
        fmt (OutputFormat | str): Table format of the campaign / キャンペーンの出力形式

    Returns:
        Path: Written file / 書き出したファイル
    """
    frame = pd.DataFrame(
        [record.to_dict() for record in records],
        columns=[
            "series",
            "run",
            "variant",
            "nrmse",
            "nmae",
            "pruning_ratio",
            "seed",
            "iterations",
            "termination",
            "train_mse",
        ],
    )
    return _structured(frame, out_dir / "records", OutputFormat(fmt))
