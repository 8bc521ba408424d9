"""CSV ingestion and export of series.

時系列のCSV読み込みと書き出しを行うモジュール.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import pandas as pd

from series.dataset import Series
from utils.errors import ColumnNotFoundError, InvalidSeriesError, ParseError, SeriesIOError

logger = logging.getLogger(__name__)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _to_float(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _read_table(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except FileNotFoundError as e:
        raise SeriesIOError(f"{path}: file not found") from e
    except pd.errors.EmptyDataError as e:
        raise InvalidSeriesError(f"{path}: file is empty") from e
    except (pd.errors.ParserError, UnicodeDecodeError, OSError) as e:
        raise SeriesIOError(f"{path}: {e}") from e


def load_csv(
    path: str | Path,
    column: str | int,
    *,
    name: str | None = None,
    has_header: bool | None = None,
) -> Series:
    """Read one numeric column of a CSV file as a series.

    CSVファイルの数値列を1つ読み込み時系列として返す.

    A header line is detected automatically unless ``has_header`` is given: the first line is a
    header when any non-empty cell fails to parse as a number. ``NaN`` and ``inf`` parse, so such a
    first row stays data and raises ``ParseError``. A string selector always needs a header.

    Args:
        path (str | Path): CSV file path / CSVファイルのパス
        column (str | int): Header name or 0-based column index / 列名または0始まりの列番号
        name (str | None): Series label, defaults to the column name / 時系列名 (既定は列名)
        has_header (bool | None): Force header handling / ヘッダ有無の明示指定

    Returns:
        Series: Fully finite series / 全要素が有限の時系列

    Raises:
        SeriesIOError: If the file cannot be read / ファイルを読み込めない場合
        ColumnNotFoundError: If the selector matches no column / 列が見つからない場合
        ParseError: If a selected cell is missing or non-numeric / 数値でないセルがある場合
    """
    path = Path(path)
    table = _read_table(path)
    if has_header is None:
        first = [str(cell).strip() for cell in table.iloc[0].tolist()]
        has_header = any(cell and not _is_number(cell) for cell in first)
    header: list[str] = [str(cell).strip() for cell in table.iloc[0].tolist()] if has_header else []
    body = table.iloc[1:] if has_header else table

    if isinstance(column, str):
        if column not in header:
            raise ColumnNotFoundError(column)
        index = header.index(column)
        label = column
    else:
        if not 0 <= column < table.shape[1]:
            raise ColumnNotFoundError(column)
        index = column
        label = header[index] if header else f"column{index}"

    cells = [str(cell).strip() for cell in body.iloc[:, index].tolist()]
    values: list[float] = []
    for row, cell in enumerate(cells, start=1):
        value = _to_float(cell)
        if value is None:
            raise ParseError(row, cell)
        values.append(value)
    if not values:
        raise InvalidSeriesError(f"{path}: no data rows")
    logger.debug("Loaded %d values from %s[%s]", len(values), path, label)
    return Series(values, name=name or label)


def write_csv(series: Series, path: str | Path, *, column: str = "value") -> Path:
    """Write a series as a two-column ``t,<column>`` CSV file.

    時系列を ``t,<column>`` の2列CSVとして書き出す.

    Args:
        series (Series): Series to write / 書き出す時系列
        path (str | Path): Destination / 出力先
        column (str): Value column header / 値列のヘッダ

    Returns:
        Path: Written file / 書き出したファイル
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"t": range(len(series)), column: series.values})
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")
    return path
