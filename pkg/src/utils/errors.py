"""Exception hierarchy shared by every package.

全パッケージ共通の例外クラスを定義するモジュール.
"""

from __future__ import annotations


class PmlpError(Exception):
    """Base exception for all library errors.

    ライブラリ全体の基底例外クラス.
    """


class InputShapeError(PmlpError):
    """Exception raised when array dimensions disagree with the topology or each other.

    配列の次元がトポロジーや互いに一致しない場合に発生する例外.
    """


class MaskShapeError(InputShapeError):
    """Exception raised when a connection mask length differs from the parameter count.

    接続マスクの長さがパラメータ数と一致しない場合に発生する例外.
    """


class InvariantViolationError(PmlpError):
    """Exception raised when a masked parameter holds a nonzero value.

    マスクされたパラメータが非ゼロの値を持つ場合に発生する例外.
    """


class EmptyDataError(PmlpError):
    """Exception raised when an operation receives no samples.

    サンプルが空の場合に発生する例外.
    """


class InsufficientDataError(PmlpError):
    """Exception raised when there are too few samples for the requested operation.

    要求された処理に対してサンプル数が不足している場合に発生する例外.
    """


class DampingSingularError(PmlpError):
    """Exception raised when the damped normal matrix cannot be factorized.

    減衰付き正規方程式の行列が分解できない場合に発生する例外.
    """


class Stage1FailureError(PmlpError):
    """Exception raised when too many first-stage solves diverge.

    第1段階の求解が規定回数を超えて発散した場合に発生する例外.
    """


class InvalidSplitError(PmlpError):
    """Exception raised for a degenerate train/test split specification.

    学習/評価分割の指定が不正な場合に発生する例外.
    """


class InvalidSeriesError(PmlpError):
    """Exception raised when a series is empty or holds non-finite values.

    時系列が空、または非有限値を含む場合に発生する例外.
    """


class SeriesIOError(PmlpError):
    """Exception raised when a data file cannot be read.

    データファイルを読み込めない場合に発生する例外.
    """


class ParseError(PmlpError):
    """Exception raised when a CSV cell of the selected column is not a finite number.

    選択列のCSVセルが有限の数値でない場合に発生する例外.
    """

    def __init__(self, row: int, value: str) -> None:
        """Initialize the parse error.

        Args:
            row (int): 1-based data row number, header excluded / ヘッダを除く1始まりの行番号
            value (str): Offending cell text / 問題のあるセルの文字列
        """
        super().__init__(f"row {row}: cannot parse {value!r} as a finite number")
        self.row = row
        self.value = value


class ColumnNotFoundError(PmlpError):
    """Exception raised when a column selector matches nothing.

    列指定に一致する列が存在しない場合に発生する例外.
    """

    def __init__(self, selector: str | int) -> None:
        """Initialize the error.

        Args:
            selector (str | int): Column name or index that was requested / 指定された列名またはインデックス
        """
        super().__init__(f"column {selector!r} not found")
        self.selector = selector


class ZeroNormalizerError(PmlpError):
    """Exception raised when an error metric's normalizer is zero or negative.

    誤差指標の正規化値がゼロまたは負の場合に発生する例外.
    """


class ConfigError(PmlpError):
    """Exception raised for invalid or unknown configuration values.

    設定値が不正、または未知のキーを含む場合に発生する例外.
    """


class SeriesLoadError(PmlpError):
    """Exception raised when a campaign series fails validation before training.

    キャンペーンの時系列が学習前の検証に失敗した場合に発生する例外.
    """


class ModelFormatError(PmlpError):
    """Exception raised when a saved model file has a wrong version or corrupted fields.

    保存済みモデルファイルのバージョン不一致や破損時に発生する例外.
    """
