"""Module defining series, lag-embedded datasets and chronological splits.

時系列、ラグ埋め込みデータセット、時系列順の分割を定義するモジュール.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view

from utils.errors import InputShapeError, InsufficientDataError, InvalidSeriesError, InvalidSplitError

FloatArray = npt.NDArray[np.float64]


def _frozen(values: npt.ArrayLike) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Series:
    """Hourly observations of one variable at one site.

    ある地点のある変数の毎時観測値.
    """

    values: FloatArray
    name: str = "series"

    def __post_init__(self) -> None:
        """Validate and freeze the observations."""
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise InvalidSeriesError(f"{self.name}: series must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise InvalidSeriesError(f"{self.name}: non-finite value at position {bad}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:  # noqa: D105
        return int(self.values.size)


@dataclass(frozen=True)
class Dataset:
    """Supervised pairs built from a series.

    時系列から構築した教師ありデータ.

    Row ``i`` of ``inputs`` holds ``[x(t-1), x(t-2), ..., x(t-p)]`` (most recent first) and
    ``targets[i]`` holds ``x(t)``.
    """

    inputs: FloatArray
    targets: FloatArray
    name: str = field(default="dataset", compare=False)

    def __post_init__(self) -> None:
        """Validate shapes and freeze the arrays."""
        inputs = _frozen(self.inputs)
        targets = _frozen(self.targets)
        if inputs.ndim != 2 or targets.ndim != 1:  # noqa: PLR2004
            raise InputShapeError("inputs must be 2-d and targets 1-d")
        if inputs.shape[0] != targets.shape[0]:
            raise InputShapeError(
                f"inputs have {inputs.shape[0]} rows but targets have {targets.shape[0]} entries",
            )
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @property
    def p(self) -> int:
        """Lag order.

        Returns:
            int: Number of lag inputs per sample / サンプルあたりのラグ入力数
        """
        return int(self.inputs.shape[1])

    def __len__(self) -> int:  # noqa: D105
        return int(self.targets.shape[0])

    def take(self, indices: npt.ArrayLike) -> Dataset:
        """Return the samples at the given positions, in the given order.

        指定位置のサンプルを抽出する.

        Args:
            indices (npt.ArrayLike): Sample positions / サンプル位置

        Returns:
            Dataset: Selected samples / 抽出されたサンプル
        """
        index = np.asarray(indices, dtype=np.intp)
        return Dataset(self.inputs[index], self.targets[index], name=self.name)

    def window(self, start: int, stop: int) -> Dataset:
        """Return the contiguous samples ``[start, stop)``.

        Args:
            start (int): First sample / 先頭サンプル
            stop (int): One past the last sample / 末尾の次

        Returns:
            Dataset: Contiguous slice / 連続区間
        """
        return Dataset(self.inputs[start:stop], self.targets[start:stop], name=self.name)


@dataclass(frozen=True)
class SplitSpec:
    """Chronological train/test sizes, counted in embedded samples.

    埋め込み後のサンプル数で数えた学習/評価の分割サイズ.
    """

    n_train: int = 3200
    n_test: int = 400

    def __post_init__(self) -> None:
        """Reject degenerate splits."""
        if self.n_train < 1:
            raise InvalidSplitError(f"n_train must be >= 1, got {self.n_train}")
        if self.n_test < 1:
            raise InvalidSplitError(f"n_test must be >= 1, got {self.n_test}")


@dataclass(frozen=True)
class Standardizer:
    """Affine map to zero mean and unit variance, with its inverse.

    平均0・分散1への変換とその逆変換.
    """

    mean: float
    scale: float

    @classmethod
    def fit(cls, series: Series) -> Standardizer:
        """Estimate the map from a series.

        Args:
            series (Series): Series to fit / 推定に使う時系列

        Returns:
            Standardizer: Fitted map / 推定された変換
        """
        scale = float(np.std(series.values))
        return cls(mean=float(np.mean(series.values)), scale=scale if scale > 0 else 1.0)

    def apply(self, series: Series) -> Series:
        """Standardize a series.

        Args:
            series (Series): Raw series / 元の時系列

        Returns:
            Series: Standardized series / 標準化された時系列
        """
        return Series((series.values - self.mean) / self.scale, name=series.name)

    def invert(self, values: FloatArray) -> FloatArray:
        """Map standardized values back to the raw scale.

        Args:
            values (FloatArray): Standardized values / 標準化された値

        Returns:
            FloatArray: Raw-scale values / 元のスケールの値
        """
        return values * self.scale + self.mean


def embed_lags(series: Series, p: int) -> Dataset:
    """Convert a series into lag-embedded supervised pairs.

    時系列をラグ埋め込みの教師ありデータに変換する.
    正規化やトレンド除去は行わない.

    Args:
        series (Series): Source series / 元の時系列
        p (int): Lag order / ラグ次数

    Returns:
        Dataset: ``len(series) - p`` samples / ``len(series) - p`` 個のサンプル

    Raises:
        InsufficientDataError: If ``p < 1`` or the series has no more than ``p`` values /
            ``p < 1`` または時系列長が ``p`` 以下の場合
    """
    if p < 1:
        raise InsufficientDataError(f"lag order must be >= 1, got {p}")
    if len(series) <= p:
        raise InsufficientDataError(f"{series.name}: {len(series)} values cannot embed {p} lags")
    windows = sliding_window_view(series.values, p + 1)
    inputs = windows[:, :p][:, ::-1]
    targets = windows[:, p]
    return Dataset(inputs, targets, name=series.name)


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Split a dataset chronologically; samples after train+test are discarded.

    データセットを時系列順に分割する. 学習+評価を超えるサンプルは破棄する.

    Args:
        dataset (Dataset): Embedded dataset / 埋め込み済みデータセット
        spec (SplitSpec): Split sizes / 分割サイズ

    Returns:
        tuple[Dataset, Dataset]: Train and test datasets / 学習用と評価用のデータセット

    Raises:
        InsufficientDataError: If the split needs more samples than available / サンプルが不足する場合
    """
    needed = spec.n_train + spec.n_test
    if needed > len(dataset):
        raise InsufficientDataError(
            f"{dataset.name}: split needs {needed} samples but only {len(dataset)} are available",
        )
    return dataset.window(0, spec.n_train), dataset.window(spec.n_train, needed)
