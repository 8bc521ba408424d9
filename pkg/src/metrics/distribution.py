"""Distribution summaries for box plots and MLP/pMLP ratio plots.

箱ひげ図と比率プロット用の分布要約を定義するモジュール.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from utils.errors import EmptyDataError, InputShapeError, ZeroNormalizerError

FloatArray = npt.NDArray[np.float64]

# Linear interpolation between order statistics (Hyndman-Fan type 7), used everywhere.
QUANTILE_METHOD = "linear"
WHISKER_IQR = 1.5


def quantiles(values: npt.ArrayLike, probabilities: npt.ArrayLike, *, axis: int = 0) -> FloatArray:
    """Type-7 empirical quantiles.

    Args:
        values (npt.ArrayLike): Samples / 標本
        probabilities (npt.ArrayLike): Probabilities in [0, 1] / 確率
        axis (int): Sample axis / 標本の軸

    Returns:
        FloatArray: Quantiles, probability axis first / 分位点
    """
    return np.asarray(
        np.quantile(np.asarray(values, dtype=np.float64), probabilities, axis=axis, method=QUANTILE_METHOD),
        dtype=np.float64,
    )


@dataclass(frozen=True)
class BoxStats:
    """Tukey box-plot statistics.

    Tukeyの箱ひげ図統計量.
    """

    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def box_stats(values: npt.ArrayLike) -> BoxStats:
    """Compute Tukey box-plot statistics with type-7 quartiles.

    Tukeyの箱ひげ図統計量を計算する.

    Whiskers reach the most extreme values within 1.5 IQR of the quartiles; anything beyond is
    an outlier.

    Args:
        values (npt.ArrayLike): Samples / 標本

    Returns:
        BoxStats: Quartiles, whiskers and outliers / 四分位点、ひげ、外れ値

    Raises:
        EmptyDataError: If there are no values / 値が空の場合
    """
    data = np.asarray(values, dtype=np.float64).reshape(-1)
    if data.size == 0:
        raise EmptyDataError("box_stats needs at least one value")
    q1, median, q3 = (float(q) for q in quantiles(data, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    low_fence = q1 - WHISKER_IQR * iqr
    high_fence = q3 + WHISKER_IQR * iqr
    inside = data[(data >= low_fence) & (data <= high_fence)]
    outliers = np.sort(data[(data < low_fence) | (data > high_fence)])
    return BoxStats(
        q1=q1,
        median=median,
        q3=q3,
        whisker_low=float(np.min(inside)),
        whisker_high=float(np.max(inside)),
        outliers=tuple(float(v) for v in outliers),
    )


def nrmse_ratio(mlp_runs: npt.ArrayLike, pmlp_runs: npt.ArrayLike) -> FloatArray:
    """Elementwise MLP/pMLP nRMSE ratio; values above 1 mean pMLP did better.

    MLPとpMLPのnRMSEの比を要素ごとに計算する. 1を超えるとpMLPが優れている.

    Args:
        mlp_runs (npt.ArrayLike): MLP nRMSE per run / MLPの試行ごとのnRMSE
        pmlp_runs (npt.ArrayLike): Paired pMLP nRMSE per run / 対応するpMLPのnRMSE

    Returns:
        FloatArray: Ratios / 比

    Raises:
        InputShapeError: If lengths differ / 長さが異なる場合
        ZeroNormalizerError: If a pMLP entry is zero / pMLPの値がゼロの場合
    """
    mlp = np.asarray(mlp_runs, dtype=np.float64).reshape(-1)
    pmlp = np.asarray(pmlp_runs, dtype=np.float64).reshape(-1)
    if mlp.shape != pmlp.shape:
        raise InputShapeError(f"{mlp.size} MLP runs paired with {pmlp.size} pMLP runs")
    if np.any(pmlp == 0):
        raise ZeroNormalizerError("pMLP nRMSE of zero cannot be a ratio denominator")
    return mlp / pmlp
