"""Normalized forecast error metrics.

正規化された予測誤差指標を定義するモジュール.

By default both metrics divide by the mean of the observations, so their magnitudes depend on
that choice; ``Normalizer`` offers range and standard deviation as alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from utils.compat import StrEnum

import numpy as np
import numpy.typing as npt

from utils.errors import EmptyDataError, InputShapeError, ZeroNormalizerError

FloatArray = npt.NDArray[np.float64]


class Normalizer(StrEnum):
    """Denominator of the normalized metrics.

    正規化に用いる分母.
    """

    MEAN = "mean"
    RANGE = "range"
    STD = "std"


@dataclass(frozen=True)
class ErrorSummary:
    """Both normalized errors of one prediction sequence.

    1つの予測系列に対する正規化誤差.
    """

    nrmse: float
    nmae: float
    n: int
    obs_mean: float


def _pair(pred: npt.ArrayLike, obs: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    p = np.asarray(pred, dtype=np.float64).reshape(-1)
    o = np.asarray(obs, dtype=np.float64).reshape(-1)
    if p.shape != o.shape:
        raise InputShapeError(f"{p.size} predictions for {o.size} observations")
    if o.size == 0:
        raise EmptyDataError("no observations")
    return p, o


def _normalizer(obs: FloatArray, kind: Normalizer) -> float:
    match Normalizer(kind):
        case Normalizer.MEAN:
            value = float(np.mean(obs))
        case Normalizer.RANGE:
            value = float(np.ptp(obs))
        case Normalizer.STD:
            value = float(np.std(obs))
    if value == 0:
        raise ZeroNormalizerError(f"{kind} of observations is zero")
    if value < 0:
        raise ZeroNormalizerError(f"{kind} of observations is negative ({value:g})")
    return value


def nrmse(pred: npt.ArrayLike, obs: npt.ArrayLike, *, normalizer: Normalizer = Normalizer.MEAN) -> float:
    """Root mean square error divided by the normalizer.

    正規化二乗平均平方根誤差.

    Args:
        pred (npt.ArrayLike): Predictions / 予測値
        obs (npt.ArrayLike): Observations / 観測値
        normalizer (Normalizer): Denominator, observation mean by default / 分母 (既定は観測値の平均)

    Returns:
        float: ``sqrt(mean((pred - obs)^2)) / mean(obs)``

    Raises:
        InputShapeError: If lengths differ / 長さが異なる場合
        ZeroNormalizerError: If the normalizer is zero or negative / 分母がゼロ以下の場合
    """
    p, o = _pair(pred, obs)
    error = p - o
    return float(np.sqrt(np.mean(error * error))) / _normalizer(o, normalizer)


def nmae(pred: npt.ArrayLike, obs: npt.ArrayLike, *, normalizer: Normalizer = Normalizer.MEAN) -> float:
    """Mean absolute error divided by the normalizer.

    正規化平均絶対誤差.

    Args:
        pred (npt.ArrayLike): Predictions / 予測値
        obs (npt.ArrayLike): Observations / 観測値
        normalizer (Normalizer): Denominator, observation mean by default / 分母 (既定は観測値の平均)

    Returns:
        float: ``mean(|pred - obs|) / mean(obs)``

    Raises:
        InputShapeError: If lengths differ / 長さが異なる場合
        ZeroNormalizerError: If the normalizer is zero or negative / 分母がゼロ以下の場合
    """
    p, o = _pair(pred, obs)
    return float(np.mean(np.abs(p - o))) / _normalizer(o, normalizer)


def summarize(pred: npt.ArrayLike, obs: npt.ArrayLike, *, normalizer: Normalizer = Normalizer.MEAN) -> ErrorSummary:
    """Compute both metrics at once.

    Args:
        pred (npt.ArrayLike): Predictions / 予測値
        obs (npt.ArrayLike): Observations / 観測値
        normalizer (Normalizer): Denominator / 分母

    Returns:
        ErrorSummary: nRMSE, nMAE, sample count and observation mean / 誤差の要約
    """
    p, o = _pair(pred, obs)
    return ErrorSummary(
        nrmse=nrmse(p, o, normalizer=normalizer),
        nmae=nmae(p, o, normalizer=normalizer),
        n=int(o.size),
        obs_mean=float(np.mean(o)),
    )
