"""Jarque-Bera normality diagnostic.

Jarque-Bera正規性検定を行うモジュール.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from scipy import stats

from utils.errors import InsufficientDataError

MIN_SAMPLES = 8
# 95% quantile of chi-squared with 2 degrees of freedom (about 5.991).
CRITICAL_5PCT = float(stats.chi2.ppf(0.95, df=2))


class JarqueBera(NamedTuple):
    """Jarque-Bera statistic and its 5% decision.

    Jarque-Bera統計量と5%水準の判定.
    """

    statistic: float
    normal_at_5pct: bool


def jarque_bera(values: npt.ArrayLike) -> JarqueBera:
    """Compute ``n/6 * (S^2 + (K - 3)^2 / 4)`` and compare it to the chi-squared(2) 95% point.

    Jarque-Bera統計量を計算し, 自由度2のカイ二乗分布の95%点と比較する.

    Args:
        values (npt.ArrayLike): Samples / 標本

    Returns:
        JarqueBera: Statistic and ``statistic < 5.991`` / 統計量と判定

    Raises:
        InsufficientDataError: If there are fewer than 8 values or they are all equal /
            8個未満、または全て同じ値の場合
    """
    data = np.asarray(values, dtype=np.float64).reshape(-1)
    if data.size < MIN_SAMPLES:
        raise InsufficientDataError(f"Jarque-Bera needs at least {MIN_SAMPLES} values, got {data.size}")
    if np.ptp(data) == 0:
        raise InsufficientDataError("Jarque-Bera is undefined for a constant sample")
    statistic = max(float(stats.jarque_bera(data).statistic), 0.0)
    return JarqueBera(statistic=statistic, normal_at_5pct=statistic < CRITICAL_5PCT)
