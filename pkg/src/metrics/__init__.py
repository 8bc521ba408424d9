"""Forecast error metrics, distribution summaries and normality diagnostics.

予測誤差指標、分布要約、正規性診断.
"""

from metrics.distribution import BoxStats, box_stats, nrmse_ratio, quantiles
from metrics.forecast import ErrorSummary, Normalizer, nmae, nrmse, summarize
from metrics.normality import JarqueBera, jarque_bera

__all__ = [
    "BoxStats",
    "ErrorSummary",
    "JarqueBera",
    "Normalizer",
    "box_stats",
    "jarque_bera",
    "nmae",
    "nrmse",
    "nrmse_ratio",
    "quantiles",
    "summarize",
]
