"""Time-series handling: ingestion, lag embedding, splitting and synthetic data.

時系列の読み込み、ラグ埋め込み、分割、合成データ生成.
"""

from series.dataset import Dataset, Series, SplitSpec, Standardizer, embed_lags, split
from series.io import load_csv, write_csv
from series.synth import DEFAULT_NOISE_SD, SynthKind, synth_series

__all__ = [
    "DEFAULT_NOISE_SD",
    "Dataset",
    "Series",
    "SplitSpec",
    "Standardizer",
    "SynthKind",
    "embed_lags",
    "load_csv",
    "split",
    "synth_series",
    "write_csv",
]
