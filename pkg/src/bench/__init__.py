"""Benchmark harness: configuration, comparison campaigns, reports and model files.

ベンチマーク: 設定、比較キャンペーン、レポート、モデルファイル.
"""

from bench.campaign import AggregateReport, RunRecord, TableRow, Variant, aggregate, run_campaign
from bench.config import ExperimentConfig, OutputFormat, SeriesSource, default_config, load_config
from bench.model_io import load_model, save_model
from bench.report import emit_plot_data, emit_records, emit_summary, emit_tables

__all__ = [
    "AggregateReport",
    "ExperimentConfig",
    "OutputFormat",
    "RunRecord",
    "SeriesSource",
    "TableRow",
    "Variant",
    "aggregate",
    "default_config",
    "emit_plot_data",
    "emit_records",
    "emit_summary",
    "emit_tables",
    "load_config",
    "load_model",
    "run_campaign",
    "save_model",
]
