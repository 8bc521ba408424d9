"""Command-line entry point for training, pruning, comparing and scoring forecasters.

予測モデルの学習、剪定、比較、評価を行うコマンドラインのエントリポイント.

Usage::

    python src/main.py synth --kind temperature --length 3607 --seed 1 --out t.csv
    python src/main.py compare --csv t.csv --column value --out results
    python src/main.py compare -c config/config.yml --seed 7
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING

from bench.campaign import cell_seeds, run_campaign
from bench.config import ExperimentConfig, LogConfig, SeriesSource, SourceKind, default_config, load_config
from bench.model_io import load_model, save_model
from bench.report import emit_plot_data, emit_records, emit_summary, emit_tables
from metrics.forecast import summarize
from net.network import predict
from net.topology import Topology
from prune.pipeline import classical_train, two_stage_train
from series.dataset import Dataset, embed_lags
from series.io import load_csv, write_csv
from series.synth import DEFAULT_NOISE_SD, SynthKind, synth_series
from utils.bench_logger import LOG_FORMAT, CampaignLogger
from utils.compat import get_level_names_mapping
from utils.errors import ConfigError, InputShapeError, InsufficientDataError, PmlpError

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from net.network import Network
    from optim.lm import TrainOutcome

logger = logging.getLogger(__name__)
console_handler = logging.StreamHandler()
formatter = logging.Formatter(LOG_FORMAT)
console_handler.setFormatter(formatter)
if not logger.handlers:
    logger.addHandler(console_handler)

_PACKAGES = ("bench", "metrics", "net", "optim", "prune", "series")
DEFAULT_MODEL_PATH = Path("model.yml")
DEFAULT_COLUMN = "value"


def _apply_log_level_from_config(config: LogConfig) -> None:
    """Apply log level from config to the entry point and library loggers.

    Args:
        config (LogConfig): Logging settings / ログ設定
    """
    level = get_level_names_mapping().get(config.level, logging.INFO)
    logger.setLevel(level)
    for name in _PACKAGES:
        package_logger = logging.getLogger(name)
        package_logger.setLevel(level)
        if config.console_output and not package_logger.handlers:
            package_logger.addHandler(console_handler)


def _column(text: str) -> str | int:
    return int(text) if text.isdigit() else text


def _out(line: str) -> None:
    sys.stdout.write(line + "\n")


def _training_set(args: argparse.Namespace, config: ExperimentConfig) -> tuple[Topology, Dataset]:
    topology = Topology(
        n_inputs=config.topology.n_inputs if args.lags is None else args.lags,
        n_hidden=config.topology.n_hidden if args.hidden is None else args.hidden,
    )
    n_train = config.split.n_train if args.n_train is None else args.n_train
    if n_train < 1:
        raise ConfigError(f"--n-train must be >= 1, got {n_train}")
    series = load_csv(args.csv, _column(args.column))
    dataset = embed_lags(series, topology.n_inputs)
    if len(dataset) > n_train:
        dataset = dataset.window(0, n_train)
    return topology, dataset


def _report_fit(net: Network, outcome: TrainOutcome, path: Path) -> None:
    _out(
        f"saved {net.topology} model to {path}: mse={outcome.final_mse:.6g} "
        f"iterations={outcome.iterations} termination={outcome.termination} active={net.n_active}",
    )


def _cmd_train(args: argparse.Namespace, config: ExperimentConfig) -> int:
    topology, dataset = _training_set(args, config)
    seeds = cell_seeds(config.master_seed, 0, 0)
    net, outcome = classical_train(topology, dataset, config.lm, seeds.classical)
    path = save_model(net, args.out or DEFAULT_MODEL_PATH)
    _report_fit(net, outcome, path)
    return 0


def _cmd_prune_train(args: argparse.Namespace, config: ExperimentConfig) -> int:
    topology, dataset = _training_set(args, config)
    seeds = cell_seeds(config.master_seed, 0, 0)
    fit = two_stage_train(
        topology,
        dataset,
        replace(config.stage1, rng_seed=seeds.stage1),
        replace(config.bootstrap, rng_seed=seeds.bootstrap),
        config.lm,
        seeds.stage2,
        warm_start=config.warm_start,
    )
    path = save_model(fit.network, args.out or DEFAULT_MODEL_PATH)
    significance = path.parent / "significance.json"
    with significance.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(fit.report.to_dict(), f, indent=2)
        f.write("\n")
    _report_fit(fit.network, fit.outcome, path)
    _out(f"pruning ratio {fit.report.pruning_ratio:.3f}; significance written to {significance}")
    return 0


def _cmd_compare(args: argparse.Namespace, config: ExperimentConfig) -> int:
    if args.csv is not None:
        source = SeriesSource(
            name=Path(args.csv).stem,
            source=SourceKind.CSV,
            path=Path(args.csv),
            column=_column(args.column),
        )
        config = replace(config, series=(source,))
    campaign_logger = CampaignLogger(config.log)
    try:
        records, report = run_campaign(config, campaign_logger)
    finally:
        campaign_logger.close()
    out_dir = config.output_dir
    written = [
        *emit_tables(report, config.output_format, out_dir),
        *emit_plot_data(report, out_dir, config.output_format),
        emit_records(records, out_dir, config.output_format),
        emit_summary(report, out_dir),
    ]
    _out(f"wrote {len(written)} files to {out_dir}")
    return 0


def _cmd_synth(args: argparse.Namespace, config: ExperimentConfig) -> int:
    kind = SynthKind(args.kind)
    noise_sd = DEFAULT_NOISE_SD[kind] if args.noise_sd is None else args.noise_sd
    series = synth_series(kind, args.length, noise_sd, config.master_seed, name=str(kind))
    path = write_csv(series, args.out, column=DEFAULT_COLUMN)
    _out(f"wrote {len(series)} {kind} values to {path}")
    return 0


def _cmd_eval(args: argparse.Namespace, config: ExperimentConfig) -> int:
    net = load_model(args.model)
    series = load_csv(args.csv, _column(args.column))
    lags = net.topology.n_inputs if args.lags is None else args.lags
    if lags != net.topology.n_inputs:
        raise InputShapeError(f"--lags {lags} does not match the {net.topology.n_inputs} inputs of {args.model}")
    dataset = embed_lags(series, lags)
    if args.n_test is not None:
        if args.n_test < 1:
            raise ConfigError(f"--n-test must be >= 1, got {args.n_test}")
        if args.n_test > len(dataset):
            raise InsufficientDataError(f"{series.name}: {len(dataset)} samples, {args.n_test} requested")
        dataset = dataset.window(len(dataset) - args.n_test, len(dataset))
    summary = summarize(predict(net, dataset.inputs), dataset.targets, normalizer=config.normalizer)
    _out(f"nRMSE={summary.nrmse:.6f} nMAE={summary.nmae:.6f} n={summary.n}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with its five subcommands.

    5つのサブコマンドを持つ引数パーサを構築する.

    Returns:
        argparse.ArgumentParser: Parser / 引数パーサ
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=Path, default=None, help="設定ファイルのパス")
    common.add_argument("--seed", type=int, default=None, help="マスターシード (設定を上書き)")
    common.add_argument("--out", type=Path, default=None, help="出力先 (設定を上書き)")

    parser = argparse.ArgumentParser(prog="pmlp", description="2段階LMによる剪定MLPの時系列予測")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str,
        handler: Callable[[argparse.Namespace, ExperimentConfig], int],
        text: str,
    ) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.set_defaults(handler=handler)
        return sub

    for name, handler, text in (
        ("train", _cmd_train, "通常のLMで学習する"),
        ("prune-train", _cmd_prune_train, "2段階LMで剪定MLPを学習する"),
    ):
        sub = add(name, handler, text)
        sub.add_argument("--csv", required=True, help="入力CSVファイル")
        sub.add_argument("--column", default=DEFAULT_COLUMN, help="列名または0始まりの列番号")
        sub.add_argument("--lags", type=int, default=None, help="ラグ次数 (入力数)")
        sub.add_argument("--hidden", type=int, default=None, help="隠れ層ノード数")
        sub.add_argument("--n-train", type=int, default=None, help="学習に使うサンプル数")

    compare = add("compare", _cmd_compare, "MLPとpMLPを比較するキャンペーンを実行する")
    compare.add_argument("--csv", default=None, help="設定の系列の代わりに使うCSVファイル")
    compare.add_argument("--column", default=DEFAULT_COLUMN, help="列名または0始まりの列番号")

    synth = add("synth", _cmd_synth, "合成時系列のCSVを書き出す")
    synth.add_argument("--kind", required=True, choices=[str(kind) for kind in SynthKind])
    synth.add_argument("--length", type=int, default=3607)
    synth.add_argument("--noise-sd", type=float, default=None)

    evaluate = add("eval", _cmd_eval, "保存済みモデルをCSVで評価する")
    evaluate.add_argument("--model", required=True, type=Path, help="モデルファイル")
    evaluate.add_argument("--csv", required=True, help="入力CSVファイル")
    evaluate.add_argument("--column", default=DEFAULT_COLUMN, help="列名または0始まりの列番号")
    evaluate.add_argument("--lags", type=int, default=None, help="ラグ次数 (既定はモデルの入力数)")
    evaluate.add_argument("--n-test", type=int, default=None, help="末尾から評価するサンプル数")
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code.

    コマンドラインを実行し, 終了コードを返す.

    Args:
        argv (Sequence[str] | None): Arguments without the program name / プログラム名を除く引数

    Returns:
        int: 0 on success, 1 on a library or I/O error, 2 on a usage error /
            成功時0、処理エラー時1、使い方の誤り時2
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        config = load_config(args.config) if args.config is not None else default_config()
        out = args.out if args.command == "compare" else None
        config = config.with_overrides(seed=args.seed, output_dir=out)
        _apply_log_level_from_config(config.log)
        return args.handler(args, config)
    except (PmlpError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(cli_main())
