"""Module for running MLP versus pMLP comparison campaigns.

MLPとpMLPの比較キャンペーンを実行するためのモジュール.

A campaign trains both variants ``n_runs`` times on every series. Each (series, run, variant)
cell is independent: it derives its seeds from ``(master_seed, series, run)`` and the results
are collected in task order, so the worker count never changes any number.
"""

from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, replace
from utils.compat import StrEnum
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from metrics.distribution import BoxStats, box_stats, nrmse_ratio
from metrics.forecast import summarize
from net.network import predict
from net.topology import FloatArray, parameter_names
from optim.lm import Termination
from prune.pipeline import classical_train, two_stage_train
from series.dataset import Dataset, Series, Standardizer, embed_lags, split
from utils.errors import EmptyDataError, PmlpError, SeriesLoadError
from utils.seeding import derive_seed

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from bench.config import ExperimentConfig, SeriesSource
    from utils.bench_logger import CampaignLogger

logger = logging.getLogger(__name__)

DISPLAY_DECIMALS = 3


class Variant(StrEnum):
    """Model variant of a campaign cell.

    キャンペーンのセルのモデル種別.
    """

    MLP = "MLP"
    PMLP = "pMLP"


class CellSeeds(NamedTuple):
    """Independent seed streams of one (series, run) pair.

    (系列, 試行) ごとの独立したシード.
    """

    classical: int
    stage1: int
    bootstrap: int
    stage2: int


def cell_seeds(master_seed: int, series_index: int, run: int) -> CellSeeds:
    """Derive the seeds of one (series, run) pair.

    Args:
        master_seed (int): Campaign seed / キャンペーンのシード
        series_index (int): Position of the series in the config / 設定内の系列番号
        run (int): Run index / 試行番号

    Returns:
        CellSeeds: One seed per random stream / 乱数系列ごとのシード
    """
    return CellSeeds(*(derive_seed(master_seed, series_index, run, stream) for stream in range(4)))


def series_labels(name: str) -> tuple[str, str]:
    """Split a ``data@site`` series name into its two table labels.

    系列名 ``data@site`` を表の2列に分割する.

    Args:
        name (str): Series name / 系列名

    Returns:
        tuple[str, str]: ``(data, site)``; site is ``-`` when absent / データ名と地点名
    """
    data, _, site = name.partition("@")
    return data, site or "-"


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one (series, run, variant) cell.

    1つのセル (系列, 試行, 種別) の結果.
    """

    series: str
    run: int
    variant: Variant
    nrmse: float
    nmae: float
    pruning_ratio: float
    seed: int
    iterations: int
    termination: Termination
    train_mse: float

    def to_dict(self) -> dict[str, object]:  # noqa: D102
        return {
            "series": self.series,
            "run": self.run,
            "variant": str(self.variant),
            "nrmse": self.nrmse,
            "nmae": self.nmae,
            "pruning_ratio": self.pruning_ratio,
            "seed": self.seed,
            "iterations": self.iterations,
            "termination": str(self.termination),
            "train_mse": self.train_mse,
        }


def _marks(mlp: float, pmlp: float) -> tuple[bool, bool]:
    shown_mlp = round(mlp, DISPLAY_DECIMALS)
    shown_pmlp = round(pmlp, DISPLAY_DECIMALS)
    return shown_mlp <= shown_pmlp, shown_pmlp <= shown_mlp


@dataclass(frozen=True)
class TableRow:
    """One line of the minima or means table, with better-cell marks.

    最小値表または平均値表の1行. 優れたセルの印を持つ.

    A cell is marked when its value is strictly lower at display precision; equal display
    values mark both cells.
    """

    data: str
    site: str
    mlp_nrmse: float
    mlp_nmae: float
    pruning_ratio: float
    pmlp_nrmse: float
    pmlp_nmae: float

    @property
    def nrmse_marks(self) -> tuple[bool, bool]:
        """Better flags for nRMSE as ``(mlp, pmlp)``.

        Returns:
            tuple[bool, bool]: MLP flag and pMLP flag / MLPとpMLPの印
        """
        return _marks(self.mlp_nrmse, self.pmlp_nrmse)

    @property
    def nmae_marks(self) -> tuple[bool, bool]:
        """Better flags for nMAE as ``(mlp, pmlp)``.

        Returns:
            tuple[bool, bool]: MLP flag and pMLP flag / MLPとpMLPの印
        """
        return _marks(self.mlp_nmae, self.pmlp_nmae)


class RatioPoint(NamedTuple):
    """MLP/pMLP nRMSE ratio of one (series, run) pair."""

    series: str
    run: int
    ratio: float


@dataclass(frozen=True)
class Trace:
    """Prediction-versus-measurement profile over the test window.

    評価区間の予測値と実測値.
    """

    series: str
    observed: FloatArray
    mlp: FloatArray
    pmlp: FloatArray
    mlp_run: int
    pmlp_run: int


@dataclass(frozen=True)
class WeightExport:
    """First-stage sample matrix of one series, labelled by parameter."""

    series: str
    names: tuple[str, ...]
    samples: FloatArray


@dataclass(frozen=True)
class AggregateReport:
    """Campaign results shaped for tables and plots.

    表と図のために集計したキャンペーン結果.
    """

    minima: tuple[TableRow, ...]
    means: tuple[TableRow, ...]
    box: tuple[tuple[Variant, BoxStats], ...] = ()
    ratios: tuple[RatioPoint, ...] = ()
    traces: tuple[Trace, ...] = ()
    weights: tuple[WeightExport, ...] = ()
    normal_fractions: tuple[tuple[str, float | None], ...] = ()
    win_rate: float | None = None
    grand_mean_pruning_ratio: float | None = None
    grand_mean_nrmse_ratio: float | None = None


def _variant_records(records: Sequence[RunRecord], name: str, variant: Variant) -> list[RunRecord]:
    selected = sorted((r for r in records if r.series == name and r.variant == variant), key=lambda r: r.run)
    if not selected:
        raise EmptyDataError(f"{name}: no {variant} records")
    return selected


def aggregate(records: Sequence[RunRecord]) -> AggregateReport:
    """Aggregate run records into minima and means tables plus plot statistics.

    試行結果を最小値表・平均値表と図用の統計量に集計する.

    Series keep the order of their first record. Ratios pair runs with the same index.

    Args:
        records (Sequence[RunRecord]): Records holding both variants for every series /
            全系列について両種別を含む試行結果

    Returns:
        AggregateReport: Tables, box statistics, ratios, win rate and grand means /
            表、箱ひげ統計、比、勝率、全体平均

    Raises:
        EmptyDataError: If there are no records or a series lacks a variant /
            結果が空、または系列に種別が欠けている場合
    """
    if not records:
        raise EmptyDataError("no run records to aggregate")
    minima: list[TableRow] = []
    means: list[TableRow] = []
    ratios: list[RatioPoint] = []
    for name in dict.fromkeys(r.series for r in records):
        mlp = _variant_records(records, name, Variant.MLP)
        pmlp = _variant_records(records, name, Variant.PMLP)
        data, site = series_labels(name)
        pruning_ratio = float(np.mean([r.pruning_ratio for r in pmlp]))
        for rows, stat in ((minima, np.min), (means, np.mean)):
            rows.append(
                TableRow(
                    data=data,
                    site=site,
                    mlp_nrmse=float(stat([r.nrmse for r in mlp])),
                    mlp_nmae=float(stat([r.nmae for r in mlp])),
                    pruning_ratio=pruning_ratio,
                    pmlp_nrmse=float(stat([r.nrmse for r in pmlp])),
                    pmlp_nmae=float(stat([r.nmae for r in pmlp])),
                ),
            )
        pmlp_by_run = {r.run: r for r in pmlp}
        paired = [(r, pmlp_by_run[r.run]) for r in mlp if r.run in pmlp_by_run]
        values = nrmse_ratio([a.nrmse for a, _ in paired], [b.nrmse for _, b in paired])
        ratios.extend(RatioPoint(name, a.run, float(v)) for (a, _), v in zip(paired, values, strict=True))

    box = tuple(
        (variant, box_stats([r.nrmse for r in records if r.variant == variant])) for variant in Variant
    )
    wins = [row.nrmse_marks == (False, True) for row in minima]
    return AggregateReport(
        minima=tuple(minima),
        means=tuple(means),
        box=box,
        ratios=tuple(ratios),
        win_rate=float(np.mean(wins)),
        grand_mean_pruning_ratio=float(np.mean([row.pruning_ratio for row in minima])),
        grand_mean_nrmse_ratio=float(np.mean([p.ratio for p in ratios])) if ratios else None,
    )


@dataclass(frozen=True)
class PreparedSeries:
    """Train and test splits of one series, ready for both variants.

    両種別で共有する, 1系列の学習/評価データ.
    """

    index: int
    name: str
    train: Dataset
    test: Dataset
    observed: FloatArray
    scaler: Standardizer | None = None


def prepare_series(index: int, source: SeriesSource, config: ExperimentConfig) -> PreparedSeries:
    """Load, embed and split one series.

    1系列を読み込み, ラグ埋め込みと分割を行う.

    Args:
        index (int): Series position / 系列番号
        source (SeriesSource): Series source / 系列の取得元
        config (ExperimentConfig): Campaign settings / キャンペーン設定

    Returns:
        PreparedSeries: Shared splits and the raw-scale test targets / 共有する分割と元スケールの評価目標値
    """
    p = config.topology.n_inputs
    raw = source.load()
    model_series = raw
    scaler = None
    if source.standardize:
        scaler = Standardizer.fit(Series(raw.values[: config.split.n_train + p], name=raw.name))
        model_series = scaler.apply(raw)
    train, test = split(embed_lags(model_series, p), config.split)
    _, raw_test = split(embed_lags(raw, p), config.split)
    return PreparedSeries(
        index=index,
        name=source.name,
        train=train,
        test=test,
        observed=raw_test.targets,
        scaler=scaler,
    )


def validate_series(config: ExperimentConfig) -> list[PreparedSeries]:
    """Prepare every series before any training starts.

    学習開始前に全系列を準備し検証する.

    Args:
        config (ExperimentConfig): Campaign settings / キャンペーン設定

    Returns:
        list[PreparedSeries]: One entry per configured series / 設定された系列ごとの準備結果

    Raises:
        SeriesLoadError: If any series cannot be loaded, embedded or split / 読み込みや分割に失敗した場合
    """
    prepared: list[PreparedSeries] = []
    for index, source in enumerate(config.series):
        try:
            prepared.append(prepare_series(index, source, config))
        except (PmlpError, OSError) as e:
            raise SeriesLoadError(f"series {source.name!r}: {e}") from e
    return prepared


@dataclass(frozen=True)
class CellTask:
    """Work item for one campaign cell."""

    series: PreparedSeries
    run: int
    variant: Variant
    config: ExperimentConfig


@dataclass(frozen=True)
class CellResult:
    """Record plus plot data of one campaign cell."""

    record: RunRecord
    predictions: FloatArray
    samples: FloatArray | None = None
    normal_fraction: float | None = None


def run_cell(task: CellTask) -> CellResult:
    """Train and score one variant on one (series, run) pair.

    1つの (系列, 試行) に対して1種別を学習し評価する.

    Args:
        task (CellTask): Cell description / セルの内容

    Returns:
        CellResult: Run record and raw-scale test predictions / 試行結果と元スケールの予測値
    """
    config = task.config
    prepared = task.series
    seeds = cell_seeds(config.master_seed, prepared.index, task.run)
    samples = None
    normal_fraction = None
    if task.variant == Variant.MLP:
        net, outcome = classical_train(config.topology, prepared.train, config.lm, seeds.classical)
        seed = seeds.classical
        pruning_ratio = 0.0
    else:
        fit = two_stage_train(
            config.topology,
            prepared.train,
            replace(config.stage1, rng_seed=seeds.stage1),
            replace(config.bootstrap, rng_seed=seeds.bootstrap),
            config.lm,
            seeds.stage2,
            warm_start=config.warm_start,
        )
        net, outcome = fit.network, fit.outcome
        seed = seeds.stage2
        pruning_ratio = fit.report.pruning_ratio
        normal_fraction = fit.report.normal_fraction
        if task.run == 0:
            samples = fit.samples.samples

    predictions = predict(net, prepared.test.inputs)
    if prepared.scaler is not None:
        predictions = prepared.scaler.invert(predictions)
    summary = summarize(predictions, prepared.observed, normalizer=config.normalizer)
    record = RunRecord(
        series=prepared.name,
        run=task.run,
        variant=task.variant,
        nrmse=summary.nrmse,
        nmae=summary.nmae,
        pruning_ratio=pruning_ratio,
        seed=seed,
        iterations=outcome.iterations,
        termination=outcome.termination,
        train_mse=outcome.final_mse,
    )
    return CellResult(record=record, predictions=predictions, samples=samples, normal_fraction=normal_fraction)


def _execute(tasks: list[CellTask], workers: int) -> Iterator[CellResult]:
    if workers <= 1:
        yield from map(run_cell, tasks)
        return
    with multiprocessing.get_context("spawn").Pool(processes=workers) as pool:
        yield from pool.imap(run_cell, tasks)


def _best(results: list[CellResult]) -> CellResult:
    return min(results, key=lambda result: (result.record.nrmse, result.record.run))


def _plot_data(
    report: AggregateReport,
    config: ExperimentConfig,
    prepared: list[PreparedSeries],
    results: list[CellResult],
) -> AggregateReport:
    names = tuple(parameter_names(config.topology))
    traces: list[Trace] = []
    weights: list[WeightExport] = []
    normal_fractions: list[tuple[str, float | None]] = []
    for series in prepared:
        cells = [result for result in results if result.record.series == series.name]
        mlp = _best([c for c in cells if c.record.variant == Variant.MLP])
        pmlp_cells = [c for c in cells if c.record.variant == Variant.PMLP]
        pmlp = _best(pmlp_cells)
        traces.append(
            Trace(
                series=series.name,
                observed=series.observed,
                mlp=mlp.predictions,
                pmlp=pmlp.predictions,
                mlp_run=mlp.record.run,
                pmlp_run=pmlp.record.run,
            ),
        )
        first = next(c for c in pmlp_cells if c.record.run == 0)
        if first.samples is not None:
            weights.append(WeightExport(series=series.name, names=names, samples=first.samples))
        normal_fractions.append((series.name, first.normal_fraction))
    return replace(report, traces=tuple(traces), weights=tuple(weights), normal_fractions=tuple(normal_fractions))


def run_campaign(
    config: ExperimentConfig,
    campaign_logger: CampaignLogger | None = None,
) -> tuple[list[RunRecord], AggregateReport]:
    """Run the full comparison campaign.

    比較キャンペーン全体を実行する.

    Every series is validated before any training. Then, for every series and run, the
    classical MLP and the pMLP are trained on the same train split and scored on the same test
    split, on the raw scale.

    Args:
        config (ExperimentConfig): Campaign settings / キャンペーン設定
        campaign_logger (CampaignLogger | None): Progress logger / 進捗ログ

    Returns:
        tuple[list[RunRecord], AggregateReport]: Records in (series, run, variant) order and the
            aggregated report / 試行結果と集計結果

    Raises:
        SeriesLoadError: If any series fails validation / 系列の検証に失敗した場合
    """
    prepared = validate_series(config)
    logger.info(
        "Campaign: %d series x %d runs x %d variants on %s with %d worker(s)",
        len(prepared),
        config.n_runs,
        len(Variant),
        config.topology,
        config.workers,
    )
    tasks = [
        CellTask(series=series, run=run, variant=variant, config=config)
        for series in prepared
        for run in range(config.n_runs)
        for variant in Variant
    ]
    results: list[CellResult] = []
    for result in _execute(tasks, config.workers):
        results.append(result)
        if campaign_logger is not None:
            campaign_logger.cell(result.record)
    records = [result.record for result in results]
    report = _plot_data(aggregate(records), config, prepared, results)
    logger.info(
        "Campaign finished: grand mean pruning ratio %.3f, pMLP win rate %.2f",
        report.grand_mean_pruning_ratio,
        report.win_rate,
    )
    return records, report
