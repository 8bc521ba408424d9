"""Experiment configuration and its YAML loader.

実験設定とYAML読み込み処理を定義するモジュール.

Every section maps onto a frozen dataclass. Unknown keys are rejected with their dotted path so
that a typo never silently falls back to a default.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, fields, replace
from utils.compat import StrEnum, get_level_names_mapping
from pathlib import Path
from typing import Any, TypeVar

import yaml

from metrics.forecast import Normalizer
from net.topology import Topology
from optim.lm import LmConfig
from prune.config import BootstrapConfig, Stage1Config
from series.dataset import Series, SplitSpec
from series.io import load_csv
from series.synth import DEFAULT_NOISE_SD, SynthKind, synth_series
from utils.errors import ConfigError, PmlpError

DEFAULT_LENGTH = 3607
DEFAULT_SITES = 5

_T = TypeVar("_T")


class SourceKind(StrEnum):
    """Where a series comes from.

    時系列の取得元.
    """

    CSV = "csv"
    SYNTHETIC = "synthetic"


class OutputFormat(StrEnum):
    """Output file format of the tables.

    表の出力形式.
    """

    TEXT = "text"
    CSV = "csv"
    JSON = "json"

    @property
    def suffix(self) -> str:  # noqa: D102
        return {OutputFormat.TEXT: ".txt", OutputFormat.CSV: ".csv", OutputFormat.JSON: ".json"}[self]


@dataclass(frozen=True)
class SeriesSource:
    """One input series: a CSV column or a seeded synthetic generator.

    入力時系列1本分の設定. CSVの列またはシード付き合成データ.
    """

    name: str
    source: SourceKind = SourceKind.SYNTHETIC
    path: Path | None = None
    column: str | int = 1
    has_header: bool | None = None
    kind: SynthKind = SynthKind.TEMPERATURE
    length: int = DEFAULT_LENGTH
    noise_sd: float | None = None
    seed: int = 0
    standardize: bool = False

    def __post_init__(self) -> None:
        """Validate the source."""
        object.__setattr__(self, "source", SourceKind(self.source))
        object.__setattr__(self, "kind", SynthKind(self.kind))
        if not self.name:
            raise ConfigError("series name must not be empty")
        if self.source == SourceKind.CSV and self.path is None:
            raise ConfigError(f"series {self.name!r}: csv source needs a path")
        if self.length < 1:
            raise ConfigError(f"series {self.name!r}: length must be >= 1, got {self.length}")

    def load(self) -> Series:
        """Load or generate the raw series.

        時系列を読み込む, または生成する.

        Returns:
            Series: Raw series / 元の時系列
        """
        if self.source == SourceKind.CSV:
            return load_csv(Path(str(self.path)), self.column, name=self.name, has_header=self.has_header)
        noise_sd = DEFAULT_NOISE_SD[self.kind] if self.noise_sd is None else self.noise_sd
        return synth_series(self.kind, self.length, noise_sd, self.seed, name=self.name)


@dataclass(frozen=True)
class LogConfig:
    """Campaign log settings.

    キャンペーンのログ設定.
    """

    console_output: bool = True
    file_output: bool = False
    output_dir: Path = Path("./log")
    level: str = "INFO"

    def __post_init__(self) -> None:
        """Validate the level name."""
        level = str(self.level).upper()
        if level not in get_level_names_mapping():
            raise ConfigError(f"unknown log level {self.level!r}")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "output_dir", Path(self.output_dir))


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of a comparison campaign.

    比較キャンペーンの全設定.
    """

    series: tuple[SeriesSource, ...]
    topology: Topology = field(default_factory=lambda: Topology(n_inputs=7, n_hidden=2))
    split: SplitSpec = field(default_factory=SplitSpec)
    n_runs: int = 7
    lm: LmConfig = field(default_factory=LmConfig)
    stage1: Stage1Config = field(default_factory=Stage1Config)
    bootstrap: BootstrapConfig = field(default_factory=BootstrapConfig)
    warm_start: bool = False
    master_seed: int = 0
    output_dir: Path = Path("./results")
    output_format: OutputFormat = OutputFormat.TEXT
    normalizer: Normalizer = Normalizer.MEAN
    workers: int = 1
    log: LogConfig = field(default_factory=LogConfig)

    def __post_init__(self) -> None:
        """Validate campaign-level settings."""
        object.__setattr__(self, "output_format", OutputFormat(self.output_format))
        object.__setattr__(self, "normalizer", Normalizer(self.normalizer))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not self.series:
            raise ConfigError("at least one series is required")
        names = [source.name for source in self.series]
        if len(set(names)) != len(names):
            raise ConfigError("series names must be unique")
        if self.n_runs < 1:
            raise ConfigError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def with_overrides(self, *, seed: int | None = None, output_dir: Path | None = None) -> ExperimentConfig:
        """Apply command-line overrides.

        コマンドライン引数による上書きを適用する.

        Args:
            seed (int | None): Replacement master seed / 上書きするマスターシード
            output_dir (Path | None): Replacement output directory / 上書きする出力先

        Returns:
            ExperimentConfig: Updated configuration / 更新後の設定
        """
        config = self
        if seed is not None:
            config = replace(config, master_seed=seed)
        if output_dir is not None:
            config = replace(config, output_dir=output_dir)
        return config


def default_series() -> tuple[SeriesSource, ...]:
    """Five synthetic variables at five sites each.

    5変数×5地点の合成時系列.

    Returns:
        tuple[SeriesSource, ...]: Twenty-five sources named ``kind@siteN`` / ``kind@siteN`` 形式の25系列
    """
    return tuple(
        SeriesSource(name=f"{kind}@site{site}", kind=kind, seed=100 * index + site)
        for index, kind in enumerate(SynthKind)
        for site in range(1, DEFAULT_SITES + 1)
    )


def default_config() -> ExperimentConfig:
    """Default 5x5 synthetic campaign with a 7-2-1 network.

    Returns:
        ExperimentConfig: Default campaign / 既定のキャンペーン設定
    """
    return ExperimentConfig(series=default_series())


def _section(data: object, path: str, allowed: set[str]) -> dict[str, Any]:
    if data is None:
        return {}
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path or '<root>'}: expected a mapping, got {type(data).__name__}")
    section: dict[str, Any] = {str(key): value for key, value in data.items()}  # pyright: ignore[reportUnknownVariableType, reportUnknownArgumentType]
    for key in sorted(section):
        if key not in allowed:
            raise ConfigError(f"unknown key {path + '.' if path else ''}{key}")
    return section


def _names(cls: type) -> set[str]:
    return {f.name for f in fields(cls)}


def _build(cls: type[_T], path: str, values: dict[str, Any]) -> _T:
    try:
        return cls(**values)
    except (PmlpError, TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def _lm(data: object, path: str, base: LmConfig) -> LmConfig:
    values = _section(data, path, _names(LmConfig))
    try:
        return replace(base, **values)
    except (PmlpError, TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def _series(data: object) -> tuple[SeriesSource, ...]:
    if data is None:
        return default_series()
    if not isinstance(data, list):
        raise ConfigError("series: expected a list")
    sources: list[SeriesSource] = []
    for index, item in enumerate(data):  # pyright: ignore[reportUnknownVariableType, reportUnknownArgumentType]
        path = f"series[{index}]"
        values = _section(item, path, _names(SeriesSource))
        if "path" in values and values["path"] is not None:
            values["path"] = Path(str(values["path"]))
        sources.append(_build(SeriesSource, path, values))
    return tuple(sources)


def parse_config(data: object) -> ExperimentConfig:
    """Build a configuration from parsed YAML.

    YAMLの解析結果から設定を構築する.

    Args:
        data (object): Parsed document / 解析済みの文書

    Returns:
        ExperimentConfig: Validated configuration / 検証済みの設定

    Raises:
        ConfigError: On unknown keys or invalid values / 未知のキーや不正な値がある場合
    """
    root = _section(data, "", {"series", "topology", "split", "lm", "stage1", "bootstrap", "prune", "campaign", "log"})
    topology = _build(Topology, "topology", _section(root.get("topology"), "topology", _names(Topology)))
    split_spec = _build(SplitSpec, "split", _section(root.get("split"), "split", _names(SplitSpec)))
    lm = _lm(root.get("lm"), "lm", LmConfig())

    stage1 = _section(root.get("stage1"), "stage1", _names(Stage1Config) - {"rng_seed"})
    if "lm" in stage1:
        stage1["lm"] = _lm(stage1["lm"], "stage1.lm", Stage1Config().lm)
    bootstrap = _section(root.get("bootstrap"), "bootstrap", _names(BootstrapConfig) - {"rng_seed"})
    prune = _section(root.get("prune"), "prune", {"warm_start"})
    campaign = _section(
        root.get("campaign"),
        "campaign",
        {"n_runs", "master_seed", "output_dir", "format", "normalizer", "workers"},
    )
    if "format" in campaign:
        campaign["output_format"] = campaign.pop("format")
    log = _section(root.get("log"), "log", _names(LogConfig))

    return _build(
        ExperimentConfig,
        "campaign",
        {
            "series": _series(root.get("series")),
            "topology": topology,
            "split": split_spec,
            "lm": lm,
            "stage1": _build(Stage1Config, "stage1", stage1),
            "bootstrap": _build(BootstrapConfig, "bootstrap", bootstrap),
            "warm_start": bool(prune.get("warm_start", False)),
            "log": _build(LogConfig, "log", log),
            **campaign,
        },
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a YAML configuration file.

    YAML設定ファイルを読み込む.

    Args:
        path (str | Path): Configuration file / 設定ファイルのパス

    Returns:
        ExperimentConfig: Validated configuration / 検証済みの設定

    Raises:
        ConfigError: If the file is not valid YAML or holds invalid settings /
            YAMLとして不正、または設定値が不正な場合
    """
    path = Path(path)
    with Path.open(path, encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: {e}") from e
    return parse_config(data)
