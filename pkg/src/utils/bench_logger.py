"""Module defining campaign logging functionality.

キャンペーンのログを出力するクラスを定義するモジュール.
"""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import TYPE_CHECKING

from ulid import ULID

from utils.compat import UTC, get_level_names_mapping

if TYPE_CHECKING:
    from bench.campaign import RunRecord
    from bench.config import LogConfig

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class CampaignLogger:
    """A class for handling campaign logging.

    キャンペーンのログを出力するクラス.

    Every instance writes through the one ``campaign`` logger and detaches its own handlers on
    ``close``, so campaigns in one process run one after another.
    """

    def __init__(
        self,
        config: LogConfig,
        campaign_id: str | None = None,
    ) -> None:
        """Initialize the campaign logger.

        キャンペーンのログを初期化する.

        Args:
            config (LogConfig): Logging settings / ログ設定
            campaign_id (str | None): ULID of the campaign, generated when omitted /
                キャンペーンのULID (省略時は生成)
        """
        self.config = config
        self.campaign_id = campaign_id or str(ULID())
        self.log_path: Path | None = None
        self.logger = logging.getLogger("campaign")
        self.handlers: list[logging.Handler] = []
        self.logger.setLevel(get_level_names_mapping()[config.level])
        self.logger.propagate = False
        formatter = logging.Formatter(LOG_FORMAT)
        if config.console_output:
            handler = logging.StreamHandler()
            handler.setFormatter(formatter)
            self._attach(handler)
        if config.file_output:
            ulid = ULID.from_str(self.campaign_id)
            tz = datetime.now(UTC).astimezone().tzinfo
            output_dir = (
                Path(config.output_dir)
                / datetime.fromtimestamp(ulid.timestamp, tz=tz).strftime(
                    "%Y%m%d%H%M%S%f",
                )[:-3]
            )
            output_dir.mkdir(
                parents=True,
                exist_ok=True,
            )
            self.log_path = output_dir / "campaign.log"
            handler = logging.FileHandler(
                self.log_path,
                mode="w",
                encoding="utf-8",
            )
            handler.setFormatter(formatter)
            self._attach(handler)
        self.logger.info("campaign %s started", self.campaign_id)

    def _attach(self, handler: logging.Handler) -> None:
        self.logger.addHandler(handler)
        self.handlers.append(handler)

    def cell(self, record: RunRecord) -> None:
        """Log one finished campaign cell.

        完了したキャンペーンのセルをログ出力する.

        Args:
            record (RunRecord): Finished run / 完了した試行
        """
        self.logger.info(
            "%s run %d %s: nRMSE=%.4f nMAE=%.4f pruning=%.3f termination=%s iterations=%d",
            record.series,
            record.run,
            record.variant,
            record.nrmse,
            record.nmae,
            record.pruning_ratio,
            record.termination,
            record.iterations,
        )

    def close(self) -> None:
        """Detach and close the handlers this instance attached.

        このインスタンスが追加したハンドラを切り離して閉じる.
        """
        for handler in self.handlers:
            self.logger.removeHandler(handler)
            handler.close()
        self.handlers.clear()
