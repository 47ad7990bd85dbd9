"""
Process-level settings for leaf.

Run-level knobs (dataset, models, explainers, K values...) live in
`leaf.harness.config.RunConfig`; this module only carries what belongs to the
process: logging, default parallelism and where reports go.
"""

import logging
from enum import StrEnum
from pathlib import Path

from dotenv import find_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LogLevel(StrEnum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"

    def to_logging_level(self) -> int:
        """Convert to Python logging level constant."""
        mapping = {
            LogLevel.DEBUG: logging.DEBUG,
            LogLevel.INFO: logging.INFO,
            LogLevel.WARNING: logging.WARNING,
            LogLevel.ERROR: logging.ERROR,
            LogLevel.CRITICAL: logging.CRITICAL,
        }
        return mapping[self]


class LeafSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=find_dotenv(),
        env_file_encoding="utf-8",
        env_prefix="LEAF_",
        env_ignore_empty=True,
        extra="ignore",
        validate_default=False,
    )

    MODE: str | None = None
    LOG_LEVEL: LogLevel = LogLevel.WARNING

    # None means "one worker per cpu"
    WORKERS: int | None = Field(default=None, ge=1)
    REPORT_DIR: Path = Path("reports")

    # Rows per black-box call when evaluating coalitions or neighborhoods
    PREDICT_CHUNK_ROWS: int = Field(default=65536, ge=1)

    def is_dev(self) -> bool:
        return self.MODE == "dev"


settings = LeafSettings()
