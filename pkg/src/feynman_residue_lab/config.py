"""Configuration handling for the command-line tool."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from env and defaults."""

    cache_path: Path = Field(default=Path("./data/periods.jsonl"), alias="FRL_CACHE")
    data_dir: Path = Field(default=Path("./data"), alias="FRL_DATA_DIR")
    log_level: str = Field(default="INFO", alias="FRL_LOG_LEVEL")
    log_to_file: bool = Field(default=False, alias="FRL_LOG_TO_FILE")

    default_method: str = Field(default="gauss", alias="FRL_DEFAULT_METHOD")
    mc_samples: int = Field(default=10_000_000, alias="FRL_MC_SAMPLES")
    seed: int = Field(default=0, alias="FRL_SEED")
    workers: int = Field(default=1, alias="FRL_WORKERS")

    corpus_path: Optional[Path] = Field(default=None, alias="FRL_CORPUS")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        populate_by_name=True,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def _normalize_log_level(cls, value: str) -> str:
        return value.upper().strip()

    @field_validator("default_method")
    @classmethod
    def _validate_method(cls, value: str) -> str:
        normalized = value.strip().lower()
        if normalized not in {"gauss", "mc"}:
            raise ValueError("FRL_DEFAULT_METHOD must be 'gauss' or 'mc'")
        return normalized

    @field_validator("mc_samples")
    @classmethod
    def _validate_mc_samples(cls, value: int) -> int:
        if value < 1000:
            raise ValueError("FRL_MC_SAMPLES must be >= 1000")
        return value

    @field_validator("seed")
    @classmethod
    def _validate_seed(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("FRL_SEED must fit in an unsigned 64-bit integer")
        return value

    @field_validator("workers")
    @classmethod
    def _validate_workers(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("FRL_WORKERS must be > 0")
        return value

    @property
    def log_dir(self) -> Optional[Path]:
        return self.data_dir if self.log_to_file else None


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    return Settings()
