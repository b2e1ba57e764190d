# app/config.py

from __future__ import annotations

import logging
import sys
from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


class Settings(BaseSettings):
  """
  Operational defaults. Everything functional comes in through CLI flags;
  these only tune logging and the benchmark harness.
  """

  model_config = SettingsConfigDict(env_prefix="INCDBSCAN_", env_file=".env", extra="ignore")

  log_level: str = "WARNING"
  bench_repeats: int = Field(default=5, ge=1)
  agreement_floor: float = Field(default=0.95, ge=0.0, le=1.0)
  noise_fraction: float = Field(default=0.10, ge=0.0, le=1.0)
  progress: bool = True


@lru_cache
def get_settings() -> Settings:
  return Settings()


def configure_logging(level: Optional[str] = None) -> None:
  """Route every incdbscan.* logger to stderr. Safe to call more than once."""
  root = logging.getLogger("incdbscan")
  resolved = (level or get_settings().log_level).upper()
  root.setLevel(resolved)
  handler = next((h for h in root.handlers if getattr(h, "_incdbscan", False)), None)
  if handler is None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._incdbscan = True  # type: ignore[attr-defined]
    root.addHandler(handler)
  else:
    # sys.stderr may have been swapped since the first call
    handler.setStream(sys.stderr)
