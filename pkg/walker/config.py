"""Runtime settings.

Settings come from environment variables (optionally seeded from a local
``.env``) and are cached for the lifetime of the process.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Optional

import mpmath
from pydantic import BaseModel, Field, field_validator

ENV_PREFIX = "WALKER_"


class Settings(BaseModel):
    """Process-wide numeric and logging settings"""
    precision: int = Field(50, ge=10, le=2000, description="Decimal digits for constants and closed forms")
    quad_dps: int = Field(25, ge=15, le=200, description="Working digits of the quadrature oracle")
    seed: int = Field(20240101, ge=0, description="Default Monte Carlo seed")
    workers: int = Field(1, ge=1, le=256, description="Threads used for sampling and grids")
    log_level: str = Field("WARNING", description="Logging level name")

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {value}")
        return value

    @classmethod
    def from_env(cls) -> "Settings":
        values = {}
        for name in cls.model_fields:
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is not None and raw.strip():
                values[name] = raw.strip()
        return cls(**values)


def load_dotenv_into_environ(env_path: Path = Path(".env")) -> None:
    """Copy KEY=VALUE lines from ``env_path`` into os.environ.

    Blank lines and comments are skipped, quotes are stripped and variables
    already present in the environment win.
    """
    try:
        if not env_path.exists():
            return
        for raw in env_path.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            key = key.strip()
            value = value.strip().strip('"\'')
            if key and key not in os.environ:
                os.environ[key] = value
    except OSError:
        return


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


@contextmanager
def precision_context(digits: Optional[int] = None) -> Iterator[int]:
    """Run the block at ``digits`` (default: configured precision) decimal digits."""
    dps = digits if digits is not None else get_settings().precision
    with mpmath.workdps(dps):
        yield dps
