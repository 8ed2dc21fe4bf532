from __future__ import annotations

from pathlib import Path

from pydantic import PositiveInt
from pydantic_settings import BaseSettings, SettingsConfigDict

from caipart.adapters.config.schema import Settings

DEFAULT_CONFIG_PATHS = (Path("config.toml"),)


class EnvironmentOverrides(BaseSettings):
    """``CAIPART_CONFIG`` and ``CAIPART_WORKERS`` read from the process environment."""

    config: Path | None = None
    workers: PositiveInt | None = None

    model_config = SettingsConfigDict(env_prefix="CAIPART_", extra="ignore")


def load_settings(path: Path | None = None) -> Settings:
    env = EnvironmentOverrides()
    resolved = path or env.config
    if resolved is not None:
        if resolved.is_file():
            settings = Settings.from_file(resolved)
        elif resolved.exists():
            raise ValueError(f"config path must be a file: {resolved}")
        else:
            settings = Settings()
    else:
        settings = next(
            (Settings.from_file(candidate) for candidate in DEFAULT_CONFIG_PATHS if candidate.is_file()),
            Settings(),
        )
    if env.workers is not None:
        settings.solver.worker_count = env.workers
        settings.bench.worker_count = env.workers
    return settings
