from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator


def _load_file_data(path: Path) -> dict[str, Any]:
    suffix = path.suffix.lower()
    if suffix == ".toml":
        with path.open("rb") as fp:
            data = tomllib.load(fp)
        return data
    raise ValueError(f"unsupported config file type: {path.suffix or '<none>'}")


class RuntimeConfig(BaseModel):
    """Top-level runtime settings. TOML section: ``[runtime]``

    - ``log_level``: root log level (default: ``"INFO"``).
    - ``environment``: label used in log context (default: ``"development"``).
    """

    log_level: str = "INFO"
    environment: str = "development"


class SolverConfig(BaseModel):
    """Solver settings. TOML section: ``[solver]``

    - ``base_size``: graphs with at most this many vertices go straight to the exact solver (default: ``12``).
    - ``node_budget``: search node budget of the exact solver, unbounded when unset.
    - ``worker_count``: processes used by the exact solver and ``bench`` (default: ``1``).
    - ``vertex_order``: ``"degree_descending"`` (default) or ``"ascending"``.
    - ``fallback_budget``: node budget of the local completion the reduction solver records as a
      fallback when no lift case applies (default: ``200000``).
    """

    base_size: int = Field(default=12, ge=4)
    node_budget: PositiveInt | None = None
    worker_count: PositiveInt = 1
    vertex_order: Literal["degree_descending", "ascending"] = "degree_descending"
    fallback_budget: PositiveInt = 200_000


class BenchConfig(BaseModel):
    """Corpus benchmark settings. TOML section: ``[bench]``

    - ``worker_count``: instances solved in parallel (default: ``1``).
    - ``glob``: pattern of graph files picked from the corpus directory (default: ``"*.graph"``).
    """

    worker_count: PositiveInt = 1
    glob: str = "*.graph"

    @model_validator(mode="after")
    def _validate_glob(self) -> BenchConfig:
        if not self.glob.strip():
            raise ValueError("bench.glob must not be empty")
        return self


class LoggingConfig(BaseModel):
    """Structured logging settings. TOML section: ``[logging]``

    - ``logfmt_enabled``: use logfmt key=value format (default: ``true``).
    - ``log_level``: log level for the logging subsystem (default: ``"INFO"``).
    - ``log_dir``: directory of ``caipart.log`` (default: ``"logs"``).
    - ``file_enabled``: also write to the log file (default: ``true``).
    """

    logfmt_enabled: bool = True
    log_level: str = "INFO"
    log_dir: Path = Path("logs")
    file_enabled: bool = True


class Settings(BaseModel):
    runtime: RuntimeConfig = RuntimeConfig()
    solver: SolverConfig = SolverConfig()
    bench: BenchConfig = BenchConfig()
    logging: LoggingConfig = LoggingConfig()

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Settings:
        return cls.model_validate(data)

    @classmethod
    def from_file(cls, path: Path | None = None) -> Settings:
        if path is None:
            raise ValueError("config file path is required")
        return cls.from_dict(_load_file_data(path))
