from __future__ import annotations

import logging
from pathlib import Path

from caipart.adapters.config.loader import load_settings
from caipart.adapters.config.schema import Settings
from caipart.adapters.logging.setup import configure_logging
from caipart.solvers.exact import SolveOptions, VertexOrder
from caipart.solvers.reduction import ReductionOptions


class AppContainer:
    _settings: Settings | None = None
    _logger: logging.Logger | None = None

    @classmethod
    def configure(cls, config_path: Path | None = None) -> None:
        cls._settings = load_settings(config_path)
        cls._settings.logging.log_level = cls._settings.runtime.log_level
        cls._logger = configure_logging(cls._settings.logging)

    @classmethod
    def reset(cls) -> None:
        cls._settings = None
        cls._logger = None

    @classmethod
    def get_settings(cls) -> Settings:
        if cls._settings is None:
            raise RuntimeError("container not configured")
        return cls._settings

    @classmethod
    def get_logger(cls) -> logging.Logger:
        if cls._logger is None:
            raise RuntimeError("container not configured")
        return cls._logger

    @classmethod
    def solve_options(cls, worker_count: int | None = None) -> SolveOptions:
        solver = cls.get_settings().solver
        return SolveOptions(
            vertex_order=VertexOrder(solver.vertex_order),
            node_budget=solver.node_budget,
            worker_count=worker_count or solver.worker_count,
        )

    @classmethod
    def reduction_options(cls) -> ReductionOptions:
        solver = cls.get_settings().solver
        return ReductionOptions(
            base_size=solver.base_size,
            fallback_budget=solver.fallback_budget,
            node_budget=solver.node_budget,
        )
