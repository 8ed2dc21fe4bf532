from __future__ import annotations

from pathlib import Path

import pytest

from caipart.adapters.container import AppContainer
from caipart.solvers.exact import VertexOrder


def test_app_container_getters_fail_when_not_configured() -> None:
    with pytest.raises(RuntimeError, match="container not configured"):
        AppContainer.get_settings()
    with pytest.raises(RuntimeError, match="container not configured"):
        AppContainer.get_logger()
    with pytest.raises(RuntimeError, match="container not configured"):
        AppContainer.solve_options()


def test_app_container_builds_solver_options(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    config_file = tmp_path / "caipart.toml"
    config_file.write_text(
        """
[runtime]
log_level = "WARNING"

[solver]
base_size = 10
node_budget = 1000
worker_count = 3
vertex_order = "ascending"
fallback_budget = 50
""",
        encoding="utf-8",
    )

    AppContainer.configure(config_file)

    assert AppContainer.get_settings().logging.log_level == "WARNING"
    assert AppContainer.get_logger().name == "caipart"
    options = AppContainer.solve_options()
    assert options.vertex_order == VertexOrder.ASCENDING
    assert options.node_budget == 1000
    assert options.worker_count == 3
    assert AppContainer.solve_options(worker_count=1).worker_count == 1
    reduction = AppContainer.reduction_options()
    assert reduction.base_size == 10
    assert reduction.fallback_budget == 50
    assert reduction.node_budget == 1000


def test_reset_forgets_configuration(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    AppContainer.configure()

    AppContainer.reset()

    with pytest.raises(RuntimeError):
        AppContainer.get_settings()
