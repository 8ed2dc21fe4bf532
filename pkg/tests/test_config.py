from pathlib import Path

import pytest
from pydantic import ValidationError

from caipart.adapters.config.loader import load_settings
from caipart.adapters.config.schema import BenchConfig, Settings


def test_load_settings_from_file(tmp_path: Path) -> None:
    config_file = tmp_path / "caipart.toml"
    config_file.write_text(
        """
[runtime]
log_level = "DEBUG"

[solver]
base_size = 16
node_budget = 500000
worker_count = 4
vertex_order = "ascending"
fallback_budget = 1000

[bench]
glob = "f-*.graph"

[logging]
logfmt_enabled = false
file_enabled = false
""",
        encoding="utf-8",
    )

    settings = load_settings(config_file)

    assert settings.runtime.log_level == "DEBUG"
    assert settings.solver.base_size == 16
    assert settings.solver.node_budget == 500000
    assert settings.solver.worker_count == 4
    assert settings.solver.vertex_order == "ascending"
    assert settings.solver.fallback_budget == 1000
    assert settings.bench.glob == "f-*.graph"
    assert settings.bench.worker_count == 1
    assert settings.logging.logfmt_enabled is False


def test_defaults_without_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)

    settings = load_settings()

    assert settings == Settings()
    assert settings.solver.base_size == 12
    assert settings.solver.node_budget is None
    assert settings.logging.log_dir == Path("logs")


def test_config_toml_in_working_directory(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    (tmp_path / "config.toml").write_text("[solver]\nbase_size = 8\n", encoding="utf-8")

    assert load_settings().solver.base_size == 8


def test_environment_selects_config_and_workers(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    config_file = tmp_path / "env.toml"
    config_file.write_text("[solver]\nworker_count = 2\n", encoding="utf-8")
    monkeypatch.setenv("CAIPART_CONFIG", str(config_file))
    monkeypatch.setenv("CAIPART_WORKERS", "6")

    settings = load_settings()

    assert settings.solver.worker_count == 6
    assert settings.bench.worker_count == 6


def test_missing_explicit_path_falls_back_to_defaults(tmp_path: Path) -> None:
    assert load_settings(tmp_path / "absent.toml") == Settings()


def test_directory_is_not_a_config_file(tmp_path: Path) -> None:
    with pytest.raises(ValueError, match="must be a file"):
        load_settings(tmp_path)


def test_unsupported_suffix(tmp_path: Path) -> None:
    config_file = tmp_path / "caipart.yaml"
    config_file.write_text("solver: {}\n", encoding="utf-8")

    with pytest.raises(ValueError, match="unsupported config file type"):
        Settings.from_file(config_file)


def test_unknown_sections_are_rejected() -> None:
    with pytest.raises(ValidationError):
        Settings.from_dict({"llm": {"provider": "openai"}})


@pytest.mark.parametrize(
    "solver",
    [{"base_size": 3}, {"worker_count": 0}, {"vertex_order": "random"}, {"fallback_budget": 0}],
)
def test_invalid_solver_values(solver: dict[str, object]) -> None:
    with pytest.raises(ValidationError):
        Settings.from_dict({"solver": solver})


def test_bench_glob_must_not_be_blank() -> None:
    with pytest.raises(ValidationError, match="bench.glob must not be empty"):
        BenchConfig(glob="  ")
