from __future__ import annotations

import logging
from pathlib import Path

import pytest
from logfmter import Logfmter

from caipart.adapters.config.schema import LoggingConfig
from caipart.adapters.logging.setup import configure_logging


def test_configure_logging_sets_handlers_and_level(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    config = LoggingConfig(logfmt_enabled=False, log_level="DEBUG")

    logger = configure_logging(config)

    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 2
    assert logger.propagate is False
    assert (tmp_path / "logs" / "caipart.log").exists()


def test_logfmt_formatter_without_file(tmp_path: Path) -> None:
    config = LoggingConfig(log_dir=tmp_path / "never", file_enabled=False)

    logger = configure_logging(config)

    assert len(logger.handlers) == 1
    assert isinstance(logger.handlers[0].formatter, Logfmter)
    assert not (tmp_path / "never").exists()


def test_child_loggers_write_logfmt_lines(tmp_path: Path) -> None:
    configure_logging(LoggingConfig(log_dir=tmp_path, log_level="INFO"))

    logging.getLogger("caipart.reduce").warning("falling back to exact solver", extra={"depth": 2})
    for handler in logging.getLogger("caipart").handlers:
        handler.flush()

    line = (tmp_path / "caipart.log").read_text(encoding="utf-8").strip().splitlines()[-1]
    assert line.startswith("at=WARNING")
    assert "name=caipart.reduce" in line
    assert 'msg="falling back to exact solver"' in line
    assert "depth=2" in line
