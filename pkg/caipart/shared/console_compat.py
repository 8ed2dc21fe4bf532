from __future__ import annotations

import sys
from collections.abc import Sequence
from typing import Any, TextIO

try:
    from rich.console import Console as RichConsole
    from rich.table import Table as RichTable
except Exception:  # noqa: BLE001
    RichConsole = None
    RichTable = None


class CompatConsole:
    def __init__(self, *, stderr: bool = False) -> None:
        self._stream: TextIO = sys.stderr if stderr else sys.stdout
        if RichConsole is not None:
            self._inner = RichConsole(stderr=stderr, highlight=False, soft_wrap=True)
        else:
            self._inner = None

    def print(self, value: Any) -> None:
        if self._inner is not None:
            self._inner.print(value)
            return
        self._stream.write(f"{value}\n")
        self._stream.flush()

    def write_raw(self, text: str) -> None:
        """Machine-readable output (graph and partition files) bypasses rich markup."""
        self._stream.write(text)
        self._stream.flush()


def build_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[object]]) -> Any:
    if RichTable is None:
        lines = [title, "  ".join(columns)]
        lines += ["  ".join(str(cell) for cell in row) for row in rows]
        return "\n".join(lines)
    table = RichTable(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(str(cell) for cell in row))
    return table
