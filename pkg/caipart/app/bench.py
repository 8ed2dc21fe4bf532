from __future__ import annotations

import logging
import multiprocessing
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from caipart.adapters.io.graph_file import read_graph_file
from caipart.app.runner import SolveMethod, check_result, run_method
from caipart.solvers.exact import Outcome, SolveOptions
from caipart.solvers.reduction import ReductionOptions

logger = logging.getLogger("caipart.bench")


@dataclass(frozen=True)
class BenchRow:
    path: Path
    outcome: Outcome | None
    verified: bool
    fallbacks: int
    seconds: float
    error: str = ""


@dataclass(frozen=True)
class BenchSummary:
    rows: tuple[BenchRow, ...]

    def count(self, outcome: Outcome) -> int:
        return sum(1 for row in self.rows if row.outcome == outcome)

    @property
    def failures(self) -> tuple[BenchRow, ...]:
        return tuple(row for row in self.rows if not row.verified)

    @property
    def fallbacks(self) -> int:
        return sum(row.fallbacks for row in self.rows)

    @property
    def seconds(self) -> float:
        return sum(row.seconds for row in self.rows)

    def table_row(self) -> list[object]:
        return [
            len(self.rows),
            self.count(Outcome.FOUND),
            self.count(Outcome.UNSAT),
            self.count(Outcome.BUDGET_EXCEEDED),
            self.fallbacks,
            len(self.failures),
            f"{self.seconds:.2f}",
        ]


SUMMARY_COLUMNS = ("instances", "found", "unsat", "budget", "fallbacks", "failures", "seconds")


def _bench_one(task: tuple[Path, SolveMethod, SolveOptions, ReductionOptions]) -> BenchRow:
    path, method, solve_options, reduction_options = task
    started = time.perf_counter()
    try:
        doc = read_graph_file(path)
        result = run_method(doc, method, solve_options=solve_options, reduction_options=reduction_options)
    except (ValueError, RuntimeError) as exc:
        logger.error("bench instance failed", extra={"path": str(path), "error": str(exc)})
        return BenchRow(path, None, False, 0, time.perf_counter() - started, f"{type(exc).__name__}: {exc}")
    fallbacks = result.trace.fallbacks if result.trace is not None else 0
    return BenchRow(path, result.outcome, check_result(doc, result), fallbacks, time.perf_counter() - started)


def run_bench(
    paths: Sequence[Path],
    method: SolveMethod,
    *,
    solve_options: SolveOptions,
    reduction_options: ReductionOptions,
    worker_count: int = 1,
) -> BenchSummary:
    # Instances run in parallel, so each exact search stays single-process.
    per_instance = SolveOptions(
        forced_a=solve_options.forced_a,
        forced_i=solve_options.forced_i,
        vertex_order=solve_options.vertex_order,
        node_budget=solve_options.node_budget,
    )
    tasks = [(path, method, per_instance, reduction_options) for path in sorted(paths)]
    if worker_count <= 1 or len(tasks) <= 1:
        rows = [_bench_one(task) for task in tasks]
    else:
        with multiprocessing.Pool(worker_count) as pool:
            rows = pool.map(_bench_one, tasks)
    summary = BenchSummary(tuple(rows))
    logger.info(
        "bench finished",
        extra={"instances": len(rows), "failures": len(summary.failures), "seconds": round(summary.seconds, 3)},
    )
    return summary
