from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum

from caipart.adapters.io.graph_file import GraphDocument
from caipart.core.embedding import embed
from caipart.core.partition import CaiPartition, verify_cai
from caipart.solvers.ears import solve_series_parallel
from caipart.solvers.exact import Outcome, SolveOptions, solve_cai
from caipart.solvers.reduction import ReductionOptions, ReductionTrace, solve_subcubic

logger = logging.getLogger("caipart.cli")


class SolveMethod(StrEnum):
    EXACT = "exact"
    REDUCE = "reduce"
    EARS = "ears"


@dataclass(frozen=True)
class MethodResult:
    outcome: Outcome
    partition: CaiPartition | None = None
    nodes: int = 0
    trace: ReductionTrace | None = None


def run_method(
    doc: GraphDocument,
    method: SolveMethod,
    *,
    solve_options: SolveOptions,
    reduction_options: ReductionOptions,
) -> MethodResult:
    g = doc.graph
    if method == SolveMethod.EXACT:
        result = solve_cai(g, solve_options)
        partition = result.partition if isinstance(result.partition, CaiPartition) else None
        return MethodResult(result.outcome, partition, result.nodes)
    if method == SolveMethod.EARS:
        return MethodResult(Outcome.FOUND, solve_series_parallel(g))
    rot = doc.rotation
    if rot is None:
        logger.info("no rotation in graph file, embedding", extra={"n": g.n})
        rot = embed(g)
    solved = solve_subcubic(g, rot, reduction_options)
    return MethodResult(Outcome.FOUND, solved.partition, trace=solved.trace)


def check_result(doc: GraphDocument, result: MethodResult) -> bool:
    """Independent re-verification of a Found result against the input graph."""
    if result.partition is None:
        return result.outcome != Outcome.FOUND
    return bool(verify_cai(doc.graph, result.partition))
