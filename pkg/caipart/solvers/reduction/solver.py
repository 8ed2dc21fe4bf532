from __future__ import annotations

import logging
from dataclasses import dataclass, field

from caipart.core.classes import class_f_violations
from caipart.core.embedding import RotationSystem
from caipart.core.errors import LiftVerificationError, NoCaseApplies, NoConfiguration, NotInClass
from caipart.core.graph import Graph
from caipart.core.partition import CaiPartition, verify_cai
from caipart.solvers.exact import SolveOptions, solve_cai
from caipart.solvers.reduction.lifts import DEFAULT_FALLBACK_BUDGET, complete_locally, lift
from caipart.solvers.reduction.matches import DEFAULT_BASE_SIZE, ConfigKind, ConfigMatch, detect
from caipart.solvers.reduction.steps import ReductionStep, reduce

logger = logging.getLogger("caipart.reduce")


@dataclass(frozen=True)
class ReductionOptions:
    base_size: int = DEFAULT_BASE_SIZE
    fallback_budget: int = DEFAULT_FALLBACK_BUDGET
    node_budget: int | None = None

    def __post_init__(self) -> None:
        if self.base_size < 4:
            raise ValueError("base_size must be >= 4")
        if self.fallback_budget < 1:
            raise ValueError("fallback_budget must be >= 1")


@dataclass(frozen=True)
class TraceEvent:
    event: str
    depth: int
    kind: str
    roles: str = "-"
    case: str = "-"

    def line(self) -> str:
        return f"event={self.event} depth={self.depth} kind={self.kind} roles={self.roles} case={self.case}"


@dataclass
class ReductionTrace:
    events: list[TraceEvent] = field(default_factory=list)

    def record(self, event: str, depth: int, match: ConfigMatch | None, case: str = "-") -> None:
        kind = str(match.kind) if match is not None else "-"
        roles = match.describe_roles() if match is not None else "-"
        self.events.append(TraceEvent(event, depth, kind, roles, case))

    def lines(self) -> list[str]:
        return [event.line() for event in self.events]

    @property
    def fallbacks(self) -> int:
        return sum(1 for event in self.events if event.event == "fallback")


@dataclass(frozen=True)
class SubcubicResult:
    partition: CaiPartition
    trace: ReductionTrace


def _exact(g: Graph, opts: ReductionOptions) -> CaiPartition:
    result = solve_cai(g, SolveOptions(node_budget=opts.node_budget))
    if not result.found or not isinstance(result.partition, CaiPartition):
        raise LiftVerificationError(f"exact solver returned {result.outcome} on a graph of {g.n} vertices")
    return result.partition


def _cycle_partition(g: Graph) -> CaiPartition:
    return CaiPartition.of(range(1, g.n), (0,))


class _Recursion:
    def __init__(self, opts: ReductionOptions, trace: ReductionTrace) -> None:
        self.opts = opts
        self.trace = trace

    def fallback(self, g: Graph, depth: int, match: ConfigMatch | None, reason: str) -> CaiPartition:
        logger.warning(
            "falling back to exact solver",
            extra={
                "reason": reason,
                "depth": depth,
                "kind": str(match.kind) if match is not None else "-",
                "roles": match.describe_roles() if match is not None else "-",
            },
        )
        self.trace.record("fallback", depth, match, reason)
        return _exact(g, self.opts)

    def recover(self, step: ReductionStep, subs: list[CaiPartition], depth: int, exc: NoCaseApplies) -> CaiPartition:
        """Local completion first, then the exact solver on the whole graph."""
        completed = complete_locally(step, subs, self.opts.fallback_budget)
        if completed is None:
            return self.fallback(step.graph, depth, step.match, f"no-case: {exc}")
        logger.warning(
            "lift completed locally",
            extra={"kind": str(step.match.kind), "depth": depth, "roles": step.match.describe_roles()},
        )
        self.trace.record("fallback", depth, step.match, "local-completion")
        return completed

    def solve(self, g: Graph, rot: RotationSystem, depth: int) -> CaiPartition:
        try:
            match = detect(g, rot, base_size=self.opts.base_size)
        except NoConfiguration as exc:
            return self.fallback(g, depth, None, f"no-configuration: {exc}")
        self.trace.record("match", depth, match)

        if match.kind == ConfigKind.BASE_CYCLE:
            partition = _cycle_partition(g)
        elif match.kind == ConfigKind.BASE_SMALL:
            partition = _exact(g, self.opts)
        else:
            step = reduce(g, rot, match)
            self.trace.record("reduce", depth, match, step.note or "-")
            subs = [self.solve(sub.graph, sub.rotation, depth + 1) for sub in step.subproblems]
            try:
                partition, case = lift(step, subs)
            except NoCaseApplies as exc:
                partition = self.recover(step, subs, depth, exc)
            else:
                self.trace.record("lift", depth, match, case)

        verdict = verify_cai(g, partition)
        if not verdict:
            raise LiftVerificationError(f"{match.kind} at depth {depth}: {verdict.describe()}")
        return partition


def solve_subcubic(g: Graph, rot: RotationSystem, options: ReductionOptions | None = None) -> SubcubicResult:
    """CAI-partition of a planar bipartite 2-connected subcubic oriented graph, built by reduction."""
    failed = class_f_violations(g, rot)
    if failed:
        raise NotInClass(failed[0], ", ".join(failed))
    opts = options or ReductionOptions()
    trace = ReductionTrace()
    partition = _Recursion(opts, trace).solve(g, rot, 0)
    logger.info(
        "reduction solved",
        extra={"n": g.n, "steps": sum(1 for e in trace.events if e.event == "reduce"), "fallbacks": trace.fallbacks},
    )
    return SubcubicResult(partition, trace)
