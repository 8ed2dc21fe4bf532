from __future__ import annotations

import logging
import math
import multiprocessing
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from caipart.core.graph import Graph, underlying_degree
from caipart.core.partition import BiAcyclicPartition, CaiPartition, verify_cai, verify_two_acyclic

logger = logging.getLogger("caipart.exact")

FORALL_VERTEX_LIMIT = 24

_FREE = -1
_A = 0
_I = 1


class VertexOrder(StrEnum):
    ASCENDING = "ascending"
    DEGREE_DESCENDING = "degree_descending"


class Outcome(StrEnum):
    FOUND = "found"
    UNSAT = "unsat"
    BUDGET_EXCEEDED = "budget_exceeded"


class _Mode(StrEnum):
    CAI = "cai"
    TWO_ACYCLIC = "two_acyclic"


@dataclass(frozen=True)
class SolveOptions:
    forced_a: frozenset[int] = frozenset()
    forced_i: frozenset[int] = frozenset()
    vertex_order: VertexOrder = VertexOrder.DEGREE_DESCENDING
    node_budget: int | None = None
    worker_count: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "forced_a", frozenset(self.forced_a))
        object.__setattr__(self, "forced_i", frozenset(self.forced_i))
        overlap = self.forced_a & self.forced_i
        if overlap:
            raise ValueError(f"contradictory forced sets: {sorted(overlap)} forced to both sides")
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


@dataclass(frozen=True)
class SolveResult:
    outcome: Outcome
    partition: CaiPartition | BiAcyclicPartition | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.outcome == Outcome.FOUND


@dataclass(frozen=True)
class ForallReport:
    holds: bool
    counterexample: BiAcyclicPartition | None
    partitions_checked: int


class _BudgetHit(Exception):
    pass


class _RollbackForest:
    """Union-find without path compression so unions can be undone in LIFO order."""

    def __init__(self, n: int) -> None:
        self._parent = list(range(n))
        self._size = [1] * n
        self._history: list[list[int]] = []

    def find(self, v: int) -> int:
        while self._parent[v] != v:
            v = self._parent[v]
        return v

    def attach(self, v: int, neighbors: Sequence[int]) -> None:
        merged: list[int] = []
        for u in neighbors:
            ru, rv = self.find(u), self.find(v)
            if ru == rv:
                continue
            if self._size[ru] > self._size[rv]:
                ru, rv = rv, ru
            self._parent[ru] = rv
            self._size[rv] += self._size[ru]
            merged.append(ru)
        self._history.append(merged)

    def detach(self) -> None:
        for root in reversed(self._history.pop()):
            top = self._parent[root]
            self._size[top] -= self._size[root]
            self._parent[root] = root


class _Search:
    def __init__(
        self,
        g: Graph,
        mode: _Mode,
        order: Sequence[int],
        fixed: Mapping[int, int],
        budget: int | None,
        partial: bool = False,
    ) -> None:
        self._g = g
        self._mode = mode
        self._order = list(order)
        self._fixed = dict(fixed)
        self._budget = budget
        self._partial = partial
        self._neighbors = [g.neighbors(v) for v in range(g.n)]
        self._out = [g.out_neighbors(v) for v in range(g.n)]
        self._in = [g.in_neighbors(v) for v in range(g.n)]
        self.side = [_FREE] * g.n
        self.nodes = 0
        self._count_a = 0
        acyclic_sides = (_A,) if mode == _Mode.CAI else (_A, _I)
        self._forests = {} if g.is_directed else {s: _RollbackForest(g.n) for s in acyclic_sides}
        self._branch = (_I, _A) if mode == _Mode.CAI else (_A, _I)

    def _tracks(self, s: int) -> bool:
        return self._mode == _Mode.TWO_ACYCLIC or s == _A

    def _closes_cycle(self, v: int, s: int) -> bool:
        side = self.side
        if not self._g.is_directed:
            roots: set[int] = set()
            forest = self._forests[s]
            for u in self._neighbors[v]:
                if side[u] != s:
                    continue
                root = forest.find(u)
                if root in roots:
                    return True
                roots.add(root)
            return False
        targets = {u for u in self._in[v] if side[u] == s}
        if not targets:
            return False
        stack = [u for u in self._out[v] if side[u] == s]
        seen = set(stack)
        while stack:
            u = stack.pop()
            if u in targets:
                return True
            for w in self._out[u]:
                if side[w] == s and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def _allowed(self, v: int, s: int) -> bool:
        if self._mode == _Mode.CAI and s == _I:
            return all(self.side[u] != _I for u in self._neighbors[v])
        return not self._closes_cycle(v, s)

    def _assign(self, v: int, s: int) -> None:
        self.side[v] = s
        if s == _A:
            self._count_a += 1
        if self._forests and self._tracks(s):
            self._forests[s].attach(v, [u for u in self._neighbors[v] if self.side[u] == s])

    def _unassign(self, v: int, s: int) -> None:
        if self._forests and self._tracks(s):
            self._forests[s].detach()
        if s == _A:
            self._count_a -= 1
        self.side[v] = _FREE

    def _a_reachable(self) -> bool:
        """All A vertices lie in one component of the graph induced by A and unassigned vertices."""
        if self._count_a <= 1:
            return True
        side = self.side
        start = side.index(_A)
        seen = {start}
        stack = [start]
        reached = 1
        while stack:
            u = stack.pop()
            for w in self._neighbors[u]:
                if w in seen or side[w] == _I:
                    continue
                seen.add(w)
                stack.append(w)
                if side[w] == _A:
                    reached += 1
        return reached == self._count_a

    def _consistent(self, v: int, s: int) -> bool:
        if self._mode != _Mode.CAI:
            return True
        if s == _I:
            return self._a_reachable()
        if any(self.side[u] == _A for u in self._neighbors[v]):
            return True
        return self._a_reachable()

    def solutions(self, depth: int = 0) -> Iterator[None]:
        self.nodes += 1
        if self._budget is not None and self.nodes > self._budget:
            raise _BudgetHit
        if depth == len(self._order):
            if self._mode == _Mode.CAI and not self._partial and self._count_a == 0 and self._g.n > 0:
                return
            yield
            return
        v = self._order[depth]
        choices = (self._fixed[v],) if v in self._fixed else self._branch
        for s in choices:
            if not self._allowed(v, s):
                continue
            self._assign(v, s)
            if self._consistent(v, s):
                yield from self.solutions(depth + 1)
            self._unassign(v, s)


def _vertex_order(g: Graph, order: VertexOrder, first: Sequence[int] = ()) -> list[int]:
    head = sorted(set(first))
    rest = [v for v in range(g.n) if v not in set(head)]
    if order == VertexOrder.DEGREE_DESCENDING:
        rest.sort(key=lambda v: (-underlying_degree(g, v), v))
    return head + rest


def _fixed_from(opts: SolveOptions) -> dict[int, int]:
    fixed = dict.fromkeys(opts.forced_a, _A)
    fixed.update(dict.fromkeys(opts.forced_i, _I))
    return fixed


def _partition_of(side: Sequence[int], mode: _Mode) -> CaiPartition | BiAcyclicPartition:
    left = frozenset(v for v, s in enumerate(side) if s == _A)
    right = frozenset(v for v, s in enumerate(side) if s == _I)
    if mode == _Mode.CAI:
        return CaiPartition(left, right)
    return BiAcyclicPartition(left, right)


def _run(
    g: Graph,
    mode: _Mode,
    order: Sequence[int],
    fixed: Mapping[int, int],
    budget: int | None,
) -> SolveResult:
    search = _Search(g, mode, order, fixed, budget)
    try:
        for _ in search.solutions():
            return SolveResult(Outcome.FOUND, _partition_of(search.side, mode), search.nodes)
    except _BudgetHit:
        return SolveResult(Outcome.BUDGET_EXCEEDED, None, search.nodes)
    return SolveResult(Outcome.UNSAT, None, search.nodes)


def _run_task(task: tuple[Graph, _Mode, list[int], dict[int, int], int | None]) -> SolveResult:
    return _run(*task)


def _prefixes(
    g: Graph, mode: _Mode, order: Sequence[int], fixed: Mapping[int, int], depth: int
) -> list[dict[int, int]]:
    head = list(order[:depth])
    search = _Search(g, mode, head, fixed, None, partial=True)
    return [{v: search.side[v] for v in head} for _ in search.solutions()]


def _run_parallel(
    g: Graph,
    mode: _Mode,
    order: list[int],
    fixed: dict[int, int],
    opts: SolveOptions,
) -> SolveResult:
    depth = min(len(order), max(1, math.ceil(math.log2(opts.worker_count * 4))))
    prefixes = _prefixes(g, mode, order, fixed, depth)
    if not prefixes:
        return SolveResult(Outcome.UNSAT, None, 0)
    budget = None if opts.node_budget is None else max(1, opts.node_budget // len(prefixes))
    tasks = [(g, mode, order, {**fixed, **prefix}, budget) for prefix in prefixes]
    logger.debug("parallel search started", extra={"tasks": len(tasks), "workers": opts.worker_count})

    nodes = 0
    exceeded = False
    with multiprocessing.Pool(processes=opts.worker_count) as pool:
        for result in pool.imap_unordered(_run_task, tasks):
            nodes += result.nodes
            if result.found:
                pool.terminate()
                return SolveResult(Outcome.FOUND, result.partition, nodes)
            exceeded = exceeded or result.outcome == Outcome.BUDGET_EXCEEDED
    return SolveResult(Outcome.BUDGET_EXCEEDED if exceeded else Outcome.UNSAT, None, nodes)


def _solve(g: Graph, mode: _Mode, opts: SolveOptions) -> SolveResult:
    fixed = _fixed_from(opts)
    for v in fixed:
        g.check_vertex(v)
    order = _vertex_order(g, opts.vertex_order, first=list(fixed))
    if opts.worker_count > 1 and g.n > 1:
        result = _run_parallel(g, mode, order, fixed, opts)
    else:
        result = _run(g, mode, order, fixed, opts.node_budget)

    if result.found:
        assert result.partition is not None
        if isinstance(result.partition, CaiPartition):
            verdict = verify_cai(g, result.partition)
        else:
            verdict = verify_two_acyclic(g, result.partition)
        if not verdict:
            raise RuntimeError(f"exact search returned an invalid partition: {verdict.describe()}")
    logger.debug(
        "exact search finished",
        extra={"mode": str(mode), "n": g.n, "outcome": str(result.outcome), "nodes": result.nodes},
    )
    return result


def _edged_components(g: Graph) -> int:
    """Components with an edge; ``A`` lies in one of them and every other must be a lone vertex."""
    return sum(1 for component in nx.connected_components(g.nx_underlying) if len(component) > 1)


def solve_cai(g: Graph, opts: SolveOptions | None = None) -> SolveResult:
    """Decide whether ``g`` has a CAI-partition by backtracking; honors forced sides and a node budget."""
    opts = opts or SolveOptions()
    if _edged_components(g) > 1:
        return SolveResult(Outcome.UNSAT, None, 0)
    return _solve(g, _Mode.CAI, opts)


def solve_two_forest(g: Graph, opts: SolveOptions | None = None) -> SolveResult:
    if g.is_directed:
        raise ValueError("solve_two_forest requires an undirected graph")
    opts = opts or SolveOptions()
    if opts.forced_a or opts.forced_i:
        raise ValueError("solve_two_forest does not take forced sets")
    return _solve(g, _Mode.TWO_ACYCLIC, opts)


def forall_two_acyclic(
    g: Graph,
    predicate: Callable[[frozenset[int], frozenset[int]], bool],
) -> ForallReport:
    """Check ``predicate(A1, A2)`` on every ordered partition of V(g) into two acyclic sets."""
    if g.n > FORALL_VERTEX_LIMIT:
        raise ValueError(f"forall_two_acyclic supports at most {FORALL_VERTEX_LIMIT} vertices, got {g.n}")
    search = _Search(g, _Mode.TWO_ACYCLIC, list(range(g.n)), {}, None)
    checked = 0
    for _ in search.solutions():
        checked += 1
        partition = _partition_of(search.side, _Mode.TWO_ACYCLIC)
        assert isinstance(partition, BiAcyclicPartition)
        if not predicate(partition.a1, partition.a2):
            return ForallReport(False, partition, checked)
    return ForallReport(True, None, checked)
