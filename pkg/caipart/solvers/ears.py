"""Series-parallel recognition, short nested open ear decompositions, and the ear-by-ear CAI-partition."""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx

from caipart.core.classes import ClassPredicate
from caipart.core.errors import EarWithoutInterior, LiftVerificationError, NotInClass, PropertyViolation
from caipart.core.graph import Arc, Graph, is_two_connected
from caipart.core.partition import CaiPartition, verify_cai

logger = logging.getLogger("caipart.ears")


@dataclass(frozen=True)
class EarDecomposition:
    """Ear 0 is a cycle listed without repeating its first vertex; every later ear is a path.

    ``parent[j]`` is the ear holding both endpoints of ear ``j`` as interior vertices and
    ``nest_interval[j]`` the stretch of that parent between them. Both are None for ear 0.
    """

    ears: tuple[tuple[int, ...], ...]
    parent: tuple[int | None, ...]
    nest_interval: tuple[tuple[int, ...] | None, ...]

    def __len__(self) -> int:
        return len(self.ears)

    def lines(self) -> list[str]:
        out = [f"ear 0 cycle {' '.join(map(str, self.ears[0]))}"]
        for j in range(1, len(self.ears)):
            interval = " ".join(map(str, self.nest_interval[j] or ()))
            out.append(f"ear {j} parent {self.parent[j]} path {' '.join(map(str, self.ears[j]))} interval {interval}")
        return out


def sp_recognize(g: Graph) -> bool:
    """True iff the underlying graph reduces to at most one edge by deleting vertices of degree at
    most 1, suppressing degree-2 vertices and merging parallel edges (no K4 minor)."""
    work = g.nx_underlying.copy()
    changed = True
    while changed and work.number_of_nodes() > 2:
        changed = False
        for v in sorted(work.nodes):
            if v not in work:
                continue
            neighbors = sorted(work.neighbors(v))
            if len(neighbors) <= 1:
                work.remove_node(v)
                changed = True
            elif len(neighbors) == 2:
                work.remove_node(v)
                work.add_edge(*neighbors)
                changed = True
    return work.number_of_nodes() <= 2


def _edge(u: int, v: int) -> Arc:
    return (u, v) if u < v else (v, u)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    k = len(cycle)
    start = cycle.index(min(cycle))
    forward = tuple(cycle[(start + i) % k] for i in range(k))
    backward = tuple(cycle[(start - i) % k] for i in range(k))
    return min(forward, backward)


def _shortest_cycle(g: Graph) -> tuple[int, ...]:
    """Girth cycle found by a BFS around every edge; ties go to the smallest canonical sequence."""
    graph = g.nx_underlying.copy()
    best: tuple[int, ...] | None = None
    for u, v in g.edges:
        graph.remove_edge(u, v)
        path = _bfs_path(graph, u, v, best)
        graph.add_edge(u, v)
        if path is None:
            continue
        cycle = _canonical_cycle(path)
        if best is None or (len(cycle), cycle) < (len(best), best):
            best = cycle
    if best is None:
        raise NotInClass(ClassPredicate.TWO_CONNECTED, "graph has no cycle")
    return best


def _bfs_path(graph: nx.Graph, source: int, target: int, best: Sequence[int] | None) -> list[int] | None:
    limit = len(best) if best is not None else graph.number_of_nodes() + 1
    parent: dict[int, int | None] = {source: None}
    queue = deque([(source, 1)])
    while queue:
        w, size = queue.popleft()
        if size >= limit:
            break
        for z in sorted(graph.neighbors(w)):
            if z in parent:
                continue
            parent[z] = w
            if z == target:
                path = [z]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])  # type: ignore[arg-type]
                return path[::-1]
            queue.append((z, size + 1))
    return None


def _next_ear(g: Graph, used: set[Arc], covered: set[int]) -> tuple[int, ...] | None:
    """Shortest path through unused edges joining two distinct covered vertices."""
    best: tuple[int, ...] | None = None
    sources = sorted(x for x in covered if any(_edge(x, z) not in used for z in g.neighbors(x)))
    for x in sources:
        parent: dict[int, int | None] = {x: None}
        frontier = [x]
        depth = 0
        while frontier and (best is None or depth + 1 < len(best)):
            layer: list[int] = []
            for w in frontier:
                for z in g.neighbors(w):
                    if _edge(w, z) in used or z in parent:
                        continue
                    if z in covered:
                        path = [z, w]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])  # type: ignore[arg-type]
                        candidate = tuple(path) if path[0] < path[-1] else tuple(reversed(path))
                        if best is None or (len(candidate), candidate) < (len(best), best):
                            best = candidate
                        continue
                    parent[z] = w
                    layer.append(z)
            frontier = layer
            depth += 1
    return best


def _interval(parent_ear: Sequence[int], x: int, y: int) -> tuple[int, ...]:
    i, j = parent_ear.index(x), parent_ear.index(y)
    lo, hi = min(i, j), max(i, j)
    return tuple(parent_ear[lo : hi + 1])


def short_nested_ears(g: Graph) -> EarDecomposition:
    """Shortest cycle first, then repeatedly a shortest path through unused edges between covered
    vertices. The result is checked by :func:`validate_ears`."""
    if g.n < 3 or not is_two_connected(g):
        raise NotInClass(ClassPredicate.TWO_CONNECTED)
    cycle = _shortest_cycle(g)
    ears: list[tuple[int, ...]] = [cycle]
    parents: list[int | None] = [None]
    intervals: list[tuple[int, ...] | None] = [None]
    owner = {v: 0 for v in cycle}
    used = {_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    covered = set(cycle)
    while len(used) < g.edge_count:
        ear = _next_ear(g, used, covered)
        if ear is None:
            raise PropertyViolation(2, len(ears), "no path through unused edges joins two covered vertices")
        x, y = ear[0], ear[-1]
        if owner[x] == owner[y]:
            parents.append(owner[x])
            intervals.append(_interval(ears[owner[x]], x, y))
        else:
            parents.append(None)
            intervals.append(None)
        index = len(ears)
        ears.append(ear)
        for v in ear[1:-1]:
            owner[v] = index
            covered.add(v)
        used.update(_edge(ear[i], ear[i + 1]) for i in range(len(ear) - 1))
    decomposition = EarDecomposition(tuple(ears), tuple(parents), tuple(intervals))
    validate_ears(g, decomposition)
    logger.debug("ear decomposition", extra={"n": g.n, "ears": len(ears), "girth": len(cycle)})
    return decomposition


def _ear_edges(ear: Sequence[int], closed: bool) -> list[Arc]:
    pairs = [_edge(ear[i], ear[i + 1]) for i in range(len(ear) - 1)]
    if closed:
        pairs.append(_edge(ear[-1], ear[0]))
    return pairs


def _is_stretch(parent_ear: Sequence[int], interval: Sequence[int], closed: bool) -> bool:
    if len(interval) < 2 or any(v not in parent_ear for v in interval):
        return False
    k = len(parent_ear)
    positions = [parent_ear.index(v) for v in interval]
    for step in (1, -1):
        if all(positions[i + 1] - positions[i] == step for i in range(len(positions) - 1)):
            return True
        if closed and all((positions[i + 1] - positions[i]) % k == step % k for i in range(len(positions) - 1)):
            return True
    return False


def validate_ears(g: Graph, ed: EarDecomposition, *, nested: bool = True) -> None:
    """Re-check every defining property of a short (nested) open ear decomposition from scratch.

    With ``nested=False`` the laminarity of nest intervals is skipped, which accepts short tree
    ear decompositions.
    """
    if not ed.ears:
        raise PropertyViolation(0, 0, "decomposition has no ears")
    edges = set(g.edges)
    cycle = ed.ears[0]
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise PropertyViolation(0, 0, f"{list(cycle)} is not a cycle")
    seen_edges: set[Arc] = set()
    for e in _ear_edges(cycle, True):
        if e not in edges:
            raise PropertyViolation(0, 0, f"{e} is not an edge")
        seen_edges.add(e)
    owner = {v: 0 for v in cycle}

    for j in range(1, len(ed.ears)):
        ear = ed.ears[j]
        if len(ear) < 2 or len(set(ear)) != len(ear):
            raise PropertyViolation(1, j, f"{list(ear)} is not a path")
        for e in _ear_edges(ear, False):
            if e not in edges:
                raise PropertyViolation(1, j, f"{e} is not an edge")
            if e in seen_edges:
                raise PropertyViolation(2, j, f"edge {e} already belongs to an earlier ear")
            seen_edges.add(e)
        x, y = ear[0], ear[-1]
        if x not in owner or y not in owner:
            raise PropertyViolation(2, j, "an endpoint is not on an earlier ear")
        fresh = [v for v in ear[1:-1] if v in owner]
        if fresh:
            raise PropertyViolation(2, j, f"internal vertices {fresh} appear on earlier ears")
        if owner[x] != owner[y]:
            raise PropertyViolation(3, j, f"endpoints are interior to ears {owner[x]} and {owner[y]}")
        parent = owner[x]
        if ed.parent[j] != parent:
            raise PropertyViolation(3, j, f"recorded parent {ed.parent[j]}, endpoints are interior to ear {parent}")
        interval = ed.nest_interval[j]
        if interval is None or {interval[0], interval[-1]} != {x, y}:
            raise PropertyViolation(3, j, "nest interval does not join the endpoints")
        if not _is_stretch(ed.ears[parent], interval, parent == 0):
            raise PropertyViolation(3, j, f"nest interval {list(interval)} is not a stretch of ear {parent}")
        for v in ear[1:-1]:
            owner[v] = j
    missing = sorted(edges - seen_edges)
    if missing:
        raise PropertyViolation(2, len(ed.ears) - 1, f"edges {missing} are on no ear")

    if nested:
        _check_laminar(ed)
    _check_short(g, ed)


def _check_laminar(ed: EarDecomposition) -> None:
    by_parent: dict[int, list[int]] = {}
    for j in range(1, len(ed.ears)):
        by_parent.setdefault(ed.parent[j], []).append(j)  # type: ignore[arg-type]
    for children in by_parent.values():
        for a_pos, a in enumerate(children):
            first = set(ed.nest_interval[a] or ())
            for b in children[a_pos + 1 :]:
                second = set(ed.nest_interval[b] or ())
                if first <= second or second <= first or len(first & second) <= 1:
                    continue
                raise PropertyViolation(4, b, f"nest interval overlaps the one of ear {a}")


def _check_short(g: Graph, ed: EarDecomposition) -> None:
    for j, ear in enumerate(ed.ears):
        closed = j == 0
        allowed = set(_ear_edges(ear, closed))
        if not closed:
            allowed.add(_edge(ear[0], ear[-1]))
        members = set(ear)
        chords = sorted(e for e in g.edges if e[0] in members and e[1] in members and e not in allowed)
        if chords:
            raise PropertyViolation(5, j, f"ear is not induced, chords {chords}")
        if j and len(ed.nest_interval[j] or ()) > len(ear):
            raise PropertyViolation(5, j, "nest interval is longer than the ear")


def cai_from_ears(g: Graph, ed: EarDecomposition) -> CaiPartition:
    """Walk the ears keeping at most one vertex of I on every ear.

    Ear 0 puts its smallest vertex in I. A later ear with an endpoint in I sends its interior to A;
    otherwise the interior vertex next to its first endpoint goes to I and the rest to A.
    """
    i_side = {min(ed.ears[0])}
    a_side = set(ed.ears[0]) - i_side
    for j in range(1, len(ed.ears)):
        ear = ed.ears[j]
        interior = ear[1:-1]
        if not interior:
            raise EarWithoutInterior(f"ear {j} is a single edge {ear[0]}-{ear[-1]}")
        ends_in_i = sum(1 for v in (ear[0], ear[-1]) if v in i_side)
        if ends_in_i == 2:
            raise PropertyViolation(3, j, "both endpoints ended up in I")
        if ends_in_i == 1:
            a_side.update(interior)
        else:
            i_side.add(interior[0])
            a_side.update(interior[1:])
    partition = CaiPartition.of(a_side, i_side)
    verdict = verify_cai(g, partition)
    if not verdict:
        raise LiftVerificationError(f"ear construction produced an invalid partition: {verdict.describe()}")
    return partition


def independent_per_ear(ed: EarDecomposition, i_side: Iterable[int]) -> list[int]:
    chosen = frozenset(i_side)
    return [len(chosen.intersection(ear)) for ear in ed.ears]


def solve_series_parallel(g: Graph) -> CaiPartition:
    if not is_two_connected(g):
        raise NotInClass(ClassPredicate.TWO_CONNECTED)
    if not sp_recognize(g):
        raise NotInClass(ClassPredicate.SERIES_PARALLEL)
    ed = short_nested_ears(g)
    partition = cai_from_ears(g, ed)
    logger.info("ear partition", extra={"n": g.n, "ears": len(ed), "independent": len(partition.i)})
    return partition
