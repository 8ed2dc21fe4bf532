from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from caipart.core.embedding import FaceSet, RotationSystem, trace_faces
from caipart.core.errors import LiftVerificationError
from caipart.core.graph import Graph, find_cycle, is_eulerian_digraph, is_oriented, rebuild


@dataclass(frozen=True)
class CaiPartition:
    a: frozenset[int]
    i: frozenset[int]

    @classmethod
    def of(cls, a: Iterable[int], i: Iterable[int]) -> CaiPartition:
        return cls(frozenset(a), frozenset(i))


@dataclass(frozen=True)
class BiAcyclicPartition:
    a1: frozenset[int]
    a2: frozenset[int]

    @classmethod
    def of(cls, a1: Iterable[int], a2: Iterable[int]) -> BiAcyclicPartition:
        return cls(frozenset(a1), frozenset(a2))


@dataclass(frozen=True)
class Tripartition:
    color: tuple[int, ...]

    def members(self, index: int) -> frozenset[int]:
        if index not in (0, 1, 2):
            raise ValueError(f"tripartition class must be 0, 1 or 2, got {index}")
        return frozenset(v for v, c in enumerate(self.color) if c == index)

    @property
    def classes(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return self.members(0), self.members(1), self.members(2)


class Clause(StrEnum):
    INDEPENDENT = "independent"
    ACYCLIC = "acyclic"
    CONNECTED = "connected"
    FIRST_ACYCLIC = "first_acyclic"
    SECOND_ACYCLIC = "second_acyclic"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    clause: Clause | None = None
    witness: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.clause} violated, witness {list(self.witness)}"


_OK = Verdict(True)


def _check_cover(g: Graph, left: frozenset[int], right: frozenset[int]) -> None:
    overlap = left & right
    if overlap:
        raise ValueError(f"partition sides overlap on {sorted(overlap)}")
    covered = left | right
    outside = sorted(v for v in covered if not 0 <= v < g.n)
    if outside:
        raise ValueError(f"partition mentions vertices outside 0..{g.n - 1}: {outside}")
    if len(covered) != g.n:
        missing = sorted(set(range(g.n)) - covered)
        raise ValueError(f"partition misses vertices {missing}")


def _independence_witness(g: Graph, side: frozenset[int]) -> tuple[int, int] | None:
    for u, v in g.arcs:
        if u in side and v in side:
            return (u, v)
    return None


def verify_cai(g: Graph, p: CaiPartition) -> Verdict:
    _check_cover(g, p.a, p.i)
    edge = _independence_witness(g, p.i)
    if edge is not None:
        return Verdict(False, Clause.INDEPENDENT, edge)
    cycle = find_cycle(g, p.a)
    if cycle is not None:
        return Verdict(False, Clause.ACYCLIC, tuple(cycle))
    if not p.a:
        return _OK if g.n == 0 else Verdict(False, Clause.CONNECTED, ())
    components = list(nx.connected_components(g.nx_underlying.subgraph(p.a)))
    if len(components) > 1:
        first, second = sorted(min(component) for component in components)[:2]
        return Verdict(False, Clause.CONNECTED, (first, second))
    return _OK


def verify_two_acyclic(g: Graph, p: BiAcyclicPartition) -> Verdict:
    _check_cover(g, p.a1, p.a2)
    for side, clause in ((p.a1, Clause.FIRST_ACYCLIC), (p.a2, Clause.SECOND_ACYCLIC)):
        cycle = find_cycle(g, side)
        if cycle is not None:
            return Verdict(False, clause, tuple(cycle))
    return _OK


def verify_tripartition(g: Graph, tri: Tripartition) -> bool:
    if len(tri.color) != g.n or any(c not in (0, 1, 2) for c in tri.color):
        return False
    return all(tri.color[u] != tri.color[v] for u, v in g.arcs)


def is_permeating(t: Graph, faces: FaceSet, a: Iterable[int]) -> bool:
    chosen = frozenset(a)
    return all(face.vertices & chosen for face in faces.faces)


def lift_obs_main(
    t: Graph,
    rot: RotationSystem,
    tri: Tripartition,
    index: int,
    cai: CaiPartition,
) -> BiAcyclicPartition:
    """Two-acyclic partition of a Eulerian triangulation from a CAI-partition of ``t - I_index``.

    ``cai`` uses the vertex ids of ``t``. The result is ``(A, I ∪ I_index)``.
    """
    if t.n < 4:
        raise ValueError("triangulation must have at least 4 vertices")
    faces = trace_faces(t, rot)
    if any(face.degree != 3 for face in faces.faces):
        raise ValueError("graph is not a triangulation")
    if not t.is_directed or not is_oriented(t) or not is_eulerian_digraph(t):
        raise ValueError("triangulation is not an Eulerian orientation")
    if not verify_tripartition(t, tri):
        raise ValueError("tripartition is not a proper 3-coloring")
    removed = tri.members(index)
    if (cai.a | cai.i) & removed:
        raise ValueError("CAI-partition must avoid the deleted class")
    rest, mapping = rebuild(t, (v for v in range(t.n) if v not in removed))
    local = CaiPartition.of((mapping[v] for v in cai.a), (mapping[v] for v in cai.i))
    verdict = verify_cai(rest, local)
    if not verdict:
        raise ValueError(f"not a CAI-partition of the class-deleted graph: {verdict.describe()}")

    lifted = BiAcyclicPartition(cai.a, cai.i | removed)
    verdict = verify_two_acyclic(t, lifted)
    if not verdict:
        raise LiftVerificationError(f"lifted partition is not two-acyclic: {verdict.describe()}")
    return lifted


def _single_neighbor_in(g: Graph, side: frozenset[int], v: int) -> int:
    inside = [u for u in g.neighbors(v) if u in side]
    if len(inside) != 1:
        raise ValueError(f"vertex {v} has {len(inside)} neighbors in the set, expected exactly 1")
    return inside[0]


def remove_leaf_from_a(g: Graph, a: Iterable[int], v: int) -> frozenset[int]:
    side = frozenset(a)
    if v not in side:
        raise ValueError(f"vertex {v} is not in the set")
    _single_neighbor_in(g, side, v)
    return side - {v}


def add_leaf_to_a(g: Graph, a: Iterable[int], v: int) -> frozenset[int]:
    side = frozenset(a)
    if v in side:
        raise ValueError(f"vertex {v} is already in the set")
    u = _single_neighbor_in(g, side, v)
    if g.is_directed and g.has_arc(u, v) and g.has_arc(v, u):
        raise ValueError(f"vertex {v} forms a digon with {u}")
    return side | {v}
