"""Hard-coded gadget triangulations, the 138-vertex Eulerian triangulation built from them, and the
catalog of small graphs without a CAI-partition."""

from __future__ import annotations

import logging
import multiprocessing
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

from caipart.constructions.duality import (
    TriangulationBundle,
    delete_class,
    eulerian_triangulation_problems,
    triangulation_bundle,
)
from caipart.constructions.generators import hypercube
from caipart.core.embedding import Face, FaceSet, RotationSystem, rotation_from_faces, trace_faces
from caipart.core.errors import ClassViolation, GlueConflict
from caipart.core.graph import Arc, Graph, degree, is_oriented
from caipart.core.partition import CaiPartition
from caipart.solvers.exact import Outcome, SolveOptions, forall_two_acyclic, solve_cai

logger = logging.getLogger("caipart.gadgets")

G1_ARCS: tuple[Arc, ...] = (
    (0, 3), (0, 6), (1, 0), (1, 4), (2, 1), (3, 2), (3, 7), (4, 3), (4, 5), (4, 6), (5, 2), (7, 5),
    (0, 11), (12, 0), (11, 4), (11, 1), (4, 12), (12, 3), (8, 4), (3, 8), (7, 8), (8, 5), (5, 9), (9, 3),
    (2, 9), (9, 7), (10, 4), (1, 10), (5, 10), (10, 2), (6, 12), (6, 11),
)  # fmt: skip

G2_ARCS: tuple[Arc, ...] = (
    (0, 3), (0, 6), (1, 0), (1, 4), (2, 1), (3, 2), (7, 3), (4, 3), (4, 5), (6, 4), (5, 2), (5, 7),
    (11, 0), (0, 12), (4, 11), (11, 1), (12, 4), (3, 12), (4, 8), (8, 3), (8, 7), (5, 8), (9, 5), (3, 9),
    (9, 2), (7, 9), (10, 4), (1, 10), (10, 5), (2, 10), (12, 6), (6, 11), (13, 0), (3, 13), (2, 13), (1, 13),
)  # fmt: skip

# Clockwise rings; both gadgets share vertices 4..12, G2 adds vertex 13 in the quad 0-1-2-3.
_SHARED_RINGS: dict[int, tuple[int, ...]] = {
    4: (5, 8, 3, 12, 6, 11, 1, 10),
    5: (2, 9, 7, 8, 4, 10),
    6: (4, 12, 0, 11),
    7: (9, 3, 8, 5),
    8: (5, 7, 3, 4),
    9: (2, 3, 7, 5),
    10: (2, 5, 4, 1),
    11: (4, 6, 0, 1),
    12: (3, 0, 6, 4),
}
_G1_RINGS: dict[int, tuple[int, ...]] = {
    0: (1, 11, 6, 12, 3),
    1: (2, 10, 4, 11, 0),
    2: (3, 9, 5, 10, 1),
    3: (0, 12, 4, 8, 7, 9, 2),
    **_SHARED_RINGS,
}
_G2_RINGS: dict[int, tuple[int, ...]] = {
    0: (1, 11, 6, 12, 3, 13),
    1: (2, 10, 4, 11, 0, 13),
    2: (3, 9, 5, 10, 1, 13),
    3: (0, 12, 4, 8, 7, 9, 2, 13),
    **_SHARED_RINGS,
    13: (0, 3, 2, 1),
}

# Hubs v0..v5 carry an octahedron: outer face (v0, v1, v2), inner face (v3, v5, v4).
_OUTER_TRIANGLE = (0, 1, 2)
_INNER_TRIANGLE = (3, 5, 4)
_SKELETON_ARCS: tuple[Arc, ...] = (
    (1, 0), (0, 2), (2, 1), (4, 3), (5, 4), (3, 5), (0, 3), (4, 0), (1, 4), (5, 1), (2, 5), (3, 2),
)  # fmt: skip
# Each remaining octahedron face (p, q, r) holds hubs x, y, a G1 copy on (x, p, q, y) and a G2 copy
# on (p, r, x); the flag tells whether (p, q, r) is listed in face-walk direction.
_BANDS: tuple[tuple[int, int, int, int, int, bool], ...] = (
    (3, 4, 0, 6, 7, True),
    (0, 1, 4, 8, 9, False),
    (4, 5, 1, 10, 11, True),
    (1, 2, 5, 12, 13, False),
    (5, 3, 2, 14, 15, True),
    (2, 0, 3, 16, 17, False),
)
HUB_COUNT = 18
BLOCKER_VERTICES = 138


@dataclass(frozen=True)
class Gadget:
    name: str
    graph: Graph
    rotation: RotationSystem
    faces: FaceSet
    interface: tuple[int, ...]
    internal: tuple[int, ...]

    @property
    def outer_face(self) -> Face:
        index = self.faces.find(self.interface)
        assert index is not None
        return self.faces[index]

    @property
    def inner_faces(self) -> tuple[Face, ...]:
        outer = self.outer_face
        return tuple(face for face in self.faces.faces if face != outer)


def _gadget(
    name: str,
    n: int,
    arcs: Iterable[Arc],
    rings: Mapping[int, Sequence[int]],
    interface: tuple[int, ...],
) -> Gadget:
    g = Graph.directed(n, arcs)
    rot = RotationSystem.from_mapping(rings, n)
    faces = trace_faces(g, rot)
    gadget = Gadget(name, g, rot, faces, interface, tuple(v for v in range(n) if v not in interface))
    if any(face.degree != 3 for face in gadget.inner_faces) or not is_oriented(g):
        raise ClassViolation(f"gadget {name} is not an oriented triangulation patch")
    return gadget


def build_g1() -> Gadget:
    return _gadget("g1", 13, G1_ARCS, _G1_RINGS, (0, 1, 2, 3))


def build_g2() -> Gadget:
    return _gadget("g2", 14, G2_ARCS, _G2_RINGS, (1, 2, 13))


@dataclass(frozen=True)
class GadgetItem:
    number: int
    statement: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class GadgetReport:
    items: tuple[GadgetItem, ...]

    @property
    def holds(self) -> bool:
        return all(item.holds for item in self.items)


def _degree_item(number: int, gadget: Gadget, v: int, out: int, inn: int) -> GadgetItem:
    d = degree(gadget.graph, v)
    return GadgetItem(
        number,
        f"{gadget.name}: out({v}) = {out}, in({v}) = {inn}",
        d.out == out and d.inn == inn,
        f"out={d.out} in={d.inn}",
    )


def _forall_item(number: int, gadget: Gadget, blocked: frozenset[int]) -> GadgetItem:
    def predicate(a1: frozenset[int], a2: frozenset[int]) -> bool:
        return not ({1, 2} <= a1 and blocked <= a2)

    report = forall_two_acyclic(gadget.graph, predicate)
    detail = f"{report.partitions_checked} partitions checked"
    if report.counterexample is not None:
        detail = f"counterexample A1={sorted(report.counterexample.a1)} A2={sorted(report.counterexample.a2)}"
    return GadgetItem(
        number,
        f"{gadget.name}: {{1, 2}} in A1 forces some of {sorted(blocked)} into A1",
        report.holds,
        detail,
    )


def verify_gadget_properties() -> GadgetReport:
    g1, g2 = build_g1(), build_g2()
    unbalanced = [
        (gadget.name, v)
        for gadget in (g1, g2)
        for v in range(4, 13)
        if degree(gadget.graph, v).out != degree(gadget.graph, v).inn
    ]
    items = [
        GadgetItem(1, "vertices 4..12 are balanced in both gadgets", not unbalanced, f"unbalanced: {unbalanced}"),
        _degree_item(2, g1, 0, 3, 2),
        _degree_item(3, g1, 1, 3, 2),
        _degree_item(4, g1, 2, 2, 3),
        _degree_item(5, g1, 3, 3, 4),
        _degree_item(6, g2, 1, 4, 2),
        _degree_item(7, g2, 2, 3, 3),
        _degree_item(8, g2, 13, 1, 3),
        _forall_item(9, g1, frozenset(range(8, 13))),
        _forall_item(10, g2, frozenset(range(8, 14))),
    ]
    for item in items:
        logger.debug("gadget item", extra={"item": item.number, "holds": item.holds, "detail": item.detail})
    return GadgetReport(tuple(items))


class _Assembly:
    """Face list and arc table of a triangulation being glued together."""

    def __init__(self) -> None:
        self.faces: list[tuple[int, ...]] = []
        self.arcs: dict[Arc, Arc] = {}

    def add_arcs(self, arcs: Iterable[Arc]) -> None:
        for u, v in arcs:
            key = (min(u, v), max(u, v))
            known = self.arcs.get(key)
            if known is None:
                self.arcs[key] = (u, v)
            elif known != (u, v):
                raise GlueConflict(f"edge {key} glued as {known} and as {(u, v)}")

    def glue(self, gadget: Gadget, mapping: Mapping[int, int], host: tuple[int, ...]) -> None:
        """Fill the host face walk with the gadget interior, mirroring the gadget when needed."""
        outer = [(mapping[a], mapping[b]) for a, b in gadget.outer_face.darts]
        host_darts = {(host[i], host[(i + 1) % len(host)]) for i in range(len(host))}
        mirrored = (host[0], host[1]) in outer
        boundary = {(a, b) for a, b in outer} if mirrored else {(b, a) for a, b in outer}
        if boundary != host_darts:
            raise GlueConflict(f"{gadget.name} boundary {outer} does not fit face {host}")
        for face in gadget.inner_faces:
            walk = tuple(mapping[v] for v in face.walk)
            self.faces.append(tuple(reversed(walk)) if mirrored else walk)
        self.add_arcs((mapping[u], mapping[v]) for u, v in gadget.graph.arcs)

    def bundle(self, n: int) -> TriangulationBundle:
        g = Graph.directed(n, self.arcs.values())
        rot = rotation_from_faces(self.faces, n)
        bundle = triangulation_bundle(g, rot)
        problems = eulerian_triangulation_problems(bundle)
        if problems:
            raise ClassViolation(f"glued triangulation is invalid: {'; '.join(problems)}")
        return bundle


def build_blocker() -> TriangulationBundle:
    """138-vertex Eulerian oriented triangulation: an octahedron on hubs v0..v5 with six G1 and six
    G2 copies glued around it."""
    g1, g2 = build_g1(), build_g2()
    assembly = _Assembly()
    assembly.faces.extend((_OUTER_TRIANGLE, _INNER_TRIANGLE))
    assembly.add_arcs(_SKELETON_ARCS)
    next_id = HUB_COUNT
    for p, q, r, x, y, forward in _BANDS:
        pieces = [(p, q, y, x), (p, x, r), (x, y, r), (y, q, r)]
        if not forward:
            pieces = [tuple(reversed(piece)) for piece in pieces]
        g1_map = {0: x, 1: p, 2: q, 3: y}
        g1_map.update({v: next_id + i for i, v in enumerate(g1.internal)})
        next_id += len(g1.internal)
        g2_map = {1: p, 2: r, 13: x}
        g2_map.update({v: next_id + i for i, v in enumerate(g2.internal)})
        next_id += len(g2.internal)
        assembly.glue(g1, g1_map, pieces[0])
        assembly.glue(g2, g2_map, pieces[1])
        assembly.faces.extend(pieces[2:])
        assembly.add_arcs([(y, r)])
    bundle = assembly.bundle(next_id)
    for triangle in (_OUTER_TRIANGLE, _INNER_TRIANGLE):
        if bundle.faces.find(triangle) is None:
            raise ClassViolation(f"hub triangle {triangle} does not bound a face")
    logger.info("assembled triangulation", extra={"vertices": bundle.graph.n, "edges": bundle.graph.edge_count})
    return bundle


def build_blocker_chain(k: int) -> TriangulationBundle:
    """Chain of ``2k - 1`` copies, each outer triangle glued onto the previous inner triangle.

    The identification is ``v0 -> v5``, ``v1 -> v3``, ``v2 -> v4`` so the two directed triangles
    agree.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    base = build_blocker()
    if k == 1:
        return base
    base_inner = base.faces.find(_INNER_TRIANGLE)
    base_outer = base.faces.find(_OUTER_TRIANGLE)
    assert base_inner is not None and base_outer is not None
    assembly = _Assembly()
    previous = {v: v for v in range(base.graph.n)}
    n = base.graph.n
    for copy in range(2 * k - 1):
        if copy == 0:
            mapping = previous
        else:
            mapping = {0: previous[5], 1: previous[3], 2: previous[4]}
            for v in range(3, base.graph.n):
                mapping[v] = n
                n += 1
        for index, face in enumerate(base.faces.faces):
            if copy > 0 and index == base_outer:
                continue
            if copy < 2 * k - 2 and index == base_inner:
                continue
            assembly.faces.append(tuple(mapping[v] for v in face.walk))
        assembly.add_arcs((mapping[u], mapping[v]) for u, v in base.graph.arcs)
        previous = mapping
    bundle = assembly.bundle(n)
    logger.info("assembled chain", extra={"k": k, "copies": 2 * k - 1, "vertices": n})
    return bundle


class Catalog(StrEnum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"
    E = "e"


_CATALOG_A_FIXED: tuple[Arc, ...] = (
    (0, 3), (1, 0), (1, 4), (2, 1), (3, 2), (4, 3), (4, 5), (5, 2),
    (11, 8), (8, 9), (12, 9), (9, 10), (10, 11), (11, 12), (13, 12), (10, 13),
    (10, 2), (1, 9),
)  # fmt: skip
_CATALOG_A_BOLD: tuple[Arc, ...] = ((0, 6), (6, 4), (3, 7), (7, 5), (8, 14), (14, 12), (11, 15), (15, 13))
_CATALOG_C: tuple[Arc, ...] = ((1, 0), (3, 2), (0, 3), (2, 1), (3, 0), (1, 2))
_CATALOG_D: tuple[Arc, ...] = ((3, 2), (2, 5), (2, 0), (4, 3), (5, 4), (5, 1), (4, 7), (3, 6))
_CATALOG_E_LABELS = ("A", "B", "C", "D", "E", "F", "H", "I", "J", "K", "L", "M")
_CATALOG_E_FIXED: tuple[Arc, ...] = (
    (0, 9), (9, 1), (1, 0), (11, 3), (3, 2), (2, 11), (8, 7), (7, 6), (6, 8), (4, 10), (10, 5), (5, 4),
)  # fmt: skip
_CATALOG_E_BOLD: tuple[Arc, ...] = ((4, 3), (10, 8), (7, 11), (6, 9), (2, 1), (5, 0))


def bold_edge_count(which: str | Catalog) -> int:
    kind = Catalog(which)
    if kind == Catalog.A:
        return len(_CATALOG_A_BOLD)
    if kind == Catalog.E:
        return len(_CATALOG_E_BOLD)
    return 0


def _oriented_bold(bold: Sequence[Arc], index: int) -> list[Arc]:
    return [(v, u) if index >> bit & 1 else (u, v) for bit, (u, v) in enumerate(bold)]


def catalog_graph(which: str | Catalog, bold_orientation: int = 0) -> Graph:
    """One graph of the no-CAI catalog; bit ``j`` of ``bold_orientation`` reverses bold edge ``j``."""
    try:
        kind = Catalog(which)
    except ValueError:
        raise ValueError(f"unknown catalog graph: {which}") from None
    count = bold_edge_count(kind)
    if not 0 <= bold_orientation < 2**count:
        raise ValueError(f"bold orientation index must lie in 0..{2**count - 1}, got {bold_orientation}")
    if kind == Catalog.A:
        labels = [str(i) for i in range(8)] + [f"{i}'" for i in range(8)]
        return Graph.directed(16, [*_CATALOG_A_FIXED, *_oriented_bold(_CATALOG_A_BOLD, bold_orientation)], labels)
    if kind == Catalog.B:
        return hypercube()[0]
    if kind == Catalog.C:
        return Graph.directed(4, _CATALOG_C)
    if kind == Catalog.D:
        return Graph.directed(8, _CATALOG_D)
    arcs = [*_CATALOG_E_FIXED, *_oriented_bold(_CATALOG_E_BOLD, bold_orientation)]
    return Graph.directed(12, arcs, _CATALOG_E_LABELS)


@dataclass(frozen=True)
class CatalogSweep:
    which: Catalog
    orientations: int
    unsat: int
    found: tuple[int, ...]
    budget_exceeded: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.unsat == self.orientations


def _solve_orientation(task: tuple[Catalog, int, int | None]) -> tuple[int, Outcome]:
    which, index, node_budget = task
    result = solve_cai(catalog_graph(which, index), SolveOptions(node_budget=node_budget))
    return index, result.outcome


def sweep_catalog(which: str | Catalog, worker_count: int = 1, node_budget: int | None = None) -> CatalogSweep:
    """Run the exact solver on every bold orientation of one catalog graph."""
    kind = Catalog(which)
    tasks = [(kind, index, node_budget) for index in range(2 ** bold_edge_count(kind))]
    if worker_count > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=worker_count) as pool:
            results = sorted(pool.imap_unordered(_solve_orientation, tasks))
    else:
        results = [_solve_orientation(task) for task in tasks]
    found = tuple(index for index, outcome in results if outcome == Outcome.FOUND)
    budget = tuple(index for index, outcome in results if outcome == Outcome.BUDGET_EXCEEDED)
    if found:
        logger.error("catalog graph has a partition", extra={"which": str(kind), "orientations": list(found)})
    return CatalogSweep(kind, len(tasks), len(tasks) - len(found) - len(budget), found, budget)


@dataclass(frozen=True)
class CertificationReport:
    class_index: int
    vertices: int
    outcome: Outcome
    nodes: int
    refutation: CaiPartition | None


def certify_class_deletion(class_index: int, node_budget: int, worker_count: int = 1) -> CertificationReport:
    """Budgeted exact search for a CAI-partition of the 138-vertex triangulation minus one class.

    Exhausting the budget is the expected outcome; a Found result has already been re-verified by
    the solver and is reported as a refutation.
    """
    bundle = build_blocker()
    h, _ = delete_class(bundle, class_index)
    removed = bundle.tripartition.members(class_index)
    kept = [v for v in range(bundle.graph.n) if v not in removed]
    result = solve_cai(h, SolveOptions(node_budget=node_budget, worker_count=worker_count))
    refutation = None
    if result.found:
        assert isinstance(result.partition, CaiPartition)
        refutation = CaiPartition.of((kept[v] for v in result.partition.a), (kept[v] for v in result.partition.i))
        logger.error("budgeted search refuted the construction", extra={"class": class_index})
    return CertificationReport(class_index, h.n, result.outcome, result.nodes, refutation)
