"""Eulerian triangulations and their bipartite class-deleted graphs, in both directions."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import networkx as nx

from caipart.core.classes import ClassPredicate, class_f_violations
from caipart.core.embedding import FaceSet, RotationEditor, RotationSystem, trace_faces
from caipart.core.errors import ClassViolation, ColoringConflict, NotInClass
from caipart.core.graph import Arc, Graph, is_eulerian_digraph, is_oriented, rebuild, underlying_degree
from caipart.core.partition import Tripartition, verify_tripartition

logger = logging.getLogger("caipart.duality")


@dataclass(frozen=True)
class TriangulationBundle:
    graph: Graph
    rotation: RotationSystem
    faces: FaceSet
    tripartition: Tripartition

    def class_of(self, v: int) -> int:
        return self.tripartition.color[v]


def tripartition(t: Graph, rot: RotationSystem) -> Tripartition:
    """The proper 3-coloring of an Eulerian triangulation, propagated face by face from vertex 0.

    Vertex 0 gets color 0 and its smallest neighbor color 1. Faces are visited breadth-first
    across shared edges; the third vertex of each face takes the color its edge leaves free.
    """
    faces = trace_faces(t, rot)
    if t.n < 3 or any(face.degree != 3 for face in faces.faces):
        raise ColoringConflict("graph is not a triangulation")
    color = [-1] * t.n
    seed = min(t.neighbors(0))
    color[0], color[seed] = 0, 1
    start = faces.face_of(0, seed)
    visited = {start}
    queue: deque[tuple[int, Arc]] = deque([(start, (0, seed))])
    while queue:
        index, (a, b) = queue.popleft()
        walk = faces[index].walk
        (w,) = (x for x in walk if x != a and x != b)
        want = 3 - color[a] - color[b]
        if color[w] == -1:
            color[w] = want
        elif color[w] != want:
            raise ColoringConflict(f"vertex {w} needs colors {color[w]} and {want}")
        for x, y in faces[index].darts:
            across = faces.face_of(y, x)
            if across not in visited:
                visited.add(across)
                queue.append((across, (y, x)))
    if -1 in color:
        raise ColoringConflict(f"vertex {color.index(-1)} was never reached")
    result = Tripartition(tuple(color))
    if not verify_tripartition(t, result):
        raise ColoringConflict("propagated coloring is not proper")
    return result


def triangulation_bundle(t: Graph, rot: RotationSystem) -> TriangulationBundle:
    faces = trace_faces(t, rot)
    return TriangulationBundle(t, rot, faces, tripartition(t, rot))


def eulerian_triangulation_problems(bundle: TriangulationBundle) -> list[str]:
    t = bundle.graph
    problems: list[str] = []
    if any(face.degree != 3 for face in bundle.faces.faces):
        problems.append("a face is not a triangle")
    if not verify_tripartition(t, bundle.tripartition):
        problems.append("tripartition is not proper")
    if any(underlying_degree(t, v) % 2 for v in range(t.n)):
        problems.append("a vertex has odd degree")
    if t.is_directed:
        if not is_oriented(t):
            problems.append("graph has a digon")
        if not is_eulerian_digraph(t):
            problems.append("in-degree and out-degree differ somewhere")
    return problems


def delete_class(bundle: TriangulationBundle, index: int) -> tuple[Graph, RotationSystem]:
    """``t - I_index`` with the inherited rotation; validated bipartite, planar and 2-connected."""
    t = bundle.graph
    removed = bundle.tripartition.members(index)
    h, mapping = rebuild(t, (v for v in range(t.n) if v not in removed))
    rot = bundle.rotation.relabel(mapping, h.n)
    skip = {ClassPredicate.SUBCUBIC, ClassPredicate.DIRECTED}
    if not t.is_directed or not is_oriented(t):
        skip.add(ClassPredicate.ORIENTED)
    failed = [p for p in class_f_violations(h, rot) if p not in skip]
    if failed:
        raise NotInClass(failed[0], ", ".join(failed))
    return h, rot


def eulerian_orient(g: Graph) -> Graph:
    """Orient an even-degree graph so every vertex is balanced, one Euler circuit per component."""
    if g.is_directed:
        raise ValueError("eulerian_orient requires an undirected graph")
    odd = [v for v in range(g.n) if underlying_degree(g, v) % 2]
    if odd:
        raise ValueError(f"vertices of odd degree: {odd}")
    arcs: list[Arc] = []
    underlying = g.nx_underlying
    for component in nx.connected_components(underlying):
        if len(component) < 2:
            continue
        arcs.extend(nx.eulerian_circuit(underlying.subgraph(component), source=min(component)))
    return Graph.directed(g.n, arcs, g.labels)


def _check_up_input(h: Graph, rot: RotationSystem) -> FaceSet:
    if not h.is_directed:
        raise NotInClass(ClassPredicate.DIRECTED)
    failed = [p for p in class_f_violations(h, rot) if p != ClassPredicate.SUBCUBIC]
    if failed:
        raise NotInClass(failed[0], ", ".join(failed))
    return trace_faces(h, rot)


def triangulate_up(h: Graph, rot: RotationSystem) -> TriangulationBundle:
    """Put an apex in every face of ``h`` and orient the new edges into an Eulerian triangulation.

    Apex of face ``k`` gets id ``h.n + k``. Against a face, an old vertex whose two boundary arcs
    both leave it is a source and receives an arc from the apex; a sink sends one. The remaining
    apex edges form an even-degree graph and get an Eulerian orientation.
    """
    faces = _check_up_input(h, rot)
    editor = RotationEditor(rot)
    forced: list[Arc] = []
    free: list[Arc] = []
    for k, face in enumerate(faces.faces):
        apex = h.n + k
        walk = face.walk
        d = len(walk)
        editor.add_vertex(apex, list(reversed(walk)))
        for i, v in enumerate(walk):
            prev, nxt = walk[i - 1], walk[(i + 1) % d]
            editor.insert_after(v, prev, apex)
            if h.has_arc(v, prev) and h.has_arc(v, nxt):
                forced.append((apex, v))
            elif h.has_arc(prev, v) and h.has_arc(nxt, v):
                forced.append((v, apex))
            else:
                free.append((min(v, apex), max(v, apex)))

    n = h.n + len(faces)
    balanced = eulerian_orient(Graph.undirected(n, free))
    labels = (*h.labels, *(f"f{k}" for k in range(len(faces)))) if h.labels is not None else None
    t = Graph.directed(n, [*h.arcs, *forced, *balanced.arcs], labels)
    t_rot = editor.build({v: v for v in range(n)}, n)
    bundle = triangulation_bundle(t, t_rot)
    problems = eulerian_triangulation_problems(bundle)
    if problems:
        raise ClassViolation(f"apex triangulation is invalid: {'; '.join(problems)}")
    logger.debug("triangulated", extra={"n": h.n, "faces": len(faces), "vertices": n})
    return bundle
