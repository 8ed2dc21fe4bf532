from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from caipart.core.errors import InconsistentRotation, PlanarityViolation
from caipart.core.graph import Arc, Graph, is_connected, underlying_degree


@dataclass(frozen=True)
class RotationSystem:
    """Clockwise cyclic neighbor order at every vertex of a planar embedding."""

    order: tuple[tuple[int, ...], ...]

    @classmethod
    def from_mapping(cls, rotation: Mapping[int, Sequence[int]], n: int) -> RotationSystem:
        return cls(tuple(tuple(rotation.get(v, ())) for v in range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def _position(self) -> tuple[dict[int, int], ...]:
        return tuple({u: i for i, u in enumerate(ring)} for ring in self.order)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.order[v]

    def succ(self, v: int, u: int) -> int:
        ring = self.order[v]
        return ring[(self._position[v][u] + 1) % len(ring)]

    def pred(self, v: int, u: int) -> int:
        ring = self.order[v]
        return ring[(self._position[v][u] - 1) % len(ring)]

    def check(self, g: Graph) -> None:
        if self.n != g.n:
            raise InconsistentRotation(f"rotation covers {self.n} vertices, graph has {g.n}")
        for v in range(g.n):
            ring = self.order[v]
            if len(set(ring)) != len(ring):
                raise InconsistentRotation(f"vertex {v} lists a neighbor twice: {list(ring)}")
            if set(ring) != set(g.neighbors(v)):
                missing = sorted(set(g.neighbors(v)) - set(ring))
                extra = sorted(set(ring) - set(g.neighbors(v)))
                raise InconsistentRotation(
                    f"rotation at {v} does not match its edges (missing {missing}, extra {extra})"
                )

    def mirror(self) -> RotationSystem:
        return RotationSystem(tuple(tuple(reversed(ring)) for ring in self.order))

    def relabel(self, mapping: Mapping[int, int], n: int) -> RotationSystem:
        rotation: dict[int, list[int]] = {}
        for old, ring in enumerate(self.order):
            if old in mapping:
                rotation[mapping[old]] = [mapping[u] for u in ring if u in mapping]
        return RotationSystem.from_mapping(rotation, n)

    def as_lists(self) -> dict[int, list[int]]:
        return {v: list(ring) for v, ring in enumerate(self.order)}


@dataclass(frozen=True)
class Face:
    """Closed walk ``walk[0] -> walk[1] -> ... -> walk[0]``, started at its minimal dart."""

    walk: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.walk)

    @property
    def darts(self) -> tuple[Arc, ...]:
        k = len(self.walk)
        return tuple((self.walk[i], self.walk[(i + 1) % k]) for i in range(k))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.walk)

    @property
    def key(self) -> Arc | None:
        return self.darts[0] if self.walk else None


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[Face, ...]
    _dart_face: dict[Arc, int] = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.faces)

    def __getitem__(self, index: int) -> Face:
        return self.faces[index]

    def face_of(self, u: int, v: int) -> int:
        return self._dart_face[(u, v)]

    def faces_at(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, face in enumerate(self.faces) if v in face.vertices)

    def find(self, vertices: Iterable[int]) -> int | None:
        target = frozenset(vertices)
        for i, face in enumerate(self.faces):
            if face.vertices == target:
                return i
        return None


def _canonical_walk(walk: Sequence[int]) -> tuple[int, ...]:
    k = len(walk)
    start = min(range(k), key=lambda i: (walk[i], walk[(i + 1) % k]))
    return tuple(walk[start:]) + tuple(walk[:start])


def trace_faces(g: Graph, rot: RotationSystem) -> FaceSet:
    rot.check(g)
    if g.edge_count == 0:
        if g.n > 1:
            raise PlanarityViolation("face tracing requires a connected graph")
        return FaceSet(tuple(Face(()) for _ in range(g.n)))
    if not is_connected(g):
        raise PlanarityViolation("face tracing requires a connected graph")

    visited: set[Arc] = set()
    walks: list[tuple[int, ...]] = []
    for u in range(g.n):
        for v in rot.neighbors(u):
            if (u, v) in visited:
                continue
            walk: list[int] = []
            dart = (u, v)
            while dart not in visited:
                visited.add(dart)
                walk.append(dart[0])
                tail, head = dart
                dart = (head, rot.succ(head, tail))
            if dart != (u, v):
                raise InconsistentRotation(f"face walk from dart {(u, v)} does not close")
            walks.append(_canonical_walk(walk))

    euler = g.n - g.edge_count + len(walks)
    if euler != 2:
        raise PlanarityViolation(f"V - E + F = {euler}, expected 2 (V={g.n}, E={g.edge_count}, F={len(walks)})")
    faces = tuple(Face(walk) for walk in sorted(walks, key=lambda w: (w[0], w[1])))
    dart_face = {dart: i for i, face in enumerate(faces) for dart in face.darts}
    return FaceSet(faces, dart_face)


def embed(g: Graph) -> RotationSystem:
    """Some planar rotation system of ``g``; raises PlanarityViolation when none exists."""
    is_planar, embedding = nx.check_planarity(g.nx_underlying)
    if not is_planar:
        raise PlanarityViolation("graph is not planar")
    return RotationSystem(tuple(tuple(embedding.neighbors_cw_order(v)) for v in range(g.n)))


def rotation_from_faces(faces: Iterable[Sequence[int]], n: int) -> RotationSystem:
    """Rotation whose traced faces are the given consistently oriented face cycles."""
    successor: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for cycle in faces:
        k = len(cycle)
        for i in range(k):
            prev, here, nxt = cycle[i - 1], cycle[i], cycle[(i + 1) % k]
            if prev in successor[here]:
                raise InconsistentRotation(f"dart ({prev}, {here}) appears on two faces")
            successor[here][prev] = nxt
    rotation: dict[int, list[int]] = {}
    for v in range(n):
        table = successor[v]
        if not table:
            rotation[v] = []
            continue
        start = min(table)
        ring = [start]
        current = table[start]
        while current != start:
            if current not in table or len(ring) > len(table):
                raise InconsistentRotation(f"faces around vertex {v} do not close into one cycle")
            ring.append(current)
            current = table[current]
        if len(ring) != len(table):
            raise InconsistentRotation(f"faces around vertex {v} form more than one cycle")
        rotation[v] = ring
    return RotationSystem.from_mapping(rotation, n)


def facial_distance(faces: FaceSet, g: Graph, f: int, u: int, v: int) -> int:
    vertices = faces[f].vertices
    if u not in vertices or v not in vertices:
        raise ValueError(f"vertices {u}, {v} are not both on face {f}")
    return nx.shortest_path_length(g.nx_underlying.subgraph(vertices), u, v)


@dataclass(frozen=True)
class DischargeReport:
    vertex_charge: dict[int, int]
    face_charge: dict[int, int]
    final_vertex_charge: dict[int, int]
    final_face_charge: dict[int, int]
    bad_vertices: frozenset[int]

    @property
    def initial_total(self) -> int:
        return sum(self.vertex_charge.values()) + sum(self.face_charge.values())

    @property
    def final_total(self) -> int:
        return sum(self.final_vertex_charge.values()) + sum(self.final_face_charge.values())

    @property
    def negative(self) -> tuple[tuple[str, int, int], ...]:
        items = [("vertex", v, c) for v, c in self.final_vertex_charge.items() if c < 0]
        items.extend(("face", f, c) for f, c in self.final_face_charge.items() if c < 0)
        return tuple(items)


def discharge_audit(g: Graph, faces: FaceSet) -> DischargeReport:
    """Initial charges ``2d(v) - 6`` and ``d(f) - 6``, then 8+-faces send charge to 2-vertices."""
    if not is_connected(g):
        raise ValueError("discharge audit requires a connected graph")
    vertex_charge = {v: 2 * underlying_degree(g, v) - 6 for v in range(g.n)}
    face_charge = {i: face.degree - 6 for i, face in enumerate(faces.faces)}
    two_vertices = {v for v in range(g.n) if underlying_degree(g, v) == 2}
    bad = frozenset(v for v in two_vertices if any(faces[i].degree == 6 for i in faces.faces_at(v)))

    final_vertex = dict(vertex_charge)
    final_face = dict(face_charge)
    for i, face in enumerate(faces.faces):
        if face.degree < 8:
            continue
        for v in face.vertices & two_vertices:
            gift = 2 if v in bad else 1
            final_face[i] -= gift
            final_vertex[v] += gift
    return DischargeReport(vertex_charge, face_charge, final_vertex, final_face, bad)


class RotationEditor:
    """Mutable copy of a rotation for local surgery; ``build`` relabels into a RotationSystem."""

    def __init__(self, rot: RotationSystem) -> None:
        self._rings: dict[int, list[int]] = rot.as_lists()

    def neighbors(self, v: int) -> list[int]:
        return self._rings[v]

    def succ(self, v: int, u: int) -> int:
        ring = self._rings[v]
        return ring[(ring.index(u) + 1) % len(ring)]

    def remove_vertex(self, v: int) -> None:
        for u in self._rings.pop(v):
            if u in self._rings and v in self._rings[u]:
                self._rings[u].remove(v)

    def remove_edge(self, u: int, v: int) -> None:
        self._rings[u].remove(v)
        self._rings[v].remove(u)

    def replace(self, v: int, old: int, new: int) -> None:
        ring = self._rings[v]
        ring[ring.index(old)] = new

    def insert_after(self, v: int, anchor: int, new: int) -> None:
        ring = self._rings[v]
        ring.insert(ring.index(anchor) + 1, new)

    def insert_before(self, v: int, anchor: int, new: int) -> None:
        ring = self._rings[v]
        ring.insert(ring.index(anchor), new)

    def add_vertex(self, v: int, ring: Sequence[int]) -> None:
        if v in self._rings:
            raise InconsistentRotation(f"vertex {v} already present")
        self._rings[v] = list(ring)

    def subdivide(self, u: int, v: int, new: int) -> None:
        self.replace(u, v, new)
        self.replace(v, u, new)
        self.add_vertex(new, [u, v])

    def contract(self, blob: Iterable[int], new: int) -> list[int]:
        """Identify a connected vertex set into ``new``; parallel edges keep their first copy.

        The merged ring lists the edges leaving the blob in the order met while walking around its
        boundary. Returns that order before parallel copies are dropped.
        """
        members = set(blob)
        outgoing = [(s, x) for s in sorted(members) for x in self._rings[s] if x not in members]
        if not outgoing:
            raise InconsistentRotation("contracted set has no outside neighbor")
        start = outgoing[0]
        emitted = [start]
        s, x = start
        for _ in range(4 * sum(len(self._rings[m]) for m in members) + 4):
            y = self.succ(s, x)
            if y in members:
                s, x = y, s
                continue
            x = y
            if (s, x) == start:
                break
            emitted.append((s, x))
        else:
            raise InconsistentRotation("boundary walk around contracted set does not close")
        if len(emitted) != len(outgoing):
            raise InconsistentRotation("contracted set is not bounded by a single walk")

        ring: list[int] = []
        for s, x in emitted:
            if x in ring:
                self._rings[x].remove(s)
            else:
                ring.append(x)
                self.replace(x, s, new)
        for m in members:
            del self._rings[m]
        self._rings[new] = ring
        return [x for _, x in emitted]

    def vertices(self) -> list[int]:
        return sorted(self._rings)

    def build(self, mapping: Mapping[int, int], n: int) -> RotationSystem:
        rotation = {mapping[v]: [mapping[u] for u in ring] for v, ring in self._rings.items()}
        return RotationSystem.from_mapping(rotation, n)
