"""Construction of the smaller graph(s) H for every reducible configuration.

Rotations are edited locally: a shortcut arc takes the rotational slot of the deleted incidence at
both of its endpoints and contractions splice the rings around the contracted set. Every
subproblem is re-validated against the class before it is handed back.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx

from caipart.core.classes import ClassPredicate, class_f_violations
from caipart.core.embedding import RotationEditor, RotationSystem, embed
from caipart.core.errors import ClassViolation, PlanarityViolation
from caipart.core.graph import Arc, Graph, reversed_graph
from caipart.solvers.reduction.matches import ConfigKind, ConfigMatch, oriented, separating_bridge

logger = logging.getLogger("caipart.reduce")


@dataclass(frozen=True)
class Subproblem:
    graph: Graph
    rotation: RotationSystem
    vertex_map: Mapping[int, int]
    named: Mapping[str, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.graph.n + self.graph.edge_count


@dataclass(frozen=True)
class ReductionStep:
    """``vertex_map`` of each subproblem sends ids of ``graph`` to ids of that subproblem.

    ``named`` holds the vertices that exist only in the subproblem (``a*``, ``b*``, ``z``).
    ``added_arcs`` lists new arcs in the id space of ``graph`` extended by those new vertices, oriented
    as in ``working``. ``region`` and ``bridge`` describe the side whose arcs were reversed, if any.
    """

    graph: Graph
    rotation: RotationSystem
    match: ConfigMatch
    subproblems: tuple[Subproblem, ...]
    added_arcs: tuple[Arc, ...] = ()
    note: str = ""
    region: frozenset[int] = frozenset()
    bridge: Arc | None = None

    @property
    def working(self) -> Graph:
        """``graph`` oriented the way the roles of the match read it."""
        return reversed_graph(self.graph) if self.match.symmetry.reversed else self.graph


class _Surgery:
    def __init__(self, g: Graph, rot: RotationSystem) -> None:
        self.g = g
        self.editor = RotationEditor(rot)
        self.arcs: set[Arc] = set(g.arcs)
        self.named: dict[str, int] = {}
        self.added: list[Arc] = []
        self.region: frozenset[int] = frozenset()
        self.bridge: Arc | None = None
        self._next = g.n

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs or (v, u) in self.arcs

    def fresh(self, name: str) -> int:
        v = self._next
        self._next += 1
        self.named[name] = v
        return v

    def delete(self, *vertices: int) -> None:
        gone = set(vertices)
        for v in vertices:
            self.editor.remove_vertex(v)
        self.arcs = {(u, v) for u, v in self.arcs if u not in gone and v not in gone}

    def add_arc(self, u: int, v: int) -> None:
        if self.adjacent(u, v):
            raise ClassViolation(f"new arc ({u}, {v}) duplicates an existing edge")
        self.arcs.add((u, v))
        self.added.append((u, v))

    def remove_edge(self, u: int, v: int) -> None:
        self.editor.remove_edge(u, v)
        self.arcs.discard((u, v))
        self.arcs.discard((v, u))

    def shortcut(self, path: Sequence[int], arc: Arc) -> None:
        """Replace the path by one arc between its ends; the interior vertices are deleted."""
        x, y = path[0], path[-1]
        self.editor.replace(x, path[1], y)
        self.editor.replace(y, path[-2], x)
        self.delete(*path[1:-1])
        self.add_arc(*arc)

    def contract(self, blob: Iterable[int], name: str) -> tuple[int, dict[int, list[bool]]]:
        """Identify ``blob`` into a new vertex; returns it and, per outside neighbor, whether each
        former arc left the blob. The caller re-attaches the arcs."""
        members = set(blob)
        new = self.fresh(name)
        leaving: dict[int, list[bool]] = {}
        for u, v in sorted(self.arcs):
            if u in members and v not in members:
                leaving.setdefault(v, []).append(True)
            elif v in members and u not in members:
                leaving.setdefault(u, []).append(False)
        self.editor.contract(members, new)
        self.arcs = {(u, v) for u, v in self.arcs if u not in members and v not in members}
        return new, leaving

    def attach(self, v: int, x: int, leaves: bool) -> None:
        self.arcs.add((v, x) if leaves else (x, v))

    def subdivide(self, x: int, y: int, name: str) -> None:
        z = self.fresh(name)
        self.editor.subdivide(x, y, z)
        forward = (x, y) in self.arcs
        self.arcs -= {(x, y), (y, x)}
        self.arcs |= {(x, z), (z, y)} if forward else {(y, z), (z, x)}
        self.added.extend([(x, z), (z, y)] if forward else [(y, z), (z, x)])

    def reverse_within(self, vertices: Iterable[int]) -> None:
        inside = set(vertices)
        self.arcs = {(v, u) if u in inside and v in inside else (u, v) for u, v in self.arcs}

    def finish(self) -> tuple[Subproblem, ...]:
        underlying = nx.Graph()
        underlying.add_nodes_from(self.editor.vertices())
        underlying.add_edges_from(self.arcs)
        parts = sorted((sorted(component) for component in nx.connected_components(underlying)), key=lambda c: c[0])
        return tuple(self._subproblem(part) for part in parts)

    def _subproblem(self, part: Sequence[int]) -> Subproblem:
        mapping = {old: new for new, old in enumerate(part)}
        arcs = [(mapping[u], mapping[v]) for u, v in self.arcs if u in mapping]
        labels = None
        if self.g.labels is not None:
            by_id = {v: name for name, v in self.named.items()}
            labels = [self.g.labels[old] if old < self.g.n else by_id[old] for old in part]
        h = Graph.directed(len(part), arcs, labels)
        rotation = {mapping[v]: [mapping[u] for u in self.editor.neighbors(v)] for v in part}
        named = {name: mapping[v] for name, v in self.named.items() if v in mapping}
        kept = {old: new for old, new in mapping.items() if old < self.g.n}
        return Subproblem(h, RotationSystem.from_mapping(rotation, len(part)), kept, named)


def _validated(sub: Subproblem, kind: ConfigKind, limit: int) -> Subproblem:
    if sub.size >= limit:
        raise ClassViolation(f"{kind} subproblem is not smaller ({sub.size} >= {limit})")
    failed = class_f_violations(sub.graph, sub.rotation)
    if failed == [ClassPredicate.PLANAR]:
        try:
            rotation = embed(sub.graph)
        except PlanarityViolation:
            raise ClassViolation(f"{kind} subproblem is not planar") from None
        logger.warning("local rotation edit failed, re-embedded", extra={"kind": str(kind), "n": sub.graph.n})
        sub = Subproblem(sub.graph, rotation, sub.vertex_map, sub.named)
        failed = class_f_violations(sub.graph, sub.rotation)
    if failed:
        raise ClassViolation(f"{kind} subproblem fails {', '.join(failed)}")
    return sub


Builder = Callable[[_Surgery], str]


def _build(g: Graph, rot: RotationSystem, m: ConfigMatch, build: Builder) -> ReductionStep:
    surgery = _Surgery(oriented(g, m.symmetry), rot)
    note = build(surgery)
    limit = g.n + g.edge_count
    subs = tuple(_validated(sub, m.kind, limit) for sub in surgery.finish())
    return ReductionStep(g, rot, m, subs, tuple(surgery.added), note, surgery.region, surgery.bridge)


def _adjacent_deg2(m: ConfigMatch) -> Builder:
    a0, b1, a2, b3 = m["a0"], m["b1"], m["a2"], m["b3"]

    def build(s: _Surgery) -> str:
        if s.g.adjacent(a0, b3):
            s.delete(b1, a2)
            return "adjacent"
        s.shortcut((a0, b1, a2, b3), (a0, b3) if s.g.has_arc(a0, b1) else (b3, a0))
        return "shortcut"

    return build


def _deg2_dist2(rot: RotationSystem, m: ConfigMatch) -> Builder:
    a0, b1, a2, b3, a4 = m["a0"], m["b1"], m["a2"], m["b3"], m["a4"]

    def build(s: _Surgery) -> str:
        anchor = a0 if rot.succ(a2, b1) == b3 else a2
        s.editor.replace(a4, b3, b1)
        s.delete(b3)
        s.editor.insert_after(b1, anchor, a4)
        s.add_arc(*((b1, a4) if s.g.has_arc(b3, a4) else (a4, b1)))
        return ""

    return build


def _triple_sharing_c4(m: ConfigMatch) -> Builder:
    blob = tuple(m[name] for name in ("a0", "a1", "b2", "a3", "b4", "a5", "b6"))

    def build(s: _Surgery) -> str:
        star, leaving = s.contract(blob, "a*")
        singles = [dirs[0] for dirs in leaving.values() if len(dirs) == 1]
        for x, dirs in leaving.items():
            if len(dirs) == 1:
                s.attach(star, x, dirs[0])
            else:
                # a merged arc points against the remaining one
                s.attach(star, x, not singles[0])
        return "merged" if len(leaving) < 3 else ""

    return build


def _twin_c4(m: ConfigMatch) -> Builder:
    def build(s: _Surgery) -> str:
        a_star, leaving = s.contract((m["a1"], m["b2"], m["a3"]), "a*")
        for x, dirs in leaving.items():
            s.attach(a_star, x, dirs[0])
        b_star, leaving = s.contract((m["b4"], m["a5"], m["b6"]), "b*")
        for x, dirs in leaving.items():
            if x == a_star:
                s.attach(b_star, x, m.variant == 2)
            else:
                s.attach(b_star, x, dirs[0])
        underlying = nx.Graph(list(s.arcs))
        if frozenset((a_star, b_star)) in {frozenset(edge) for edge in nx.bridges(underlying)}:
            s.remove_edge(a_star, b_star)
            return "bridge"
        return "parallel" if m.variant == 1 else "crossed"

    return build


def _separating_c4(m: ConfigMatch) -> Builder:
    a0, b1, a2, b3 = m["a0"], m["b1"], m["a2"], m["b3"]
    b0p, a1p, b2p, a3p = m["b0'"], m["a1'"], m["b2'"], m["a3'"]

    def build(s: _Surgery) -> str:
        if m.variant == 2:
            s.shortcut((a3p, b3, a0, b0p), (a3p, b0p))
            s.shortcut((b2p, a2, b1, a1p), (b2p, a1p))
            return "opposite"
        if s.g.has_arc(a2, b3):
            s.shortcut((b0p, a0, b3, a3p), (b0p, a3p))
            s.shortcut((b2p, a2, b1, a1p), (b2p, a1p))
            return "crossing"
        s.shortcut((b0p, a0, b1, a1p), (b0p, a1p))
        s.shortcut((a3p, b3, a2, b2p), (a3p, b2p))
        return "split"

    return build


def _plain_c4(m: ConfigMatch) -> Builder:
    a0, b1, a2, b3 = m["a0"], m["b1"], m["a2"], m["b3"]
    b0p, a1p, b2p, a3p = m["b0'"], m["a1'"], m["b2'"], m["a3'"]

    def bridgeless(s: _Surgery) -> str:
        s.shortcut((a3p, b3, a2, b2p), (a3p, b2p))
        s.shortcut((b0p, a0, b1, a1p), (b0p, a1p))
        return "bridgeless"

    def bridged(s: _Surgery) -> str:
        found = separating_bridge(s.g, (a0, b1, a2, b3), (b0p, a1p), (b2p, a3p))
        if found is None:
            raise ClassViolation("no 3-edge-cut through the 4-cycle")
        side, (x, y) = found
        s.region = side
        s.bridge = (x, y) if s.g.has_arc(x, y) else (y, x)
        s.shortcut((a3p, b3, a0, b0p), (a3p, b0p))
        s.shortcut((a1p, b1, a2, b2p), (a1p, b2p))
        s.reverse_within(side)
        return "bridged"

    def general(s: _Surgery) -> str:
        s.shortcut((a1p, b1, a2, b2p), (a1p, b2p))
        s.shortcut((b0p, a0, b3, a3p), (a3p, b0p) if s.g.has_arc(a3p, b3) else (b0p, a3p))
        return "general"

    return {1: bridgeless, 2: bridged}.get(m.variant, general)


def _pair_arc(g: Graph, node: int, t: int, w: int) -> Arc:
    return (t, w) if g.has_arc(t, node) and g.has_arc(node, w) else (w, t)


def _deg2_pair_cut(m: ConfigMatch) -> Builder:
    u, v = m["u"], m["v"]

    def build(s: _Surgery) -> str:
        g = s.g
        rest = g.nx_underlying.subgraph(set(range(g.n)) - {u, v})
        note = "disconnected"
        if nx.is_connected(rest):
            bridges = sorted(nx.bridges(rest))
            if not bridges:
                raise ClassViolation("pair cut without a bridge")
            x, y = bridges[0]
            s.subdivide(*((x, y) if g.has_arc(x, y) else (y, x)), "z")
            note = "bridge"
        s.shortcut((m["t"], u, m["w"]), _pair_arc(g, u, m["t"], m["w"]))
        s.shortcut((m["t'"], v, m["w'"]), _pair_arc(g, v, m["t'"], m["w'"]))
        return note

    return build


def _deg2_facial_dist3(m: ConfigMatch) -> Builder:
    a0, b1, a4, b5 = m["a0"], m["b1"], m["a4"], m["b5"]

    def build(s: _Surgery) -> str:
        if s.g.adjacent(a0, b5):
            s.delete(b1, a4)
            return "adjacent"
        s.editor.replace(a0, b1, b5)
        s.editor.replace(b5, a4, a0)
        s.delete(b1, a4)
        s.add_arc(a0, b5)
        return "shortcut"

    return build


def _delete_one(m: ConfigMatch, name: str) -> Builder:
    def build(s: _Surgery) -> str:
        s.delete(m[name])
        return ""

    return build


def _is_cube_core(m: ConfigMatch) -> bool:
    return m.kind == ConfigKind.TRIPLE_SHARING_C4 and len({m["b1'"], m["b3'"], m["b5'"]}) == 1


def reduce(g: Graph, rot: RotationSystem, m: ConfigMatch) -> ReductionStep:
    """Build the validated subproblem(s) for ``m``; raises ClassViolation when one fails the class."""
    if m.kind in (ConfigKind.BASE_CYCLE, ConfigKind.BASE_SMALL):
        raise ValueError(f"{m.kind} is a base case and has no reduction")
    if _is_cube_core(m):
        return ReductionStep(g, rot, m, (), (), "cube")
    table: dict[ConfigKind, Callable[[], Builder]] = {
        ConfigKind.ADJACENT_DEG2: lambda: _adjacent_deg2(m),
        ConfigKind.DEG2_ON_C4: lambda: _delete_one(m, "a0"),
        ConfigKind.DEG2_DIST2: lambda: _deg2_dist2(rot, m),
        ConfigKind.TRIPLE_SHARING_C4: lambda: _triple_sharing_c4(m),
        ConfigKind.TWIN_C4: lambda: _twin_c4(m),
        ConfigKind.SEPARATING_C4: lambda: _separating_c4(m),
        ConfigKind.PLAIN_C4: lambda: _plain_c4(m),
        ConfigKind.DEG2_PAIR_CUT: lambda: _deg2_pair_cut(m),
        ConfigKind.DEG2_FACIAL_DIST3: lambda: _deg2_facial_dist3(m),
        ConfigKind.DEG2_TWO_HEX_FACES: lambda: _delete_one(m, "a1'"),
        ConfigKind.BAD_DEG2_ON_OCT_FACE: lambda: _delete_one(m, "a2"),
    }
    step = _build(g, rot, m, table[m.kind]())
    logger.debug(
        "reduced",
        extra={
            "kind": str(m.kind),
            "symmetry": m.symmetry.describe(),
            "parts": len(step.subproblems),
            "sizes": [s.size for s in step.subproblems],
        },
    )
    return step
