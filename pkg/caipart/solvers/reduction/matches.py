"""Detection of the reducible configurations of a minimal planar bipartite subcubic oriented graph.

In role names ``a`` and ``b`` vertices alternate along the configuration and a trailing apostrophe
marks the outside neighbor of the vertex with that index.
A match is normalized before it is returned: its roles may refer to the reversed graph or to a
relabeled image of the configuration, and ``ConfigMatch.symmetry`` records which.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations

import networkx as nx

from caipart.core.embedding import FaceSet, RotationSystem, trace_faces
from caipart.core.errors import NoConfiguration
from caipart.core.graph import Graph, reversed_graph, underlying_degree

DEFAULT_BASE_SIZE = 12


class ConfigKind(StrEnum):
    ADJACENT_DEG2 = "adjacent_deg2"
    DEG2_ON_C4 = "deg2_on_c4"
    DEG2_DIST2 = "deg2_dist2"
    TRIPLE_SHARING_C4 = "triple_sharing_c4"
    TWIN_C4 = "twin_c4"
    SEPARATING_C4 = "separating_c4"
    PLAIN_C4 = "plain_c4"
    DEG2_PAIR_CUT = "deg2_pair_cut"
    DEG2_FACIAL_DIST3 = "deg2_facial_dist3"
    DEG2_TWO_HEX_FACES = "deg2_two_hex_faces"
    BAD_DEG2_ON_OCT_FACE = "bad_deg2_on_oct_face"
    BASE_CYCLE = "base_cycle"
    BASE_SMALL = "base_small"


@dataclass(frozen=True)
class Symmetry:
    """Image a match was normalized to: ``reversed`` flips every arc, ``relabel`` names the role map."""

    reversed: bool = False
    relabel: str = "identity"

    def describe(self) -> str:
        return f"{'reversed,' if self.reversed else ''}{self.relabel}"


IDENTITY = Symmetry()


@dataclass(frozen=True)
class ConfigMatch:
    kind: ConfigKind
    roles: Mapping[str, int] = field(default_factory=dict)
    faces: tuple[int, ...] = ()
    variant: int = 0
    symmetry: Symmetry = IDENTITY

    def __getitem__(self, name: str) -> int:
        return self.roles[name]

    def vertices(self) -> frozenset[int]:
        return frozenset(self.roles.values())

    def describe_roles(self) -> str:
        return ",".join(f"{name}:{v}" for name, v in self.roles.items()) or "-"


def oriented(g: Graph, symmetry: Symmetry) -> Graph:
    """The graph the roles of a match refer to: ``g`` itself or its reversal."""
    return reversed_graph(g) if symmetry.reversed else g


def four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """Every 4-cycle of the underlying graph once, starting at its smallest vertex."""
    found: set[tuple[int, int, int, int]] = set()
    for v in range(g.n):
        for x, y in combinations(g.neighbors(v), 2):
            for w in set(g.neighbors(x)) & set(g.neighbors(y)):
                if w == v:
                    continue
                found.add(_canonical_cycle((v, x, w, y)))
    return sorted(found)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, int, int, int]:
    k = cycle.index(min(cycle))
    rotated = tuple(cycle[k:]) + tuple(cycle[:k])
    if rotated[3] < rotated[1]:
        rotated = (rotated[0], rotated[3], rotated[2], rotated[1])
    return rotated  # type: ignore[return-value]


def _other(g: Graph, v: int, excluded: Sequence[int]) -> int | None:
    rest = [u for u in g.neighbors(v) if u not in excluded]
    return rest[0] if len(rest) == 1 else None


def _third(g: Graph, v: int, excluded: Sequence[int]) -> int:
    rest = [u for u in g.neighbors(v) if u not in excluded]
    return rest[0]


def _common_neighbor(g: Graph, x: int, y: int, excluded: Sequence[int]) -> int | None:
    common = sorted((set(g.neighbors(x)) & set(g.neighbors(y))) - set(excluded))
    return common[0] if common else None


def _degree_two(g: Graph) -> list[int]:
    return [v for v in range(g.n) if underlying_degree(g, v) == 2]


def _find_adjacent_deg2(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for b1, a2 in g.edges:
        if underlying_degree(g, b1) != 2 or underlying_degree(g, a2) != 2:
            continue
        a0 = _other(g, b1, (a2,))
        b3 = _other(g, a2, (b1,))
        if a0 is None or b3 is None or a0 == b3:
            continue
        return ConfigMatch(ConfigKind.ADJACENT_DEG2, {"a0": a0, "b1": b1, "a2": a2, "b3": b3})
    return None


def _find_deg2_on_c4(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for a0 in _degree_two(g):
        b1, b3 = g.neighbors(a0)
        a2 = _common_neighbor(g, b1, b3, (a0,))
        if a2 is not None:
            return ConfigMatch(ConfigKind.DEG2_ON_C4, {"a0": a0, "b1": b1, "a2": a2, "b3": b3})
    return None


def _find_deg2_dist2(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    two = set(_degree_two(g))
    for a2 in range(g.n):
        if underlying_degree(g, a2) != 3:
            continue
        close = [b for b in g.neighbors(a2) if b in two]
        for b1, b3 in combinations(close, 2):
            a0 = _other(g, b1, (a2,))
            a4 = _other(g, b3, (a2,))
            b2p = _other(g, a2, (b1, b3))
            if a0 is None or a4 is None or b2p is None or a0 == a4:
                continue
            roles = {"a0": a0, "b1": b1, "a2": a2, "b3": b3, "a4": a4, "b2'": b2p}
            return ConfigMatch(ConfigKind.DEG2_DIST2, roles)
    return None


def _all_cubic(g: Graph, vertices: Sequence[int]) -> bool:
    return all(underlying_degree(g, v) == 3 for v in vertices)


def _find_triple_sharing_c4(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for a0 in range(g.n):
        if underlying_degree(g, a0) != 3:
            continue
        b2, b4, b6 = g.neighbors(a0)
        a3 = _common_neighbor(g, b2, b4, (a0,))
        a5 = _common_neighbor(g, b4, b6, (a0,))
        a1 = _common_neighbor(g, b2, b6, (a0,))
        if a1 is None or a3 is None or a5 is None or len({a1, a3, a5}) != 3:
            continue
        if not _all_cubic(g, (a1, a3, a5, b2, b4, b6)):
            continue
        b1p = _other(g, a1, (b2, b6))
        b3p = _other(g, a3, (b2, b4))
        b5p = _other(g, a5, (b4, b6))
        if b1p is None or b3p is None or b5p is None:
            continue
        roles = {
            "a0": a0, "a1": a1, "b2": b2, "a3": a3, "b4": b4, "a5": a5, "b6": b6,
            "b1'": b1p, "b3'": b3p, "b5'": b5p,
        }  # fmt: skip
        return ConfigMatch(ConfigKind.TRIPLE_SHARING_C4, roles)
    return None


_TWIN_SWAP = {"a1": "a3", "b6": "b4", "b1'": "b3'", "a6'": "a4'"}


def _twin_image(down: tuple[bool, bool, bool]) -> tuple[bool, bool, int]:
    """Reversal, end swap and variant that make the first rung point down; variant 1 when the outer
    rungs agree, otherwise 2 with the middle rung turned up like the last one."""
    first, middle, last = down
    if first == last:
        return not first, False, 1
    if middle == last:
        return not first, False, 2
    return not last, True, 2


def _find_twin_c4(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for p, q in g.edges:
        rungs = [
            (x, y)
            for x in g.neighbors(p)
            if x != q
            for y in g.neighbors(q)
            if y != p and g.adjacent(x, y)
        ]
        if len(rungs) < 2:
            continue
        (a1, b6), (a3, b4) = rungs[:2]
        if a1 == a3 or b6 == b4:
            continue
        b2, a5 = p, q
        if not _all_cubic(g, (a1, b2, a3, b4, a5, b6)):
            continue
        b1p = _other(g, a1, (b2, b6))
        b3p = _other(g, a3, (b2, b4))
        a4p = _other(g, b4, (a3, a5))
        a6p = _other(g, b6, (a1, a5))
        if b1p is None or b3p is None or a4p is None or a6p is None:
            continue
        roles = {
            "a1": a1, "b2": b2, "a3": a3, "b4": b4, "a5": a5, "b6": b6,
            "b1'": b1p, "b3'": b3p, "a4'": a4p, "a6'": a6p,
        }  # fmt: skip
        reverse, swap, variant = _twin_image((g.has_arc(a1, b6), g.has_arc(b2, a5), g.has_arc(a3, b4)))
        if swap:
            roles = _swapped(roles, _TWIN_SWAP)
        return ConfigMatch(
            ConfigKind.TWIN_C4, roles, variant=variant, symmetry=Symmetry(reverse, "swap-ends" if swap else "identity")
        )
    return None


def _swapped(roles: Mapping[str, int], pairs: Mapping[str, str]) -> dict[str, int]:
    swap = {**pairs, **{b: a for a, b in pairs.items()}}
    return {name: roles[swap.get(name, name)] for name in roles}


def _cycle_labelings(cycle: Sequence[int]) -> Iterator[tuple[str, tuple[int, int, int, int]]]:
    """The eight dihedral labelings ``(a0, b1, a2, b3)`` of a 4-cycle with a name for each."""
    for start in range(4):
        for step, tag in ((1, ""), (-1, "-flip")):
            labeling = tuple(cycle[(start + step * k) % 4] for k in range(4))
            yield f"rotate-{start}{tag}", labeling  # type: ignore[misc]


def _c4_roles(g: Graph, labeling: Sequence[int]) -> dict[str, int] | None:
    a0, b1, a2, b3 = labeling
    outside = {}
    for name, v, left, right in (("b0'", a0, b3, b1), ("a1'", b1, a0, a2), ("b2'", a2, b1, b3), ("a3'", b3, a2, a0)):
        w = _other(g, v, (left, right))
        if w is None:
            return None
        outside[name] = w
    return {"a0": a0, "b1": b1, "a2": a2, "b3": b3, **outside}


def _component_of(components: Sequence[set[int]], v: int) -> int:
    return next(k for k, component in enumerate(components) if v in component)


def _find_separating_c4(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    underlying = g.nx_underlying
    for cycle in four_cycles(g):
        rest = underlying.subgraph(set(range(g.n)) - set(cycle))
        components = list(nx.connected_components(rest))
        if len(components) < 2:
            continue
        labeled = []
        for name, labeling in _cycle_labelings(cycle):
            roles = _c4_roles(g, labeling)
            if roles is None:
                break
            side = {out: _component_of(components, roles[out]) for out in ("b0'", "a1'", "b2'", "a3'")}
            labeled.append((name, roles, side))
        for name, roles, side in labeled:
            consecutive = side["b0'"] == side["a1'"] and g.has_arc(roles["a0"], roles["b1"])
            if consecutive and side["b2'"] == side["a3'"] != side["b0'"]:
                return ConfigMatch(ConfigKind.SEPARATING_C4, roles, variant=1, symmetry=Symmetry(relabel=name))
        for name, roles, side in labeled:
            if side["b0'"] == side["b2'"] != side["a1'"] == side["a3'"]:
                return ConfigMatch(ConfigKind.SEPARATING_C4, roles, variant=2, symmetry=Symmetry(relabel=name))
    return None


def directed_through(g: Graph, path: Sequence[int]) -> bool:
    return all(g.has_arc(u, v) for u, v in zip(path, path[1:], strict=False))


def paired_without(g: Graph, removed: Iterable[int], pairs: Iterable[tuple[int, int]]) -> nx.Graph:
    """Underlying graph of ``g`` minus ``removed`` with an edge joining each pair."""
    rest = g.nx_underlying.subgraph(set(range(g.n)) - set(removed)).copy()
    rest.add_edges_from(pairs)
    return rest


def separating_bridge(
    g: Graph, cycle: Iterable[int], left: Sequence[int], right: Sequence[int]
) -> tuple[frozenset[int], tuple[int, int]] | None:
    """Side holding ``left`` of a bridge of ``g - cycle`` that separates ``left`` from ``right``,
    together with that bridge."""
    rest = paired_without(g, cycle, ())
    for u, v in sorted(nx.bridges(rest)):
        rest.remove_edge(u, v)
        side = nx.node_connected_component(rest, left[0])
        rest.add_edge(u, v)
        if all(x in side for x in left) and not any(y in side for y in right):
            return frozenset(side), (u, v)
    return None


def _biconnected(h: nx.Graph) -> bool:
    return h.number_of_nodes() >= 3 and nx.is_biconnected(h)


_PLAIN_PATTERN = (("a3'", "b3", "a2", "b2'"), ("b0'", "a0", "b1", "a1'"))


def _find_plain_c4(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    """A 4-face classified by how its boundary and the rest of the graph hang together:

    variant 1 carries the arcs a3'->b3->a2->b2' and b0'->a0->b1->a1' with ``g - C`` bridgeless,
    variant 2 carries the same arcs with a bridge of ``g - C`` cutting {b0', a1'} from {b2', a3'},
    variant 3 is everything else, normalized so that a2->b2' and the pairing b0'a3', a1'b2'
    keeps the rest 2-connected.
    """
    cycles = four_cycles(g)
    if not cycles:
        return None
    cycle = cycles[0]
    labeled = []
    for name, labeling in _cycle_labelings(cycle):
        roles = _c4_roles(g, labeling)
        if roles is None:
            return None
        labeled.append((name, roles))

    for name, r in labeled:
        if not all(directed_through(g, tuple(r[x] for x in path)) for path in _PLAIN_PATTERN):
            continue
        if _biconnected(paired_without(g, cycle, ())):
            return ConfigMatch(ConfigKind.PLAIN_C4, r, variant=1, symmetry=Symmetry(relabel=name))
        if separating_bridge(g, cycle, (r["b0'"], r["a1'"]), (r["b2'"], r["a3'"])) is not None:
            return ConfigMatch(ConfigKind.PLAIN_C4, r, variant=2, symmetry=Symmetry(relabel=name))

    for name, r in labeled:
        if not _biconnected(paired_without(g, cycle, ((r["b0'"], r["a3'"]), (r["a1'"], r["b2'"])))):
            continue
        reverse = not g.has_arc(r["a2"], r["b2'"])
        return ConfigMatch(ConfigKind.PLAIN_C4, r, variant=3, symmetry=Symmetry(reverse, name))
    name, r = labeled[0]
    return ConfigMatch(ConfigKind.PLAIN_C4, r, variant=3, symmetry=Symmetry(not g.has_arc(r["a2"], r["b2'"]), name))


def _facial_stretches(g: Graph, faces: FaceSet, length: int, gap: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Face index and a walk stretch of ``length`` vertices whose positions 1 and ``1 + gap`` have degree 2."""
    for index, face in enumerate(faces.faces):
        walk = face.walk
        k = len(walk)
        if k < length:
            continue
        for i in range(k):
            if underlying_degree(g, walk[i]) == 2 and underlying_degree(g, walk[(i + gap) % k]) == 2:
                yield index, tuple(walk[(i - 1 + j) % k] for j in range(length))


def _biconnected_without(g: Graph, removed: Sequence[int]) -> bool:
    return _biconnected(paired_without(g, removed, ()))


def _pair_roles(g: Graph, u: int, v: int) -> dict[str, int]:
    t, w = g.neighbors(u)
    tp, wp = g.neighbors(v)
    return {"u": u, "v": v, "t": t, "w": w, "t'": tp, "w'": wp}


def _find_deg2_pair_cut(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for index, stretch in _facial_stretches(g, faces, 6, 3):
        u, v = stretch[1], stretch[4]
        if not _biconnected_without(g, (u, v)):
            return ConfigMatch(ConfigKind.DEG2_PAIR_CUT, _pair_roles(g, u, v), faces=(index,))
    return None


def _find_deg2_facial_dist3(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for index, stretch in _facial_stretches(g, faces, 6, 3):
        if not _all_cubic(g, (stretch[0], stretch[2], stretch[3], stretch[5])):
            continue
        if not _biconnected_without(g, (stretch[1], stretch[4])):
            continue
        roles = dict(zip(("a0", "b1", "a2", "b3", "a4", "b5"), stretch, strict=True))
        roles["b2'"] = _third(g, stretch[2], (stretch[1], stretch[3]))
        roles["a3'"] = _third(g, stretch[3], (stretch[2], stretch[4]))
        return ConfigMatch(ConfigKind.DEG2_FACIAL_DIST3, roles, faces=(index,))
    return None


def _walk_from(faces: FaceSet, index: int, v: int) -> tuple[int, ...]:
    walk = faces[index].walk
    k = walk.index(v)
    return walk[k:] + walk[:k]


def _hex_side(faces: FaceSet, index: int, v: int, first: int) -> tuple[int, int, int]:
    walk = _walk_from(faces, index, v)
    if walk[1] != first:
        walk = (walk[0], *reversed(walk[1:]))
    return walk[2], walk[3], walk[4]


def _find_deg2_two_hex_faces(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    for v in _degree_two(g):
        hexes = [index for index in faces.faces_at(v) if faces[index].degree == 6]
        if len(hexes) < 2 or not _biconnected_without(g, (v,)):
            continue
        b1, b5 = g.neighbors(v)
        a2, b3, a4 = _hex_side(faces, hexes[0], v, b1)
        a2p, b3p, a4p = _hex_side(faces, hexes[1], v, b1)
        roles = {"a1'": v, "b1": b1, "a2": a2, "b3": b3, "a4": a4, "b5": b5, "a2'": a2p, "b3'": b3p, "a4'": a4p}
        for name, anchor, skip in (("b2'", a2, (b1, b3)), ("a3'", b3, (a2, a4)), ("b4'", a4, (b3, b5))):
            outside = _other(g, anchor, skip)
            if outside is not None:
                roles[name] = outside
        return ConfigMatch(ConfigKind.DEG2_TWO_HEX_FACES, roles, faces=tuple(hexes[:2]))
    return None


def _find_bad_deg2_on_oct_face(g: Graph, faces: FaceSet) -> ConfigMatch | None:
    two = set(_degree_two(g))
    for index, face in enumerate(faces.faces):
        if face.degree != 8:
            continue
        for a2 in sorted(face.vertices & two):
            walk = _walk_from(faces, index, a2)
            if walk[4] not in two:
                continue
            hexes = [k for k in faces.faces_at(a2) if k != index and faces[k].degree == 6]
            if not hexes or not _biconnected_without(g, (a2,)):
                continue
            b3, a4, b5, a6, b7, a0, b1 = walk[1:]
            a1p, b2, a3p = _hex_side(faces, hexes[0], a2, b1)
            roles = {
                "a0": a0, "b1": b1, "a2": a2, "b3": b3, "a4": a4, "b5": b5, "a6": a6, "b7": b7,
                "a1'": a1p, "b2": b2, "a3'": a3p,
            }  # fmt: skip
            return ConfigMatch(ConfigKind.BAD_DEG2_ON_OCT_FACE, roles, faces=(index, hexes[0]))
    return None


_FINDERS: tuple[Callable[[Graph, FaceSet], ConfigMatch | None], ...] = (
    _find_adjacent_deg2,
    _find_deg2_on_c4,
    _find_deg2_dist2,
    _find_triple_sharing_c4,
    _find_twin_c4,
    _find_separating_c4,
    _find_plain_c4,
    _find_deg2_pair_cut,
    _find_deg2_facial_dist3,
    _find_deg2_two_hex_faces,
    _find_bad_deg2_on_oct_face,
)


def detect(g: Graph, rot: RotationSystem, *, base_size: int = DEFAULT_BASE_SIZE) -> ConfigMatch:
    """First reducible configuration of ``g`` in the fixed priority order, or a base case."""
    if g.n >= 3 and all(underlying_degree(g, v) == 2 for v in range(g.n)):
        return ConfigMatch(ConfigKind.BASE_CYCLE)
    if g.n <= base_size:
        return ConfigMatch(ConfigKind.BASE_SMALL)
    faces = trace_faces(g, rot)
    for finder in _FINDERS:
        match = finder(g, faces)
        if match is not None:
            return match
    raise NoConfiguration(f"no reducible configuration in a graph with {g.n} vertices and {g.edge_count} edges")
