"""Deterministic graph families and seeded random instances, each with a clockwise rotation system."""

from __future__ import annotations

import logging
from collections.abc import Callable
from enum import StrEnum
from pathlib import Path

from caipart.adapters.io.graph_file import write_graph_file
from caipart.constructions.duality import TriangulationBundle, triangulate_up
from caipart.constructions.prng import SplitMix64
from caipart.core.embedding import RotationEditor, RotationSystem, rotation_from_faces, trace_faces
from caipart.core.graph import Arc, Graph

logger = logging.getLogger("caipart.generators")

Embedded = tuple[Graph, RotationSystem]

OCTAHEDRON_FACES: tuple[tuple[int, int, int], ...] = (
    (0, 1, 2),
    (0, 2, 3),
    (0, 3, 4),
    (0, 4, 1),
    (5, 2, 1),
    (5, 3, 2),
    (5, 4, 3),
    (5, 1, 4),
)

_HYPERCUBE_ROTATION: tuple[tuple[int, ...], ...] = (
    (4, 1, 2),
    (0, 5, 3),
    (6, 0, 3),
    (2, 1, 7),
    (5, 0, 6),
    (1, 4, 7),
    (4, 2, 7),
    (6, 3, 5),
)


class Family(StrEnum):
    EVEN_CYCLE = "even_cycle"
    PRISM = "prism"
    LADDER = "ladder"
    THETA = "theta"
    HYPERCUBE = "hypercube"
    SP_NESTED = "sp_nested"
    OCTAHEDRON = "octahedron"
    BRICK_WALL = "brick_wall"


def _edges_of(rotation: dict[int, list[int]]) -> list[Arc]:
    return sorted({(min(v, u), max(v, u)) for v, ring in rotation.items() for u in ring})


def _embedded(n: int, rotation: dict[int, list[int]]) -> Embedded:
    return Graph.undirected(n, _edges_of(rotation)), RotationSystem.from_mapping(rotation, n)


def even_cycle(n: int) -> Embedded:
    if n < 4 or n % 2:
        raise ValueError(f"even_cycle needs an even length >= 4, got {n}")
    return _embedded(n, {v: [(v - 1) % n, (v + 1) % n] for v in range(n)})


def prism(m: int) -> Embedded:
    """Prism over the cycle ``C_m``: outer ring ``0..m-1``, inner ring ``m..2m-1``."""
    if m < 4 or m % 2:
        raise ValueError(f"prism needs an even cycle length >= 4, got {m}")
    rotation: dict[int, list[int]] = {}
    for i in range(m):
        rotation[i] = [(i - 1) % m, m + i, (i + 1) % m]
        rotation[m + i] = [m + (i - 1) % m, m + (i + 1) % m, i]
    return _embedded(2 * m, rotation)


def ladder(k: int) -> Embedded:
    """``P_k x P_2``: top path ``0..k-1``, bottom path ``k..2k-1``, rungs ``i - (k+i)``."""
    if k < 2:
        raise ValueError(f"ladder needs at least 2 rungs, got {k}")
    rotation: dict[int, list[int]] = {}
    for i in range(k):
        left, right = i > 0, i < k - 1
        rotation[i] = [k + i] + ([i - 1] if left else []) + ([i + 1] if right else [])
        rotation[k + i] = ([k + i - 1] if left else []) + [i] + ([k + i + 1] if right else [])
    return _embedded(2 * k, rotation)


def brick_wall(rows: int, cols: int) -> Embedded:
    """Hexagonal patch drawn as bricks: grid paths ``r*cols .. r*cols+cols-1`` with rungs where ``r + c`` is even."""
    if rows < 2 or rows % 2 or cols < 3 or cols % 2 == 0:
        raise ValueError(f"brick_wall needs an even row count >= 2 and an odd column count >= 3, got {rows}x{cols}")
    rotation: dict[int, list[int]] = {}
    for r in range(rows):
        for c in range(cols):
            down = r < rows - 1 and (r + c) % 2 == 0
            up = r > 0 and (r - 1 + c) % 2 == 0
            ring = [(r + 1) * cols + c] if down else []
            ring += [r * cols + c - 1] if c > 0 else []
            ring += [(r - 1) * cols + c] if up else []
            ring += [r * cols + c + 1] if c < cols - 1 else []
            rotation[r * cols + c] = ring
    return _embedded(rows * cols, rotation)


def theta(a: int, b: int, c: int) -> Embedded:
    """Three internally disjoint paths of lengths ``a, b, c`` between poles 0 and 1."""
    lengths = (a, b, c)
    if min(lengths) < 1:
        raise ValueError(f"theta path lengths must be >= 1, got {lengths}")
    if len({length % 2 for length in lengths}) != 1:
        raise ValueError(f"theta path lengths must share a parity, got {lengths}")
    if sum(1 for length in lengths if length == 1) > 1:
        raise ValueError("theta allows at most one path of length 1")
    rotation: dict[int, list[int]] = {0: [], 1: []}
    ends: list[tuple[int, int]] = []
    next_id = 2
    for length in lengths:
        path = [0, *range(next_id, next_id + length - 1), 1]
        next_id += length - 1
        for j in range(1, len(path) - 1):
            rotation[path[j]] = [path[j - 1], path[j + 1]]
        ends.append((path[1], path[-2]))
    rotation[0] = [first for first, _ in ends]
    rotation[1] = [last for _, last in reversed(ends)]
    return _embedded(next_id, rotation)


def hypercube(d: int = 3) -> Embedded:
    if d != 3:
        raise ValueError(f"only the planar cube Q3 is available, got dimension {d}")
    return _embedded(8, {v: list(ring) for v, ring in enumerate(_HYPERCUBE_ROTATION)})


def octahedron() -> Embedded:
    rot = rotation_from_faces(OCTAHEDRON_FACES, 6)
    g = Graph.undirected(6, _edges_of(rot.as_lists()))
    return g, rot


def _add_parallel_path(editor: RotationEditor, u: int, v: int, first_id: int, length: int) -> list[int]:
    """Route a new ``u - v`` path of ``length`` edges through the face on the left of dart ``v -> u``."""
    internal = list(range(first_id, first_id + length - 1))
    path = [u, *internal, v]
    editor.insert_after(u, v, internal[0])
    editor.insert_before(v, u, internal[-1])
    for j in range(1, len(path) - 1):
        editor.add_vertex(path[j], [path[j - 1], path[j + 1]])
    return internal


def _finish(editor: RotationEditor) -> Embedded:
    vertices = editor.vertices()
    n = len(vertices)
    rot = editor.build({v: v for v in vertices}, n)
    return Graph.undirected(n, _edges_of(rot.as_lists())), rot


def sp_nested(ears: int) -> Embedded:
    """C4 followed by ``ears`` paths of length 3, each parallel to the middle edge of the previous one."""
    if ears < 0:
        raise ValueError(f"ear count must be >= 0, got {ears}")
    _, rot = even_cycle(4)
    editor = RotationEditor(rot)
    u, v = 0, 1
    next_id = 4
    for _ in range(ears):
        x1, x2 = _add_parallel_path(editor, u, v, next_id, 3)
        next_id += 2
        u, v = x1, x2
    return _finish(editor)


_FAMILIES: dict[Family, Callable[..., Embedded]] = {
    Family.EVEN_CYCLE: even_cycle,
    Family.PRISM: prism,
    Family.LADDER: ladder,
    Family.THETA: theta,
    Family.HYPERCUBE: hypercube,
    Family.SP_NESTED: sp_nested,
    Family.OCTAHEDRON: octahedron,
    Family.BRICK_WALL: brick_wall,
}


def family(name: str | Family, *sizes: int) -> Embedded:
    """Build a named family; the rotation is certified planar by face tracing before returning."""
    try:
        kind = Family(name)
    except ValueError:
        raise ValueError(f"unknown family: {name}") from None
    try:
        g, rot = _FAMILIES[kind](*sizes)
    except TypeError:
        raise ValueError(f"wrong number of sizes for family {kind}: {list(sizes)}") from None
    trace_faces(g, rot)
    return g, rot


def random_orientation(g: Graph, seed: int) -> Graph:
    rng = SplitMix64(seed)
    arcs = [(u, v) if rng.coin() else (v, u) for u, v in g.edges]
    return Graph.directed(g.n, arcs, g.labels)


def _pick_edge(g: Graph, edge: Arc | None, rng: SplitMix64) -> Arc:
    if edge is None:
        return rng.choice(list(g.arcs))
    u, v = edge
    if not g.is_directed and g.has_arc(u, v):
        return (min(u, v), max(u, v))
    if g.has_arc(u, v):
        return (u, v)
    if g.has_arc(v, u):
        return (v, u)
    raise ValueError(f"({u}, {v}) is not an edge")


def _subdivided_arcs(g: Graph, u: int, v: int) -> list[Arc]:
    x, y = g.n, g.n + 1
    arcs = [arc for arc in g.arcs if arc != (u, v)]
    arcs.extend([(u, x), (x, y), (y, v)])
    return arcs


def subdivide_even(g: Graph, edge: Arc | None = None, seed: int = 0) -> Graph:
    """Replace ``u -> v`` by ``u -> x -> y -> v``; with no edge given a seeded one is picked."""
    u, v = _pick_edge(g, edge, SplitMix64(seed))
    labels = (*g.labels, f"s{g.n}", f"s{g.n + 1}") if g.labels is not None else None
    return Graph(g.mode, g.n + 2, tuple(_subdivided_arcs(g, u, v)), labels)


def subdivide_even_embedded(g: Graph, rot: RotationSystem, edge: Arc | None = None, seed: int = 0) -> Embedded:
    u, v = _pick_edge(g, edge, SplitMix64(seed))
    editor = RotationEditor(rot)
    x, y = g.n, g.n + 1
    editor.subdivide(u, v, x)
    editor.subdivide(x, v, y)
    n = g.n + 2
    labels = (*g.labels, f"s{x}", f"s{y}") if g.labels is not None else None
    return Graph(g.mode, n, tuple(_subdivided_arcs(g, u, v)), labels), editor.build({w: w for w in range(n)}, n)


_F_BASES = ("prism", "ladder", "theta", "hypercube")


def _random_f_base(target: int, rng: SplitMix64) -> Embedded:
    kind = rng.choice(list(_F_BASES))
    if kind == "prism":
        return prism(4 + 2 * rng.below(max(1, (target // 2 - 4) // 2 + 1)))
    if kind == "ladder":
        return ladder(2 + rng.below(max(1, target // 2 - 1)))
    if kind == "theta":
        if rng.coin():
            return theta(*(2 + 2 * rng.below(3) for _ in range(3)))
        return theta(1, *(3 + 2 * rng.below(2) for _ in range(2)))
    return hypercube()


def random_f_instance(n_hint: int, seed: int) -> Embedded:
    """Planar bipartite 2-connected subcubic oriented instance with at least ``n_hint`` vertices."""
    rng = SplitMix64(seed)
    target = max(n_hint, 4)
    g, rot = _random_f_base(target, rng)
    while g.n < target:
        g, rot = subdivide_even_embedded(g, rot, rng.choice(list(g.edges)))
    oriented = random_orientation(g, rng.next_u64())
    logger.debug("generated instance", extra={"seed": seed, "n": oriented.n, "m": oriented.edge_count})
    return oriented, rot


def random_sp_instance(n_hint: int, seed: int) -> Embedded:
    """Bipartite 2-connected series-parallel graph grown by odd paths parallel to seeded edges."""
    rng = SplitMix64(seed)
    target = max(n_hint, 4)
    g, rot = even_cycle(4 + 2 * rng.below(3))
    while g.n < target:
        u, v = rng.choice(list(g.edges))
        if rng.coin():
            u, v = v, u
        editor = RotationEditor(rot)
        _add_parallel_path(editor, u, v, g.n, 3 + 2 * rng.below(2))
        g, rot = _finish(editor)
    return g, rot


K4_FACES: tuple[tuple[int, int, int], ...] = ((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2))


def random_cubic_planar(n_hint: int, seed: int) -> Embedded:
    """3-connected cubic planar graph grown from K4 by seeded chords joining two edges of one face."""
    rng = SplitMix64(seed)
    g, rot = _embedded(4, rotation_from_faces(K4_FACES, 4).as_lists())
    while g.n < n_hint:
        face = rng.choice(list(trace_faces(g, rot).faces))
        darts = list(face.darts)
        i = rng.below(len(darts))
        j = (i + 1 + rng.below(len(darts) - 1)) % len(darts)
        (p, q), (r, s) = darts[i], darts[j]
        editor = RotationEditor(rot)
        x, y = g.n, g.n + 1
        editor.subdivide(p, q, x)
        editor.subdivide(r, s, y)
        editor.insert_after(x, p, y)
        editor.insert_after(y, r, x)
        g, rot = _finish(editor)
    return g, rot


def _two_coloring(g: Graph, rng: SplitMix64) -> list[bool]:
    side = [rng.coin() for _ in range(g.n)]
    for _ in range(g.edge_count):
        unhappy = [v for v in range(g.n) if sum(side[u] == side[v] for u in g.neighbors(v)) >= 2]
        if not unhappy:
            break
        v = rng.choice(unhappy)
        side[v] = not side[v]
    return side


def random_cut_instance(n_hint: int, seed: int) -> Embedded:
    """Cubic planar graph with every edge inside one side of a seeded cut subdivided once, randomly oriented.

    The result is bipartite, subcubic and 2-connected; its degree-2 vertices sit on the cut's
    monochromatic edges, so short faces through them are common.
    """
    rng = SplitMix64(seed)
    base, rot = random_cubic_planar(max(4, n_hint * 2 // 3), rng.next_u64())
    side = _two_coloring(base, rng)
    editor = RotationEditor(rot)
    n = base.n
    for u, v in base.edges:
        if side[u] == side[v]:
            editor.subdivide(u, v, n)
            n += 1
    g, rot = _finish(editor)
    oriented = random_orientation(g, rng.next_u64())
    logger.debug("generated instance", extra={"seed": seed, "n": oriented.n, "m": oriented.edge_count})
    return oriented, rot


def random_eulerian_triangulation(size_hint: int, seed: int) -> TriangulationBundle:
    h, rot = random_f_instance(size_hint, seed)
    return triangulate_up(h, rot)


def write_corpus(directory: Path, count: int, seed: int, n_hint: int = 16) -> list[Path]:
    """Write ``count`` seeded F-instances as graph files named ``f-<index>.graph``."""
    if count < 0:
        raise ValueError("count must be >= 0")
    directory.mkdir(parents=True, exist_ok=True)
    rng = SplitMix64(seed)
    paths: list[Path] = []
    for index in range(count):
        size = n_hint + 2 * rng.below(max(1, n_hint))
        g, rot = random_f_instance(size, rng.next_u64())
        path = directory / f"f-{index:04d}.graph"
        write_graph_file(path, g, rot)
        paths.append(path)
    logger.info("corpus written", extra={"directory": str(directory), "count": count, "seed": seed})
    return paths
