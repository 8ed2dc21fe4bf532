from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
from typing import NamedTuple

import networkx as nx

Arc = tuple[int, int]
VertexSet = frozenset[int]


class GraphMode(StrEnum):
    DIRECTED = "directed"
    UNDIRECTED = "undirected"


class Degree(NamedTuple):
    d: int
    out: int | None
    inn: int | None


@dataclass(frozen=True)
class Graph:
    """Simple (di)graph on the dense vertex range ``0..n-1``.

    Undirected edges are stored as ``(min, max)`` pairs. Arcs are kept sorted so two graphs with
    the same vertex range and arc set compare equal. Digons are allowed in directed mode; whether a
    graph is oriented is a separate predicate.
    """

    mode: GraphMode
    n: int
    arcs: tuple[Arc, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be >= 0, got {self.n}")
        seen: set[Arc] = set()
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if self.mode == GraphMode.DIRECTED else (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate arc ({u}, {v})")
            seen.add(key)
        object.__setattr__(self, "arcs", tuple(sorted(seen)))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError(f"expected {self.n} labels, got {len(self.labels)}")
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def directed(cls, n: int, arcs: Iterable[Arc], labels: Iterable[str] | None = None) -> Graph:
        return cls(GraphMode.DIRECTED, n, tuple(arcs), tuple(labels) if labels is not None else None)

    @classmethod
    def undirected(cls, n: int, edges: Iterable[Arc], labels: Iterable[str] | None = None) -> Graph:
        return cls(GraphMode.UNDIRECTED, n, tuple(edges), tuple(labels) if labels is not None else None)

    @property
    def is_directed(self) -> bool:
        return self.mode == GraphMode.DIRECTED

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].append(v)
            if not self.is_directed:
                out[v].append(u)
        return tuple(tuple(sorted(items)) for items in out)

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_directed:
            return self._out
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            inn[v].append(u)
        return tuple(tuple(sorted(items)) for items in inn)

    @cached_property
    def _neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(set(self._out[v]) | set(self._in[v]))) for v in range(self.n))

    @cached_property
    def _arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    @cached_property
    def edges(self) -> tuple[Arc, ...]:
        """Edges of the underlying simple undirected graph, as sorted pairs."""
        return tuple(sorted({(min(u, v), max(u, v)) for u, v in self.arcs}))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range 0..{self.n - 1}")

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._neighbors[v]

    def has_arc(self, u: int, v: int) -> bool:
        if self.is_directed:
            return (u, v) in self._arc_set
        return (min(u, v), max(u, v)) in self._arc_set

    def adjacent(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) or self.has_arc(v, u)

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph: nx.Graph = nx.DiGraph() if self.is_directed else nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.arcs)
        return graph

    @cached_property
    def nx_underlying(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


def degree(g: Graph, v: int) -> Degree:
    g.check_vertex(v)
    if not g.is_directed:
        return Degree(len(g.neighbors(v)), None, None)
    out = len(g.out_neighbors(v))
    inn = len(g.in_neighbors(v))
    return Degree(out + inn, out, inn)


def underlying_degree(g: Graph, v: int) -> int:
    return len(g.neighbors(v))


def is_oriented(g: Graph) -> bool:
    if not g.is_directed:
        raise ValueError("is_oriented requires a directed graph")
    return not any(g.has_arc(v, u) for u, v in g.arcs)


def is_eulerian_digraph(g: Graph) -> bool:
    if not g.is_directed:
        raise ValueError("is_eulerian_digraph requires a directed graph")
    if g.n == 0:
        return False
    return nx.is_eulerian(g.nx_graph)


def is_subcubic(g: Graph) -> bool:
    return all(underlying_degree(g, v) <= 3 for v in range(g.n))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return nx.is_connected(g.nx_underlying)


def is_bipartite(g: Graph) -> dict[int, int] | None:
    """Proper 2-coloring of the underlying graph, smallest vertex of each component colored 0."""
    underlying = g.nx_underlying
    if not nx.is_bipartite(underlying):
        return None
    coloring = nx.bipartite.color(underlying)
    for component in nx.connected_components(underlying):
        if coloring[min(component)] == 1:
            for v in component:
                coloring[v] = 1 - coloring[v]
    return {v: coloring[v] for v in range(g.n)}


def cut_vertices_and_bridges(g: Graph) -> tuple[frozenset[int], frozenset[Arc]]:
    underlying = g.nx_underlying
    cut_vertices = frozenset(nx.articulation_points(underlying))
    bridges = frozenset((min(u, v), max(u, v)) for u, v in nx.bridges(underlying))
    return cut_vertices, bridges


def is_two_connected(g: Graph) -> bool:
    if g.n < 3 or not is_connected(g):
        return False
    cut_vertices, _ = cut_vertices_and_bridges(g)
    return not cut_vertices


def is_two_edge_connected(g: Graph) -> bool:
    if g.n < 3:
        return False
    return nx.is_k_edge_connected(g.nx_underlying, 2)


def _check_subset(g: Graph, s: Iterable[int]) -> VertexSet:
    subset = frozenset(s)
    for v in subset:
        g.check_vertex(v)
    return subset


def induced_acyclic(g: Graph, s: Iterable[int]) -> bool:
    subset = _check_subset(g, s)
    if not subset:
        return True
    if g.is_directed:
        return nx.is_directed_acyclic_graph(g.nx_graph.subgraph(subset))
    return nx.is_forest(g.nx_underlying.subgraph(subset))


def induced_connected(g: Graph, s: Iterable[int]) -> bool:
    subset = _check_subset(g, s)
    if not subset:
        return True
    return nx.is_connected(g.nx_underlying.subgraph(subset))


def a_path_exists(g: Graph, u: int, v: int, s: Iterable[int], directed_path: bool = False) -> bool:
    subset = _check_subset(g, s)
    if u not in subset or v not in subset:
        raise ValueError(f"path endpoints {u}, {v} must lie in the vertex set")
    if directed_path and g.is_directed:
        return nx.has_path(g.nx_graph.subgraph(subset), u, v)
    return nx.has_path(g.nx_underlying.subgraph(subset), u, v)


def find_cycle(g: Graph, s: Iterable[int]) -> list[int] | None:
    """Vertices of some cycle inside ``g[s]`` (directed cycle in directed mode), or None."""
    subset = _check_subset(g, s)
    view = g.nx_graph.subgraph(subset) if g.is_directed else g.nx_underlying.subgraph(subset)
    try:
        edges = nx.find_cycle(view)
    except nx.NetworkXNoCycle:
        return None
    return [edge[0] for edge in edges]


def reversed_graph(g: Graph) -> Graph:
    if not g.is_directed:
        return g
    return Graph(g.mode, g.n, tuple((v, u) for u, v in g.arcs), g.labels)


def rebuild(g: Graph, keep: Iterable[int], extra_arcs: Iterable[Arc] = ()) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``keep`` (plus ``extra_arcs`` in old ids), relabeled densely by old id."""
    kept = sorted(_check_subset(g, keep))
    mapping = {old: new for new, old in enumerate(kept)}
    arcs = [(mapping[u], mapping[v]) for u, v in g.arcs if u in mapping and v in mapping]
    arcs.extend((mapping[u], mapping[v]) for u, v in extra_arcs)
    labels = tuple(g.labels[old] for old in kept) if g.labels is not None else None
    return Graph(g.mode, len(kept), tuple(arcs), labels), mapping


def delete_vertices(g: Graph, removed: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    gone = _check_subset(g, removed)
    return rebuild(g, (v for v in range(g.n) if v not in gone))


def relabel(g: Graph, mapping: Mapping[int, int], n: int) -> Graph:
    return Graph(g.mode, n, tuple((mapping[u], mapping[v]) for u, v in g.arcs))
