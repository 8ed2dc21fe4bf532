"""Plain-text graph files.

    # comment
    graph directed
    n 4
    e 0 1
    rot 0 1 3

``e u v`` is an arc ``u -> v`` in directed mode and an edge otherwise. ``rot`` lines are optional;
when present they must describe the clockwise neighbor order of every vertex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from caipart.core.embedding import RotationSystem
from caipart.core.errors import GraphFormatError
from caipart.core.graph import Arc, Graph, GraphMode

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class GraphDocument:
    graph: Graph
    rotation: RotationSystem | None = None


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    def integer(self, what: str) -> int:
        if not re.fullmatch(r"\d+", self.text):
            raise GraphFormatError(f"expected {what}, got {self.text!r}", line=self.line, column=self.column)
        return int(self.text)


def _tokenize(text: str) -> list[list[_Token]]:
    lines: list[list[_Token]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [_Token(m.group(), number, m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            lines.append(tokens)
    return lines


def parse_graph(text: str) -> GraphDocument:
    mode: GraphMode | None = None
    n: int | None = None
    arcs: list[Arc] = []
    seen: set[Arc] = set()
    rotation: dict[int, list[int]] = {}

    for tokens in _tokenize(text):
        head, rest = tokens[0], tokens[1:]
        if head.text == "graph":
            if mode is not None or len(rest) != 1 or rest[0].text not in ("directed", "undirected"):
                raise GraphFormatError("expected a single 'graph directed|undirected' line", line=head.line)
            mode = GraphMode(rest[0].text)
        elif head.text == "n":
            if mode is None:
                raise GraphFormatError("'n' must follow the 'graph' line", line=head.line, column=head.column)
            if n is not None or len(rest) != 1:
                raise GraphFormatError("expected a single 'n N' line", line=head.line, column=head.column)
            n = rest[0].integer("vertex count")
        elif head.text in ("e", "rot"):
            if n is None or mode is None:
                raise GraphFormatError(f"'{head.text}' before 'n'", line=head.line, column=head.column)
            ids = [token.integer("vertex id") for token in rest]
            for token, v in zip(rest, ids, strict=True):
                if v >= n:
                    raise GraphFormatError(f"vertex {v} out of range 0..{n - 1}", line=token.line, column=token.column)
            if head.text == "e":
                if len(ids) != 2:
                    raise GraphFormatError("expected 'e u v'", line=head.line, column=head.column)
                u, v = ids
                if u == v:
                    raise GraphFormatError(f"self-loop at vertex {u}", line=head.line, column=rest[1].column)
                key = (u, v) if mode == GraphMode.DIRECTED else (min(u, v), max(u, v))
                if key in seen:
                    raise GraphFormatError(f"duplicate edge {u} {v}", line=head.line, column=head.column)
                seen.add(key)
                arcs.append((u, v))
            else:
                if not ids:
                    raise GraphFormatError("expected 'rot v n1 n2 ...'", line=head.line, column=head.column)
                if ids[0] in rotation:
                    raise GraphFormatError(f"second rotation for vertex {ids[0]}", line=head.line, column=head.column)
                rotation[ids[0]] = ids[1:]
        else:
            raise GraphFormatError(f"unknown directive {head.text!r}", line=head.line, column=head.column)

    if mode is None or n is None:
        raise GraphFormatError("missing 'graph' or 'n' line", line=1)
    graph = Graph(mode, n, tuple(arcs))
    if not rotation:
        return GraphDocument(graph)
    rot = RotationSystem.from_mapping(rotation, n)
    rot.check(graph)
    return GraphDocument(graph, rot)


def serialize_graph(g: Graph, rot: RotationSystem | None = None) -> str:
    lines = [f"graph {g.mode}", f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.arcs]
    if rot is not None:
        lines += [" ".join(["rot", str(v), *map(str, rot.neighbors(v))]) for v in range(g.n)]
    return "\n".join(lines) + "\n"


def read_graph_file(path: Path) -> GraphDocument:
    return parse_graph(path.read_text(encoding="ascii"))


def write_graph_file(path: Path, g: Graph, rot: RotationSystem | None = None) -> None:
    path.write_text(serialize_graph(g, rot), encoding="ascii", newline="\n")
