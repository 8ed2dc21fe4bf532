"""Extension of the CAI-partition(s) of the reduced graph(s) back to the original graph.

Every configuration walks its case analysis in order. A case is picked by membership and path
queries on the partition read back from the subproblems; where the analysis says "if this is a
CAI-partition we are done, otherwise that one is", the case yields both and the first that
verifies wins. Orientation queries read ``ReductionStep.working`` so that a match normalized on
the reversed graph is lifted in its own frame; CAI-partitions are invariant under reversing every
arc, so the result is verified against the original graph. When no case verifies the lift raises
``NoCaseApplies`` and the solver decides how to recover.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from caipart.core.errors import LiftVerificationError, NoCaseApplies
from caipart.core.graph import Graph
from caipart.core.partition import CaiPartition, verify_cai
from caipart.solvers.exact import SolveOptions, solve_cai
from caipart.solvers.reduction.matches import ConfigKind, directed_through
from caipart.solvers.reduction.steps import ReductionStep

logger = logging.getLogger("caipart.reduce")

DEFAULT_FALLBACK_BUDGET = 200_000

Candidate = tuple[str, CaiPartition | None]


class _View:
    """The subproblem partitions read back in the ids of the original graph."""

    def __init__(
        self, step: ReductionStep, subs: Sequence[CaiPartition], rename: Mapping[str, str] | None = None
    ) -> None:
        self.step = step
        self.g: Graph = step.working
        self._rename = dict(rename or {})
        a: set[int] = set()
        i: set[int] = set()
        self.new: dict[str, bool] = {}
        for sub, part in zip(step.subproblems, subs, strict=True):
            back = {h: old for old, h in sub.vertex_map.items()}
            a.update(back[h] for h in part.a if h in back)
            i.update(back[h] for h in part.i if h in back)
            self.new.update({name: h in part.a for name, h in sub.named.items()})
        self.a = frozenset(a)
        self.i = frozenset(i)
        self._subs = tuple(subs)

    def mirrored(self, pairs: Mapping[str, str]) -> _View:
        swap = {**pairs, **{b: a for a, b in pairs.items()}}
        return _View(self.step, self._subs, swap)

    def r(self, name: str) -> int:
        return self.step.match[self._rename.get(name, name)]

    def in_a(self, *names: str) -> bool:
        return all(self.r(name) in self.a for name in names)

    def in_i(self, *names: str) -> bool:
        return all(self.r(name) in self.i for name in names)

    def arc(self, x: str, y: str) -> bool:
        return self.g.has_arc(self.r(x), self.r(y))

    def a_path(self, x: str, y: str, *, avoid: Iterable[str] = ()) -> bool:
        """An undirected path from ``x`` to ``y`` inside the current ``A`` minus ``avoid``."""
        u, v = self.r(x), self.r(y)
        inside = self.a - {self.r(name) for name in avoid}
        if u not in inside or v not in inside:
            return False
        return nx.has_path(self.g.nx_underlying.subgraph(inside), u, v)

    def directed_a_path(self, x: str, y: str, within: Iterable[int]) -> bool:
        u, v = self.r(x), self.r(y)
        inside = self.a & frozenset(within)
        if u not in inside or v not in inside:
            return False
        return nx.has_path(self.g.nx_graph.subgraph(inside), u, v)

    def on_cycle(self, name: str, extra: Iterable[str]) -> bool:
        """Whether ``name`` lies on a directed cycle of G[A + extra]."""
        inside = self.a | {self.r(x) for x in extra}
        v = self.r(name)
        return v in inside and any(
            v in component and len(component) > 1
            for component in nx.strongly_connected_components(self.g.nx_graph.subgraph(inside))
        )

    def connected_with(self, extra: Iterable[str], without: Iterable[str] = ()) -> bool:
        inside = (self.a | {self.r(x) for x in extra}) - {self.r(x) for x in without}
        view = self.g.nx_underlying.subgraph(inside)
        return view.number_of_nodes() > 0 and nx.is_connected(view)

    def move(self, to_a: Sequence[str] = (), to_i: Sequence[str] = ()) -> CaiPartition | None:
        add_a = {self.r(name) for name in to_a}
        add_i = {self.r(name) for name in to_i}
        a = (self.a - add_i) | add_a
        i = (self.i - add_a) | add_i
        if a & i or len(a) + len(i) != self.g.n:
            return None
        return CaiPartition(frozenset(a), frozenset(i))


def _adjacent_deg2(v: _View) -> Iterator[Candidate]:
    if not v.g.adjacent(v.r("a0"), v.r("b3")):
        yield "shortcut", v.move(to_a=("a2", "b1"))
    elif v.in_i("a0") or v.in_i("b3"):
        yield "end-in-i", v.move(to_a=("b1", "a2"))
    else:
        yield "ends-in-a", v.move(to_a=("b1",), to_i=("a2",))


def _deg2_on_c4(v: _View) -> Iterator[Candidate]:
    inside = sum(1 for name in ("b1", "b3") if v.in_a(name))
    if inside == 2:
        yield "both-in-a", v.move(to_i=("a0",))
    elif inside == 1:
        yield "one-in-a", v.move(to_a=("a0",))
    else:
        yield "swap", v.move(to_a=("b1", "b3"), to_i=("a0", "a2"))


def _deg2_dist2(v: _View) -> Iterator[Candidate]:
    if v.in_a("a2", "a4"):
        if v.a_path("a2", "a4"):
            yield "a-path-a2-a4", v.move(to_i=("b3",))
        else:
            yield "no-a-path-a2-a4", v.move(to_a=("b3",))
    elif v.in_a("a2"):
        yield "a4-in-i", v.move(to_a=("b3",))
    elif v.in_a("a4"):
        if v.a_path("a4", "b1"):
            yield "a-path-a4-b1", v.move(to_a=("b3",))
        elif v.a_path("b2'", "b1"):
            yield "a-path-b2-b1", v.move(to_a=("a2", "b3"), to_i=("b1",))
        else:
            yield "a-path-b2-a4", v.move(to_a=("a2",), to_i=("b3",))
    else:
        yield "both-in-i", v.move(to_a=("a2", "b3"), to_i=("b1",))


_TRIPLE_BLOB = ("a0", "a1", "b2", "a3", "b4", "a5", "b6")
_TRIPLE_CYCLES = ((("a0", "b2", "a1", "b6"), "b4"), (("a0", "b2", "a3", "b4"), "b6"), (("a0", "b4", "a5", "b6"), "b2"))
_TRIPLE_SIDES = {"a1": ("b2", "b6"), "a3": ("b2", "b4"), "a5": ("b4", "b6")}


def _directed_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    closed = (*cycle, cycle[0])
    return directed_through(g, closed) or directed_through(g, closed[::-1])


def _free_b(v: _View) -> str:
    """The ``b`` outside the first 4-cycle of the configuration that is not directed."""
    for cycle, b in _TRIPLE_CYCLES:
        if not _directed_cycle(v.g, [v.r(name) for name in cycle]):
            return b
    raise NoCaseApplies("three shared 4-cycles are all directed")


def _triple_sharing_c4(v: _View) -> Iterator[Candidate]:
    if not v.new.get("a*", True):
        out = {a: v.arc(a, f"b{a[1]}'") for a in ("a1", "a3", "a5")}
        if out["a1"] == out["a3"]:
            third = "a5"
        elif out["a1"] == out["a5"]:
            third = "a3"
        else:
            third = "a1"
        keep = tuple(name for name in _TRIPLE_BLOB if name not in ("a0", third))
        yield f"star-in-i-{third}", v.move(to_a=keep, to_i=("a0", third))
        return

    b = _free_b(v)
    outside = {a: v.r(f"b{a[1]}'") for a in ("a1", "a3", "a5")}
    if len(set(outside.values())) == 3:
        yield f"star-in-a-{b}", v.move(to_a=tuple(x for x in _TRIPLE_BLOB if x != b), to_i=(b,))
        return
    alone = next(a for a, w in outside.items() if list(outside.values()).count(w) == 1)
    hats = [
        hat
        for hat in ("b2", "b4", "b6")
        if hat != b and not (b in _TRIPLE_SIDES[alone] and hat in _TRIPLE_SIDES[alone])
    ]
    hats.sort(key=lambda hat: not v.connected_with(tuple(x for x in _TRIPLE_BLOB if x not in (b, hat))))
    for hat in hats:
        rest = tuple(x for x in _TRIPLE_BLOB if x not in (b, hat))
        yield f"star-in-a-merged-{b}-{hat}", v.move(to_a=rest, to_i=(b, hat))


def _cube(v: _View) -> Iterator[Candidate]:
    g = v.g
    cycle = next(
        (c for c, _ in _TRIPLE_CYCLES if not _directed_cycle(g, [v.r(name) for name in c])),
        None,
    )
    if cycle is None:
        raise NoCaseApplies("three shared 4-cycles of the cube are all directed")
    inside = {v.r(name) for name in cycle}
    rest = sorted(set(range(g.n)) - inside)
    x = rest[0]
    y = next(w for w in rest[1:] if not g.adjacent(x, w))
    i = frozenset(rest) - {x, y}
    yield "cube", CaiPartition(frozenset(range(g.n)) - i, i)


_LADDER = ("a1", "b2", "a3", "b4", "a5", "b6")
_RUNGS = (("a1", "b6"), ("b2", "a5"), ("a3", "b4"))


def _minority_rung(v: _View) -> tuple[str, str] | None:
    down = [v.arc(top, bottom) for top, bottom in _RUNGS]
    majority = sum(down) >= 2
    odd = [rung for rung, d in zip(_RUNGS, down, strict=True) if d != majority]
    return odd[0] if odd else None


def _twin_c4(v: _View) -> Iterator[Candidate]:
    a_star, b_star = v.new.get("a*", True), v.new.get("b*", True)
    if v.step.note == "bridge":
        if a_star and b_star:
            yield "bridge-both-in-a", v.move(to_a=tuple(x for x in _LADDER if x != "a5"), to_i=("a5",))
        elif a_star or b_star:
            rung = _minority_rung(v)
            if a_star:
                cut = rung[1] if rung is not None else "a5"
            else:
                cut = rung[0] if rung is not None else "b2"
            yield f"bridge-cut-{cut}", v.move(to_a=tuple(x for x in _LADDER if x != cut), to_i=(cut,))
        else:
            yield "bridge-both-in-i", v.move(to_a=("a1", "b2", "b4", "a5"), to_i=("a3", "b6"))
        return

    if a_star and not b_star:
        yield "top-in-a", v.move(to_a=("a1", "b2", "a3", "a5"), to_i=("b4", "b6"))
    elif b_star and not a_star:
        yield "bottom-in-a", v.move(to_a=("b2", "b4", "a5", "b6"), to_i=("a1", "a3"))
    elif v.step.match.variant == 1:
        yield "parallel", v.move(to_a=("a1", "b2", "a3", "b4", "b6"), to_i=("a5",))
    elif not any(v.a_path("a6'", other) for other in ("b1'", "b3'", "a4'")):
        yield "crossed-a6-isolated", v.move(to_a=("a1", "b2", "a3", "b4", "b6"), to_i=("a5",))
    else:
        yield "crossed", v.move(to_a=("a1", "b2", "a3", "b4", "a5"), to_i=("b6",))


_C4 = ("a0", "b1", "a2", "b3")
_OUTSIDE = {"b0'": "a0", "a1'": "b1", "b2'": "a2", "a3'": "b3"}


def _drop(name: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return tuple(x for x in _C4 if x != name), (name,)


def _partner_rule(v: _View, pairs: Sequence[tuple[str, str]]) -> Candidate | None:
    """Some outside vertex in ``I``: the cycle vertex next to it that faces its partner joins ``I``."""
    partner = {x: y for p in pairs for x, y in (p, p[::-1])}
    for out in _OUTSIDE:
        if v.in_i(out):
            to_a, to_i = _drop(_OUTSIDE[partner[out]])
            return f"{out}-in-i", v.move(to_a=to_a, to_i=to_i)
    return None


def _tries(v: _View, tag: str, names: Sequence[str]) -> Iterator[Candidate]:
    for name in names:
        to_a, to_i = _drop(name)
        yield f"{tag}-{name}-in-i", v.move(to_a=to_a, to_i=to_i)


def _separating_c4(v: _View) -> Iterator[Candidate]:
    if v.step.note == "split":
        yield "split", v.move(to_a=_C4)
        return
    outside = _partner_rule(v, (("b0'", "a3'"), ("b2'", "a1'")))
    if outside is not None:
        yield outside
    elif v.step.note == "crossing":
        yield from _tries(v, "crossing", ("a0", "a2"))
    elif v.a_path("b0'", "b2'"):
        yield from _tries(v, "opposite-b-path", ("a0", "a2", "b3"))
    else:
        yield from _tries(v, "opposite-a-path", ("b1", "b3", "a2"))


def _plain_c4(v: _View) -> Iterator[Candidate]:
    variant = v.step.match.variant
    if variant == 1:
        outside = _partner_rule(v, (("b0'", "a1'"), ("a3'", "b2'")))
        if outside is not None:
            yield outside
        elif v.a_path("b0'", "b2'") or v.a_path("b0'", "a3'"):
            yield from _tries(v, "bridgeless-b0-path", ("a0", "b3"))
        else:
            yield from _tries(v, "bridgeless-a1-path", ("b1", "a2"))
        return

    if variant == 2:
        outside = _partner_rule(v, (("a3'", "b0'"), ("a1'", "b2'")))
        if outside is not None:
            yield outside
            return
        step = v.step
        near = step.region
        far = frozenset(range(v.g.n)) - near - {v.r(x) for x in _C4}
        into_far = step.bridge is not None and step.bridge[0] in near
        far_path = v.directed_a_path("b2'", "a3'", far)
        near_path = v.directed_a_path("a1'", "b0'", near)
        if far_path and not near_path:
            yield from _tries(v, "bridged-far-path", ("a2", "b3"))
        elif near_path and not far_path:
            yield from _tries(v, "bridged-near-path", ("a0", "b1"))
        else:
            yield "bridged-all-in-a", v.move(to_a=_C4)
            yield from _tries(v, "bridged-edge", ("b3",) if into_far else ("b1",))
        return

    outside = _partner_rule(v, (("a1'", "b2'"), ("a3'", "b0'")))
    if outside is not None:
        yield outside
        return
    across = v.a_path("a1'", "b0'")
    along = v.a_path("a3'", "b2'")
    both_b = ("a0", "a2")
    if across and along:
        yield "general-both-paths", v.move(to_a=both_b, to_i=("b1", "b3"))
        yield from _tries(v, "general-both-paths", ("b1", "a2"))
    elif along:
        yield from _tries(v, "general-a3-path", ("b3",))
        yield "general-a3-path-b-in-i", v.move(to_a=both_b, to_i=("b1", "b3"))
    elif across:
        yield from _tries(v, "general-a1-path", ("b1",))
        yield "general-a1-path-b-in-i", v.move(to_a=both_b, to_i=("b1", "b3"))
    elif v.a_path("a1'", "a3'"):
        yield from _tries(v, "general-a-ends", ("b3", "b1", "a2"))
    else:
        yield from _tries(v, "general-b-ends", ("a2", "a0", "b3"))


def _deg2_pair_cut(v: _View) -> Iterator[Candidate]:
    if "z" not in v.new:
        yield "disconnected", v.move(to_a=("u", "v"))
    elif v.new["z"]:
        yield "z-in-a", v.move(to_a=("u", "v"))
    else:
        closing = tuple(name for name in ("u", "v") if v.on_cycle(name, ("u", "v")))
        kept = tuple(name for name in ("u", "v") if name not in closing)
        yield f"z-in-i-{'-'.join(closing) or 'none'}", v.move(to_a=kept, to_i=closing)


_FACIAL_MIRROR = {"a0": "b5", "b1": "a4", "a2": "b3", "b2'": "a3'"}


def _deg2_facial_dist3(v: _View) -> Iterator[Candidate]:
    if v.in_i("a0", "a2"):
        yield "a0-a2-in-i", v.move(to_a=("b1", "a2", "a4"), to_i=("b3",))
        return
    if v.in_i("a0"):
        if v.on_cycle("a4", ("b1", "a4")):
            yield "a0-in-i-a4-closes", v.move(to_a=("b1",), to_i=("a4",))
        else:
            yield "a0-in-i", v.move(to_a=("b1", "a4"))
        return
    if v.in_i("b5"):
        if v.in_i("b3"):
            yield "b5-in-i-b3-in-i", v.move(to_a=("b1", "b3", "a4"), to_i=("a2",))
        elif v.in_i("a2"):
            yield "b5-in-i-a2-in-i", v.move(to_a=("a4", "b1"))
        else:
            yield "b5-in-i", v.move(to_a=("a4",), to_i=("b1",))
        return
    tag = ""
    if not v.in_a("a2"):
        v, tag = v.mirrored(_FACIAL_MIRROR), "mirror-"
    if v.a_path("a0", "b5"):
        if v.in_a("b3"):
            yield f"{tag}a-path-b3-in-a", v.move(to_i=("b1", "a4"))
        else:
            yield f"{tag}a-path-b3-in-i", v.move(to_a=("a4",), to_i=("b1",))
    elif v.in_a("b3"):
        if v.a_path("a0", "b3"):
            yield f"{tag}a0-reaches-b3", v.move(to_a=("a4",), to_i=("b1",))
        else:
            yield f"{tag}b5-reaches-b3", v.move(to_a=("b1",), to_i=("a4",))
    elif v.a_path("a2", "b5"):
        yield f"{tag}a2-reaches-b5", v.move(to_a=("b1", "a4"))
    elif v.a_path("a2", "a3'"):
        yield f"{tag}a2-reaches-a3", v.move(to_a=("b1", "b3", "a4"), to_i=("a2",))
    else:
        yield f"{tag}a3-reaches-b5", v.move(to_a=("b3",), to_i=("b1", "a4"))


def _hex_prelude(
    v: _View, hub: str, left: str, right: str, middle: str, flank: tuple[str, str]
) -> Candidate | None:
    if v.in_a(left, right):
        return "hex-both-in-a", v.move(to_i=(hub,))
    if v.in_a(left) or v.in_a(right):
        return "hex-one-in-a", v.move(to_a=(hub,))
    if v.in_i(middle):
        return "hex-swap", v.move(to_a=(left, middle, right), to_i=(*flank, hub))
    return None


def _closing_vertex(v: _View, joining: str, edges: Sequence[tuple[str, int]]) -> str | None:
    """First hexagon vertex whose outside edge lies on a directed cycle once ``joining`` enters ``A``."""
    inside = v.a | {v.r(joining)}
    digraph = v.g.nx_graph.subgraph(inside)
    for name, outside in edges:
        x = v.r(name)
        if x not in inside or outside not in inside:
            continue
        tail, head = (x, outside) if v.g.has_arc(x, outside) else (outside, x)
        if nx.has_path(digraph, head, tail):
            return name
    return None


def _outside_of(v: _View, name: str, skip: Sequence[str]) -> int:
    excluded = {v.r(x) for x in skip}
    return next(u for u in v.g.neighbors(v.r(name)) if u not in excluded)


def _hexagon_step(
    v: _View, hub: str, joining: str, far: str, order: Sequence[tuple[str, Sequence[str]]]
) -> Iterator[Candidate]:
    edges = [(name, _outside_of(v, name, skip)) for name, skip in order]
    x = _closing_vertex(v, joining, edges)
    if x is None:
        yield "hex-acyclic", v.move(to_a=(joining, hub))
        return
    if x == order[-1][0] or not v.connected_with((joining,), (x,)):
        yield f"hex-closing-{x}-far", v.move(to_a=(joining, far), to_i=(x, hub))
    else:
        yield f"hex-closing-{x}", v.move(to_a=(joining, hub), to_i=(x,))


def _deg2_two_hex_faces(v: _View) -> Iterator[Candidate]:
    for middle, flank in (("b3", ("a2", "a4")), ("b3'", ("a2'", "a4'"))):
        prelude = _hex_prelude(v, "a1'", "b1", "b5", middle, flank)
        if prelude is not None:
            yield prelude
            return
    order = (("a2", ("b1", "b3")), ("b3", ("a2", "a4")), ("a4", ("b3", "b5")))
    yield from _hexagon_step(v, "a1'", "b1", "b5", order)


_OCT_MIRROR = {"a0": "a4", "b1": "b3", "b7": "b5", "a1'": "a3'"}


def _bad_deg2_on_oct_face(v: _View) -> Iterator[Candidate]:
    prelude = _hex_prelude(v, "a2", "b1", "b3", "b2", ("a1'", "a3'"))
    if prelude is not None:
        yield prelude
        return
    if v.a_path("a0", "a4", avoid=("a1'", "b2", "a3'")):
        order = (("a1'", ("b1", "b2")), ("b2", ("a1'", "a3'")), ("a3'", ("b2", "b3")))
        yield from _hexagon_step(v, "a2", "b1", "b3", order)
        return
    for side, view in (("b5", v), ("b7", v.mirrored(_OCT_MIRROR))):
        if view.in_i(side):
            yield f"{side}-in-i", view.move(to_a=("a2", "b3", "b5"), to_i=("a4",))
            yield f"{side}-in-i-a6-out", view.move(to_a=("a2", "b3", "b5"), to_i=("a4", "a6"))
            return
    view = v if v.a_path("a4", "a3'", avoid=("b2",)) else v.mirrored(_OCT_MIRROR)
    tag = "a6-in-i" if view is v else "a6-in-i-mirror"
    yield tag, view.move(to_a=("b3", "a2"), to_i=("a3'",))
    yield f"{tag}-a6-in", view.move(to_a=("b3", "a2", "a6"), to_i=("a3'",))


_CASES: dict[ConfigKind, Callable[[_View], Iterator[Candidate]]] = {
    ConfigKind.ADJACENT_DEG2: _adjacent_deg2,
    ConfigKind.DEG2_ON_C4: _deg2_on_c4,
    ConfigKind.DEG2_DIST2: _deg2_dist2,
    ConfigKind.TRIPLE_SHARING_C4: _triple_sharing_c4,
    ConfigKind.TWIN_C4: _twin_c4,
    ConfigKind.SEPARATING_C4: _separating_c4,
    ConfigKind.PLAIN_C4: _plain_c4,
    ConfigKind.DEG2_PAIR_CUT: _deg2_pair_cut,
    ConfigKind.DEG2_FACIAL_DIST3: _deg2_facial_dist3,
    ConfigKind.DEG2_TWO_HEX_FACES: _deg2_two_hex_faces,
    ConfigKind.BAD_DEG2_ON_OCT_FACE: _bad_deg2_on_oct_face,
}


def _checked_view(step: ReductionStep, subs: Sequence[CaiPartition]) -> _View:
    if len(subs) != len(step.subproblems):
        raise ValueError(f"expected {len(step.subproblems)} sub-partitions, got {len(subs)}")
    for k, (sub, part) in enumerate(zip(step.subproblems, subs, strict=True)):
        verdict = verify_cai(sub.graph, part)
        if not verdict:
            raise LiftVerificationError(f"partition of subproblem {k} is invalid: {verdict.describe()}")
    return _View(step, subs)


def lift(step: ReductionStep, subs: Sequence[CaiPartition]) -> tuple[CaiPartition, str]:
    """CAI-partition of ``step.graph`` and the name of the case that produced it."""
    view = _checked_view(step, subs)
    cases = _cube(view) if step.note == "cube" else _CASES[step.match.kind](view)
    tried: list[str] = []
    for name, candidate in cases:
        if candidate is not None and verify_cai(step.graph, candidate):
            logger.debug("lifted", extra={"kind": str(step.match.kind), "case": name, "rejected": len(tried)})
            return candidate, name
        tried.append(name)
    raise NoCaseApplies(
        f"no case of {step.match.kind} extends the partition"
        f" (tried {', '.join(tried) or 'nothing'}; roles {step.match.describe_roles()})"
    )


def complete_locally(
    step: ReductionStep, subs: Sequence[CaiPartition], budget: int = DEFAULT_FALLBACK_BUDGET
) -> CaiPartition | None:
    """Keep the lifted sides outside the configuration and let the exact solver place the rest."""
    view = _checked_view(step, subs)
    g = step.graph
    present = set().union(*(sub.vertex_map.keys() for sub in step.subproblems)) if step.subproblems else set()
    free = step.match.vertices() | (set(range(g.n)) - present) | (view.a & view.i)
    result = solve_cai(g, SolveOptions(forced_a=view.a - free, forced_i=view.i - free, node_budget=budget))
    if result.found and isinstance(result.partition, CaiPartition):
        return result.partition
    return None
