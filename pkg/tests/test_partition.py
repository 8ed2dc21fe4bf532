from __future__ import annotations

from collections.abc import Callable
from itertools import combinations

import pytest

from caipart.constructions.duality import eulerian_orient, triangulation_bundle
from caipart.constructions.generators import octahedron, random_eulerian_triangulation
from caipart.constructions.prng import SplitMix64
from caipart.core.embedding import RotationSystem, trace_faces
from caipart.core.errors import LiftVerificationError
from caipart.core.graph import Graph, induced_acyclic, induced_connected, rebuild
from caipart.core.partition import (
    BiAcyclicPartition,
    CaiPartition,
    Clause,
    Tripartition,
    add_leaf_to_a,
    is_permeating,
    lift_obs_main,
    remove_leaf_from_a,
    verify_cai,
    verify_tripartition,
    verify_two_acyclic,
)
from caipart.solvers.exact import solve_cai


def test_directed_path_and_one_vertex_is_cai(directed_c4: Graph) -> None:
    verdict = verify_cai(directed_c4, CaiPartition.of([0, 1, 2], [3]))

    assert verdict.ok
    assert verdict.describe() == "ok"


def test_whole_directed_cycle_is_not_acyclic(directed_c4: Graph) -> None:
    verdict = verify_cai(directed_c4, CaiPartition.of(range(4), []))

    assert not verdict
    assert verdict.clause == Clause.ACYCLIC


def test_adjacent_independent_vertices_are_reported(cube) -> None:
    g, rot = cube
    face = trace_faces(g, rot)[0].vertices

    verdict = verify_cai(g, CaiPartition.of(face, set(range(g.n)) - face))

    assert verdict.clause == Clause.INDEPENDENT
    assert g.adjacent(*verdict.witness)


def test_disconnected_acyclic_side_is_reported() -> None:
    cycle = Graph.undirected(6, [(i, (i + 1) % 6) for i in range(6)])

    verdict = verify_cai(cycle, CaiPartition.of([0, 1, 3, 4], [2, 5]))

    assert verdict.clause == Clause.CONNECTED


def test_bad_cover_raises(directed_c4: Graph) -> None:
    with pytest.raises(ValueError, match="overlap"):
        verify_cai(directed_c4, CaiPartition.of([0, 1, 2], [2, 3]))
    with pytest.raises(ValueError, match="misses vertices"):
        verify_cai(directed_c4, CaiPartition.of([0, 1], [3]))


def test_two_acyclic_rejects_directed_triangle() -> None:
    triangle = Graph.directed(4, [(0, 1), (1, 2), (2, 0), (2, 3)])

    verdict = verify_two_acyclic(triangle, BiAcyclicPartition.of([0, 1, 2], [3]))

    assert verdict.clause == Clause.FIRST_ACYCLIC
    assert verify_two_acyclic(triangle, BiAcyclicPartition.of([0, 1], [2, 3]))


def test_tripartition_checks() -> None:
    g, _ = octahedron()

    assert not verify_tripartition(g, Tripartition((0,) * g.n))
    with pytest.raises(ValueError, match="0, 1 or 2"):
        Tripartition((0, 1, 2)).members(3)


def test_permeating_sets_of_octahedron() -> None:
    g, rot = octahedron()
    faces = trace_faces(g, rot)

    assert is_permeating(g, faces, g.neighbors(0))
    assert not is_permeating(g, faces, [0])


def test_leaf_helpers() -> None:
    path = Graph.undirected(3, [(0, 1), (1, 2)])

    assert add_leaf_to_a(path, [0, 1], 2) == frozenset({0, 1, 2})
    assert remove_leaf_from_a(path, [0, 1, 2], 0) == frozenset({1, 2})
    with pytest.raises(ValueError, match="expected exactly 1"):
        remove_leaf_from_a(path, [0, 1, 2], 1)


def test_add_leaf_rejects_digon() -> None:
    digon = Graph.directed(2, [(0, 1), (1, 0)])

    with pytest.raises(ValueError, match="digon"):
        add_leaf_to_a(digon, [0], 1)


def test_lift_from_class_deleted_octahedron() -> None:
    g, rot = octahedron()
    t = eulerian_orient(g)
    bundle = triangulation_bundle(t, rot)
    removed = bundle.tripartition.members(0)
    rest, mapping = rebuild(t, (v for v in range(t.n) if v not in removed))
    back = {new: old for old, new in mapping.items()}
    found = solve_cai(rest).partition
    assert isinstance(found, CaiPartition)
    cai = CaiPartition.of((back[v] for v in found.a), (back[v] for v in found.i))

    lifted = lift_obs_main(t, rot, bundle.tripartition, 0, cai)

    assert lifted.a2 >= removed
    assert verify_two_acyclic(t, lifted)


def test_lift_rejects_partition_touching_deleted_class() -> None:
    g, rot = octahedron()
    g = eulerian_orient(g)
    bundle = triangulation_bundle(g, rot)
    removed = sorted(bundle.tripartition.members(0))
    others = [v for v in range(g.n) if v not in removed]

    with pytest.raises(ValueError, match="avoid the deleted class"):
        lift_obs_main(g, rot, bundle.tripartition, 0, CaiPartition.of(others, removed))


@pytest.mark.parametrize("orient", [False, True])
def test_lift_requires_eulerian_orientation(orient: bool) -> None:
    g, rot = octahedron()
    bundle = triangulation_bundle(g, rot)
    removed = bundle.tripartition.members(0)
    if orient:
        g = Graph.directed(g.n, g.edges)

    with pytest.raises(ValueError, match="not an Eulerian orientation"):
        lift_obs_main(g, rot, bundle.tripartition, 0, CaiPartition.of(set(range(g.n)) - removed, ()))


def test_lift_error_type_is_runtime() -> None:
    assert issubclass(LiftVerificationError, RuntimeError)


def _has_directed_cycle(g: Graph, side: frozenset[int]) -> bool:
    remaining = set(side)
    while remaining:
        sources = {v for v in remaining if not any(u in remaining for u in g.in_neighbors(v))}
        if not sources:
            return True
        remaining -= sources
    return False


def _reachable(g: Graph, side: frozenset[int]) -> set[int]:
    start = min(side)
    seen, stack = {start}, [start]
    while stack:
        for u in g.neighbors(stack.pop()):
            if u in side and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def _naive_cai(g: Graph, a: frozenset[int], i: frozenset[int]) -> bool:
    if any(u in i and v in i for u, v in g.arcs):
        return False
    return bool(a) and not _has_directed_cycle(g, a) and _reachable(g, a) == a


@pytest.mark.parametrize("block", range(10))
def test_verify_cai_agrees_with_naive_check(block: int, random_oriented: Callable[[int, int], Graph]) -> None:
    for seed in range(100 * block, 100 * block + 100):
        rng = SplitMix64(seed)
        g = random_oriented(1 + rng.below(7), rng.next_u64())
        a = frozenset(v for v in range(g.n) if rng.below(3))
        partition = CaiPartition(a, frozenset(range(g.n)) - a)

        assert bool(verify_cai(g, partition)) == _naive_cai(g, partition.a, partition.i), seed


@pytest.mark.parametrize("seed", range(30))
def test_leaf_helpers_keep_connected_acyclic(seed: int, random_oriented: Callable[[int, int], Graph]) -> None:
    g = random_oriented(6, seed)
    found = solve_cai(g).partition
    if not isinstance(found, CaiPartition):
        return

    for v in range(g.n):
        inside = [u for u in g.neighbors(v) if u in found.a]
        if len(inside) != 1:
            continue
        if v in found.a:
            smaller = remove_leaf_from_a(g, found.a, v)
            assert induced_connected(g, smaller)
            assert induced_acyclic(g, smaller)
        else:
            larger = add_leaf_to_a(g, found.a, v)
            assert induced_connected(g, larger)
            assert induced_acyclic(g, larger)


def _small_triangulations() -> list[tuple[Graph, RotationSystem]]:
    undirected = [octahedron()]
    for seed in range(12):
        bundle = random_eulerian_triangulation(4, seed)
        if bundle.graph.n <= 12:
            undirected.append((Graph.undirected(bundle.graph.n, bundle.graph.edges), bundle.rotation))
    return undirected


def test_permeating_subgraphs_are_exactly_class_deleted_partitions() -> None:
    checked = agreeing = 0
    for g, rot in _small_triangulations():
        bundle = triangulation_bundle(g, rot)
        for index in range(3):
            removed = bundle.tripartition.members(index)
            kept = [v for v in range(g.n) if v not in removed]
            rest, mapping = rebuild(g, kept)
            for size in range(1, len(kept) + 1):
                for chosen in combinations(kept, size):
                    a = frozenset(chosen)
                    permeating = (
                        is_permeating(g, bundle.faces, a) and induced_connected(g, a) and induced_acyclic(g, a)
                    )
                    local = CaiPartition.of((mapping[v] for v in a), (mapping[v] for v in kept if v not in a))
                    assert permeating == bool(verify_cai(rest, local)), (g.n, index, sorted(a))
                    checked += 1
                    agreeing += permeating

    assert checked > 100
    assert agreeing > 0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_lifted_partitions_stay_permeating(seed: int) -> None:
    bundle = random_eulerian_triangulation(6 + seed % 6, seed)
    t = bundle.graph
    apex_class = bundle.class_of(t.n - 1)
    removed = bundle.tripartition.members(apex_class)
    rest, mapping = rebuild(t, (v for v in range(t.n) if v not in removed))
    back = {new: old for old, new in mapping.items()}
    found = solve_cai(rest).partition
    assert isinstance(found, CaiPartition)
    cai = CaiPartition.of((back[v] for v in found.a), (back[v] for v in found.i))

    lifted = lift_obs_main(t, bundle.rotation, bundle.tripartition, apex_class, cai)

    assert lifted.a2 >= removed
    assert verify_two_acyclic(t, lifted)
    assert is_permeating(t, bundle.faces, lifted.a1)
