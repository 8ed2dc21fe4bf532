from __future__ import annotations

from collections import Counter

import pytest

from caipart.constructions.generators import (
    brick_wall,
    even_cycle,
    prism,
    random_cut_instance,
    random_f_instance,
    random_orientation,
    subdivide_even_embedded,
)
from caipart.core.embedding import RotationSystem, trace_faces
from caipart.core.errors import ClassViolation, LiftVerificationError, NoCaseApplies, NotInClass
from caipart.core.graph import Graph
from caipart.core.partition import CaiPartition, verify_cai
from caipart.solvers.exact import solve_cai
from caipart.solvers.reduction import (
    ConfigKind,
    ReductionOptions,
    detect,
    lift,
    reduce,
    solve_subcubic,
)
from caipart.solvers.reduction.lifts import complete_locally
from caipart.solvers.reduction.matches import _find_deg2_dist2, _twin_image, four_cycles, oriented
from caipart.solvers.reduction.solver import TraceEvent


@pytest.fixture
def subdivided_prism() -> tuple[Graph, RotationSystem]:
    g, rot = prism(6)
    h, h_rot = subdivide_even_embedded(g, rot, (0, 1))
    return random_orientation(h, seed=11), h_rot


def test_cycle_and_small_base_cases() -> None:
    c6, c6_rot = even_cycle(6)
    p4, p4_rot = prism(4)

    assert detect(random_orientation(c6, 1), c6_rot).kind == ConfigKind.BASE_CYCLE
    assert detect(random_orientation(p4, 2), p4_rot).kind == ConfigKind.BASE_SMALL


def test_adjacent_degree_two_pair(subdivided_prism: tuple[Graph, RotationSystem]) -> None:
    g, rot = subdivided_prism

    match = detect(g, rot)

    assert match.kind == ConfigKind.ADJACENT_DEG2
    assert {match["b1"], match["a2"]} == {12, 13}
    assert {match["a0"], match["b3"]} == {0, 1}


def test_reduction_shrinks_and_lifts(subdivided_prism: tuple[Graph, RotationSystem]) -> None:
    g, rot = subdivided_prism
    step = reduce(g, rot, detect(g, rot))

    assert len(step.subproblems) == 1
    sub = step.subproblems[0]
    assert sub.size < g.n + g.edge_count
    assert sub.graph.n == 12

    result = solve_cai(sub.graph)
    assert isinstance(result.partition, CaiPartition)
    partition, case = lift(step, [result.partition])
    assert verify_cai(g, partition)
    assert case


def test_cube_core_is_matched(one_way_cube) -> None:
    g, rot = one_way_cube

    match = detect(g, rot, base_size=4)
    step = reduce(g, rot, match)

    assert match.kind == ConfigKind.TRIPLE_SHARING_C4
    assert step.note == "cube"
    assert step.subproblems == ()

    partition, case = lift(step, [])
    assert case == "cube"
    assert verify_cai(g, partition)


def test_base_cases_have_no_reduction(directed_c4: Graph) -> None:
    _, rot = even_cycle(4)
    match = detect(directed_c4, rot)

    with pytest.raises(ValueError, match="base case"):
        reduce(directed_c4, rot, match)


def test_lift_checks_partition_count(subdivided_prism: tuple[Graph, RotationSystem]) -> None:
    g, rot = subdivided_prism
    step = reduce(g, rot, detect(g, rot))

    with pytest.raises(ValueError, match="expected 1 sub-partitions, got 0"):
        lift(step, [])


def test_lift_rejects_invalid_sub_partition(subdivided_prism: tuple[Graph, RotationSystem]) -> None:
    g, rot = subdivided_prism
    step = reduce(g, rot, detect(g, rot))
    everything_independent = CaiPartition.of((), range(step.subproblems[0].graph.n))

    with pytest.raises(LiftVerificationError, match="subproblem 0 is invalid"):
        lift(step, [everything_independent])


def test_four_cycles_of_cube(cube) -> None:
    g, _ = cube

    assert len(four_cycles(g)) == 6


def test_directed_cycle_base_partition() -> None:
    _, rot = even_cycle(6)
    g = Graph.directed(6, [(v, (v + 1) % 6) for v in range(6)])

    result = solve_subcubic(g, rot)

    assert result.partition.i == frozenset({0})
    assert result.trace.lines() == ["event=match depth=0 kind=base_cycle roles=- case=-"]


def test_cube_solved_through_its_core(one_way_cube) -> None:
    g, rot = one_way_cube

    result = solve_subcubic(g, rot, ReductionOptions(base_size=4))

    assert verify_cai(g, result.partition)


@pytest.mark.parametrize("seed", range(12))
def test_generated_corpus_is_solved(seed: int) -> None:
    g, rot = random_f_instance(18 + seed, seed)

    result = solve_subcubic(g, rot)

    assert verify_cai(g, result.partition)
    assert result.trace.events[0].event == "match"


@pytest.mark.parametrize("seed", range(4))
def test_agrees_with_exact_solver(seed: int) -> None:
    g, rot = random_f_instance(14, 100 + seed)

    assert solve_cai(g).found
    assert verify_cai(g, solve_subcubic(g, rot, ReductionOptions(base_size=6)).partition)


def test_undirected_input_is_refused(cube) -> None:
    g, rot = cube

    with pytest.raises(NotInClass, match="directed fails"):
        solve_subcubic(g, rot)


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [({"base_size": 3}, "base_size"), ({"fallback_budget": 0}, "fallback_budget")],
)
def test_reduction_options_validation(kwargs: dict[str, int], message: str) -> None:
    with pytest.raises(ValueError, match=message):
        ReductionOptions(**kwargs)


def test_trace_event_line() -> None:
    event = TraceEvent("lift", 2, "plain_c4", "a0:1,b1:2", "bridgeless-b0-path-a0-in-i")

    assert event.line() == "event=lift depth=2 kind=plain_c4 roles=a0:1,b1:2 case=bridgeless-b0-path-a0-in-i"


@pytest.mark.parametrize("down", [(a, b, c) for a in (False, True) for b in (False, True) for c in (False, True)])
def test_twin_rungs_are_normalized(down: tuple[bool, bool, bool]) -> None:
    reverse, swap, variant = _twin_image(down)

    working = tuple(not d for d in down) if reverse else down
    if swap:
        working = working[::-1]
    assert working[0]
    assert variant == (1 if working[2] else 2)
    if variant == 2:
        assert working[1] == working[2]


@pytest.mark.parametrize("seed", range(8))
def test_twin_match_points_first_rung_down(seed: int) -> None:
    g, rot = prism(6)
    g = random_orientation(g, seed)

    match = detect(g, rot, base_size=4)
    working = oriented(g, match.symmetry)

    assert match.kind == ConfigKind.TWIN_C4
    assert working.has_arc(match["a1"], match["b6"])
    assert match.variant in (1, 2)
    assert working.has_arc(match["a3"], match["b4"]) == (match.variant == 1)


@pytest.mark.parametrize("seed", range(8))
def test_twin_lift_is_valid_in_every_orientation(seed: int) -> None:
    g, rot = prism(6)
    g = random_orientation(g, seed)
    step = reduce(g, rot, detect(g, rot, base_size=4))

    subs = [solve_cai(sub.graph).partition for sub in step.subproblems]
    assert all(isinstance(sub, CaiPartition) for sub in subs)
    partition, case = lift(step, subs)  # type: ignore[arg-type]

    assert verify_cai(g, partition)
    assert case


def test_class_violation_is_fatal(
    subdivided_prism: tuple[Graph, RotationSystem], monkeypatch: pytest.MonkeyPatch
) -> None:
    g, rot = subdivided_prism

    def broken(*_args: object) -> None:
        raise ClassViolation("adjacent_deg2 subproblem is not two_connected")

    monkeypatch.setattr("caipart.solvers.reduction.solver.reduce", broken)

    with pytest.raises(ClassViolation, match="two_connected"):
        solve_subcubic(g, rot)


def test_unmatched_lift_is_completed_and_traced(
    subdivided_prism: tuple[Graph, RotationSystem], monkeypatch: pytest.MonkeyPatch
) -> None:
    g, rot = subdivided_prism

    def no_case(*_args: object) -> None:
        raise NoCaseApplies("no case for this orientation")

    monkeypatch.setattr("caipart.solvers.reduction.solver.lift", no_case)

    result = solve_subcubic(g, rot)

    assert verify_cai(g, result.partition)
    assert result.trace.fallbacks == 1
    fallback = next(event for event in result.trace.events if event.event == "fallback")
    assert fallback.kind == "adjacent_deg2"
    assert fallback.case == "local-completion" or fallback.case.startswith("no-case")


def test_local_completion_extends_sub_partition(subdivided_prism: tuple[Graph, RotationSystem]) -> None:
    g, rot = subdivided_prism
    step = reduce(g, rot, detect(g, rot))
    sub = solve_cai(step.subproblems[0].graph).partition
    assert isinstance(sub, CaiPartition)

    completed = complete_locally(step, [sub])

    assert completed is not None
    assert verify_cai(g, completed)


def _solve_and_count(g: Graph, rot: RotationSystem, kinds: Counter[str]) -> None:
    result = solve_subcubic(g, rot)

    assert verify_cai(g, result.partition)
    assert result.trace.fallbacks == 0, "\n".join(result.trace.lines())
    kinds.update(event.kind for event in result.trace.events if event.event == "lift")


@pytest.mark.slow
def test_cut_corpus_is_lifted_without_fallbacks() -> None:
    kinds: Counter[str] = Counter()
    cross_checked = 0
    for seed in range(500):
        n_hint = 12 + seed % 7 if seed < 250 else 18 + seed % 23
        g, rot = random_cut_instance(n_hint, seed)
        _solve_and_count(g, rot, kinds)
        if g.n <= 18:
            assert solve_cai(g).found
            cross_checked += 1

    assert cross_checked >= 200
    assert "deg2_on_c4" in kinds


@pytest.mark.slow
def test_even_subdivision_corpus_is_lifted_without_fallbacks() -> None:
    kinds: Counter[str] = Counter()
    for seed in range(200):
        g, rot = random_f_instance(14 + seed % 17, 1000 + seed)
        _solve_and_count(g, rot, kinds)
    for m in (6, 8, 10):
        base, rot = prism(m)
        for seed in range(16):
            _solve_and_count(random_orientation(base, seed), rot, kinds)

    assert {"adjacent_deg2", "twin_c4"} <= set(kinds)


def test_brick_wall_has_deg2_pair_at_distance_two() -> None:
    g, rot = brick_wall(2, 7)

    match = _find_deg2_dist2(g, trace_faces(g, rot))

    assert match is not None
    assert match.kind == ConfigKind.DEG2_DIST2
    assert match["a2"] == 2
    assert {match["b1"], match["b3"]} == {1, 3}
    assert {match["a0"], match["a4"]} == {0, 4}
    assert match["b2'"] == 9


@pytest.mark.parametrize("seed", range(8))
def test_deg2_dist2_lift_is_valid(seed: int) -> None:
    g, rot = brick_wall(2, 7)
    g = random_orientation(g, seed)
    match = _find_deg2_dist2(g, trace_faces(g, rot))
    assert match is not None
    step = reduce(g, rot, match)

    subs = [solve_cai(sub.graph).partition for sub in step.subproblems]
    assert all(isinstance(sub, CaiPartition) for sub in subs)
    partition, case = lift(step, subs)  # type: ignore[arg-type]

    assert verify_cai(g, partition)
    assert case


@pytest.mark.slow
def test_brick_walls_are_lifted_without_fallbacks() -> None:
    kinds: Counter[str] = Counter()
    for rows, cols in ((2, 7), (2, 9), (4, 5), (4, 7), (6, 5)):
        base, rot = brick_wall(rows, cols)
        for seed in range(12):
            _solve_and_count(random_orientation(base, seed), rot, kinds)

    assert kinds
