from __future__ import annotations

import pytest

from caipart.constructions.generators import (
    octahedron,
    prism,
    random_orientation,
    random_sp_instance,
    sp_nested,
    theta,
)
from caipart.core.errors import EarWithoutInterior, NotInClass, PropertyViolation
from caipart.core.graph import Graph
from caipart.core.partition import verify_cai
from caipart.solvers.ears import (
    EarDecomposition,
    cai_from_ears,
    independent_per_ear,
    short_nested_ears,
    solve_series_parallel,
    sp_recognize,
    validate_ears,
)


def _square_with_chord() -> Graph:
    return Graph.undirected(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def test_sp_recognize() -> None:
    k4 = Graph.undirected(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])

    assert sp_recognize(theta(2, 2, 2)[0])
    assert sp_recognize(sp_nested(3)[0])
    assert not sp_recognize(k4)


def test_cube_is_not_series_parallel(cube) -> None:
    g, _ = cube

    assert not sp_recognize(g)
    with pytest.raises(NotInClass, match="series_parallel"):
        solve_series_parallel(g)


def test_theta_partition() -> None:
    g, _ = theta(2, 2, 2)

    partition = solve_series_parallel(g)

    assert verify_cai(g, partition)
    assert partition.i == frozenset({0})


def test_oriented_input_gets_a_valid_partition() -> None:
    g, _ = theta(2, 2, 2)
    oriented = random_orientation(g, seed=3)

    assert verify_cai(oriented, solve_series_parallel(oriented))


@pytest.mark.parametrize("ears", [0, 1, 2, 4])
def test_nested_family(ears: int) -> None:
    g, _ = sp_nested(ears)

    decomposition = short_nested_ears(g)
    partition = cai_from_ears(g, decomposition)

    assert len(decomposition) == ears + 1
    assert verify_cai(g, partition)
    assert all(count <= 1 for count in independent_per_ear(decomposition, partition.i))


@pytest.mark.parametrize("seed", range(5))
def test_random_series_parallel_instances(seed: int) -> None:
    g, _ = random_sp_instance(14, seed)

    assert sp_recognize(g)
    assert verify_cai(g, solve_series_parallel(g))


def test_ear_without_interior_is_rejected() -> None:
    g = _square_with_chord()
    decomposition = EarDecomposition(((0, 1, 2, 3), (0, 2)), (None, 0), (None, (0, 1, 2)))

    with pytest.raises(EarWithoutInterior, match="single edge"):
        cai_from_ears(g, decomposition)


def test_missing_edges_violate_covering() -> None:
    decomposition = EarDecomposition(((0, 1, 2, 3),), (None,), (None,))

    with pytest.raises(PropertyViolation, match="property 2"):
        validate_ears(_square_with_chord(), decomposition)


def test_decomposition_lines() -> None:
    decomposition = short_nested_ears(theta(2, 2, 2)[0])

    lines = decomposition.lines()

    assert lines[0].startswith("ear 0 cycle")
    assert lines[1].startswith("ear 1 parent 0 path")


@pytest.mark.parametrize("block", range(4))
def test_series_parallel_corpus(block: int) -> None:
    for seed in range(50 * block, 50 * block + 50):
        g, _ = random_sp_instance(6 + seed % 20, seed)

        decomposition = short_nested_ears(g)
        partition = cai_from_ears(g, decomposition)

        assert sp_recognize(g)
        assert verify_cai(g, partition)
        assert all(count <= 1 for count in independent_per_ear(decomposition, partition.i))
        oriented = random_orientation(g, seed)
        assert verify_cai(oriented, solve_series_parallel(oriented))


@pytest.mark.parametrize(
    "g",
    [
        Graph.undirected(4, [(u, v) for u in range(4) for v in range(u + 1, 4)]),
        prism(4)[0],
        prism(6)[0],
        octahedron()[0],
    ],
    ids=["k4", "cube", "prism6", "octahedron"],
)
def test_two_connected_non_series_parallel_has_no_nested_ears(g: Graph) -> None:
    assert not sp_recognize(g)
    with pytest.raises(PropertyViolation):
        short_nested_ears(g)
