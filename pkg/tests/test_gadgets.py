from __future__ import annotations

import pytest

from caipart.constructions.duality import TriangulationBundle, delete_class, eulerian_triangulation_problems
from caipart.constructions.gadgets import (
    BLOCKER_VERTICES,
    HUB_COUNT,
    Catalog,
    bold_edge_count,
    build_blocker,
    build_blocker_chain,
    build_g1,
    build_g2,
    catalog_graph,
    certify_class_deletion,
    sweep_catalog,
    verify_gadget_properties,
)
from caipart.core.graph import degree, is_bipartite
from caipart.solvers.exact import Outcome


@pytest.fixture(scope="module")
def blocker() -> TriangulationBundle:
    return build_blocker()


def test_gadget_shapes() -> None:
    g1, g2 = build_g1(), build_g2()

    assert g1.graph.n == 13
    assert g2.graph.n == 14
    assert g1.outer_face.vertices == frozenset(g1.interface)
    assert all(face.degree == 3 for face in g1.inner_faces)
    assert degree(g2.graph, 13).out == 1


def test_gadget_properties_hold() -> None:
    report = verify_gadget_properties()

    assert report.holds
    assert [item.number for item in report.items] == list(range(1, 11))


def test_blocker_is_an_eulerian_triangulation(blocker: TriangulationBundle) -> None:
    assert blocker.graph.n == BLOCKER_VERTICES
    assert blocker.graph.edge_count == 3 * BLOCKER_VERTICES - 6
    assert len(blocker.faces) == 2 * BLOCKER_VERTICES - 4
    assert eulerian_triangulation_problems(blocker) == []


def test_blocker_hubs_and_color_classes(blocker: TriangulationBundle) -> None:
    g = blocker.graph

    assert (g.n, g.edge_count, len(blocker.faces)) == (138, 408, 272)
    assert [degree(g, v).out for v in range(6)] == [11] * 6
    assert [degree(g, v).out for v in range(6, HUB_COUNT)] == [4] * 12
    assert {blocker.class_of(v) for v in (0, 5, 9, 10, 15, 16)} == {0}
    assert {blocker.class_of(v) for v in (1, 3, 7, 8, 13, 14)} == {1}
    assert {blocker.class_of(v) for v in (2, 4, 6, 11, 12, 17)} == {2}


@pytest.mark.parametrize("index", [0, 1, 2])
def test_blocker_classes_delete_to_bipartite_graphs(blocker: TriangulationBundle, index: int) -> None:
    h, _ = delete_class(blocker, index)

    assert h.n == BLOCKER_VERTICES - len(blocker.tripartition.members(index))
    assert is_bipartite(h) is not None


def test_blocker_chain_rejects_zero() -> None:
    with pytest.raises(ValueError, match="k must be >= 1"):
        build_blocker_chain(0)


@pytest.mark.slow
def test_blocker_chain_glues_three_copies() -> None:
    bundle = build_blocker_chain(2)

    assert bundle.graph.n == BLOCKER_VERTICES + 2 * (BLOCKER_VERTICES - 3)
    assert eulerian_triangulation_problems(bundle) == []


@pytest.mark.parametrize("which", [Catalog.B, Catalog.C, Catalog.D])
def test_small_catalog_graphs_have_no_partition(which: Catalog) -> None:
    sweep = sweep_catalog(which)

    assert sweep.orientations == 1
    assert sweep.holds


@pytest.mark.slow
@pytest.mark.parametrize("which", [Catalog.A, Catalog.E])
def test_bold_orientations_have_no_partition(which: Catalog) -> None:
    sweep = sweep_catalog(which, worker_count=2)

    assert sweep.orientations == 2 ** bold_edge_count(which)
    assert sweep.found == ()
    assert sweep.holds


def test_catalog_graph_errors() -> None:
    with pytest.raises(ValueError, match="unknown catalog graph"):
        catalog_graph("z")
    with pytest.raises(ValueError, match="bold orientation index"):
        catalog_graph(Catalog.E, 64)


def test_catalog_labels() -> None:
    assert catalog_graph(Catalog.E).labels is not None
    assert catalog_graph(Catalog.A, 5).n == 16


def test_certification_exhausts_a_small_budget() -> None:
    report = certify_class_deletion(0, 50)

    assert report.outcome == Outcome.BUDGET_EXCEEDED
    assert report.refutation is None
    assert report.vertices < BLOCKER_VERTICES
