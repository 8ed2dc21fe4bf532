from __future__ import annotations

import pytest

from caipart.constructions.generators import (
    even_cycle,
    octahedron,
    prism,
    random_cut_instance,
    random_f_instance,
    theta,
)
from caipart.core.embedding import (
    RotationEditor,
    RotationSystem,
    discharge_audit,
    embed,
    facial_distance,
    rotation_from_faces,
    trace_faces,
)
from caipart.core.errors import InconsistentRotation, NoConfiguration, PlanarityViolation
from caipart.core.graph import Graph
from caipart.solvers.reduction import detect


def test_octahedron_has_eight_triangles() -> None:
    g, rot = octahedron()

    faces = trace_faces(g, rot)

    assert len(faces) == 8
    assert all(face.degree == 3 for face in faces.faces)


def test_four_cycle_has_two_square_faces() -> None:
    g, rot = even_cycle(4)

    faces = trace_faces(g, rot)

    assert [face.degree for face in faces.faces] == [4, 4]


def test_faces_cover_every_dart_once(cube) -> None:
    g, rot = cube

    faces = trace_faces(g, rot)

    assert sum(face.degree for face in faces.faces) == 2 * g.edge_count
    assert all(faces[faces.face_of(u, v)].darts.count((u, v)) == 1 for u, v in g.edges)


def test_reversed_ring_breaks_planarity(cube) -> None:
    g, rot = cube
    order = list(rot.order)
    order[0] = tuple(reversed(order[0]))

    with pytest.raises(PlanarityViolation, match="expected 2"):
        trace_faces(g, RotationSystem(tuple(order)))


def test_rotation_missing_an_edge_is_inconsistent() -> None:
    g = Graph.undirected(3, [(0, 1), (1, 2), (0, 2)])
    rot = RotationSystem.from_mapping({0: [1], 1: [0, 2], 2: [1, 0]}, 3)

    with pytest.raises(InconsistentRotation, match="missing"):
        trace_faces(g, rot)


def test_mirror_keeps_face_count(cube) -> None:
    g, rot = cube

    assert len(trace_faces(g, rot.mirror())) == len(trace_faces(g, rot)) == 6


def test_embed_finds_planar_rotation() -> None:
    g, _ = prism(6)

    faces = trace_faces(g, embed(g))

    assert len(faces) == g.edge_count - g.n + 2


def test_embed_rejects_k33() -> None:
    k33 = Graph.undirected(6, [(u, v) for u in range(3) for v in range(3, 6)])

    with pytest.raises(PlanarityViolation):
        embed(k33)


def test_rotation_from_faces_round_trips_octahedron() -> None:
    g, rot = octahedron()
    walks = [face.walk for face in trace_faces(g, rot).faces]

    rebuilt = rotation_from_faces(walks, g.n)

    assert len(trace_faces(g, rebuilt)) == 8


def test_facial_distance_on_octagon() -> None:
    g, rot = even_cycle(8)
    faces = trace_faces(g, rot)

    assert facial_distance(faces, g, 0, 2, 6) == 4
    assert facial_distance(faces, g, 0, 2, 3) == 1


def test_facial_distance_rejects_vertices_off_the_face(cube) -> None:
    g, rot = cube
    faces = trace_faces(g, rot)
    off = next(v for v in range(g.n) if v not in faces[0].vertices)

    with pytest.raises(ValueError, match="not both on face"):
        facial_distance(faces, g, 0, faces[0].walk[0], off)


def test_discharge_total_is_minus_twelve() -> None:
    g, rot = prism(6)

    report = discharge_audit(g, trace_faces(g, rot))

    assert report.initial_total == -12
    assert report.final_total == -12
    assert report.bad_vertices == frozenset()


def test_editor_subdivision_keeps_planarity() -> None:
    g, rot = even_cycle(4)
    editor = RotationEditor(rot)

    editor.subdivide(0, 1, 4)
    editor.subdivide(4, 1, 5)
    h = Graph.undirected(6, [(1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 1)])

    faces = trace_faces(h, editor.build({v: v for v in range(6)}, 6))

    assert [face.degree for face in faces.faces] == [6, 6]


def test_good_two_vertices_are_paid_by_octagons() -> None:
    g, rot = theta(4, 4, 4)
    faces = trace_faces(g, rot)

    report = discharge_audit(g, faces)

    assert [face.degree for face in faces.faces] == [8, 8, 8]
    assert report.bad_vertices == frozenset()
    assert all(report.final_vertex_charge[v] == 0 for v in range(2, g.n))
    assert sorted(report.final_face_charge.values()) == [-4, -4, -4]
    assert report.final_total == -12


def test_bad_two_vertices_take_two_and_hexagon_only_ones_stay_negative() -> None:
    g, rot = theta(2, 4, 4)
    faces = trace_faces(g, rot)
    octagon = next(i for i, face in enumerate(faces.faces) if face.degree == 8)

    report = discharge_audit(g, faces)

    assert report.bad_vertices == frozenset(range(2, g.n))
    assert report.final_vertex_charge[2] == -2
    assert all(report.final_vertex_charge[v] == 0 for v in range(3, g.n))
    assert report.final_face_charge[octagon] == -10
    assert sorted(report.negative) == [("face", octagon, -10), ("vertex", 2, -2)]
    assert report.final_total == -12


@pytest.mark.parametrize("seed", range(40))
def test_unreducible_graphs_always_carry_negative_charge(seed: int) -> None:
    build = random_cut_instance if seed % 2 else random_f_instance
    g, rot = build(14 + seed % 10, seed)
    faces = trace_faces(g, rot)

    report = discharge_audit(g, faces)

    assert sum(face.degree for face in faces.faces) == 2 * g.edge_count
    assert report.initial_total == -12
    assert report.final_total == -12
    try:
        detect(g, rot, base_size=4)
    except NoConfiguration:
        assert report.negative
