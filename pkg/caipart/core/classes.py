from __future__ import annotations

from enum import StrEnum

from caipart.core.embedding import FaceSet, RotationSystem, trace_faces
from caipart.core.errors import InconsistentRotation, NotInClass, PlanarityViolation
from caipart.core.graph import Graph, is_bipartite, is_oriented, is_subcubic, is_two_connected


class ClassPredicate(StrEnum):
    DIRECTED = "directed"
    ORIENTED = "oriented"
    PLANAR = "planar"
    BIPARTITE = "bipartite"
    TWO_CONNECTED = "two_connected"
    SUBCUBIC = "subcubic"
    SERIES_PARALLEL = "series_parallel"


def class_f_violations(g: Graph, rot: RotationSystem) -> list[ClassPredicate]:
    """Predicates of the planar bipartite 2-connected subcubic oriented class that ``g`` fails."""
    failed: list[ClassPredicate] = []
    if not g.is_directed:
        failed.append(ClassPredicate.DIRECTED)
    elif not is_oriented(g):
        failed.append(ClassPredicate.ORIENTED)
    try:
        trace_faces(g, rot)
    except (PlanarityViolation, InconsistentRotation):
        failed.append(ClassPredicate.PLANAR)
    if is_bipartite(g) is None:
        failed.append(ClassPredicate.BIPARTITE)
    if not is_two_connected(g):
        failed.append(ClassPredicate.TWO_CONNECTED)
    if not is_subcubic(g):
        failed.append(ClassPredicate.SUBCUBIC)
    return failed


def require_class_f(g: Graph, rot: RotationSystem) -> FaceSet:
    failed = class_f_violations(g, rot)
    if failed:
        raise NotInClass(failed[0], ", ".join(failed))
    return trace_faces(g, rot)
