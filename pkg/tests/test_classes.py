from __future__ import annotations

import pytest

from caipart.constructions.generators import octahedron, prism, random_orientation
from caipart.core.classes import ClassPredicate, class_f_violations, require_class_f
from caipart.core.errors import NotInClass


def test_oriented_prism_is_in_class() -> None:
    g, rot = prism(6)
    oriented = random_orientation(g, seed=7)

    assert class_f_violations(oriented, rot) == []
    assert len(require_class_f(oriented, rot)) == 8


def test_undirected_graph_fails_directed() -> None:
    g, rot = prism(4)

    assert class_f_violations(g, rot) == [ClassPredicate.DIRECTED]


def test_octahedron_fails_bipartite_and_subcubic() -> None:
    g, rot = octahedron()
    oriented = random_orientation(g, seed=1)

    failed = class_f_violations(oriented, rot)

    assert ClassPredicate.BIPARTITE in failed
    assert ClassPredicate.SUBCUBIC in failed
    with pytest.raises(NotInClass, match="bipartite fails"):
        require_class_f(oriented, rot)
