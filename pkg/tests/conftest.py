from __future__ import annotations

import sys
from collections.abc import Callable
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT.parent))

from caipart.adapters.container import AppContainer  # noqa: E402
from caipart.constructions.generators import hypercube  # noqa: E402
from caipart.constructions.prng import SplitMix64  # noqa: E402
from caipart.core.embedding import RotationSystem  # noqa: E402
from caipart.core.graph import Graph  # noqa: E402


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("CAIPART_CONFIG", raising=False)
    monkeypatch.delenv("CAIPART_WORKERS", raising=False)
    AppContainer.reset()


@pytest.fixture
def directed_c4() -> Graph:
    return Graph.directed(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def cube() -> tuple[Graph, RotationSystem]:
    return hypercube()


@pytest.fixture
def one_way_cube(cube: tuple[Graph, RotationSystem]) -> tuple[Graph, RotationSystem]:
    """Q3 with every arc leaving the even-parity side of its bipartition."""
    g, rot = cube
    color = {v: bin(v).count("1") % 2 for v in range(g.n)}
    arcs = [(u, v) if color[u] == 0 else (v, u) for u, v in g.edges]
    return Graph.directed(g.n, arcs), rot


@pytest.fixture
def random_oriented() -> Callable[[int, int], Graph]:
    """Seeded oriented graph on ``n`` vertices where each pair is joined with probability one half."""

    def build(n: int, seed: int) -> Graph:
        rng = SplitMix64(seed)
        arcs = [(u, v) if rng.coin() else (v, u) for u in range(n) for v in range(u + 1, n) if rng.coin()]
        return Graph.directed(n, arcs)

    return build
