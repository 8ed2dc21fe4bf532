from __future__ import annotations

from pathlib import Path

import pytest

from caipart.adapters.io.graph_file import read_graph_file
from caipart.app.cli import ExitCode, build_arg_parser, main, run
from caipart.core.errors import ClassViolation


@pytest.fixture(autouse=True)
def _workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)


def test_parser_requires_a_command() -> None:
    with pytest.raises(SystemExit):
        build_arg_parser().parse_args([])


def test_generate_solve_verify(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["gen", "--random", "f", "--n-hint", "14", "--seed", "3", "--out", "g.graph"]) == ExitCode.OK
    assert run(["solve", "g.graph", "--method", "reduce", "--out", "p.part"]) == ExitCode.OK
    capsys.readouterr()

    assert run(["verify", "g.graph", "--partition", "p.part"]) == ExitCode.OK
    assert "ok" in capsys.readouterr().out
    assert (tmp_path / "logs" / "caipart.log").exists()


def test_solve_prints_partition_and_trace(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "prism", "--sizes", "6", "--orient", "4", "--subdivide", "1", "--out", "p.graph"])
    capsys.readouterr()

    assert run(["solve", "p.graph", "--method", "reduce", "--trace"]) == ExitCode.OK

    captured = capsys.readouterr()
    assert captured.out.startswith("A ")
    assert "\nI " in captured.out
    assert "event=match depth=0 kind=adjacent_deg2" in captured.err


def test_class_violation_exits_internal(monkeypatch: pytest.MonkeyPatch) -> None:
    run(["gen", "--family", "prism", "--sizes", "6", "--orient", "4", "--subdivide", "1", "--out", "p.graph"])

    def broken(*_args: object) -> None:
        raise ClassViolation("adjacent_deg2 subproblem is not two_connected")

    monkeypatch.setattr("caipart.solvers.reduction.solver.reduce", broken)

    assert run(["solve", "p.graph", "--method", "reduce"]) == ExitCode.INTERNAL


def test_generate_cut_instance() -> None:
    assert run(["gen", "--random", "cut", "--n-hint", "12", "--seed", "2", "--out", "c.graph"]) == ExitCode.OK

    document = read_graph_file(Path("c.graph"))
    assert document.graph.is_directed
    assert document.rotation is not None


def test_undirected_cube_is_unsat(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "hypercube", "--out", "cube.graph"])

    assert run(["solve", "cube.graph"]) == ExitCode.UNSAT
    assert "unsat" in capsys.readouterr().out


def test_budget_exit_code() -> None:
    run(["gen", "--family", "hypercube", "--out", "cube.graph"])

    assert run(["solve", "cube.graph", "--budget", "1"]) == ExitCode.BUDGET


def test_forced_vertices_reach_the_solver(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "even_cycle", "--sizes", "6", "--orient", "0", "--out", "c6.graph"])
    capsys.readouterr()

    assert run(["solve", "c6.graph", "--force-i", "3"]) == ExitCode.OK
    assert "I 3\n" in capsys.readouterr().out


def test_invalid_partition_is_reported(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "hypercube", "--out", "cube.graph"])
    (tmp_path / "bad.part").write_text("A 0 1 2 3 4 5 6\nI 7\n", encoding="ascii")
    capsys.readouterr()

    assert run(["verify", "cube.graph", "--partition", "bad.part"]) == ExitCode.UNSAT
    assert "acyclic violated" in capsys.readouterr().out


def test_malformed_graph_is_a_usage_error(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    (tmp_path / "broken.graph").write_text("graph directed\nn x\n", encoding="ascii")

    assert run(["solve", "broken.graph"]) == ExitCode.USAGE
    assert "line 2, column 3" in capsys.readouterr().err


def test_missing_file_is_a_usage_error() -> None:
    assert run(["solve", "absent.graph"]) == ExitCode.USAGE


def test_config_directory_is_rejected(tmp_path: Path) -> None:
    (tmp_path / "conf").mkdir()

    assert run(["--config", "conf", "gen", "--family", "hypercube"]) == ExitCode.USAGE


def test_gadget_checks(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["gadget", "--which", "g1", "--verify"]) == ExitCode.OK
    assert "gadget checks" in capsys.readouterr().out


def test_gadget_graph_output() -> None:
    assert run(["gadget", "--which", "g2", "--out", "g2.graph"]) == ExitCode.OK

    document = read_graph_file(Path("g2.graph"))
    assert document.graph.n == 14
    assert document.rotation is not None


def test_catalog_sweep(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["gadget", "--which", "catalog", "--catalog", "d"]) == ExitCode.OK
    assert "catalog" in capsys.readouterr().out


def test_ears_commands(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "theta", "--sizes", "2", "2", "2", "--out", "theta.graph"])
    capsys.readouterr()

    assert run(["ears", "theta.graph"]) == ExitCode.OK
    assert capsys.readouterr().out.startswith("A ")
    assert run(["ears", "theta.graph", "--emit"]) == ExitCode.OK
    assert capsys.readouterr().out.startswith("ear 0 cycle")


def test_ears_rejects_the_cube(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "hypercube", "--out", "cube.graph"])

    assert run(["ears", "cube.graph"]) == ExitCode.USAGE
    assert "series_parallel" in capsys.readouterr().err


def test_audit(capsys: pytest.CaptureFixture[str]) -> None:
    run(["gen", "--family", "hypercube", "--out", "cube.graph"])
    capsys.readouterr()

    assert run(["audit", "cube.graph"]) == ExitCode.OK
    assert "discharge audit" in capsys.readouterr().out


def test_dualize_up_and_down() -> None:
    run(["gen", "--family", "hypercube", "--orient", "1", "--out", "cube.graph"])

    assert run(["dualize", "cube.graph", "--direction", "up", "--out", "tri.graph"]) == ExitCode.OK
    assert run(["dualize", "tri.graph", "--direction", "down", "--class", "2", "--out", "down.graph"]) == ExitCode.OK

    triangulation = read_graph_file(Path("tri.graph")).graph
    assert triangulation.n == 14
    assert read_graph_file(Path("down.graph")).graph.arcs == read_graph_file(Path("cube.graph")).graph.arcs


def test_bench_generates_and_solves(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["bench", "--corpus", "corpus", "--generate", "3", "--n-hint", "10", "--seed", "2"]) == ExitCode.OK
    assert "bench reduce" in capsys.readouterr().out
    assert len(list(Path("corpus").glob("*.graph"))) == 3


def test_bench_needs_graph_files(tmp_path: Path) -> None:
    (tmp_path / "empty").mkdir()

    assert run(["bench", "--corpus", "empty"]) == ExitCode.USAGE


def test_main_exits_with_code() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["gen", "--family", "prism", "--sizes", "4", "--out", "p4.graph"])

    assert excinfo.value.code == 0
