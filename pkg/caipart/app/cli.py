from __future__ import annotations

import argparse
import logging
from enum import IntEnum
from pathlib import Path

from caipart.adapters.container import AppContainer
from caipart.adapters.io.graph_file import GraphDocument, read_graph_file, serialize_graph
from caipart.adapters.io.partition_file import read_partition_file, serialize_partition
from caipart.app.bench import SUMMARY_COLUMNS, run_bench
from caipart.app.runner import SolveMethod, check_result, run_method
from caipart.constructions.duality import delete_class, triangulate_up, triangulation_bundle
from caipart.constructions.gadgets import (
    Catalog,
    build_blocker,
    build_blocker_chain,
    build_g1,
    build_g2,
    certify_class_deletion,
    sweep_catalog,
    verify_gadget_properties,
)
from caipart.constructions.generators import (
    family,
    random_cut_instance,
    random_eulerian_triangulation,
    random_f_instance,
    random_orientation,
    random_sp_instance,
    subdivide_even_embedded,
    write_corpus,
)
from caipart.core.embedding import RotationSystem, discharge_audit, embed, trace_faces
from caipart.core.graph import Graph
from caipart.core.partition import BiAcyclicPartition, CaiPartition, verify_cai, verify_two_acyclic
from caipart.shared.console_compat import CompatConsole, build_table
from caipart.solvers.ears import short_nested_ears, solve_series_parallel, validate_ears
from caipart.solvers.exact import Outcome, SolveOptions

logger = logging.getLogger("caipart.cli")


class ExitCode(IntEnum):
    OK = 0
    UNSAT = 1
    USAGE = 2
    BUDGET = 3
    INTERNAL = 4


def _ids(text: str) -> frozenset[int]:
    try:
        return frozenset(int(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated vertex ids, got {text!r}") from None


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caipart")
    parser.add_argument("--config", type=str, default=None, help="Optional config.toml path.")
    parser.add_argument("--verbose", action="store_true", default=False, help="Also log INFO to stderr.")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Find a CAI-partition.")
    solve.add_argument("graph", type=Path)
    solve.add_argument("--method", choices=[m.value for m in SolveMethod], default=SolveMethod.EXACT.value)
    solve.add_argument("--force-a", type=_ids, default=frozenset(), help="Comma separated ids kept in A.")
    solve.add_argument("--force-i", type=_ids, default=frozenset(), help="Comma separated ids kept in I.")
    solve.add_argument("--budget", type=int, default=None, help="Exact solver node budget.")
    solve.add_argument("--workers", type=int, default=None)
    solve.add_argument("--out", type=Path, default=None)
    solve.add_argument("--trace", action="store_true", default=False, help="Print the reduction tree to stderr.")

    verify = commands.add_parser("verify", help="Check a partition file against a graph.")
    verify.add_argument("graph", type=Path)
    verify.add_argument("--partition", type=Path, required=True)
    verify.add_argument("--kind", choices=["cai", "two-acyclic"], default="cai")

    gen = commands.add_parser("gen", help="Write a generated graph.")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", type=str, default=None)
    source.add_argument("--random", choices=["f", "cut", "sp", "triangulation"], default=None)
    gen.add_argument("--sizes", type=int, nargs="*", default=[])
    gen.add_argument("--n-hint", type=int, default=16)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--orient", type=int, default=None, help="Seed of a random orientation.")
    gen.add_argument("--subdivide", type=int, default=None, help="Seed of one even subdivision.")
    gen.add_argument("--out", type=Path, default=None)

    gadget = commands.add_parser("gadget", help="Build or check the gadget constructions.")
    gadget.add_argument("--which", choices=["g1", "g2", "blocker", "chain", "catalog"], required=True)
    gadget.add_argument("--verify", action="store_true", default=False)
    gadget.add_argument("--k", type=int, default=1)
    gadget.add_argument("--catalog", choices=[c.value for c in Catalog], default=None)
    gadget.add_argument("--certify", type=int, default=None, choices=[0, 1, 2], help="Class deleted before search.")
    gadget.add_argument("--budget", type=int, default=None)
    gadget.add_argument("--out", type=Path, default=None)

    dualize = commands.add_parser("dualize", help="Move between triangulations and bipartite graphs.")
    dualize.add_argument("graph", type=Path)
    dualize.add_argument("--direction", choices=["up", "down"], required=True)
    dualize.add_argument("--class", dest="class_index", type=int, choices=[0, 1, 2], default=0)
    dualize.add_argument("--out", type=Path, default=None)

    ears = commands.add_parser("ears", help="Short nested ear decomposition of a series-parallel graph.")
    ears.add_argument("graph", type=Path)
    ears.add_argument("--emit", action="store_true", default=False, help="Print the ears instead of the partition.")

    audit = commands.add_parser("audit", help="Charge report of an embedded graph.")
    audit.add_argument("graph", type=Path)

    bench = commands.add_parser("bench", help="Solve every graph of a corpus directory.")
    bench.add_argument("--corpus", type=Path, required=True)
    bench.add_argument("--method", choices=[m.value for m in SolveMethod], default=SolveMethod.REDUCE.value)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--generate", type=int, default=0, help="Write this many F-instances first.")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--n-hint", type=int, default=16)
    return parser


def _embedded(doc: GraphDocument) -> tuple[Graph, RotationSystem]:
    if doc.rotation is not None:
        return doc.graph, doc.rotation
    return doc.graph, embed(doc.graph)


def _emit(console: CompatConsole, text: str, out: Path | None) -> None:
    if out is None:
        console.write_raw(text)
        return
    out.write_text(text, encoding="ascii", newline="\n")
    logger.info("written", extra={"path": str(out)})


def _cmd_solve(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    doc = read_graph_file(args.graph)
    method = SolveMethod(args.method)
    base = AppContainer.solve_options(args.workers)
    opts = SolveOptions(
        forced_a=args.force_a,
        forced_i=args.force_i,
        vertex_order=base.vertex_order,
        node_budget=args.budget if args.budget is not None else base.node_budget,
        worker_count=base.worker_count,
    )
    result = run_method(doc, method, solve_options=opts, reduction_options=AppContainer.reduction_options())
    if args.trace and result.trace is not None:
        errors = CompatConsole(stderr=True)
        for line in result.trace.lines():
            errors.write_raw(line + "\n")
    if result.outcome == Outcome.UNSAT:
        console.print("unsat")
        return ExitCode.UNSAT
    if result.outcome == Outcome.BUDGET_EXCEEDED:
        console.print(f"budget exceeded after {result.nodes} nodes")
        return ExitCode.BUDGET
    if result.partition is None or not check_result(doc, result):
        logger.error("solver output failed verification", extra={"method": str(method)})
        return ExitCode.INTERNAL
    _emit(console, serialize_partition(result.partition), args.out)
    return ExitCode.OK


def _cmd_verify(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    doc = read_graph_file(args.graph)
    partition = read_partition_file(args.partition)
    if args.kind == "cai":
        if not isinstance(partition, CaiPartition):
            raise ValueError("expected A/I lines for --kind cai")
        verdict = verify_cai(doc.graph, partition)
    else:
        if not isinstance(partition, BiAcyclicPartition):
            raise ValueError("expected A1/A2 lines for --kind two-acyclic")
        verdict = verify_two_acyclic(doc.graph, partition)
    console.print(verdict.describe())
    return ExitCode.OK if verdict else ExitCode.UNSAT


def _cmd_gen(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    if args.random == "triangulation":
        bundle = random_eulerian_triangulation(args.n_hint, args.seed)
        g, rot = bundle.graph, bundle.rotation
    elif args.random == "f":
        g, rot = random_f_instance(args.n_hint, args.seed)
    elif args.random == "cut":
        g, rot = random_cut_instance(args.n_hint, args.seed)
    elif args.random == "sp":
        g, rot = random_sp_instance(args.n_hint, args.seed)
    else:
        g, rot = family(args.family, *args.sizes)
    if args.subdivide is not None:
        g, rot = subdivide_even_embedded(g, rot, seed=args.subdivide)
    if args.orient is not None:
        g = random_orientation(g, args.orient)
    _emit(console, serialize_graph(g, rot), args.out)
    return ExitCode.OK


def _cmd_gadget(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    if args.certify is not None:
        if args.budget is None:
            raise ValueError("--certify needs --budget")
        report = certify_class_deletion(args.certify, args.budget, AppContainer.get_settings().solver.worker_count)
        console.print(
            f"class {report.class_index}: {report.vertices} vertices, {report.outcome} after {report.nodes} nodes"
        )
        return ExitCode.UNSAT if report.refutation is not None else ExitCode.OK
    if args.which == "catalog":
        kinds = [Catalog(args.catalog)] if args.catalog else list(Catalog)
        rows = []
        for kind in kinds:
            sweep = sweep_catalog(kind, AppContainer.get_settings().solver.worker_count, args.budget)
            rows.append([kind, sweep.orientations, sweep.unsat, len(sweep.found), len(sweep.budget_exceeded)])
            if not sweep.holds:
                console.print(build_table("catalog", ["graph", "orientations", "unsat", "found", "budget"], rows))
                return ExitCode.UNSAT
        console.print(build_table("catalog", ["graph", "orientations", "unsat", "found", "budget"], rows))
        return ExitCode.OK
    if args.verify:
        report = verify_gadget_properties()
        rows = [[item.number, item.statement, "yes" if item.holds else "no", item.detail] for item in report.items]
        console.print(build_table("gadget checks", ["item", "statement", "holds", "detail"], rows))
        return ExitCode.OK if report.holds else ExitCode.UNSAT
    if args.which in ("g1", "g2"):
        gadget = build_g1() if args.which == "g1" else build_g2()
        g, rot = gadget.graph, gadget.rotation
    else:
        bundle = build_blocker() if args.which == "blocker" else build_blocker_chain(args.k)
        g, rot = bundle.graph, bundle.rotation
    _emit(console, serialize_graph(g, rot), args.out)
    return ExitCode.OK


def _cmd_dualize(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    g, rot = _embedded(read_graph_file(args.graph))
    if args.direction == "down":
        h, h_rot = delete_class(triangulation_bundle(g, rot), args.class_index)
    else:
        bundle = triangulate_up(g, rot)
        h, h_rot = bundle.graph, bundle.rotation
    _emit(console, serialize_graph(h, h_rot), args.out)
    return ExitCode.OK


def _cmd_ears(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    g = read_graph_file(args.graph).graph
    if args.emit:
        ed = short_nested_ears(g)
        validate_ears(g, ed)
        console.write_raw("".join(line + "\n" for line in ed.lines()))
        return ExitCode.OK
    console.write_raw(serialize_partition(solve_series_parallel(g)))
    return ExitCode.OK


def _cmd_audit(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    g, rot = _embedded(read_graph_file(args.graph))
    report = discharge_audit(g, trace_faces(g, rot))
    rows = [
        ["initial total", report.initial_total],
        ["final total", report.final_total],
        ["bad 2-vertices", " ".join(map(str, sorted(report.bad_vertices))) or "-"],
        ["negative", " ".join(f"{kind}:{index}={charge}" for kind, index, charge in report.negative) or "-"],
    ]
    console.print(build_table("discharge audit", ["quantity", "value"], rows))
    return ExitCode.OK


def _cmd_bench(args: argparse.Namespace, console: CompatConsole) -> ExitCode:
    settings = AppContainer.get_settings()
    if args.generate:
        write_corpus(args.corpus, args.generate, args.seed, args.n_hint)
    paths = sorted(args.corpus.glob(settings.bench.glob))
    if not paths:
        raise ValueError(f"no files matching {settings.bench.glob!r} in {args.corpus}")
    summary = run_bench(
        paths,
        SolveMethod(args.method),
        solve_options=AppContainer.solve_options(),
        reduction_options=AppContainer.reduction_options(),
        worker_count=args.workers or settings.bench.worker_count,
    )
    console.print(build_table(f"bench {args.method}", list(SUMMARY_COLUMNS), [summary.table_row()]))
    for row in summary.failures:
        console.print(f"failed: {row.path} {row.error}")
    return ExitCode.INTERNAL if summary.failures else ExitCode.OK


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "gadget": _cmd_gadget,
    "dualize": _cmd_dualize,
    "ears": _cmd_ears,
    "audit": _cmd_audit,
    "bench": _cmd_bench,
}


def _quiet_stream_handler(app_logger: logging.Logger, *, verbose: bool) -> None:
    if verbose:
        return
    for handler in app_logger.handlers:
        if type(handler) is logging.StreamHandler:
            handler.setLevel(logging.WARNING)


def run(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        AppContainer.configure(Path(args.config) if args.config else None)
    except ValueError as exc:
        CompatConsole(stderr=True).print(f"config error: {exc}")
        return ExitCode.USAGE
    _quiet_stream_handler(AppContainer.get_logger(), verbose=args.verbose)
    console = CompatConsole()
    try:
        return _COMMANDS[args.command](args, console)
    except (OSError, ValueError) as exc:
        CompatConsole(stderr=True).print(f"error: {exc}")
        return ExitCode.USAGE
    except RuntimeError as exc:
        logger.error("internal failure", extra={"command": args.command, "error": f"{type(exc).__name__}: {exc}"})
        CompatConsole(stderr=True).print(f"internal error: {type(exc).__name__}: {exc}")
        return ExitCode.INTERNAL


def main(argv: list[str] | None = None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
