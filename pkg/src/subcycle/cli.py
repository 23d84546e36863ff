"""Command line front end: ingest -> pre-process -> resolve -> emit.

Exit codes: 0 success (resolve: hierarchy is cycle-free), 1 fatal error,
2 resolve hit its timeout (partial outputs are still written), 3 check
found a cycle, 4 closure refused a cyclic graph, 5 closure got an unknown
IRI.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .bench import DEFAULT_BENCHMARK, generate, sweep, write_sweep_csv
from .digraph import CyclicGraphError, DirectedGraph, RemovedEdge, is_acyclic, superclasses
from .maxsat import export_wcnf
from .ntriples import (
    RDFS_SUBCLASSOF,
    IngestStats,
    IriTable,
    extract_subsumption_graph,
    load_equivalences,
    parse_ntriples,
    parse_ntriples_path,
    term_token,
    write_ntriples,
)
from .resolver import ResolutionReport, ResolverConfig, RunStatus, preprocess, resolve

REPORT_SCHEMA_VERSION = 1
SEED_ENV_VAR = "SUBCYCLE_SEED"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subcycle",
        description="Remove a near-minimal set of subsumption edges so the hierarchy becomes acyclic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ingest_flags(p: argparse.ArgumentParser, input_required: bool = True) -> None:
        p.add_argument("--input", required=input_required, help="N-Triples file (gzip detected automatically)")
        p.add_argument(
            "--predicate",
            default=RDFS_SUBCLASSOF,
            help="predicate IRI whose edge graph is processed (default: rdfs:subClassOf)",
        )

    p_resolve = sub.add_parser("resolve", help="break all cycles and write the cleaned hierarchy")
    add_ingest_flags(p_resolve)
    p_resolve.add_argument("--sameas", default=None, help="side file of owl:sameAs pairs (N-Triples or TSV)")
    p_resolve.add_argument(
        "--equiv-from-input",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="also harvest owl:equivalentClass / owl:sameAs from the input file",
    )
    p_resolve.add_argument("--bound", type=int, default=60, help="soft node-count bound B per iteration")
    p_resolve.add_argument("--min-cycles", type=int, default=3, help="minimum cycles per neighborhood")
    p_resolve.add_argument("--cycle-cap", type=int, default=1_000_000, help="cap on enumerated cycles per iteration")
    p_resolve.add_argument("--timeout", type=float, default=7200.0, help="time budget in seconds")
    p_resolve.add_argument("--seed", type=int, default=None, help=f"RNG seed (falls back to ${SEED_ENV_VAR}, then 0)")
    p_resolve.add_argument("--out-clean", required=True, help="output N-Triples for the cycle-free hierarchy")
    p_resolve.add_argument("--out-removed", required=True, help="output N-Triples of removed edges (+ .tsv sidecar with reasons)")
    p_resolve.add_argument("--out-report", required=True, help="output JSON run report")
    p_resolve.add_argument("--wcnf-dir", default=None, help="if set, dump each iteration's WCNF instance here")

    p_check = sub.add_parser("check", help="report whether the graph is acyclic")
    add_ingest_flags(p_check)

    p_closure = sub.add_parser("closure", help="print all superclasses of a class (acyclic graphs only)")
    add_ingest_flags(p_closure)
    p_closure.add_argument("iri", help="class IRI to query")

    p_sweep = sub.add_parser("sweep", help="run the bound-B experiment and write a CSV")
    add_ingest_flags(p_sweep, input_required=False)
    p_sweep.add_argument("--B", dest="b_values", action="append", type=int, help="bound value, repeatable (default: 20 30 40 50 60)")
    p_sweep.add_argument("--runs", type=int, default=5, help="runs per bound value")
    p_sweep.add_argument("--min-cycles", type=int, default=3)
    p_sweep.add_argument("--cycle-cap", type=int, default=1_000_000)
    p_sweep.add_argument("--timeout", type=float, default=7200.0)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out-csv", required=True, help="output CSV path")
    return parser


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"${SEED_ENV_VAR} must be an integer, got {env!r}") from None


def _load_graph(path: str, predicate: str) -> tuple[DirectedGraph, IriTable, IngestStats]:
    table = IriTable()
    stats = IngestStats()
    with open(path, "rb") as fh:
        graph = extract_subsumption_graph(parse_ntriples(fh, stats=stats), predicate, table, stats)
    return graph, table, stats


def _format_cycle(nodes: Sequence[int], table: IriTable) -> str:
    names = [table.resolve(v) for v in nodes]
    return " -> ".join(names + [names[0]])


def cmd_resolve(args: argparse.Namespace) -> int:
    cfg = ResolverConfig(
        bound_b=args.bound,
        min_cycles=args.min_cycles,
        cycle_cap=args.cycle_cap,
        timeout=args.timeout,
        seed=_resolve_seed(args.seed),
        predicate=args.predicate,
    )
    out_clean = Path(args.out_clean)
    out_removed = Path(args.out_removed)
    out_report = Path(args.out_report)
    sidecar = Path(str(out_removed) + ".tsv")
    paths = [out_clean, out_removed, out_report, sidecar]
    if len({p.resolve() for p in paths}) != len(paths):
        raise ValueError("output paths must be distinct")

    graph, table, stats = _load_graph(args.input, cfg.predicate)
    equivalences = None
    if args.equiv_from_input or args.sameas:
        triples = parse_ntriples_path(args.input, stats=stats) if args.equiv_from_input else iter(())
        equivalences = load_equivalences(triples, args.sameas, table, stats)
    input_edges = graph.edge_count

    pre_removed, pruned = preprocess(graph, equivalences)
    instance_sink = None
    if args.wcnf_dir:
        wcnf_dir = Path(args.wcnf_dir)
        wcnf_dir.mkdir(parents=True, exist_ok=True)

        def instance_sink(iteration, instance, _dir=wcnf_dir):
            with open(_dir / f"iteration_{iteration:05d}.wcnf", "w", encoding="ascii") as fh:
                export_wcnf(instance, fh)

    report = resolve(graph, cfg, instance_sink)
    all_removed = pre_removed + report.removed

    with open(out_clean, "w", encoding="utf-8") as fh:
        write_ntriples(graph.edges(), table, cfg.predicate, fh)
    _write_removed(all_removed, table, cfg.predicate, out_removed, sidecar)
    with open(out_report, "w", encoding="utf-8") as fh:
        fh.write(_report_json(cfg, stats, pruned, report, all_removed, table, input_edges))
    return 0 if report.status is RunStatus.ACYCLIC else 2


def _write_removed(
    removed: list[RemovedEdge],
    table: IriTable,
    predicate: str,
    nt_path: Path,
    tsv_path: Path,
) -> None:
    with open(nt_path, "w", encoding="utf-8") as fh:
        write_ntriples((rec.edge for rec in removed), table, predicate, fh)
    with open(tsv_path, "w", encoding="utf-8") as fh:
        for rec in removed:
            iteration = "" if rec.iteration is None else str(rec.iteration)
            fh.write(
                f"{table.resolve(rec.edge.src)}\t{table.resolve(rec.edge.dst)}\t"
                f"{rec.reason.value}\t{iteration}\n"
            )


def _report_json(
    cfg: ResolverConfig,
    stats: IngestStats,
    pruned: set[int],
    report: ResolutionReport,
    all_removed: list[RemovedEdge],
    table: IriTable,
    input_edges: int,
) -> str:
    by_reason: dict[str, int] = {}
    for rec in all_removed:
        by_reason[rec.reason.value] = by_reason.get(rec.reason.value, 0) + 1
    # wall times are intentionally absent: reports must be byte-identical
    # across runs with the same input and seed
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "status": report.status.value,
        "config": {
            "bound_b": cfg.bound_b,
            "min_cycles": cfg.min_cycles,
            "cycle_cap": cfg.cycle_cap,
            "timeout_s": cfg.timeout,
            "seed": cfg.seed,
            "predicate": cfg.predicate,
        },
        "ingest": stats.as_dict(),
        "pruned_nodes": len(pruned),
        "counts": {
            "input_edges": input_edges,
            "removed_total": len(all_removed),
            "clean_edges": input_edges - len(all_removed),
            "by_reason": by_reason,
        },
        "iterations": [
            {
                "index": stat.index,
                "neighborhood_size": stat.neighborhood_size,
                "cycles_enumerated": stat.cycles_enumerated,
                "truncated": stat.truncated,
                "edges_removed": stat.edges_removed,
                "solver_cost": stat.solver_cost,
            }
            for stat in report.iterations
        ],
        "removed": [
            {
                "src": table.resolve(rec.edge.src),
                "dst": table.resolve(rec.edge.dst),
                "reason": rec.reason.value,
                "iteration": rec.iteration,
            }
            for rec in all_removed
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_check(args: argparse.Namespace) -> int:
    graph, table, _ = _load_graph(args.input, args.predicate)
    acyclic, witness = is_acyclic(graph)
    if acyclic:
        print(f"acyclic: {graph.edge_count} edges, no cycle")
        return 0
    assert witness is not None
    print(f"cyclic: witness {_format_cycle(witness.nodes, table)}")
    return 3


def cmd_closure(args: argparse.Namespace) -> int:
    graph, table, _ = _load_graph(args.input, args.predicate)
    acyclic, witness = is_acyclic(graph)
    if not acyclic:
        assert witness is not None
        print(
            f"refusing closure on a cyclic graph: witness {_format_cycle(witness.nodes, table)}",
            file=sys.stderr,
        )
        return 4
    node = table.get(args.iri)
    if node is None:
        print(f"unknown IRI: {args.iri}", file=sys.stderr)
        return 5
    try:
        ancestors = superclasses(graph, node)
    except CyclicGraphError as exc:  # unreachable after the guard, kept for safety
        print(str(exc), file=sys.stderr)
        return 4
    for iri in sorted(table.resolve(v) for v in ancestors):
        print(iri)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = ResolverConfig(
        bound_b=60,
        min_cycles=args.min_cycles,
        cycle_cap=args.cycle_cap,
        timeout=args.timeout,
        seed=_resolve_seed(args.seed),
        predicate=args.predicate,
    )
    b_values = args.b_values or [20, 30, 40, 50, 60]
    if args.runs < 1:
        raise ValueError("--runs must be >= 1")
    if args.input:
        base, _, _ = _load_graph(args.input, args.predicate)
    else:
        base, _ = generate(DEFAULT_BENCHMARK)
    rows = sweep(base.copy, b_values, args.runs, cfg)
    with open(args.out_csv, "w", encoding="utf-8") as fh:
        write_sweep_csv(rows, fh)
    return 0


_COMMANDS = {
    "resolve": cmd_resolve,
    "check": cmd_check,
    "closure": cmd_closure,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"subcycle: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
