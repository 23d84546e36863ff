"""Desk-scale evaluation: synthetic cyclic taxonomies, oracles, B-sweeps.

The synthetic generator plants directed cycles on top of a random DAG and
can make planted cycles share nodes (nesting), which is what makes small
neighborhoods lose against large ones.  The brute-force oracle pins exact
minimum feedback edge sets for small graphs so the resolver can be judged
against ground truth.
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Iterable, Sequence, TextIO

from .digraph import DirectedGraph, Edge, SimpleCycle, is_acyclic, strongly_connected_components
from .resolver import ResolverConfig, preprocess, resolve


@dataclass(frozen=True)
class SyntheticSpec:
    node_count: int = 500
    base_edge_prob: float = 0.004
    cycle_count: int = 60
    cycle_len_min: int = 3
    cycle_len_max: int = 10
    nesting: float = 0.85  # chance a planted cycle reuses nodes of earlier ones
    seed: int = 6007

    def __post_init__(self) -> None:
        if self.node_count < 2:
            raise ValueError("need at least 2 nodes")
        if not 2 <= self.cycle_len_min <= self.cycle_len_max:
            raise ValueError("cycle length bounds must satisfy 2 <= min <= max")
        if self.cycle_len_max > self.node_count:
            raise ValueError("planted cycle cannot be longer than the node count")
        if not 0.0 <= self.base_edge_prob <= 1.0:
            raise ValueError("base_edge_prob must be in [0, 1]")
        if not 0.0 <= self.nesting <= 1.0:
            raise ValueError("nesting must be in [0, 1]")
        if self.cycle_count < 0:
            raise ValueError("cycle_count must be >= 0")


#: The bundled nested-cycle benchmark used by the sweep subcommand and the
#: trend acceptance test.
DEFAULT_BENCHMARK = SyntheticSpec()


def generate(spec: SyntheticSpec) -> tuple[DirectedGraph, list[SimpleCycle]]:
    """Random DAG plus planted (possibly node-sharing) cycles, per seed."""
    rng = random.Random(spec.seed)
    n = spec.node_count
    edges: set[tuple[int, int]] = set()
    if spec.base_edge_prob > 0:
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < spec.base_edge_prob:
                    edges.add((u, v))
    planted: list[SimpleCycle] = []
    pool: set[int] = set()
    for k in range(spec.cycle_count):
        length = rng.randint(spec.cycle_len_min, spec.cycle_len_max)
        if k > 0 and pool and rng.random() < spec.nesting:
            reuse = rng.randint(1, min(length - 1, len(pool)))
            nodes = rng.sample(sorted(pool), reuse)
            rest = sorted(set(range(n)) - set(nodes))
            nodes += rng.sample(rest, length - reuse)
        else:
            nodes = rng.sample(range(n), length)
        rng.shuffle(nodes)
        planted.append(SimpleCycle(tuple(nodes)))
        for i in range(length):
            edges.add((nodes[i], nodes[(i + 1) % length]))
        pool.update(nodes)
    return DirectedGraph.from_edges(n, sorted(edges)), planted


def brute_force_min_removal(g: DirectedGraph) -> tuple[int, tuple[Edge, ...]]:
    """Exact minimum feedback edge set by increasing-size subset search.

    Guarded to small inputs.  Only edges inside a strongly connected
    component can lie on a cycle, so the subset search runs over those.
    """
    if g.edge_count > 20 and g.node_count > 10:
        raise ValueError(
            f"instance too large for brute force: {g.node_count} nodes, {g.edge_count} edges"
        )
    all_edges = list(g.edges())
    scc_of: dict[int, int] = {}
    for idx, comp in enumerate(strongly_connected_components(g)):
        for v in comp:
            scc_of[v] = idx
    candidates = [
        e for e in all_edges if e.src == e.dst or scc_of.get(e.src) == scc_of.get(e.dst)
    ]

    def acyclic_without(removed: frozenset[Edge]) -> bool:
        keep = [e for e in all_edges if e not in removed]
        probe = DirectedGraph.from_edges(g.node_count, keep)
        probe.mark_pruned(g.pruned)
        ok, _ = is_acyclic(probe)
        return ok

    if acyclic_without(frozenset()):
        return 0, ()
    for k in range(1, len(candidates) + 1):
        for combo in combinations(candidates, k):
            if acyclic_without(frozenset(combo)):
                return k, tuple(combo)
    raise AssertionError("removing every in-component edge must break all cycles")


@dataclass
class SweepRow:
    bound: int
    run: int
    seed: int
    removed: int
    iterations: int
    wall_ms: float
    status: str


def sweep(
    graph_source: Callable[[], DirectedGraph],
    b_values: Sequence[int],
    runs_per_b: int,
    cfg: ResolverConfig,
) -> list[SweepRow]:
    """Resolve a fresh graph per (B, run) cell with distinct derived seeds."""
    seed_rng = random.Random(cfg.seed)
    rows: list[SweepRow] = []
    for bound in b_values:
        for run in range(runs_per_b):
            cell_seed = seed_rng.randrange(2**32)
            graph = graph_source()
            preprocess(graph)
            cell_cfg = replace(cfg, bound_b=bound, seed=cell_seed)
            started = time.perf_counter()
            report = resolve(graph, cell_cfg)
            wall_ms = (time.perf_counter() - started) * 1000.0
            rows.append(
                SweepRow(
                    bound=bound,
                    run=run,
                    seed=cell_seed,
                    removed=len(report.removed),
                    iterations=len(report.iterations),
                    wall_ms=wall_ms,
                    status=report.status.value,
                )
            )
    return rows


SWEEP_CSV_HEADER = "B,run,seed,removed,iterations,wall_ms,status"


def write_sweep_csv(rows: Iterable[SweepRow], sink: TextIO) -> None:
    """Data rows plus one mean/std summary row per bound.

    Summary rows keep the same columns; the run column holds ``mean/std``
    and each numeric column holds the two values joined by a slash.
    """
    rows = list(rows)
    sink.write(SWEEP_CSV_HEADER + "\n")
    bounds: list[int] = []
    for row in rows:
        if row.bound not in bounds:
            bounds.append(row.bound)
        sink.write(
            f"{row.bound},{row.run},{row.seed},{row.removed},"
            f"{row.iterations},{row.wall_ms:.3f},{row.status}\n"
        )
    for bound in bounds:
        group = [r for r in rows if r.bound == bound]
        removed = [r.removed for r in group]
        iters = [r.iterations for r in group]
        walls = [r.wall_ms for r in group]
        sink.write(
            f"{bound},mean/std,,"
            f"{statistics.fmean(removed):.3f}/{statistics.pstdev(removed):.3f},"
            f"{statistics.fmean(iters):.3f}/{statistics.pstdev(iters):.3f},"
            f"{statistics.fmean(walls):.3f}/{statistics.pstdev(walls):.3f},\n"
        )


def mean_removed_by_bound(rows: Iterable[SweepRow]) -> dict[int, float]:
    grouped: dict[int, list[int]] = {}
    for row in rows:
        grouped.setdefault(row.bound, []).append(row.removed)
    return {b: statistics.fmean(vals) for b, vals in sorted(grouped.items())}


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties."""
    if len(xs) != len(ys):
        raise ValueError("sequences must have equal length")
    if len(xs) < 2:
        raise ValueError("need at least two points")

    def ranks(values: Sequence[float]) -> list[float]:
        order = sorted(range(len(values)), key=lambda i: values[i])
        out = [0.0] * len(values)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                out[order[k]] = avg
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx, my = statistics.fmean(rx), statistics.fmean(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx * vy) ** 0.5
