"""The anytime cycle-resolution loop.

Each iteration grabs a bounded node neighborhood by repeatedly probing for
cycles on a scratch copy (deleting one random edge of each found cycle so
the probe moves on), enumerates all simple cycles of the induced subgraph,
and removes an exact minimum hitting set of them from the real graph.
The loop runs until the graph is acyclic or the time budget is spent;
every removal already applied stays applied, so interrupting the loop
still leaves a usable, partially-cleaned graph.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .cycles import enumerate_simple_cycles, induced_subgraph
from .digraph import (
    DirectedGraph,
    RemovalReason,
    RemovedEdge,
    cycle_nodes,
    find_cycle,
    is_acyclic,
    prune_acyclic_fringe,
    prune_equivalent,
    remove_reflexive,
)
from .maxsat import MaxSatInstance, decode, encode, solve
from .ntriples import RDFS_SUBCLASSOF, EquivalenceInput

logger = logging.getLogger(__name__)

InstanceSink = Callable[[int, MaxSatInstance], None]


class RunStatus(str, Enum):
    ACYCLIC = "acyclic"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class ResolverConfig:
    bound_b: int = 60
    min_cycles: int = 3
    cycle_cap: int = 1_000_000
    timeout: float = 7200.0  # seconds
    seed: int = 0
    predicate: str = RDFS_SUBCLASSOF

    def __post_init__(self) -> None:
        if self.bound_b < 2:
            raise ValueError(f"bound_b must be >= 2, got {self.bound_b}")
        if self.min_cycles < 1:
            raise ValueError(f"min_cycles must be >= 1, got {self.min_cycles}")
        if self.cycle_cap < self.min_cycles:
            raise ValueError("cycle_cap must be >= min_cycles")


@dataclass
class IterationStat:
    index: int
    neighborhood_size: int
    cycles_enumerated: int
    truncated: bool
    edges_removed: int
    solver_cost: int | None  # None on fallback iterations
    wall_time: float


@dataclass
class ResolutionReport:
    config: ResolverConfig
    removed: list[RemovedEdge] = field(default_factory=list)
    iterations: list[IterationStat] = field(default_factory=list)
    status: RunStatus = RunStatus.ACYCLIC

    def removed_by_reason(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.removed:
            counts[rec.reason.value] = counts.get(rec.reason.value, 0) + 1
        return counts


def preprocess(
    g: DirectedGraph, equivalences: EquivalenceInput | None = None
) -> tuple[list[RemovedEdge], set[int]]:
    """Apply the cheap rules ahead of the solver loop.

    Drops reflexive edges, drops edges between declared-equivalent classes,
    and masks the acyclic fringe.  Returns the removal records and the
    freshly pruned node set.
    """
    removed = remove_reflexive(g)
    if equivalences is not None:
        removed += prune_equivalent(g, equivalences)
    pruned = prune_acyclic_fringe(g)
    return removed, pruned


def collect_neighborhood(
    g: DirectedGraph,
    cfg: ResolverConfig,
    rng: random.Random,
    sources: Iterable[int] | None = None,
) -> set[int]:
    """Gather cycle nodes until the soft bound is met, on a scratch copy.

    Each probe finds one cycle, contributes its nodes, and deletes one
    uniformly random edge of that cycle from the scratch copy so the next
    probe finds something else.  Probing stops once at least `min_cycles`
    cycles were seen and the node set reached `bound_b` (the final cycle
    may overshoot), or when the scratch copy runs out of cycles.  Leftover
    budget is then spent on other cycle nodes of the real graph, so a graph
    whose cyclic core fits under the bound is always covered whole.
    """
    scratch = g.copy()
    neighborhood: set[int] = set()
    found = 0
    while True:
        if len(neighborhood) >= cfg.bound_b and found >= cfg.min_cycles:
            break
        probe_sources = sorted(neighborhood) if neighborhood else sources
        cycle = find_cycle(scratch, probe_sources, rng)
        if cycle is None:
            if found == 0:
                raise ValueError("graph has no cycle to collect a neighborhood from")
            break
        found += 1
        neighborhood.update(cycle.nodes)
        victim = rng.choice(cycle.edges())
        scratch.remove_edge(*victim)
    if len(neighborhood) < cfg.bound_b:
        for v in sorted(cycle_nodes(g) - neighborhood):
            if len(neighborhood) >= cfg.bound_b:
                break
            neighborhood.add(v)
    return neighborhood


def resolve_step(
    g: DirectedGraph,
    cfg: ResolverConfig,
    rng: random.Random,
    iteration: int,
    sources: Iterable[int] | None = None,
    instance_sink: InstanceSink | None = None,
) -> tuple[IterationStat, list[RemovedEdge], set[int]]:
    """One neighborhood round: collect, enumerate, resolve, apply.

    Returns the iteration statistics, the removal records applied to `g`,
    and the neighborhood used (the next iteration seeds its probes there).
    """
    started = time.perf_counter()
    neighborhood = collect_neighborhood(g, cfg, rng, sources)
    subgraph = induced_subgraph(g, neighborhood)
    enumeration = enumerate_simple_cycles(subgraph, cfg.cycle_cap)
    assert enumeration.cycles, "neighborhood collection implies at least one cycle"
    removed: list[RemovedEdge] = []
    solver_cost: int | None
    if len(enumeration.cycles) == 1 and len(enumeration.cycles[0]) > cfg.bound_b:
        # a lone oversized cycle is not worth an optimization round
        victim = rng.choice(enumeration.cycles[0].edges())
        g.remove_edge(*victim)
        removed.append(RemovedEdge(victim, RemovalReason.OVERSIZED_CYCLE_FALLBACK, iteration))
        solver_cost = None
    else:
        instance = encode(enumeration.cycles)
        if instance_sink is not None:
            instance_sink(iteration, instance)
        assignment = solve(instance)
        for edge in decode(instance, assignment):
            g.remove_edge(*edge)
            removed.append(RemovedEdge(edge, RemovalReason.MAXSAT, iteration))
        solver_cost = assignment.cost
    stat = IterationStat(
        index=iteration,
        neighborhood_size=len(neighborhood),
        cycles_enumerated=len(enumeration.cycles),
        truncated=enumeration.truncated,
        edges_removed=len(removed),
        solver_cost=solver_cost,
        wall_time=time.perf_counter() - started,
    )
    return stat, removed, neighborhood


def resolve(
    g: DirectedGraph,
    cfg: ResolverConfig,
    instance_sink: InstanceSink | None = None,
) -> ResolutionReport:
    """Run neighborhood rounds until `g` is acyclic or the timeout fires.

    Expects pre-processing (reflexive removal, equivalence pruning, fringe
    mask) to have been applied already.  The timeout is only checked
    between iterations, so the report never contains a half-applied round;
    a timeout is a status, not an error, and all recorded removals remain
    applied to `g`.
    """
    rng = random.Random(cfg.seed)
    report = ResolutionReport(config=cfg)
    started = time.monotonic()
    previous: set[int] | None = None
    iteration = 0
    while True:
        acyclic, _ = is_acyclic(g)
        if acyclic:
            report.status = RunStatus.ACYCLIC
            break
        if time.monotonic() - started >= cfg.timeout:
            report.status = RunStatus.TIMEOUT
            break
        sources = None
        if previous:
            sources = [
                v
                for v in sorted(previous)
                if g.is_active(v) and (g.out_degree(v) or g.in_degree(v))
            ] or None
        stat, removed, neighborhood = resolve_step(
            g, cfg, rng, iteration, sources, instance_sink
        )
        report.iterations.append(stat)
        report.removed.extend(removed)
        logger.info(
            "iteration %d: |N|=%d cycles=%d%s removed=%d (%.1f ms)",
            iteration,
            stat.neighborhood_size,
            stat.cycles_enumerated,
            " (truncated)" if stat.truncated else "",
            stat.edges_removed,
            stat.wall_time * 1000.0,
        )
        previous = neighborhood
        iteration += 1
    return report
