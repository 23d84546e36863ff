"""Enumerate every simple cycle of a (small) digraph, with a hard cap.

The search is Johnson's elementary-circuits algorithm: process start
vertices in ascending order, restrict each round to the strongly connected
component containing the smallest remaining vertex, and walk blocked-set
guarded paths rooted at that vertex.  Every cycle is therefore emitted
rooted at its minimum node, which is exactly the canonical rotation of
:class:`~subcycle.digraph.SimpleCycle`.

Enumeration stops after `cap` cycles and flags the result as truncated;
the caller decides whether a partial cycle set is still useful (the
resolver keeps going with it).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .digraph import DirectedGraph, SimpleCycle, strongly_connected_components


@dataclass
class EnumerationResult:
    cycles: list[SimpleCycle]
    truncated: bool
    explored_count: int  # path-tree nodes expanded; a measure of search effort


def induced_subgraph(g: DirectedGraph, nodes: Iterable[int]) -> DirectedGraph:
    """Subgraph with exactly the edges of `g` internal to `nodes`, ids kept."""
    nodeset = set(nodes)
    for v in nodeset:
        g._check(v)
        if not g.is_active(v):
            raise ValueError(f"node {v} is pruned and cannot be induced over")
    sub = DirectedGraph(g.node_count)
    for u in sorted(nodeset):
        for v in g.successors(u):
            if v in nodeset:
                sub.add_edge(u, v)
    return sub


def enumerate_simple_cycles(g: DirectedGraph, cap: int = 1_000_000) -> EnumerationResult:
    """All simple cycles of the active part of `g`, canonical, at most `cap`.

    Raises ValueError on self-loops: those must have been removed by
    pre-processing before cycle work starts.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    for v in g.active_nodes():
        if g.has_edge(v, v):
            raise ValueError(f"self-loop on node {v}; remove reflexive edges first")

    cycles: list[SimpleCycle] = []
    explored = 0
    overflowed = False

    def emit(path: list[int]) -> bool:
        nonlocal overflowed
        if len(cycles) >= cap:
            overflowed = True
            return False
        cycles.append(SimpleCycle(tuple(path)))
        return True

    floor = 0
    while True:
        sccs = strongly_connected_components(g, lowest=floor)
        nontrivial = [c for c in sccs if len(c) >= 2]
        if not nontrivial:
            break
        comp = min(nontrivial, key=lambda c: c[0])
        start = comp[0]
        compset = set(comp)
        adj = {v: [w for w in g.successors(v) if w in compset] for v in comp}
        explored += _circuits_from(start, adj, emit)
        if overflowed:
            break
        floor = start + 1
    return EnumerationResult(cycles, overflowed, explored)


def _circuits_from(start: int, adj: dict[int, list[int]], emit) -> int:
    """Emit all circuits through `start` within its component (iteratively).

    `emit` receives the node path and returns False to abort the whole
    search (cap reached).  Returns the number of stack frames expanded.
    """
    blocked: set[int] = set()
    unblock_later: dict[int, set[int]] = {}
    path: list[int] = []
    # frame: [node, successor iterator, circuit-found flag]
    frames: list[list] = []
    explored = 0

    def push(v: int) -> None:
        nonlocal explored
        explored += 1
        blocked.add(v)
        path.append(v)
        frames.append([v, iter(adj[v]), False])

    push(start)
    while frames:
        frame = frames[-1]
        v: int = frame[0]
        it: Iterator[int] = frame[1]
        descended = False
        for w in it:
            if w == start:
                frame[2] = True
                if not emit(path):
                    return explored
            elif w not in blocked:
                push(w)
                descended = True
                break
        if descended:
            continue
        frames.pop()
        path.pop()
        if frame[2]:
            _unblock(v, blocked, unblock_later)
        else:
            for w in adj[v]:
                unblock_later.setdefault(w, set()).add(v)
        if frames:
            frames[-1][2] = frames[-1][2] or frame[2]
    return explored


def _unblock(v: int, blocked: set[int], unblock_later: dict[int, set[int]]) -> None:
    stack = [v]
    while stack:
        u = stack.pop()
        if u in blocked:
            blocked.discard(u)
            stack.extend(sorted(unblock_later.pop(u, ())))
