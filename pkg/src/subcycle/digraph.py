"""Directed graph store plus the pre-processing and probing primitives.

Nodes are dense non-negative integers (see :mod:`subcycle.ntriples` for the
IRI interning that produces them).  The graph keeps mutually consistent
out/in adjacency sets and an optional *pruned* mask: pruned nodes are
ignored by all cycle-oriented operations (cycle probing, acyclicity,
strongly connected components) but stay part of the stored edge set, so
serialization and reachability queries always see the full graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Iterator, NamedTuple

if TYPE_CHECKING:
    from .ntriples import EquivalenceInput


class Edge(NamedTuple):
    src: int
    dst: int


class RemovalReason(str, Enum):
    """Why an edge was dropped from the subsumption graph."""

    REFLEXIVE = "reflexive"
    EQUIVALENCE = "equivalence"
    SAMEAS = "sameas"
    MAXSAT = "maxsat"
    OVERSIZED_CYCLE_FALLBACK = "oversized_cycle_fallback"


@dataclass(frozen=True)
class RemovedEdge:
    """An edge removal record; `iteration` is set only for resolver removals."""

    edge: Edge
    reason: RemovalReason
    iteration: int | None = None


class CyclicGraphError(ValueError):
    """Raised when an operation requires an acyclic graph but got cycles."""


@dataclass(frozen=True)
class SimpleCycle:
    """A closed directed path with no repeated node.

    Stored in canonical rotation: ``nodes[0]`` is the smallest node id, so
    two rotations of the same cycle compare (and hash) equal.  A length-1
    cycle is a self-loop; those only occur as acyclicity witnesses on
    graphs that skipped reflexive pre-processing, never in enumeration
    output or MAXSAT encodings.
    """

    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        if not nodes:
            raise ValueError("cycle needs at least 1 node")
        if len(set(nodes)) != len(nodes):
            raise ValueError(f"cycle has a repeated node: {nodes!r}")
        pivot = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[pivot:] + nodes[:pivot])

    def __len__(self) -> int:
        return len(self.nodes)

    def edges(self) -> tuple[Edge, ...]:
        ns = self.nodes
        return tuple(Edge(ns[i], ns[(i + 1) % len(ns)]) for i in range(len(ns)))


class DirectedGraph:
    """Adjacency-set digraph with deduplicated edges and a pruned-node mask."""

    __slots__ = ("node_count", "_out", "_in", "_edge_count", "_pruned")

    def __init__(self, node_count: int = 0):
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        self.node_count = node_count
        self._out: dict[int, set[int]] = {}
        self._in: dict[int, set[int]] = {}
        self._edge_count = 0
        self._pruned: set[int] = set()

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> DirectedGraph:
        g = cls(node_count)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def _check(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise IndexError(f"node {v} out of range [0, {self.node_count})")

    # -- structure ---------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def add_node(self) -> int:
        self.node_count += 1
        return self.node_count - 1

    def add_edge(self, u: int, v: int) -> bool:
        """Insert u->v; returns False if it was already present."""
        self._check(u)
        self._check(v)
        out = self._out.setdefault(u, set())
        if v in out:
            return False
        out.add(v)
        self._in.setdefault(v, set()).add(u)
        self._edge_count += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        try:
            self._out[u].remove(v)
            self._in[v].remove(u)
        except KeyError:
            raise KeyError(f"edge {u}->{v} not in graph") from None
        self._edge_count -= 1
        if not self._out[u]:
            del self._out[u]
        if not self._in[v]:
            del self._in[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out.get(u, ())

    def successors(self, u: int) -> tuple[int, ...]:
        return tuple(sorted(self._out.get(u, ())))

    def predecessors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._in.get(v, ())))

    def out_degree(self, u: int) -> int:
        return len(self._out.get(u, ()))

    def in_degree(self, v: int) -> int:
        return len(self._in.get(v, ()))

    def edges(self) -> Iterator[Edge]:
        """All edges in ascending (src, dst) order, pruning ignored."""
        for u in sorted(self._out):
            for v in sorted(self._out[u]):
                yield Edge(u, v)

    def nodes_with_edges(self) -> list[int]:
        return sorted(self._out.keys() | self._in.keys())

    def copy(self) -> DirectedGraph:
        g = DirectedGraph(self.node_count)
        g._out = {u: set(vs) for u, vs in self._out.items()}
        g._in = {v: set(us) for v, us in self._in.items()}
        g._edge_count = self._edge_count
        g._pruned = set(self._pruned)
        return g

    # -- pruned mask -------------------------------------------------------

    @property
    def pruned(self) -> frozenset[int]:
        return frozenset(self._pruned)

    def is_active(self, v: int) -> bool:
        return v not in self._pruned

    def mark_pruned(self, nodes: Iterable[int]) -> None:
        for v in nodes:
            self._check(v)
            self._pruned.add(v)

    def clear_pruned(self) -> None:
        self._pruned.clear()

    def active_successors(self, u: int) -> list[int]:
        return [w for w in self.successors(u) if w not in self._pruned]

    def active_nodes(self) -> list[int]:
        return [v for v in self.nodes_with_edges() if v not in self._pruned]


# -- pre-processing ---------------------------------------------------------


def remove_reflexive(g: DirectedGraph) -> list[RemovedEdge]:
    """Drop every self-loop v->v; they are tautologies and trivial cycles."""
    removed = []
    for v in g.nodes_with_edges():
        if g.has_edge(v, v):
            g.remove_edge(v, v)
            removed.append(RemovedEdge(Edge(v, v), RemovalReason.REFLEXIVE))
    return removed


def prune_acyclic_fringe(g: DirectedGraph) -> set[int]:
    """Mask every node that provably cannot sit on a directed cycle.

    Iteratively marks nodes whose in-degree or out-degree (within the
    still-active subgraph) is zero.  The graph itself is not mutated; the
    result is recorded in the graph's pruned mask and returned.
    """
    indeg: dict[int, int] = {}
    outdeg: dict[int, int] = {}
    for v in range(g.node_count):
        if not g.is_active(v):
            continue
        indeg[v] = sum(1 for u in g.predecessors(v) if g.is_active(u))
        outdeg[v] = sum(1 for w in g.successors(v) if g.is_active(w))
    queue = [v for v in sorted(indeg) if indeg[v] == 0 or outdeg[v] == 0]
    newly: set[int] = set()
    while queue:
        v = queue.pop()
        if v in newly:
            continue
        newly.add(v)
        for w in g.successors(v):
            if w in indeg and w not in newly:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        for u in g.predecessors(v):
            if u in outdeg and u not in newly:
                outdeg[u] -= 1
                if outdeg[u] == 0:
                    queue.append(u)
    g.mark_pruned(newly)
    return newly


def prune_equivalent(g: DirectedGraph, eq: "EquivalenceInput") -> list[RemovedEdge]:
    """Remove subsumption edges between nodes declared equivalent.

    An edge u->v goes when (u, v) is an explicit equivalent-class pair (in
    either order) or when u and v fall into the same identity-closure
    partition; the explicit pair wins the reason label.
    """
    removed = []
    for u, v in list(g.edges()):
        if u == v:
            continue  # self-loops are the reflexive rule's business
        if (min(u, v), max(u, v)) in eq.explicit_pairs:
            reason = RemovalReason.EQUIVALENCE
        elif eq.partition.connected(u, v):
            reason = RemovalReason.SAMEAS
        else:
            continue
        g.remove_edge(u, v)
        removed.append(RemovedEdge(Edge(u, v), reason))
    return removed


# -- probing and verification -----------------------------------------------

_GRAY = 1
_BLACK = 2


def find_cycle(
    g: DirectedGraph,
    sources: Iterable[int] | None = None,
    rng: random.Random | None = None,
) -> SimpleCycle | None:
    """Depth-first probe for one directed cycle among active nodes.

    Probes start from `sources` in order; once those are exhausted the
    remaining untried active nodes are visited in seeded-random order.
    While expanding a node, all of its successors are checked against the
    current path before descending, so the probe closes a cycle through the
    nearest ancestor it can reach.  Returns None when no cycle exists.
    """
    if rng is None:
        rng = random.Random(0)
    color: dict[int, int] = {}
    path: list[int] = []
    depth: dict[int, int] = {}

    def enter(v: int, stack: list[tuple[int, Iterator[int]]]) -> SimpleCycle | None:
        color[v] = _GRAY
        depth[v] = len(path)
        path.append(v)
        succ = g.active_successors(v)
        for w in succ:
            if color.get(w) == _GRAY:
                return SimpleCycle(tuple(path[depth[w]:]))
        stack.append((v, iter(succ)))
        return None

    def probe(root: int) -> SimpleCycle | None:
        if color.get(root):
            return None
        stack: list[tuple[int, Iterator[int]]] = []
        cyc = enter(root, stack)
        if cyc:
            return cyc
        while stack:
            v, it = stack[-1]
            for w in it:
                if not color.get(w):
                    cyc = enter(w, stack)
                    if cyc:
                        return cyc
                    break
                # gray successors seen here are descendants (forward edges),
                # black ones are finished subtrees; neither closes a cycle
            else:
                stack.pop()
                path.pop()
                color[v] = _BLACK
        return None

    for s in sources or ():
        g._check(s)
        if not g.is_active(s):
            continue
        cyc = probe(s)
        if cyc:
            return cyc
    rest = g.active_nodes()
    rng.shuffle(rest)
    for v in rest:
        cyc = probe(v)
        if cyc:
            return cyc
    return None


def is_acyclic(g: DirectedGraph) -> tuple[bool, SimpleCycle | None]:
    """Kahn-style check over active edges; on failure also return a witness."""
    indeg: dict[int, int] = {}
    for v in g.active_nodes():
        indeg[v] = sum(1 for u in g.predecessors(v) if g.is_active(u))
    stack = [v for v in indeg if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for w in g.successors(u):
            if w in indeg:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
    if seen == len(indeg):
        return True, None
    witness = find_cycle(g)
    assert witness is not None
    return False, witness


def superclasses(g: DirectedGraph, start: int) -> set[int]:
    """All nodes reachable from `start` along subsumption edges.

    Only meaningful on a cycle-free hierarchy, so a cyclic graph is
    rejected outright rather than returning an unreliable closure.
    """
    g._check(start)
    acyclic, witness = is_acyclic(g)
    if not acyclic:
        assert witness is not None
        raise CyclicGraphError(
            f"transitive closure unreliable: graph has a cycle through {witness.nodes}"
        )
    seen: set[int] = set()
    frontier = [start]
    while frontier:
        u = frontier.pop()
        for v in g.successors(u):
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    seen.discard(start)
    return seen


def strongly_connected_components(
    g: DirectedGraph,
    lowest: int | None = None,
    within: set[int] | None = None,
) -> list[list[int]]:
    """Iterative Tarjan over active nodes, each component sorted ascending.

    `lowest` restricts the walk to node ids >= lowest; `within` restricts it
    to a node subset.  Both are used by the cycle enumerator.
    """

    def admit(v: int) -> bool:
        if lowest is not None and v < lowest:
            return False
        if within is not None and v not in within:
            return False
        return g.is_active(v)

    index: dict[int, int] = {}
    low: dict[int, int] = {}
    onstack: set[int] = set()
    tarjan_stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    def succ(v: int) -> list[int]:
        return [w for w in g.successors(v) if admit(w)]

    for root in g.nodes_with_edges():
        if not admit(root) or root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        tarjan_stack.append(root)
        onstack.add(root)
        work: list[tuple[int, Iterator[int]]] = [(root, iter(succ(root)))]
        while work:
            v, it = work[-1]
            descended = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    tarjan_stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ(w))))
                    descended = True
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = tarjan_stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    return components


def cycle_nodes(g: DirectedGraph) -> set[int]:
    """Active nodes that lie on at least one directed cycle."""
    out: set[int] = set()
    for comp in strongly_connected_components(g):
        if len(comp) >= 2:
            out.update(comp)
        elif g.has_edge(comp[0], comp[0]):
            out.add(comp[0])
    return out
