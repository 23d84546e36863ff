"""From a tangled subclass graph to a MAXSAT instance and back.

Uses an 8-node graph with 12 simple cycles whose optimal repair removes
exactly 5 of its 15 edges.  Shows each stage: cycle enumeration, clause
encoding, the DIMACS WCNF text, the exact solve, and the decoded removal.
"""

from subcycle import (
    DirectedGraph,
    decode,
    encode,
    enumerate_simple_cycles,
    is_acyclic,
    solve,
    wcnf_dumps,
)

EDGES = [
    (1, 2), (2, 3), (3, 5), (3, 7), (3, 8), (4, 5), (5, 3), (5, 4),
    (5, 7), (6, 3), (6, 5), (7, 6), (7, 8), (8, 1), (8, 7),
]


def main() -> None:
    graph = DirectedGraph.from_edges(9, EDGES)
    print(f"graph: {graph.edge_count} edges over nodes 1..8")

    # every simple cycle, canonical rotation (smallest node first)
    result = enumerate_simple_cycles(graph)
    print(f"\n{len(result.cycles)} simple cycles:")
    for cyc in sorted(result.cycles, key=lambda c: (len(c), c.nodes)):
        print("  " + " -> ".join(map(str, cyc.nodes + (cyc.nodes[0],))))

    # one hard clause per cycle, one unit soft clause per edge
    instance = encode(result.cycles)
    print(f"\nencoded: {instance.num_vars} edge variables, "
          f"{len(instance.hard_clauses)} hard clauses, "
          f"{len(instance.soft_clauses)} soft clauses")
    print("\nDIMACS WCNF:")
    print(wcnf_dumps(instance))

    # exact minimum: keep as many edges as possible while hitting every cycle
    assignment = solve(instance)
    removal = decode(instance, assignment)
    print(f"optimal cost {assignment.cost}: remove {[tuple(e) for e in removal]}")

    for edge in removal:
        graph.remove_edge(*edge)
    print(f"after removal the graph is acyclic: {is_acyclic(graph)[0]}")


if __name__ == "__main__":
    main()
