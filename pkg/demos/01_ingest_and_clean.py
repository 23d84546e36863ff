"""Walk through the full pipeline on a small messy subclass file.

The snippet below has everything that makes real subsumption data dirty:
a reflexive assertion, a duplicated triple, a literal object, a malformed
line, an equivalentClass pair sitting on a 2-cycle, and a genuine 3-cycle
that needs the optimizer.
"""

import io

from subcycle import (
    RDFS_SUBCLASSOF,
    IngestStats,
    IriTable,
    ResolverConfig,
    extract_subsumption_graph,
    is_acyclic,
    load_equivalences,
    parse_ntriples,
    preprocess,
    resolve,
    write_ntriples,
)

SUB = RDFS_SUBCLASSOF
EQ = "http://www.w3.org/2002/07/owl#equivalentClass"

DATA = f"""\
# taxonomy fragment with problems
<http://zoo/Dog> <{SUB}> <http://zoo/Mammal> .
<http://zoo/Dog> <{SUB}> <http://zoo/Mammal> .
<http://zoo/Mammal> <{SUB}> <http://zoo/Animal> .
<http://zoo/Animal> <{SUB}> <http://zoo/Animal> .
<http://zoo/Canine> <{SUB}> <http://zoo/Dog> .
<http://zoo/Dog> <{SUB}> <http://zoo/Canine> .
<http://zoo/Canine> <{EQ}> <http://zoo/Dog> .
<http://zoo/Fish> <{SUB}> "not an IRI" .
this line is broken
<http://zoo/Bird> <{SUB}> <http://zoo/Reptile> .
<http://zoo/Reptile> <{SUB}> <http://zoo/Dino> .
<http://zoo/Dino> <{SUB}> <http://zoo/Bird> .
"""


def main() -> None:
    # 1. stream the triples, interning every class IRI we keep
    table = IriTable()
    stats = IngestStats()
    graph = extract_subsumption_graph(
        parse_ntriples(io.BytesIO(DATA.encode()), stats=stats), SUB, table, stats
    )
    print(f"parsed {stats.triples} triples "
          f"({stats.malformed_lines} malformed, {stats.literal_objects} literal objects, "
          f"{stats.duplicate_edges} duplicate edges)")
    print(f"graph: {len(table)} classes, {graph.edge_count} distinct subclass edges")

    # 2. a second pass harvests declared equivalences
    equivalences = load_equivalences(
        parse_ntriples(io.BytesIO(DATA.encode())), None, table, stats
    )
    print(f"equivalence pairs declared: {len(equivalences.explicit_pairs)}")

    # 3. cheap rules first: reflexive, equivalence, fringe mask
    removed, pruned = preprocess(graph, equivalences)
    for rec in removed:
        print(f"  pre-processing removed {table.resolve(rec.edge.src)} -> "
              f"{table.resolve(rec.edge.dst)}  [{rec.reason.value}]")
    print(f"masked {len(pruned)} nodes that cannot sit on any cycle")

    # 4. the optimizer handles whatever cycles remain
    report = resolve(graph, ResolverConfig(seed=0))
    for rec in report.removed:
        print(f"  solver removed {table.resolve(rec.edge.src)} -> "
              f"{table.resolve(rec.edge.dst)}  [{rec.reason.value}]")
    print(f"status: {report.status.value}, graph acyclic: {is_acyclic(graph)[0]}")

    # 5. what survives is a clean hierarchy
    out = io.StringIO()
    write_ntriples(graph.edges(), table, SUB, out)
    print("\ncleaned hierarchy:")
    print(out.getvalue())


if __name__ == "__main__":
    main()
