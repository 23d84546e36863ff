"""subcycle: make RDF subsumption hierarchies acyclic with few removals.

The pipeline: stream N-Triples and intern IRIs (:mod:`subcycle.ntriples`),
apply the cheap pre-processing rules (:mod:`subcycle.digraph`), then
repeatedly enumerate the simple cycles of a bounded neighborhood
(:mod:`subcycle.cycles`) and remove an exact minimum hitting set of their
edges (:mod:`subcycle.maxsat`), orchestrated as an anytime loop
(:mod:`subcycle.resolver`).  :mod:`subcycle.bench` holds the synthetic
benchmark and brute-force oracles; :mod:`subcycle.cli` the command line.
"""

from .bench import (
    DEFAULT_BENCHMARK,
    SweepRow,
    SyntheticSpec,
    brute_force_min_removal,
    generate,
    mean_removed_by_bound,
    spearman_rho,
    sweep,
    write_sweep_csv,
)
from .cycles import EnumerationResult, enumerate_simple_cycles, induced_subgraph
from .digraph import (
    CyclicGraphError,
    DirectedGraph,
    Edge,
    RemovalReason,
    RemovedEdge,
    SimpleCycle,
    cycle_nodes,
    find_cycle,
    is_acyclic,
    prune_acyclic_fringe,
    prune_equivalent,
    remove_reflexive,
    strongly_connected_components,
    superclasses,
)
from .maxsat import (
    Assignment,
    EdgeVar,
    MaxSatInstance,
    WcnfParseError,
    decode,
    encode,
    export_wcnf,
    import_wcnf,
    solve,
    wcnf_dumps,
)
from .ntriples import (
    OWL_EQUIVALENT_CLASS,
    OWL_SAMEAS,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    EquivalenceInput,
    IngestStats,
    IriTable,
    Triple,
    UnionFind,
    extract_subsumption_graph,
    load_equivalences,
    parse_ntriples,
    parse_ntriples_path,
    write_ntriples,
)
from .resolver import (
    IterationStat,
    ResolutionReport,
    ResolverConfig,
    RunStatus,
    collect_neighborhood,
    preprocess,
    resolve,
    resolve_step,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CyclicGraphError",
    "DEFAULT_BENCHMARK",
    "DirectedGraph",
    "Edge",
    "EdgeVar",
    "EnumerationResult",
    "EquivalenceInput",
    "IngestStats",
    "IriTable",
    "IterationStat",
    "MaxSatInstance",
    "OWL_EQUIVALENT_CLASS",
    "OWL_SAMEAS",
    "RDFS_SUBCLASSOF",
    "RDFS_SUBPROPERTYOF",
    "RemovalReason",
    "RemovedEdge",
    "ResolutionReport",
    "ResolverConfig",
    "RunStatus",
    "SimpleCycle",
    "SweepRow",
    "SyntheticSpec",
    "Triple",
    "UnionFind",
    "WcnfParseError",
    "brute_force_min_removal",
    "collect_neighborhood",
    "cycle_nodes",
    "decode",
    "encode",
    "enumerate_simple_cycles",
    "export_wcnf",
    "extract_subsumption_graph",
    "find_cycle",
    "generate",
    "import_wcnf",
    "induced_subgraph",
    "is_acyclic",
    "load_equivalences",
    "mean_removed_by_bound",
    "parse_ntriples",
    "parse_ntriples_path",
    "preprocess",
    "prune_acyclic_fringe",
    "prune_equivalent",
    "remove_reflexive",
    "resolve",
    "resolve_step",
    "solve",
    "spearman_rho",
    "strongly_connected_components",
    "superclasses",
    "sweep",
    "wcnf_dumps",
    "write_ntriples",
]
