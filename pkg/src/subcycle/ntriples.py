"""Streaming N-Triples ingestion, IRI interning, and equivalence inputs.

Supports the line-oriented W3C N-Triples subset that matters for
subsumption data: IRIREF and blank-node subjects/objects, IRIREF
predicates, and literal objects (quoted string with optional datatype or
language tag).  Files may be gzip-compressed; that is sniffed from the
magic bytes, not the file name.  Malformed lines are counted and skipped,
never fatal: dirty LOD data is the norm.

Interned terms keep their lexical form: IRIs are stored without angle
brackets, blank nodes keep their ``_:`` prefix, so a term can always be
serialized back unambiguously.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, NamedTuple, TextIO

from .digraph import DirectedGraph

RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
RDFS_SUBPROPERTYOF = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf"
OWL_EQUIVALENT_CLASS = "http://www.w3.org/2002/07/owl#equivalentClass"
OWL_SAMEAS = "http://www.w3.org/2002/07/owl#sameAs"

DEFAULT_MAX_LINE_BYTES = 1 << 20  # 1 MiB

_IRIREF = r"<[^\x00-\x20<>\"{}|^`\\]*>"
_BNODE = r"_:[A-Za-z0-9_][A-Za-z0-9_.\-]*"
_LITERAL = r"\"(?:[^\"\\]|\\.)*\"(?:\^\^" + _IRIREF + r"|@[A-Za-z]+(?:-[A-Za-z0-9]+)*)?"
_TRIPLE_RE = re.compile(
    rf"^\s*(?P<s>{_IRIREF}|{_BNODE})\s+(?P<p>{_IRIREF})"
    rf"\s+(?P<o>{_IRIREF}|{_BNODE}|{_LITERAL})\s*\.\s*(?:#.*)?$"
)


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: str


def is_literal(term: str) -> bool:
    return term.startswith('"')


def term_token(term: str) -> str:
    """Serialize an interned term back to its N-Triples token."""
    if term.startswith("_:") or is_literal(term):
        return term
    return f"<{term}>"


@dataclass
class IngestStats:
    triples: int = 0
    malformed_lines: int = 0
    overlong_lines: int = 0
    literal_objects: int = 0
    duplicate_edges: int = 0
    equivalent_class_pairs: int = 0
    sameas_pairs_input: int = 0
    sameas_pairs_file: int = 0
    equivalence_unknown_iri: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


class IriTable:
    """Bijective term <-> dense integer map, ids assigned in first-seen order."""

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._terms: list[str] = []

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: str) -> bool:
        return term in self._ids

    def intern(self, term: str) -> int:
        node = self._ids.get(term)
        if node is None:
            node = len(self._terms)
            self._ids[term] = node
            self._terms.append(term)
        return node

    def get(self, term: str) -> int | None:
        return self._ids.get(term)

    def resolve(self, node: int) -> str:
        return self._terms[node]


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, size: int):
        self._parent = list(range(size))
        self._size = [1] * size

    def find(self, x: int) -> int:
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass
class EquivalenceInput:
    """Declared class equivalences: explicit pairs plus an identity closure."""

    explicit_pairs: set[tuple[int, int]] = field(default_factory=set)
    partition: UnionFind = field(default_factory=lambda: UnionFind(0))


def _sniff_gzip(stream: BinaryIO) -> bool:
    if hasattr(stream, "peek"):
        return stream.peek(2)[:2] == b"\x1f\x8b"
    if stream.seekable():
        pos = stream.tell()
        head = stream.read(2)
        stream.seek(pos)
        return head == b"\x1f\x8b"
    raise ValueError("stream must support peek() or seeking")


def _term(token: str) -> str:
    if token.startswith("<"):
        return token[1:-1]
    return token


def parse_ntriples(
    stream: BinaryIO,
    *,
    max_line_bytes: int = DEFAULT_MAX_LINE_BYTES,
    stats: IngestStats | None = None,
) -> Iterator[Triple]:
    """Yield well-formed triples from a (possibly gzipped) binary stream.

    Comment and blank lines are ignored; malformed, over-long, and
    non-UTF-8 lines are counted on `stats` and skipped.
    """
    if stats is None:
        stats = IngestStats()
    lines: Iterable[bytes] = gzip.GzipFile(fileobj=stream) if _sniff_gzip(stream) else stream
    for raw in lines:
        if len(raw) > max_line_bytes:
            stats.overlong_lines += 1
            continue
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            stats.malformed_lines += 1
            continue
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _TRIPLE_RE.match(line)
        if match is None:
            stats.malformed_lines += 1
            continue
        stats.triples += 1
        yield Triple(_term(match["s"]), _term(match["p"]), _term(match["o"]))


def parse_ntriples_path(
    path: str | Path,
    *,
    max_line_bytes: int = DEFAULT_MAX_LINE_BYTES,
    stats: IngestStats | None = None,
) -> Iterator[Triple]:
    with open(path, "rb") as fh:
        yield from parse_ntriples(fh, max_line_bytes=max_line_bytes, stats=stats)


def extract_subsumption_graph(
    triples: Iterable[Triple],
    predicate: str,
    table: IriTable,
    stats: IngestStats | None = None,
) -> DirectedGraph:
    """Collect the s -> o edge set of all triples carrying `predicate`.

    Duplicate assertions collapse to a single edge; triples whose object is
    a literal are counted and skipped.
    """
    if stats is None:
        stats = IngestStats()
    pairs: list[tuple[int, int]] = []
    for t in triples:
        if t.predicate != predicate:
            continue
        if is_literal(t.object):
            stats.literal_objects += 1
            continue
        pairs.append((table.intern(t.subject), table.intern(t.object)))
    graph = DirectedGraph(len(table))
    for u, v in pairs:
        if not graph.add_edge(u, v):
            stats.duplicate_edges += 1
    return graph


def load_equivalences(
    triples: Iterable[Triple],
    sameas_file: str | Path | None,
    table: IriTable,
    stats: IngestStats | None = None,
) -> EquivalenceInput:
    """Harvest equivalence knowledge restricted to already-interned terms.

    `triples` is scanned for owl:equivalentClass (explicit pairs) and
    owl:sameAs assertions; `sameas_file`, when given, contributes more
    sameAs pairs, either as N-Triples or as a two-column TSV of IRIs
    (chosen by file extension).  Pairs naming unknown terms are counted
    and ignored; new terms are never interned here.
    """
    if stats is None:
        stats = IngestStats()
    eq = EquivalenceInput(set(), UnionFind(len(table)))

    def lookup_pair(subject: str, obj: str) -> tuple[int, int] | None:
        a, b = table.get(subject), table.get(obj)
        if a is None or b is None:
            stats.equivalence_unknown_iri += 1
            return None
        return a, b

    for t in triples:
        if t.predicate == OWL_EQUIVALENT_CLASS and not is_literal(t.object):
            pair = lookup_pair(t.subject, t.object)
            if pair and pair[0] != pair[1]:
                eq.explicit_pairs.add((min(pair), max(pair)))
                stats.equivalent_class_pairs += 1
        elif t.predicate == OWL_SAMEAS and not is_literal(t.object):
            pair = lookup_pair(t.subject, t.object)
            if pair:
                eq.partition.union(*pair)
                stats.sameas_pairs_input += 1

    if sameas_file is not None:
        path = Path(sameas_file)
        if not path.exists():
            raise FileNotFoundError(f"sameAs file not found: {path}")
        for subject, obj in _iter_sameas_pairs(path, stats):
            pair = lookup_pair(subject, obj)
            if pair:
                eq.partition.union(*pair)
                stats.sameas_pairs_file += 1
    return eq


def _iter_sameas_pairs(path: Path, stats: IngestStats) -> Iterator[tuple[str, str]]:
    suffixes = [s.lower() for s in path.suffixes]
    if ".tsv" in suffixes:
        opener = gzip.open if suffixes[-1] == ".gz" else open
        with opener(path, "rt", encoding="utf-8") as fh:
            for line in fh:
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                cols = stripped.split("\t")
                if len(cols) != 2 or not all(cols):
                    stats.malformed_lines += 1
                    continue
                yield cols[0], cols[1]
    else:
        with open(path, "rb") as fh:
            for t in parse_ntriples(fh, stats=stats):
                if t.predicate == OWL_SAMEAS and not is_literal(t.object):
                    yield t.subject, t.object


def write_ntriples(
    edges: Iterable[tuple[int, int]],
    table: IriTable,
    predicate: str,
    sink: TextIO,
) -> int:
    """Serialize node-id pairs as N-Triples statements; returns line count."""
    pred = f"<{predicate}>"
    count = 0
    for u, v in edges:
        sink.write(f"{term_token(table.resolve(u))} {pred} {term_token(table.resolve(v))} .\n")
        count += 1
    return count
