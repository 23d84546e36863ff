"""Weighted partial MAXSAT encoding of cycle breaking, and an exact solver.

Every distinct edge of the cycle family becomes a propositional variable
(True = keep the edge).  Each cycle contributes one hard clause that is the
disjunction of its negated edge variables, so satisfying all hard clauses
breaks every cycle; each variable gets a unit soft clause of weight 1, so
the optimum keeps as many edges as possible.

Instances of this shape are pure minimum hitting set problems, which the
solver exploits: branch-and-bound over the unhit clauses with unit
propagation and a greedy disjoint-clause packing lower bound.  The result
is an exact optimum with deterministic tie-breaking (everything iterates
in sorted order, preferring low variable indices).

DIMACS WCNF import/export uses the classic ``p wcnf <vars> <clauses> <top>``
header with hard clauses at weight `top` = total soft weight + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .digraph import Edge, SimpleCycle


class WcnfParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class EdgeVar:
    """Variable index (1-based, contiguous) and the edge it stands for.

    `edge` is None for instances read back from a WCNF file, where the
    edge identity is not representable.
    """

    index: int
    edge: Edge | None


@dataclass
class MaxSatInstance:
    vars: list[EdgeVar]
    hard_clauses: list[tuple[int, ...]]  # all-negative literals, one per cycle
    soft_clauses: list[tuple[int, int]]  # (variable index, weight)

    @property
    def num_vars(self) -> int:
        return len(self.vars)

    @property
    def top_weight(self) -> int:
        return sum(w for _, w in self.soft_clauses) + 1

    def clause_signature(self) -> tuple[int, tuple, tuple]:
        """Order-insensitive identity used for round-trip comparisons."""
        return (
            self.num_vars,
            tuple(sorted(tuple(sorted(c)) for c in self.hard_clauses)),
            tuple(sorted(self.soft_clauses)),
        )


@dataclass
class Assignment:
    values: list[bool]  # values[i-1] is variable i; True = keep edge

    @property
    def cost(self) -> int:
        return sum(1 for v in self.values if not v)

    def is_true(self, var: int) -> bool:
        return self.values[var - 1]


def encode(cycles: Sequence[SimpleCycle]) -> MaxSatInstance:
    """Build the instance for a family of simple cycles.

    Duplicate cycles (same canonical form) collapse to one hard clause.
    Variables are numbered by ascending (src, dst) edge order.
    """
    if not cycles:
        raise ValueError("cannot encode an empty cycle family")
    uniq: list[SimpleCycle] = []
    seen: set[SimpleCycle] = set()
    for cyc in cycles:
        if len(cyc) < 2:
            raise ValueError(f"self-loop {cyc.nodes} must be removed as reflexive, not encoded")
        if cyc not in seen:
            seen.add(cyc)
            uniq.append(cyc)
    edge_set: set[Edge] = set()
    for cyc in uniq:
        edge_set.update(cyc.edges())
    var_of = {e: i + 1 for i, e in enumerate(sorted(edge_set))}
    hard = [tuple(-var_of[e] for e in cyc.edges()) for cyc in uniq]
    soft = [(i, 1) for i in range(1, len(var_of) + 1)]
    variables = [EdgeVar(i, e) for e, i in sorted(var_of.items(), key=lambda kv: kv[1])]
    return MaxSatInstance(variables, hard, soft)


def decode(inst: MaxSatInstance, assignment: Assignment) -> list[Edge]:
    """Edges whose variables are False, i.e. the removal set."""
    if len(assignment.values) != inst.num_vars:
        raise ValueError("assignment length does not match instance")
    for clause in inst.hard_clauses:
        if not any(not assignment.is_true(-lit) for lit in clause):
            raise ValueError(f"assignment violates hard clause {clause}")
    out = []
    for var in inst.vars:
        if not assignment.is_true(var.index):
            if var.edge is None:
                raise ValueError(f"variable {var.index} carries no edge mapping")
            out.append(var.edge)
    return out


# -- exact solve --------------------------------------------------------------


_ACTIVATION_BATCH = 64


def solve(inst: MaxSatInstance) -> Assignment:
    """Minimum-cost assignment satisfying every hard clause. Exact, deterministic.

    Clauses live in integer bitmasks (bit i = variable i+1), so the inner
    branch-and-bound loop runs on machine-word set operations.  Clauses are
    activated lazily: a small (shortest-first) subset is solved exactly,
    clauses the optimum fails to hit join the subset, and the loop repeats.
    Once an exact subset optimum hits every clause it is an optimum of the
    whole instance, since a subset's optimum can only be lower.  Cycle
    families benefit enormously: their many long clauses are hit as a side
    effect of breaking the short ones.
    """
    n = inst.num_vars
    masks = _preprocess_clauses(inst)
    if not masks:
        return Assignment([True] * n)
    occurrence: dict[int, int] = {}
    for mask in masks:
        for bit in _iter_bits(mask):
            occurrence[bit] = occurrence.get(bit, 0) + 1

    active = masks[:_ACTIVATION_BATCH]
    remaining = masks[_ACTIVATION_BATCH:]
    seed: int | None = None
    while True:
        false_mask = 0
        for component in _components(active):
            false_mask |= _solve_component(component, occurrence, seed)
        violated = [c for c in remaining if not (c & false_mask)]
        if not violated:
            return Assignment([not (false_mask >> i) & 1 for i in range(n)])
        newly = violated[:_ACTIVATION_BATCH]
        newly_set = set(newly)
        active = active + newly
        remaining = [c for c in remaining if c not in newly_set]
        # previous optimum extended greedily stays a valid upper bound
        seed = false_mask
        for c in newly:
            if not (c & seed):
                seed |= min(_iter_bits(c), key=lambda b: (-occurrence[b], b))


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def _components(masks: list[int]) -> list[list[int]]:
    """Group clauses sharing variables; clause order is kept within groups."""
    groups: list[tuple[int, list[int]]] = []  # (variable union, clauses)
    for mask in masks:
        merged_vars = mask
        merged_clauses = [mask]
        rest: list[tuple[int, list[int]]] = []
        for gvars, gclauses in groups:
            if gvars & mask:
                merged_vars |= gvars
                merged_clauses = gclauses + merged_clauses
            else:
                rest.append((gvars, gclauses))
        rest.append((merged_vars, merged_clauses))
        groups = rest
    return [clauses for _, clauses in groups]


def _solve_component(
    clauses: list[int], occurrence: dict[int, int], seed: int | None = None
) -> int:
    best_mask, best_size = _greedy_hitting_set(clauses, occurrence)
    if seed is not None:
        component_vars = 0
        for c in clauses:
            component_vars |= c
        seed_mask = seed & component_vars
        if all(c & seed_mask for c in clauses) and seed_mask.bit_count() < best_size:
            best_mask, best_size = seed_mask, seed_mask.bit_count()

    def search(unhit: list[int], chosen: int, chosen_size: int, excluded: int) -> None:
        nonlocal best_mask, best_size
        while True:
            if not unhit:
                if chosen_size < best_size:
                    best_mask, best_size = chosen, chosen_size
                return
            if chosen_size + 1 >= best_size:
                return
            # one pass: packing lower bound, smallest branch clause, units
            used = 0
            bound = 0
            branch = 0
            branch_size = 1 << 30
            forced = 0
            for c in unhit:
                avail = c & ~excluded
                if not avail:
                    return  # clause can no longer be hit on this branch
                size = avail.bit_count()
                if size == 1 and not forced:
                    forced = avail
                if size < branch_size:
                    branch_size = size
                    branch = avail
                if not (avail & used):
                    bound += 1
                    used |= avail
            if forced:
                chosen |= forced
                chosen_size += 1
                unhit = [c for c in unhit if not (c & forced)]
                continue
            if chosen_size + bound >= best_size:
                return
            candidates = sorted(
                _iter_bits(branch), key=lambda b: (-occurrence[b], b)
            )
            tried = 0
            for bit in candidates:
                search(
                    [c for c in unhit if not (c & bit)],
                    chosen | bit,
                    chosen_size + 1,
                    excluded | tried,
                )
                tried |= bit
            return

    search(clauses, 0, 0, 0)
    return best_mask


def _preprocess_clauses(inst: MaxSatInstance) -> list[int]:
    """Validated, deduplicated clause bitmasks, shortest clauses first.

    No subset elimination: distinct simple cycles can never have nested
    edge sets, so there is nothing to eliminate on encoded instances.
    """
    masks: list[int] = []
    seen: set[int] = set()
    for clause in inst.hard_clauses:
        if not clause:
            raise ValueError("empty hard clause is unsatisfiable")
        mask = 0
        for lit in clause:
            if lit >= 0:
                raise ValueError(f"hard clauses must be all-negative, got literal {lit}")
            if not 1 <= -lit <= inst.num_vars:
                raise ValueError(f"literal {lit} out of variable range")
            mask |= 1 << (-lit - 1)
        if mask not in seen:
            seen.add(mask)
            masks.append(mask)
    masks.sort(key=lambda m: (m.bit_count(), m))
    return masks


def _greedy_hitting_set(clauses: list[int], occurrence: dict[int, int]) -> tuple[int, int]:
    chosen = 0
    size = 0
    unhit = clauses
    while unhit:
        counts: dict[int, int] = {}
        for c in unhit:
            for bit in _iter_bits(c):
                counts[bit] = counts.get(bit, 0) + 1
        pick = min(counts, key=lambda b: (-counts[b], b))
        chosen |= pick
        size += 1
        unhit = [c for c in unhit if not (c & pick)]
    return chosen, size


# -- DIMACS WCNF ---------------------------------------------------------------


def export_wcnf(inst: MaxSatInstance, sink: TextIO) -> None:
    top = inst.top_weight
    n_clauses = len(inst.hard_clauses) + len(inst.soft_clauses)
    sink.write(f"p wcnf {inst.num_vars} {n_clauses} {top}\n")
    for clause in inst.hard_clauses:
        sink.write(f"{top} {' '.join(str(lit) for lit in clause)} 0\n")
    for var, weight in inst.soft_clauses:
        sink.write(f"{weight} {var} 0\n")


def wcnf_dumps(inst: MaxSatInstance) -> str:
    import io

    buf = io.StringIO()
    export_wcnf(inst, buf)
    return buf.getvalue()


def import_wcnf(source: TextIO) -> MaxSatInstance:
    """Parse a WCNF produced by :func:`export_wcnf` (edges are not recoverable)."""
    header: tuple[int, int, int] | None = None
    hard: list[tuple[int, ...]] = []
    soft: list[tuple[int, int]] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 5 or parts[0] != "p" or parts[1] != "wcnf":
                raise WcnfParseError(line_no, f"expected 'p wcnf <vars> <clauses> <top>', got {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            except ValueError:
                raise WcnfParseError(line_no, f"non-integer header field in {line!r}") from None
            if header[0] < 0 or header[1] < 0 or header[2] < 1:
                raise WcnfParseError(line_no, f"invalid header values {header}")
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise WcnfParseError(line_no, f"non-integer token in clause {line!r}") from None
        if len(nums) < 3 or nums[-1] != 0:
            raise WcnfParseError(line_no, "clause must be '<weight> <literals...> 0'")
        weight, lits = nums[0], tuple(nums[1:-1])
        num_vars, _, top = header
        if any(lit == 0 or abs(lit) > num_vars for lit in lits):
            raise WcnfParseError(line_no, f"literal out of range in {line!r}")
        if weight == top:
            if any(lit > 0 for lit in lits):
                raise WcnfParseError(line_no, "hard clauses must contain only negated variables")
            hard.append(lits)
        elif 1 <= weight < top:
            if len(lits) != 1 or lits[0] < 0:
                raise WcnfParseError(line_no, "soft clauses must be positive unit literals")
            soft.append((lits[0], weight))
        else:
            raise WcnfParseError(line_no, f"weight {weight} outside [1, top]")
    if header is None:
        raise WcnfParseError(0, "missing 'p wcnf' header")
    num_vars, n_clauses, top = header
    if len(hard) + len(soft) != n_clauses:
        raise WcnfParseError(0, f"header claims {n_clauses} clauses, found {len(hard) + len(soft)}")
    soft_vars = [v for v, _ in soft]
    if len(set(soft_vars)) != len(soft_vars):
        raise WcnfParseError(0, "duplicate soft clause for a variable")
    hard_vars = {-lit for clause in hard for lit in clause}
    if not hard_vars <= set(soft_vars):
        missing = sorted(hard_vars - set(soft_vars))
        raise WcnfParseError(0, f"variables {missing} appear in hard clauses but have no soft unit")
    if sum(w for _, w in soft) + 1 != top:
        raise WcnfParseError(0, "top weight must be total soft weight + 1")
    variables = [EdgeVar(i, None) for i in range(1, num_vars + 1)]
    return MaxSatInstance(variables, hard, soft)
