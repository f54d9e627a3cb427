"""Best-first enumeration of all DAGs within an inconsistency-cost budget.

States are (t, partial assignment) pairs kept in a min-heap keyed by the
monotone lower bound; ties prefer deeper states and later insertions, which
reaches a first (hence cost-minimal) finalized assignment quickly and tightens
pruning early.  Expanding a state orients one later pair in each direction
(skipping orientations that would close a cycle) and additionally finalizes
the state with all remaining pairs absent, so every total assignment is
generated exactly once.  The search stops once the popped bound exceeds the
minimum cost plus the budget, or a safety limit trips (partial results are
then flagged incomplete, never silently truncated).
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from . import kernels
from .graphs import Dag, Pair, VariableTable
from .integrate import (
    CODE_ABSENT,
    CODE_BACKWARD,
    CODE_FORWARD,
    CostEvaluator,
    Decision,
    IntegrationInput,
    OverlapResult,
    code_decision,
    decision_code,
    overlap,
    order_open_pairs,
)


class MonotonicityViolation(RuntimeError):
    """A successor's bound fell below its parent's; the bound is broken."""


class PriorityMismatch(RuntimeError):
    """A finalized state's cached priority disagrees with its exact cost."""


@dataclass(frozen=True)
class SearchState:
    """A search node: the first ``t`` open pairs are decided."""

    t: int
    decisions: tuple[Decision, ...]
    priority: int
    seq: int = 0

    def __post_init__(self):
        if len(self.decisions) != self.t:
            raise ValueError("decisions must cover exactly the first t pairs")


@dataclass(frozen=True)
class SearchLimits:
    """Safety limits; None disables the corresponding check."""

    max_popped: int | None = 5_000_000
    max_seconds: float | None = 600.0


@dataclass(frozen=True)
class SearchStats:
    popped: int
    pushed: int
    wall_time_s: float


@dataclass(frozen=True)
class Solution:
    graph: Dag
    cost: int


@dataclass
class EnumerationResult:
    """All DAGs with inconsistency cost <= c_star + budget, sorted by
    (cost, canonical edge list).  ``c_star`` is None when a safety limit
    interrupted the search before any finalized state was reached."""

    table: VariableTable
    budget: int
    c_star: int | None
    solutions: list[Solution]
    stats: SearchStats
    complete: bool = True
    limit_hit: str | None = None  # "states" | "time"

    @property
    def dimension(self) -> int:
        return len(self.table)


def edge_order(base: OverlapResult, policy: str = "constrained-first") -> tuple[Pair, ...]:
    """The deterministic open-pair processing order under a policy."""
    return order_open_pairs(base.open_pairs, base.unidentified_pairs, policy)


def _codes_of_state(state: SearchState) -> bytes:
    return bytes(decision_code(d) for d in state.decisions)


def _state_of_codes(codes: bytes, priority: int, seq: int) -> SearchState:
    return SearchState(
        t=len(codes),
        decisions=tuple(code_decision(c) for c in codes),
        priority=priority,
        seq=seq,
    )


def _expand(codes: bytes, priority: int, ev: CostEvaluator) -> list[tuple[bytes, int]]:
    """Children of a non-finalized state as (codes, priority); enforces the
    bound monotonicity at every expansion."""
    t = len(codes)
    n = len(ev.open_pairs)
    adj = ev.adjacency_of_codes(codes)
    children: list[tuple[bytes, int]] = []
    for s in range(t, n):
        i, j = ev.open_pairs[s]
        pad = bytes(s - t)
        for code, (u, w) in ((CODE_FORWARD, (i, j)), (CODE_BACKWARD, (j, i))):
            if kernels.reaches(adj, w, u):
                continue  # orientation would close a cycle
            child_adj = adj.copy()
            child_adj[u, w] = 1
            child_priority = ev.lower_bound(s + 1, child_adj)
            if child_priority < priority:
                raise MonotonicityViolation(
                    f"bound dropped {priority} -> {child_priority} orienting pair {ev.open_pairs[s]}"
                )
            children.append((codes + pad + bytes([code]), child_priority))
    finalized_priority = ev.exact_cost(adj)
    if finalized_priority < priority:
        raise MonotonicityViolation(
            f"bound dropped {priority} -> {finalized_priority} at finalization"
        )
    children.append((codes + bytes(n - t), finalized_priority))
    return children


def initial_state(base: OverlapResult, input: IntegrationInput) -> SearchState:
    ev = CostEvaluator(base, input)
    return SearchState(0, (), ev.lower_bound(0, ev.base_adj.copy()), 0)


def successors(
    state: SearchState, base: OverlapResult, input: IntegrationInput
) -> list[SearchState]:
    """All successor states of a non-finalized state, in generation order:
    both orientations per later pair (acyclic ones only), then the finalized
    all-remaining-absent state."""
    if state.t >= len(base.open_pairs):
        return []
    ev = CostEvaluator(base, input)
    children = _expand(_codes_of_state(state), state.priority, ev)
    return [
        _state_of_codes(codes, priority, state.seq + 1 + k)
        for k, (codes, priority) in enumerate(children)
    ]


def _solution_from_codes(codes: bytes, base: OverlapResult, order: int) -> Dag:
    edges = set(base.overlapped.edges)
    for s, code in enumerate(codes):
        if code == CODE_ABSENT:
            continue
        i, j = base.open_pairs[s]
        edges.add((i, j) if code == CODE_FORWARD else (j, i))
    return Dag(order, edges)


def enumerate_dags(
    input: IntegrationInput,
    budget: int = 0,
    limits: SearchLimits | None = None,
    policy: str = "constrained-first",
    repair: bool = False,
) -> EnumerationResult:
    """Enumerate every DAG over the overlapped graph and open pairs whose
    inconsistency cost is at most ``c_star + budget``."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    limits = limits or SearchLimits()
    base = overlap(input, repair=repair, policy=policy)
    ev = CostEvaluator(base, input)
    d = input.dimension
    n = len(base.open_pairs)

    t0 = time.perf_counter()
    root_priority = ev.lower_bound(0, ev.base_adj.copy())
    heap: list[tuple[int, int, int, bytes]] = [(root_priority, 0, 0, b"")]
    seq = 0
    popped = 0
    pushed = 1
    c_star: int | None = None
    raw_solutions: list[tuple[int, bytes]] = []
    complete = True
    limit_hit: str | None = None
    last_priority = root_priority

    while heap:
        if limits.max_popped is not None and popped >= limits.max_popped:
            complete, limit_hit = False, "states"
            break
        if limits.max_seconds is not None and time.perf_counter() - t0 > limits.max_seconds:
            complete, limit_hit = False, "time"
            break
        priority, neg_t, _neg_seq, codes = heapq.heappop(heap)
        popped += 1
        if priority < last_priority:
            raise PriorityMismatch("pop order regressed; heap priorities corrupted")
        last_priority = priority
        if c_star is not None and priority > c_star + budget:
            break
        t = -neg_t
        if t == n:
            exact = ev.exact_cost(ev.adjacency_of_codes(codes))
            if exact != priority:
                raise PriorityMismatch(
                    f"finalized priority {priority} != exact cost {exact}"
                )
            if c_star is None:
                c_star = exact
            raw_solutions.append((exact, codes))
        else:
            for child_codes, child_priority in _expand(codes, priority, ev):
                seq += 1
                heapq.heappush(
                    heap, (child_priority, -len(child_codes), -seq, child_codes)
                )
                pushed += 1

    solutions = [
        Solution(_solution_from_codes(codes, base, d), cost)
        for cost, codes in raw_solutions
    ]
    solutions.sort(key=lambda s: (s.cost, s.graph.sorted_edges()))
    stats = SearchStats(popped=popped, pushed=pushed, wall_time_s=time.perf_counter() - t0)
    return EnumerationResult(
        table=input.table,
        budget=budget,
        c_star=c_star,
        solutions=solutions,
        stats=stats,
        complete=complete,
        limit_hit=limit_hit,
    )
