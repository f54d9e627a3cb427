"""Integration of per-dataset CAM-UV results.

Builds the overlapped graph (union of all identified directed edges) and the
open pair set: pairs flagged unidentified somewhere without an overlap edge,
plus pairs never observed together in any dataset.  Candidate DAGs assign a
direction to each open pair or exclude it.  A candidate is consistent when,
for every dataset, identified pairs have no UCP/UBP and unidentified pairs
have one; the inconsistency cost counts the (dataset, pair) violations, and
``lower_bound_cost`` evaluates the monotone bound used by the best-first
search: identified-pair violations on the candidate as built so far, plus
unidentified-pair violations on the candidate completed with both
orientations of every still-open pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .graphs import (
    CycleError,
    Dag,
    DirectedGraph,
    Edge,
    MixedGraph,
    Pair,
    VariableTable,
    pair_of,
)
from .paths import ObservationView, up_nonempty


class InvalidInput(ValueError):
    """Integration input violates an invariant."""


class CyclicOverlap(InvalidInput):
    """The union of identified edges is cyclic (repair disabled)."""

    def __init__(self, cycle: Sequence[int]):
        super().__init__(f"overlapped edges form a cycle: {list(cycle)}")
        self.cycle = tuple(cycle)


class UnknownPair(InvalidInput):
    """An assignment referenced a pair that is not open."""


class Decision(str, Enum):
    ABSENT = "absent"
    FORWARD = "forward"   # min-id -> max-id
    BACKWARD = "backward"  # max-id -> min-id


# compact per-pair ternary codes used by the search
CODE_ABSENT, CODE_FORWARD, CODE_BACKWARD = 0, 1, 2
_DECISION_TO_CODE = {
    Decision.ABSENT: CODE_ABSENT,
    Decision.FORWARD: CODE_FORWARD,
    Decision.BACKWARD: CODE_BACKWARD,
}
_CODE_TO_DECISION = {v: k for k, v in _DECISION_TO_CODE.items()}


def decision_code(decision: Decision) -> int:
    return _DECISION_TO_CODE[Decision(decision)]


def code_decision(code: int) -> Decision:
    return _CODE_TO_DECISION[code]


def oriented_edge(pair: Pair, decision: Decision) -> Edge | None:
    """The directed edge a decision puts on a canonical pair, None if absent."""
    i, j = pair
    if decision == Decision.FORWARD:
        return (i, j)
    if decision == Decision.BACKWARD:
        return (j, i)
    return None


Assignment = Mapping[Pair, Decision]


@dataclass(frozen=True)
class IntegrationInput:
    """A variable table plus one CAM-UV result per dataset."""

    table: VariableTable
    results: tuple[MixedGraph, ...]

    def __init__(self, table: VariableTable, results: Iterable[MixedGraph]):
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "results", tuple(results))
        self._validate()

    def _validate(self):
        d = len(self.table)
        if len(self.results) < 2:
            raise InvalidInput("need at least two dataset results")
        covered: set[int] = set()
        observed_sets = []
        for k, g in enumerate(self.results):
            if any(not (0 <= v < d) for v in g.observed):
                raise InvalidInput(f"dataset {k} references ids outside the table")
            covered |= g.observed
            observed_sets.append(g.observed)
        if covered != set(range(d)):
            missing = sorted(set(range(d)) - covered)
            raise InvalidInput(f"variables never observed in any dataset: {missing}")
        for k in range(len(observed_sets)):
            for l in range(k + 1, len(observed_sets)):
                if observed_sets[k] == observed_sets[l]:
                    raise InvalidInput(f"datasets {k} and {l} observe identical variable sets")
        for k, obs in enumerate(observed_sets):
            if len(self.results) > 1 and all(
                not (obs & other) for l, other in enumerate(observed_sets) if l != k
            ):
                raise InvalidInput(f"dataset {k} shares no variable with any other dataset")

    @property
    def dimension(self) -> int:
        return len(self.table)


@dataclass(frozen=True)
class OverlapResult:
    """Overlapped DAG plus the open pairs a candidate may orient or exclude."""

    overlapped: Dag
    unresolved_pairs: frozenset[Pair]       # unidentified somewhere, no overlap edge
    never_coobserved_pairs: frozenset[Pair]  # observed together in no dataset
    open_pairs: tuple[Pair, ...]
    identified_pairs: tuple[frozenset[Pair], ...]
    unidentified_pairs: tuple[frozenset[Pair], ...]


ORDER_POLICIES = ("constrained-first", "lex")


def order_open_pairs(
    pairs: Iterable[Pair],
    unidentified_sets: Sequence[frozenset[Pair]],
    policy: str = "constrained-first",
) -> tuple[Pair, ...]:
    """Deterministic processing order for open pairs.

    ``constrained-first`` sorts by descending count of datasets flagging the
    pair unidentified (most-constrained pairs first), ties in canonical
    order; ``lex`` is plain canonical order.
    """
    pairs = sorted(set(pairs))
    if policy == "lex":
        return tuple(pairs)
    if policy == "constrained-first":
        def mentions(p: Pair) -> int:
            return sum(1 for unid in unidentified_sets if p in unid)

        return tuple(sorted(pairs, key=lambda p: (-mentions(p), p)))
    raise ValueError(f"unknown edge-order policy {policy!r}; expected one of {ORDER_POLICIES}")


def _repair_union(results: Sequence[MixedGraph], d: int) -> set[Edge]:
    """Union of identified edges, dropping any edge that would close a cycle;
    datasets are processed in order, edges within each in canonical order."""
    kept: set[Edge] = set()
    succ: dict[int, set[int]] = {v: set() for v in range(d)}

    def reaches(src: int, dst: int) -> bool:
        stack, seen = [src], {src}
        while stack:
            u = stack.pop()
            if u == dst:
                return True
            for w in succ[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    for g in results:
        for (u, w) in sorted(g.directed):
            if (u, w) in kept:
                continue
            if reaches(w, u):
                continue
            kept.add((u, w))
            succ[u].add(w)
    return kept


def overlap(
    input: IntegrationInput, repair: bool = False, policy: str = "constrained-first"
) -> OverlapResult:
    """Build the overlapped DAG and the ordered open pair set.

    Raises :class:`CyclicOverlap` (with a witness cycle) when the edge union
    is cyclic and ``repair`` is off; with ``repair`` on, later cycle-closing
    edges are skipped instead.
    """
    d = input.dimension
    union_edges = set()
    for g in input.results:
        union_edges |= g.directed
    if repair:
        a_hat = _repair_union(input.results, d)
    else:
        try:
            Dag(d, union_edges)
        except CycleError as exc:
            raise CyclicOverlap(exc.cycle) from None
        a_hat = set(union_edges)
    overlapped = Dag(d, a_hat)

    n_union: set[Pair] = set()
    for g in input.results:
        n_union |= g.unidentified
    a_hat_pairs = {pair_of(u, w) for u, w in a_hat}
    unresolved = frozenset(n_union - a_hat_pairs)

    coobserved: set[Pair] = set()
    for g in input.results:
        obs = sorted(g.observed)
        for a in range(len(obs)):
            for b in range(a + 1, len(obs)):
                coobserved.add((obs[a], obs[b]))
    all_pairs = {(i, j) for i in range(d) for j in range(i + 1, d)}
    never = frozenset(all_pairs - coobserved)

    open_pairs = order_open_pairs(
        unresolved | never, [g.unidentified for g in input.results], policy
    )
    return OverlapResult(
        overlapped=overlapped,
        unresolved_pairs=unresolved,
        never_coobserved_pairs=never,
        open_pairs=open_pairs,
        identified_pairs=tuple(g.identified_pairs for g in input.results),
        unidentified_pairs=tuple(g.unidentified for g in input.results),
    )


def apply_assignment(base: OverlapResult, assignment: Assignment) -> DirectedGraph:
    """Overlapped edges plus the oriented open-pair edges of the assignment.

    Acyclicity is deliberately not checked here; callers decide.  Raises
    :class:`UnknownPair` when the assignment mentions a non-open pair.
    """
    open_set = set(base.open_pairs)
    edges = set(base.overlapped.edges)
    for pair, decision in assignment.items():
        pair = pair_of(*pair)
        if pair not in open_set:
            raise UnknownPair(f"pair {pair} is not an open pair")
        edge = oriented_edge(pair, Decision(decision))
        if edge is not None:
            edges.add(edge)
    return DirectedGraph(base.overlapped.order, edges)


def is_consistent(candidate: Dag, base: OverlapResult, input: IntegrationInput) -> bool:
    """Definitional consistency check: per dataset, identified pairs carry no
    UCP/UBP and unidentified pairs carry one, on the candidate graph viewed
    with that dataset's observed variables."""
    for k, g in enumerate(input.results):
        view = ObservationView(candidate, g.observed)
        for (i, j) in base.identified_pairs[k]:
            if up_nonempty(view, i, j):
                return False
        for (i, j) in base.unidentified_pairs[k]:
            if not up_nonempty(view, i, j):
                return False
    return True


class CostEvaluator:
    """Array-backed cost evaluation shared by the search.

    Results are memoized per graph content (adjacency bytes); one memo entry
    stores the full per-dataset count table, so re-evaluating the same graph
    in a different role (exact cost vs. either bound term) is free.
    """

    def __init__(self, base: OverlapResult, input: IntegrationInput):
        d = input.dimension
        m = len(input.results)
        self.base = base
        self.dimension = d
        self.obs = np.zeros((m, d), dtype=np.uint8)
        self.cls = np.zeros((m, d, d), dtype=np.uint8)
        for k, g in enumerate(input.results):
            for v in g.observed:
                self.obs[k, v] = 1
            for (i, j) in base.identified_pairs[k]:
                self.cls[k, i, j] = 1
            for (i, j) in base.unidentified_pairs[k]:
                self.cls[k, i, j] = 2
        self.base_adj = np.array(base.overlapped.adjacency, dtype=np.uint8)
        self.open_pairs = base.open_pairs
        # completion_mask[t] holds both orientations of every pair still open
        # after the first t pairs are processed
        n = len(self.open_pairs)
        self.completion_masks = np.zeros((n + 1, d, d), dtype=np.uint8)
        for t in range(n - 1, -1, -1):
            i, j = self.open_pairs[t]
            mask = self.completion_masks[t + 1].copy()
            mask[i, j] = 1
            mask[j, i] = 1
            self.completion_masks[t] = mask
        self._memo: dict[bytes, np.ndarray] = {}

    def terms(self, adj: np.ndarray) -> np.ndarray:
        key = adj.tobytes()
        hit = self._memo.get(key)
        if hit is None:
            hit = kernels.cost_terms(adj, self.obs, self.cls)
            self._memo[key] = hit
        return hit

    def exact_cost(self, adj: np.ndarray) -> int:
        return int(self.terms(adj).sum())

    def lower_bound(self, t: int, adj: np.ndarray) -> int:
        """Bound for a state whose first t pairs are decided and whose
        decided-part adjacency is ``adj``."""
        identified_violations = int(self.terms(adj)[:, 0].sum())
        completed = adj | self.completion_masks[t]
        unidentified_violations = int(self.terms(completed)[:, 1].sum())
        return identified_violations + unidentified_violations

    def adjacency_of_codes(self, codes: bytes) -> np.ndarray:
        adj = self.base_adj.copy()
        for s, code in enumerate(codes):
            if code == CODE_ABSENT:
                continue
            i, j = self.open_pairs[s]
            if code == CODE_FORWARD:
                adj[i, j] = 1
            else:
                adj[j, i] = 1
        return adj


def _codes_of_prefix(base: OverlapResult, t: int, partial: Assignment) -> bytes:
    if not (0 <= t <= len(base.open_pairs)):
        raise InvalidInput(f"prefix length {t} outside 0..{len(base.open_pairs)}")
    prefix = base.open_pairs[:t]
    normalized = {pair_of(*p): Decision(v) for p, v in partial.items()}
    extra = set(normalized) - set(base.open_pairs)
    if extra:
        raise UnknownPair(f"pairs not open: {sorted(extra)}")
    if set(normalized) != set(prefix):
        raise InvalidInput(
            f"partial assignment must cover exactly the first {t} open pairs"
        )
    return bytes(decision_code(normalized[p]) for p in prefix)


def inconsistency_cost(candidate: Dag, base: OverlapResult, input: IntegrationInput) -> int:
    """Number of (dataset, pair) consistency violations of the candidate."""
    if candidate.order != input.dimension:
        raise InvalidInput("candidate has wrong variable count")
    evaluator = CostEvaluator(base, input)
    adj = np.array(candidate.adjacency, dtype=np.uint8)
    return evaluator.exact_cost(adj)


def lower_bound_cost(
    t: int, partial: Assignment, base: OverlapResult, input: IntegrationInput
) -> int:
    """Monotone lower bound on the cost of every candidate extending the
    first-t-pairs assignment; equals the exact cost when t covers all pairs."""
    codes = _codes_of_prefix(base, t, partial)
    evaluator = CostEvaluator(base, input)
    adj = evaluator.adjacency_of_codes(codes)
    return evaluator.lower_bound(t, adj)
