"""Independent brute-force reference implementations.

Everything here is deliberately written against the graph-core primitives
only: the open pair set is re-derived from the raw inputs, UCP/UBP existence
is re-implemented on top of plain reachability, candidate costs are recounted
from scratch per candidate (no memoization, no lower bound), and
:func:`exhaustive_up_check` applies the path definitions literally by
enumerating simple paths.  Engine results are validated against these.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import Dag, DirectedGraph, Pair, is_acyclic, pair_of, reachable_avoiding
from .integrate import IntegrationInput


class CapExceeded(ValueError):
    """The instance is too large for exhaustive checking."""


@dataclass(frozen=True)
class OracleSolution:
    graph: Dag
    cost: int


@dataclass(frozen=True)
class OracleResult:
    assignments_examined: int        # 3 ** number of open pairs
    dag_count: int                   # acyclic candidates among them
    cost_histogram: dict[int, int]   # cost -> number of DAGs
    c_star: int
    budget: int
    solutions: tuple[OracleSolution, ...]  # cost <= c_star + budget

    def solutions_within(self, budget: int) -> tuple[OracleSolution, ...]:
        if budget > self.budget:
            raise ValueError("requested budget exceeds the swept budget")
        return tuple(s for s in self.solutions if s.cost <= self.c_star + budget)


def _up_check_bfs(g: DirectedGraph, observed: set[int], i: int, j: int) -> bool:
    """UCP/UBP existence by reachability; shares nothing with the engine's
    evaluators beyond graph-core."""
    unobs_parents_i = [u for u in g.predecessors[i] if u not in observed]
    unobs_parents_j = [u for u in g.predecessors[j] if u not in observed]
    # causal path i -> ... -> k -> j, last intermediate unobserved
    if unobs_parents_j:
        reach_i = reachable_avoiding(g, [i], [j])
        if any(t in reach_i for t in unobs_parents_j):
            return True
    if unobs_parents_i:
        reach_j = reachable_avoiding(g, [j], [i])
        if any(t in reach_j for t in unobs_parents_i):
            return True
    # backdoor: a common node reaches unobserved parents of both endpoints
    if unobs_parents_i and unobs_parents_j:
        rev = DirectedGraph(g.order, ((w, u) for u, w in g.edges))
        s_i = reachable_avoiding(rev, unobs_parents_i, [i, j])
        s_j = reachable_avoiding(rev, unobs_parents_j, [i, j])
        if s_i & s_j:
            return True
    return False


def _definitional_cost(
    candidate: DirectedGraph, results, d: int
) -> int:
    cost = 0
    for g in results:
        observed = set(g.observed)
        obs = sorted(observed)
        for a in range(len(obs)):
            for b in range(a + 1, len(obs)):
                i, j = obs[a], obs[b]
                has_up = _up_check_bfs(candidate, observed, i, j)
                flagged = pair_of(i, j) in g.unidentified
                if flagged != has_up:
                    cost += 1
    return cost


def brute_force_enumerate(
    input: IntegrationInput, budget: int = 0, cap: int = 12
) -> OracleResult:
    """Sweep every ternary assignment over the open pairs, keep the acyclic
    candidates, recount each candidate's cost definitionally, and return the
    candidates within ``c_star + budget``."""
    d = input.dimension
    union_edges: set[tuple[int, int]] = set()
    n_union: set[Pair] = set()
    coobserved: set[Pair] = set()
    for g in input.results:
        union_edges |= g.directed
        n_union |= g.unidentified
        obs = sorted(g.observed)
        for a in range(len(obs)):
            for b in range(a + 1, len(obs)):
                coobserved.add((obs[a], obs[b]))
    base = DirectedGraph(d, union_edges)
    if not is_acyclic(base):
        raise ValueError("overlapped edges form a cycle")
    union_pairs = {pair_of(u, w) for u, w in union_edges}
    all_pairs = {(i, j) for i in range(d) for j in range(i + 1, d)}
    open_pairs = sorted((n_union - union_pairs) | (all_pairs - coobserved))
    if len(open_pairs) > cap:
        raise CapExceeded(f"{len(open_pairs)} open pairs exceed the cap of {cap}")

    examined = 3 ** len(open_pairs)
    histogram: dict[int, int] = {}
    costed: list[tuple[int, DirectedGraph]] = []
    for choice in itertools.product((0, 1, 2), repeat=len(open_pairs)):
        edges = set(union_edges)
        for (i, j), code in zip(open_pairs, choice):
            if code == 1:
                edges.add((i, j))
            elif code == 2:
                edges.add((j, i))
        candidate = DirectedGraph(d, edges)
        if not is_acyclic(candidate):
            continue
        cost = _definitional_cost(candidate, input.results, d)
        histogram[cost] = histogram.get(cost, 0) + 1
        costed.append((cost, candidate))

    c_star = min(cost for cost, _ in costed)
    kept = [
        OracleSolution(Dag(d, g.edges), cost)
        for cost, g in costed
        if cost <= c_star + budget
    ]
    kept.sort(key=lambda s: (s.cost, s.graph.sorted_edges()))
    return OracleResult(
        assignments_examined=examined,
        dag_count=len(costed),
        cost_histogram=dict(sorted(histogram.items())),
        c_star=c_star,
        budget=budget,
        solutions=tuple(kept),
    )


def _simple_paths(
    g: DirectedGraph, src: int, dst: int, banned: frozenset[int]
):
    """Yield all simple directed paths src -> dst avoiding banned nodes."""
    path = [src]
    on_path = {src}

    def walk(u: int):
        if u == dst:
            yield list(path)
            return
        for w in g.successors[u]:
            if w in on_path or w in banned:
                continue
            path.append(w)
            on_path.add(w)
            yield from walk(w)
            path.pop()
            on_path.remove(w)

    if src == dst:
        yield [src]
    elif src not in banned:
        yield from walk(src)


def exhaustive_up_check(g: DirectedGraph, observed, i: int, j: int, cap: int = 10) -> bool:
    """Literal UCP/UBP existence by simple-path enumeration.

    A causal-path hit is a simple path between the endpoints with at least
    one intermediate node whose last intermediate is unobserved.  A backdoor
    hit is a fork node with simple arms to both endpoints that share only the
    fork, each arm entering its endpoint from an unobserved node.
    """
    if g.order > cap:
        raise CapExceeded(f"{g.order} nodes exceed the cap of {cap}")
    observed = set(observed)
    if i == j or i not in observed or j not in observed:
        raise ValueError("endpoints must be distinct and observed")
    for src, dst in ((i, j), (j, i)):
        for path in _simple_paths(g, src, dst, frozenset()):
            if len(path) >= 3 and path[-2] not in observed:
                return True
    for apex in range(g.order):
        if apex == i or apex == j:
            continue
        arms_i = [
            p for p in _simple_paths(g, apex, i, frozenset({j}))
            if p[-2] not in observed
        ]
        if not arms_i:
            continue
        arms_j = [
            p for p in _simple_paths(g, apex, j, frozenset({i}))
            if p[-2] not in observed
        ]
        for arm_i in arms_i:
            inner_i = set(arm_i[1:])
            for arm_j in arms_j:
                if inner_i.isdisjoint(arm_j[1:]):
                    return True
    return False
