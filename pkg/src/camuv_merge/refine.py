"""Post-enumeration refinement: conjunctive constraints, deterministic
sampling, and edge-frequency summaries for interactive narrowing of large
solution sets."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .graphs import Dag, Edge, Pair, pair_of
from .metrics import EmptySolutionSet
from .search import EnumerationResult


class ContradictoryConstraints(ValueError):
    """The constraint set is unsatisfiable by construction."""


@dataclass(frozen=True)
class ConstraintSet:
    """Conjunctive solution constraints: sink variables (out-degree 0),
    required and forbidden directed edges, and pairs required absent."""

    sinks: frozenset[int] = frozenset()
    required_edges: frozenset[Edge] = frozenset()
    forbidden_edges: frozenset[Edge] = frozenset()
    required_absent_pairs: frozenset[Pair] = frozenset()

    def __init__(
        self,
        sinks: Iterable[int] = (),
        required_edges: Iterable[Edge] = (),
        forbidden_edges: Iterable[Edge] = (),
        required_absent_pairs: Iterable[Pair] = (),
    ):
        object.__setattr__(self, "sinks", frozenset(int(v) for v in sinks))
        object.__setattr__(
            self, "required_edges", frozenset((int(u), int(w)) for u, w in required_edges)
        )
        object.__setattr__(
            self, "forbidden_edges", frozenset((int(u), int(w)) for u, w in forbidden_edges)
        )
        object.__setattr__(
            self,
            "required_absent_pairs",
            frozenset(pair_of(i, j) for i, j in required_absent_pairs),
        )
        self._validate()

    def _validate(self):
        clash = self.required_edges & self.forbidden_edges
        if clash:
            raise ContradictoryConstraints(f"edges both required and forbidden: {sorted(clash)}")
        for u, w in self.required_edges:
            if pair_of(u, w) in self.required_absent_pairs:
                raise ContradictoryConstraints(
                    f"edge ({u}, {w}) required but its pair is required absent"
                )
            if u in self.sinks:
                raise ContradictoryConstraints(
                    f"edge ({u}, {w}) required but {u} is constrained to be a sink"
                )

    def union(self, other: "ConstraintSet") -> "ConstraintSet":
        return ConstraintSet(
            self.sinks | other.sinks,
            self.required_edges | other.required_edges,
            self.forbidden_edges | other.forbidden_edges,
            self.required_absent_pairs | other.required_absent_pairs,
        )

    def is_empty(self) -> bool:
        return not (
            self.sinks or self.required_edges or self.forbidden_edges or self.required_absent_pairs
        )


def satisfies(graph: Dag, constraints: ConstraintSet) -> bool:
    for v in constraints.sinks:
        if graph.successors[v]:
            return False
    for e in constraints.required_edges:
        if e not in graph.edges:
            return False
    for e in constraints.forbidden_edges:
        if e in graph.edges:
            return False
    for i, j in constraints.required_absent_pairs:
        if graph.has_edge(i, j) or graph.has_edge(j, i):
            return False
    return True


def filter_solutions(result: EnumerationResult, constraints: ConstraintSet) -> EnumerationResult:
    """Keep exactly the solutions satisfying every constraint; cost ordering
    is preserved and the minimum cost is recomputed on the survivors."""
    kept = [s for s in result.solutions if satisfies(s.graph, constraints)]
    c_star = min((s.cost for s in kept), default=None)
    return replace(result, solutions=kept, c_star=c_star)


def sample_indices(total: int, n: int, seed: int = 0) -> list[int]:
    """Ascending indices of a uniform without-replacement sample."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= total:
        return list(range(total))
    rng = np.random.default_rng(seed)
    return sorted(int(k) for k in rng.choice(total, size=n, replace=False))


def sample_result(result: EnumerationResult, n: int, seed: int = 0) -> EnumerationResult:
    """Result restricted to a uniform sample of its solutions (all of them,
    in canonical order, when n covers the set); deterministic given the seed."""
    picked = sample_indices(len(result.solutions), n, seed)
    kept = [result.solutions[k] for k in picked]
    c_star = min((s.cost for s in kept), default=None)
    return replace(result, solutions=kept, c_star=c_star)


def sample_solutions(result: EnumerationResult, n: int, seed: int = 0) -> list[Dag]:
    """Uniform sample without replacement, deterministic given the seed;
    returns all solutions in canonical order when n covers them."""
    return [s.graph for s in sample_result(result, n, seed).solutions]


def edge_frequency(result: EnumerationResult) -> np.ndarray:
    """(d, d) matrix: entry (i, j) is the fraction of solutions containing
    edge (i, j)."""
    if not result.solutions:
        raise EmptySolutionSet("no solutions to summarize")
    d = result.dimension
    counts = np.zeros((d, d), dtype=np.int64)
    for s in result.solutions:
        counts += s.graph.adjacency
    freq = counts / float(len(result.solutions))
    freq.setflags(write=False)
    return freq
