"""Foundational graph types: variable tables, directed graphs, DAGs, mixed graphs.

Variables are dense integer ids ``0..d-1``; display names live only in
:class:`VariableTable`.  All graph values are immutable after construction,
so they can be shared freely across workers; edits produce new values.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from heapq import heappop, heappush
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]
Pair = tuple[int, int]


class GraphError(ValueError):
    """Malformed graph input."""


class CycleError(GraphError):
    """Raised when an operation requires acyclicity; carries a witness cycle."""

    def __init__(self, cycle: Sequence[int]):
        super().__init__(f"graph contains a cycle: {list(cycle)}")
        self.cycle = tuple(cycle)


def pair_of(i: int, j: int) -> Pair:
    """Canonical unordered pair: (min, max)."""
    if i == j:
        raise GraphError(f"pair endpoints must differ, got ({i}, {j})")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class VariableTable:
    """Ordered display names for variables; a variable id is its index."""

    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise GraphError("variable names must be unique")
        if any(not n for n in self.names):
            raise GraphError("variable names must be non-empty")

    def __len__(self) -> int:
        return len(self.names)

    def name(self, i: int) -> str:
        return self.names[i]

    def id_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable name {name!r}") from None

    @staticmethod
    def default(d: int) -> "VariableTable":
        return VariableTable(tuple(f"v{i}" for i in range(d)))


def _check_edges(order: int, edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for u, w in edges:
        u, w = int(u), int(w)
        if u == w:
            raise GraphError(f"self-loop at node {u}")
        if not (0 <= u < order and 0 <= w < order):
            raise GraphError(f"edge ({u}, {w}) outside 0..{order - 1}")
        out.add((u, w))
    return frozenset(out)


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph over ids 0..order-1; cycles are permitted."""

    order: int
    edges: frozenset[Edge]

    def __init__(self, order: int, edges: Iterable[Edge] = ()):
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "edges", _check_edges(int(order), edges))

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.order)]
        for u, w in sorted(self.edges):
            out[u].append(w)
        return tuple(tuple(s) for s in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.order)]
        for u, w in sorted(self.edges):
            out[w].append(u)
        return tuple(tuple(s) for s in out)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """(order, order) uint8 matrix, [u, w] == 1 iff u -> w.  Read-only."""
        adj = np.zeros((self.order, self.order), dtype=np.uint8)
        for u, w in self.edges:
            adj[u, w] = 1
        adj.setflags(write=False)
        return adj

    def has_edge(self, u: int, w: int) -> bool:
        return (u, w) in self.edges

    def with_edges(self, extra: Iterable[Edge]) -> "DirectedGraph":
        return DirectedGraph(self.order, self.edges | set(extra))

    def without_edges(self, gone: Iterable[Edge]) -> "DirectedGraph":
        return DirectedGraph(self.order, self.edges - set(gone))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


class Dag(DirectedGraph):
    """DirectedGraph refined to be acyclic; validated at construction."""

    def __init__(self, order: int, edges: Iterable[Edge] = ()):
        super().__init__(order, edges)
        topological_order(self)  # raises CycleError on cyclic input


@dataclass(frozen=True)
class MixedGraph:
    """One dataset's CAM-UV result: observed variables, identified directed
    edges, and variable pairs left unidentified by the estimator."""

    observed: frozenset[int]
    directed: frozenset[Edge]
    unidentified: frozenset[Pair]

    def __init__(
        self,
        observed: Iterable[int],
        directed: Iterable[Edge] = (),
        unidentified: Iterable[Pair] = (),
    ):
        obs = frozenset(int(v) for v in observed)
        dirs = frozenset((int(u), int(w)) for u, w in directed)
        unid = frozenset(pair_of(i, j) for i, j in unidentified)
        object.__setattr__(self, "observed", obs)
        object.__setattr__(self, "directed", dirs)
        object.__setattr__(self, "unidentified", unid)
        self._validate()

    def _validate(self):
        if not self.observed:
            raise GraphError("observed variable set must be non-empty")
        for u, w in self.directed:
            if u == w:
                raise GraphError(f"self-loop at node {u}")
            if u not in self.observed or w not in self.observed:
                raise GraphError(f"edge ({u}, {w}) has unobserved endpoint")
        for i, j in self.unidentified:
            if i not in self.observed or j not in self.observed:
                raise GraphError(f"unidentified pair ({i}, {j}) has unobserved endpoint")
        dir_pairs = {pair_of(u, w) for u, w in self.directed}
        overlap = dir_pairs & self.unidentified
        if overlap:
            raise GraphError(f"pairs both directed and unidentified: {sorted(overlap)}")
        # acyclicity of the identified part
        ids = sorted(self.observed)
        local = {v: k for k, v in enumerate(ids)}
        sub = DirectedGraph(len(ids), ((local[u], local[w]) for u, w in self.directed))
        if not is_acyclic(sub):
            raise GraphError("directed part of mixed graph is cyclic")

    @property
    def identified_pairs(self) -> frozenset[Pair]:
        """All observed pairs not flagged unidentified (edges and absences)."""
        ids = sorted(self.observed)
        pairs = {
            (ids[a], ids[b]) for a in range(len(ids)) for b in range(a + 1, len(ids))
        }
        return frozenset(pairs - self.unidentified)


def is_acyclic(g: DirectedGraph) -> bool:
    """True iff a topological order of g exists."""
    indeg = [0] * g.order
    for _, w in g.edges:
        indeg[w] += 1
    ready = deque(v for v in range(g.order) if indeg[v] == 0)
    seen = 0
    while ready:
        u = ready.popleft()
        seen += 1
        for w in g.successors[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == g.order


def _find_cycle(g: DirectedGraph) -> list[int]:
    color = [0] * g.order  # 0 unvisited, 1 on stack, 2 done
    parent = [-1] * g.order
    for root in range(g.order):
        if color[root]:
            continue
        stack = [(root, iter(g.successors[root]))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    color[w] = 1
                    parent[w] = u
                    stack.append((w, iter(g.successors[w])))
                    advanced = True
                    break
                if color[w] == 1:
                    cycle = [w]
                    x = u
                    while x != w:
                        cycle.append(x)
                        x = parent[x]
                    cycle.reverse()
                    return cycle
            if not advanced:
                color[u] = 2
                stack.pop()
    raise AssertionError("no cycle found in cyclic graph")


def topological_order(g: DirectedGraph) -> list[int]:
    """Topological order with ties broken by ascending id (deterministic).

    Raises :class:`CycleError` with a witness cycle on cyclic input.
    """
    indeg = [0] * g.order
    for _, w in g.edges:
        indeg[w] += 1
    heap: list[int] = []
    for v in range(g.order):
        if indeg[v] == 0:
            heappush(heap, v)
    out: list[int] = []
    while heap:
        u = heappop(heap)
        out.append(u)
        for w in g.successors[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heappush(heap, w)
    if len(out) != g.order:
        raise CycleError(_find_cycle(g))
    return out


def reachable_avoiding(
    g: DirectedGraph, sources: Iterable[int], blocked: Iterable[int] = ()
) -> set[int]:
    """Nodes reachable from ``sources`` by directed paths that use no blocked
    node.  Reachability is reflexive: the sources themselves are included.
    Works on cyclic graphs; breadth-first, linear in edge count.
    """
    blocked = set(blocked)
    srcs = set(sources)
    if srcs & blocked:
        raise GraphError("sources and blocked sets must be disjoint")
    seen = set(srcs)
    queue = deque(sorted(srcs))
    while queue:
        u = queue.popleft()
        for w in g.successors[u]:
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return seen


def bfs_path(
    g: DirectedGraph,
    sources: Iterable[int],
    targets: Iterable[int],
    blocked: Iterable[int] = (),
    reverse: bool = False,
) -> list[int] | None:
    """Shortest directed path from any source to any target avoiding blocked
    nodes, with BFS ties broken by smallest node id (deterministic).

    With ``reverse=True`` edges are traversed backwards and the returned path
    still reads source -> ... -> target along the *reversed* traversal, i.e.
    it is a path in the reversed graph.  Returns None when unreachable.
    """
    blocked = set(blocked)
    srcs = sorted(set(sources) - blocked)
    tgts = set(targets) - blocked
    parent: dict[int, int | None] = {s: None for s in srcs}
    queue = deque(srcs)
    nbrs = g.predecessors if reverse else g.successors

    def unwind(v: int) -> list[int]:
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])  # type: ignore[arg-type]
        path.reverse()
        return path

    for s in srcs:
        if s in tgts:
            return [s]
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w in blocked or w in parent:
                continue
            parent[w] = u
            if w in tgts:
                return unwind(w)
            queue.append(w)
    return None
