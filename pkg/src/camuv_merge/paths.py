"""Detection of unobserved causal paths (UCPs) and unobserved backdoor paths
(UBPs) relative to an observed-variable set.

A UCP from ``i`` to ``j`` is a directed path ``i -> ... -> k -> j`` whose last
intermediate node ``k`` is unobserved.  A UBP between ``i`` and ``j`` has the
form ``i <- x <- ... <- a -> ... -> y -> j`` where ``x`` and ``y`` are
unobserved (``a`` may coincide with ``x`` and/or ``y``).  Both are decided by
breadth-first reachability, which stays well-defined on cyclic graphs; the
returned witnesses are always simple paths.

:func:`ideal_projection` turns a ground-truth DAG plus an observed set into
the mixed graph an error-free CAM-UV run would report.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graphs import (
    Dag,
    DirectedGraph,
    GraphError,
    MixedGraph,
    Pair,
    bfs_path,
    pair_of,
)

UCP_FORWARD = "ucp-forward"
UCP_BACKWARD = "ucp-backward"
UBP = "ubp"


@dataclass(frozen=True)
class ObservationView:
    """A graph together with the subset of its nodes an observer can see."""

    graph: DirectedGraph
    observed: frozenset[int]

    def __init__(self, graph: DirectedGraph, observed: Iterable[int]):
        obs = frozenset(int(v) for v in observed)
        if not obs:
            raise GraphError("observed set must be non-empty")
        if any(not (0 <= v < graph.order) for v in obs):
            raise GraphError("observed set contains invalid ids")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "observed", obs)

    @property
    def unobserved(self) -> frozenset[int]:
        return frozenset(range(self.graph.order)) - self.observed

    def unobserved_parents(self, v: int) -> list[int]:
        return [u for u in self.graph.predecessors[v] if u not in self.observed]


@dataclass(frozen=True)
class PathWitness:
    """A concrete path realizing a UCP or UBP form."""

    kind: str
    nodes: tuple[int, ...]

    def check(self, view: ObservationView) -> None:
        """Re-validate this witness against its definition form; raises
        :class:`GraphError` on any mismatch."""
        ns = self.nodes
        g, obs = view.graph, view.observed
        if len(set(ns)) != len(ns):
            raise GraphError(f"witness repeats a node: {ns}")
        if ns[0] not in obs or ns[-1] not in obs:
            raise GraphError(f"witness endpoints must be observed: {ns}")
        if self.kind in (UCP_FORWARD, UCP_BACKWARD):
            if len(ns) < 3:
                raise GraphError("causal-path witness needs an intermediate node")
            for s in range(len(ns) - 1):
                if not g.has_edge(ns[s], ns[s + 1]):
                    raise GraphError(f"missing edge {ns[s]}->{ns[s + 1]} in witness")
            if ns[-2] in obs:
                raise GraphError("last intermediate of a causal-path witness must be unobserved")
        elif self.kind == UBP:
            if len(ns) < 3:
                raise GraphError("backdoor witness needs a fork node")
            if ns[1] in obs or ns[-2] in obs:
                raise GraphError("backdoor witness arms must start unobserved")
            for apex in range(1, len(ns) - 1):
                ok = all(g.has_edge(ns[s + 1], ns[s]) for s in range(apex)) and all(
                    g.has_edge(ns[s], ns[s + 1]) for s in range(apex, len(ns) - 1)
                )
                if ok:
                    return
            raise GraphError(f"no fork point realizes backdoor form: {ns}")
        else:
            raise GraphError(f"unknown witness kind {self.kind!r}")


def _require_observed(view: ObservationView, i: int, j: int) -> None:
    if i == j:
        raise GraphError("queried endpoints must differ")
    if i not in view.observed or j not in view.observed:
        raise GraphError(f"queried endpoints must be observed: ({i}, {j})")


def has_ucp_directed(view: ObservationView, i: int, j: int) -> PathWitness | None:
    """Witness for a UCP from i to j, or None.

    Exists iff some unobserved direct parent of ``j`` is reachable from ``i``
    without passing through ``j``.  A direct edge i -> j is not a UCP: the
    path must route through at least one intermediate node.
    """
    _require_observed(view, i, j)
    targets = view.unobserved_parents(j)
    if not targets:
        return None
    prefix = bfs_path(view.graph, [i], targets, blocked=[j])
    if prefix is None:
        return None
    return PathWitness(UCP_FORWARD, tuple(prefix) + (j,))


def _dists_to(
    g: DirectedGraph, targets: Iterable[int], blocked: set[int]
) -> dict[int, int]:
    """Distance from each node to its nearest target along forward edges
    avoiding blocked nodes (reverse BFS; targets at distance 0)."""
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for t in sorted(set(targets)):
        if t not in blocked:
            dist[t] = 0
            queue.append(t)
    while queue:
        v = queue.popleft()
        for u in g.predecessors[v]:
            if u not in dist and u not in blocked:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def has_ubp(view: ObservationView, i: int, j: int) -> PathWitness | None:
    """Witness for a UBP between i and j, or None.

    With T_i / T_j the unobserved direct parents of i resp. j, a UBP exists
    iff some node reaches both a member of T_i and a member of T_j along
    directed paths avoiding i and j (zero-length paths allowed).  The witness
    fork is chosen to minimize total arm length, which keeps the two arms
    disjoint and the witness a simple path.
    """
    _require_observed(view, i, j)
    t_i = view.unobserved_parents(i)
    t_j = view.unobserved_parents(j)
    if not t_i or not t_j:
        return None
    blocked = {i, j}
    dist_i = _dists_to(view.graph, t_i, blocked)
    dist_j = _dists_to(view.graph, t_j, blocked)
    common = set(dist_i) & set(dist_j)
    if not common:
        return None
    apex = min(common, key=lambda v: (dist_i[v] + dist_j[v], v))
    arm_i = bfs_path(view.graph, t_i, [apex], blocked=blocked, reverse=True)
    arm_j = bfs_path(view.graph, t_j, [apex], blocked=blocked, reverse=True)
    assert arm_i is not None and arm_j is not None
    # arm_i reads x..apex along reversed edges, i.e. apex -> ... -> x forward
    nodes = [i] + arm_i[:-1] + [apex] + list(reversed(arm_j[:-1])) + [j]
    return PathWitness(UBP, tuple(nodes))


def up_witness(view: ObservationView, i: int, j: int) -> PathWitness | None:
    """First witness among: UCP i->j, UCP j->i, UBP between i and j."""
    w = has_ucp_directed(view, i, j)
    if w is not None:
        return w
    w = has_ucp_directed(view, j, i)
    if w is not None:
        return PathWitness(UCP_BACKWARD, w.nodes)
    return has_ubp(view, i, j)


def up_nonempty(view: ObservationView, i: int, j: int) -> bool:
    """True iff any UCP (either direction) or UBP connects the pair."""
    return up_witness(view, i, j) is not None


def ideal_projection(truth: Dag, observed: Iterable[int]) -> MixedGraph:
    """The mixed graph an error-free CAM-UV run on ``observed`` would report.

    For each observed pair: unidentified when a UCP/UBP exists in the truth
    relative to this view (taking precedence over a coexisting direct edge),
    else a directed edge when the truth has one, else identified-absent.
    """
    obs = sorted(set(int(v) for v in observed))
    if any(not (0 <= v < truth.order) for v in obs):
        raise GraphError("observed set contains invalid ids")
    view = ObservationView(truth, obs)
    directed: set[tuple[int, int]] = set()
    unidentified: set[Pair] = set()
    for a in range(len(obs)):
        for b in range(a + 1, len(obs)):
            i, j = obs[a], obs[b]
            if up_nonempty(view, i, j):
                unidentified.add(pair_of(i, j))
            elif truth.has_edge(i, j):
                directed.add((i, j))
            elif truth.has_edge(j, i):
                directed.add((j, i))
    return MixedGraph(obs, directed, unidentified)
