"""Synthetic ground-truth instances and controlled error injection.

Ground truths are Erdős–Rényi DAGs: each unordered pair gets an edge with
probability p, oriented along a uniformly random permutation of the
variables.  Dataset views of size d - u are rejection-sampled until they are
pairwise distinct, jointly cover every variable, overlap pairwise where
required, and leave at least u true-edge pairs observed together somewhere
and at least u true-edge pairs observed together nowhere.  Projection applies
the ideal (error-free) CAM-UV output per view; injection perturbs projected
results in the three ways an estimator realistically fails.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Dag, MixedGraph, VariableTable, pair_of
from .integrate import IntegrationInput
from .paths import ideal_projection


class ConstraintsUnsatisfiable(ValueError):
    """View sampling could not satisfy the instance constraints."""


class NoEligibleTarget(ValueError):
    """Error injection found nothing to perturb."""


ERROR_MODES = ("spurious-n", "dropped-edge", "dropped-n")


@dataclass(frozen=True)
class ErrorSpec:
    """How to perturb projected results: one mode, applied ``count`` times."""

    mode: str
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ERROR_MODES:
            raise ValueError(f"unknown error mode {self.mode!r}; expected one of {ERROR_MODES}")
        if self.count < 0:
            raise ValueError("count must be non-negative")


@dataclass(frozen=True)
class GroundTruthInstance:
    truth: Dag
    views: tuple[frozenset[int], ...]
    seed: int | None
    d: int
    p: float | None  # None when the truth was supplied rather than sampled
    m: int
    u: int

    def __post_init__(self):
        if len(self.views) != self.m or self.m < 2:
            raise ValueError("need m >= 2 views")
        if any(len(v) != self.d - self.u for v in self.views):
            raise ValueError("every view must have size d - u")


def gen_er_dag(d: int, p: float, seed) -> Dag:
    """Random DAG: pair-wise edge probability p, orientation by a random
    permutation.  Deterministic given the seed."""
    if d < 1:
        raise ValueError("d must be positive")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    position = np.empty(d, dtype=np.int64)
    position[rng.permutation(d)] = np.arange(d)
    edges = []
    for i in range(d):
        for j in range(i + 1, d):
            if rng.random() < p:
                edges.append((i, j) if position[i] < position[j] else (j, i))
    return Dag(d, edges)


def _instance_ok(truth: Dag, views: list[frozenset[int]], u: int) -> bool:
    d = truth.order
    if len(set(views)) != len(views):
        return False
    covered = frozenset().union(*views)
    if covered != frozenset(range(d)):
        return False
    for k, view in enumerate(views):
        if all(not (view & other) for l, other in enumerate(views) if l != k):
            return False
    edge_pairs = {pair_of(a, b) for a, b in truth.edges}
    coobserved = {
        pq for view in views for pq in
        ((x, y) for x in view for y in view if x < y)
    }
    seen_edges = sum(1 for pq in edge_pairs if pq in coobserved)
    hidden_edges = len(edge_pairs) - seen_edges
    return seen_edges >= u and hidden_edges >= u


def sample_views(
    truth: Dag, m: int, u: int, seed, max_attempts: int = 10_000
) -> GroundTruthInstance:
    """Rejection-sample m views of size d - u until the instance constraints
    hold; raises :class:`ConstraintsUnsatisfiable` when impossible or after
    ``max_attempts`` draws."""
    d = truth.order
    if m < 2:
        raise ValueError("m must be at least 2")
    if not (0 <= u < d):
        raise ValueError("u must lie in 0..d-1")
    if u == 0:
        raise ConstraintsUnsatisfiable(
            "u = 0 forces every view to equal the full variable set; views cannot be distinct"
        )
    edge_pairs = {pair_of(a, b) for a, b in truth.edges}
    if len(edge_pairs) < 2 * u:
        raise ConstraintsUnsatisfiable(
            f"truth has {len(edge_pairs)} edges; need at least {2 * u} to satisfy the "
            f"co-observed and never-co-observed edge-pair quotas"
        )
    rng = np.random.default_rng(seed)
    seed_int = int(seed) if isinstance(seed, (int, np.integer)) else None
    for _ in range(max_attempts):
        views = [
            frozenset(int(v) for v in rng.choice(d, size=d - u, replace=False))
            for _ in range(m)
        ]
        if _instance_ok(truth, views, u):
            return GroundTruthInstance(
                truth=truth,
                views=tuple(views),
                seed=seed_int,
                d=d,
                p=None,
                m=m,
                u=u,
            )
    raise ConstraintsUnsatisfiable(
        f"no valid view sets within {max_attempts} attempts (m={m}, u={u}, "
        f"{len(edge_pairs)} truth edges)"
    )


def generate_instance(
    d: int, p: float, m: int, u: int, seed: int, max_attempts: int = 10_000
) -> GroundTruthInstance:
    """Full instance generation: random truth, then views; child seeds are
    derived so truth and view draws come from independent streams."""
    truth_seed, view_seed = np.random.SeedSequence(seed).spawn(2)
    truth = gen_er_dag(d, p, truth_seed)
    instance = sample_views(truth, m, u, view_seed, max_attempts)
    return GroundTruthInstance(
        truth=truth, views=instance.views, seed=seed, d=d, p=p, m=m, u=u
    )


def project_all(instance: GroundTruthInstance, table: VariableTable | None = None) -> IntegrationInput:
    """Ideal CAM-UV projection of the truth onto every view."""
    table = table or VariableTable.default(instance.d)
    results = [ideal_projection(instance.truth, view) for view in instance.views]
    return IntegrationInput(table, results)


def _apply_one(results: list[MixedGraph], mode: str, rng: np.random.Generator) -> list[MixedGraph]:
    if mode == "spurious-n":
        eligible = [
            (k, pq)
            for k, g in enumerate(results)
            for pq in sorted(g.identified_pairs)
        ]
    elif mode == "dropped-edge":
        eligible = [(k, e) for k, g in enumerate(results) for e in sorted(g.directed)]
    else:  # dropped-n
        eligible = [(k, pq) for k, g in enumerate(results) for pq in sorted(g.unidentified)]
    if not eligible:
        raise NoEligibleTarget(f"no target for error mode {mode!r}")
    k, target = eligible[int(rng.integers(len(eligible)))]
    g = results[k]
    if mode == "spurious-n":
        i, j = target
        directed = {e for e in g.directed if pair_of(*e) != (i, j)}
        results[k] = MixedGraph(g.observed, directed, set(g.unidentified) | {(i, j)})
    elif mode == "dropped-edge":
        results[k] = MixedGraph(g.observed, g.directed - {target}, g.unidentified)
    else:
        results[k] = MixedGraph(g.observed, g.directed, g.unidentified - {target})
    return results


def inject_errors(input: IntegrationInput, spec: ErrorSpec) -> IntegrationInput:
    """Perturb the results ``spec.count`` times in ``spec.mode``:

    * ``spurious-n`` moves an identified pair (edge or absence) into a
      dataset's unidentified set,
    * ``dropped-edge`` deletes an identified edge outright,
    * ``dropped-n`` deletes an unidentified flag (pair becomes
      identified-absent).

    Deterministic given the seed; output is revalidated.
    """
    rng = np.random.default_rng(spec.seed)
    results = list(input.results)
    for _ in range(spec.count):
        results = _apply_one(results, spec.mode, rng)
    return IntegrationInput(input.table, results)
