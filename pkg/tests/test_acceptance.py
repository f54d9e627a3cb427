"""Acceptance suite: one test per release criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  Skipped heavyweight instances (open-pair count above 12) are
reported, never silently dropped.
"""
import itertools
import statistics
import time

import numpy as np
import pytest

from camuv_merge import IntegrationInput, MixedGraph, VariableTable
from camuv_merge.documents import read_result
from camuv_merge.graphs import DirectedGraph, pair_of
from camuv_merge.cli import run_cli
from camuv_merge.instances import (
    ConstraintsUnsatisfiable,
    ErrorSpec,
    generate_instance,
    inject_errors,
    project_all,
)
from camuv_merge.integrate import inconsistency_cost, overlap
from camuv_merge.kernels import get_backend
from camuv_merge.metrics import evaluate_metrics
from camuv_merge.oracle import (
    _definitional_cost,
    brute_force_enumerate,
    exhaustive_up_check,
)
from camuv_merge.paths import ObservationView, ideal_projection, up_nonempty
from camuv_merge.search import enumerate_dags, initial_state, successors

from conftest import random_dag

THEOREM1_COMBOS = ((2, 3), (2, 4), (3, 3), (3, 4))
OPEN_PAIR_CAP = 12


def canonical(solutions):
    return [(s.cost, tuple(s.graph.sorted_edges())) for s in solutions]


@pytest.fixture(scope="module")
def theorem1_runs():
    """All generate -> project -> enumerate(b=0) runs used by several
    criteria: list of (instance, merged, base, result, wall_seconds)."""
    runs = []
    skipped = []
    unsatisfiable = 0
    for m, u in THEOREM1_COMBOS:
        for seed in range(100):
            try:
                inst = generate_instance(10, 0.3, m, u, seed)
            except ConstraintsUnsatisfiable:
                unsatisfiable += 1
                continue
            merged = project_all(inst)
            base = overlap(merged)
            if len(base.open_pairs) > OPEN_PAIR_CAP:
                skipped.append((m, u, seed, len(base.open_pairs)))
                continue
            t0 = time.perf_counter()
            result = enumerate_dags(merged, budget=0)
            runs.append((inst, merged, base, result, time.perf_counter() - t0))
    return runs, skipped, unsatisfiable


def test_c01_theorem1_recovery(theorem1_runs):
    """Ideal projections always recover the ground truth at zero cost."""
    runs, skipped, unsatisfiable = theorem1_runs
    assert runs, "no instance satisfied the open-pair cap"
    for inst, merged, base, result, _ in runs:
        assert result.complete
        assert result.c_star == 0, (inst.m, inst.u, inst.seed)
        truth_edges = frozenset(inst.truth.edges)
        assert any(
            frozenset(s.graph.edges) == truth_edges for s in result.solutions
        ), (inst.m, inst.u, inst.seed)
    median = statistics.median(wall for *_, wall in runs)
    assert median < 10.0
    print(
        f"PASS theorem-1 recovery: {len(runs)} instances, c_star=0 and truth "
        f"recovered in all; median {median * 1000:.0f} ms/instance; "
        f"{len(skipped)} skipped with more than {OPEN_PAIR_CAP} open pairs; "
        f"{unsatisfiable} seeds unsatisfiable"
    )


@pytest.fixture(scope="module")
def oracle_equivalence_runs():
    """50 instances (ideal and error-injected) with at most 8 open pairs,
    each swept by the oracle at budget 2 and enumerated at budgets 0..2."""
    cases = []
    seed = 0
    while len(cases) < 50 and seed < 4000:
        seed += 1
        d, m, u, p = ((5, 2, 1, 0.4), (6, 2, 2, 0.35), (7, 2, 2, 0.3))[seed % 3]
        try:
            inst = generate_instance(d, p, m, u, seed)
        except ConstraintsUnsatisfiable:
            continue
        merged = project_all(inst)
        if seed % 2 == 0:
            mode = ("spurious-n", "dropped-edge", "dropped-n")[seed % 5 % 3]
            try:
                merged = inject_errors(merged, ErrorSpec(mode, 1, seed=seed))
            except Exception:
                continue
        base = overlap(merged)
        if len(base.open_pairs) > 8:
            continue
        oracle = brute_force_enumerate(merged, budget=2)
        engine = {b: enumerate_dags(merged, budget=b) for b in (0, 1, 2)}
        cases.append((inst, merged, oracle, engine))
    return cases


def test_c02_oracle_equivalence(oracle_equivalence_runs):
    """Best-first enumeration returns exactly the brute-force solution sets."""
    cases = oracle_equivalence_runs
    assert len(cases) == 50
    injected = sum(1 for inst, merged, _, _ in cases if project_all(inst).results != merged.results)
    for _, merged, oracle, engine in cases:
        for b in (0, 1, 2):
            result = engine[b]
            assert result.complete
            assert result.c_star == oracle.c_star
            assert canonical(result.solutions) == canonical(oracle.solutions_within(b))
    print(
        f"PASS oracle equivalence: 50 instances ({injected} error-injected) x "
        f"budgets 0..2, identical solution sets and minima"
    )


def test_c03_monotonicity_assertion(theorem1_runs, oracle_equivalence_runs):
    """The bound never decreased along any expansion in any acceptance run
    (the engine raises MonotonicityViolation otherwise), and an explicit
    replay of successor generation confirms it on small instances."""
    checked = 0
    for _, merged, oracle, _ in oracle_equivalence_runs[:10]:
        base = overlap(merged)
        stack = [initial_state(base, merged)]
        while stack:
            state = stack.pop()
            for child in successors(state, base, merged):
                assert child.priority >= state.priority
                checked += 1
                if child.t < len(base.open_pairs):
                    stack.append(child)
    print(
        f"PASS monotonicity: zero violations across all runs; "
        f"{checked} parent-child pairs replayed explicitly"
    )


def test_c04_lemma1_finalized_costs(oracle_equivalence_runs):
    """Every enumerated solution's cached priority equals its cost recounted
    definitionally, with no shared code path."""
    mismatches = 0
    checked = 0
    for _, merged, _, engine in oracle_equivalence_runs:
        for b in (0, 1, 2):
            for s in engine[b].solutions:
                recount = _definitional_cost(s.graph, merged.results, merged.dimension)
                checked += 1
                if recount != s.cost:
                    mismatches += 1
    assert mismatches == 0
    print(f"PASS lemma-1 costs: {checked} finalized states recounted, 0 mismatches")


def test_c05_detector_correctness_exhaustive_4_nodes():
    """BFS detectors agree with literal simple-path enumeration on every
    4-node graph, view, and pair, and on 1000 random 6-8-node cases."""
    numba_backend = get_backend("numba")
    numpy_backend = get_backend("numpy")
    d = 4
    cells = [(i, j) for i in range(d) for j in range(d) if i != j]
    views = [
        w
        for size in (2, 3, 4)
        for w in itertools.combinations(range(d), size)
    ]
    checked = 0
    for mask in range(1 << len(cells)):
        edges = [cells[b] for b in range(len(cells)) if mask >> b & 1]
        g = DirectedGraph(d, edges)
        adj = np.array(g.adjacency, dtype=np.uint8)
        for w in views:
            view = ObservationView(g, w)
            obs = np.zeros(d, np.uint8)
            obs[list(w)] = 1
            for i, j in itertools.combinations(w, 2):
                literal = exhaustive_up_check(g, set(w), i, j)
                assert up_nonempty(view, i, j) == literal
                assert numba_backend.up_exists(adj, obs, i, j) == literal
                assert numpy_backend.up_exists(adj, obs, i, j) == literal
                checked += 1

    rng = np.random.default_rng(123)
    random_checked = 0
    while random_checked < 1000:
        n = int(rng.integers(6, 9))
        g = DirectedGraph(
            n,
            [
                (i, j)
                for i in range(n)
                for j in range(n)
                if i != j and rng.random() < 0.3
            ],
        )
        observed = sorted(rng.choice(n, size=int(rng.integers(2, n + 1)), replace=False))
        i, j = map(int, rng.choice(observed, size=2, replace=False))
        literal = exhaustive_up_check(g, set(observed), i, j)
        view = ObservationView(g, observed)
        adj = np.array(g.adjacency, dtype=np.uint8)
        obs = np.zeros(n, np.uint8)
        obs[observed] = 1
        assert up_nonempty(view, i, j) == literal
        assert numba_backend.up_exists(adj, obs, i, j) == literal
        assert numpy_backend.up_exists(adj, obs, i, j) == literal
        random_checked += 1
    print(
        f"PASS detector correctness: {checked} exhaustive 4-node queries and "
        f"{random_checked} random 6-8-node queries, 100% agreement"
    )


def test_c06_example_one_reproduction(example_one):
    """The 4-variable reference instance yields exactly two consistent DAGs,
    each orienting the never-co-observed pair."""
    base = overlap(example_one)
    result = enumerate_dags(example_one, budget=0)
    oracle = brute_force_enumerate(example_one, budget=0)
    assert result.c_star == 0 and oracle.c_star == 0
    assert len(result.solutions) == 2
    assert canonical(result.solutions) == canonical(oracle.solutions)
    (never,) = base.never_coobserved_pairs
    for s in result.solutions:
        i, j = never
        assert s.graph.has_edge(i, j) or s.graph.has_edge(j, i)
    print(
        "PASS example-1 reproduction: exactly 2 consistent DAGs, both "
        f"orienting the never-co-observed pair {never}"
    )


def _spurious_case(seed: int):
    """An ideal two-dataset instance whose first dataset observes everything,
    with one identified pair of that dataset flipped to unidentified.  No
    candidate can ever realize a UCP/UBP for a fully-observed dataset, so
    every DAG pays at least that one violation."""
    rng = np.random.default_rng(seed)
    d = 6
    truth = random_dag(rng, d, 0.4)
    sub = sorted(int(v) for v in rng.choice(d, size=4, replace=False))
    merged = IntegrationInput(
        VariableTable.default(d),
        [
            ideal_projection(truth, range(d)),  # full view: the exact result
            ideal_projection(truth, sub),
        ],
    )
    full = merged.results[0]
    candidates = sorted(full.identified_pairs)
    target = candidates[int(rng.integers(len(candidates)))]
    directed = {e for e in full.directed if pair_of(*e) != target}
    spoiled = MixedGraph(full.observed, directed, set(full.unidentified) | {target})
    return truth, IntegrationInput(merged.table, [spoiled, merged.results[1]]), target


def test_c07_spurious_n_behavior():
    """An injected unidentified pair that can never host a UCP/UBP forces a
    minimum cost of at least 1, and the truth stays recoverable within the
    budget equal to its own excess cost."""
    built = 0
    seed = 0
    while built < 20 and seed < 500:
        seed += 1
        truth, merged, target = _spurious_case(seed)
        base = overlap(merged)
        if len(base.open_pairs) > 8:
            continue
        # recoverability precondition: overlap edges are true edges and every
        # missing true edge is an open pair
        a_hat = base.overlapped.edges
        if not a_hat <= truth.edges:
            continue
        missing = {pair_of(u, w) for u, w in truth.edges - a_hat}
        if not missing <= set(base.open_pairs):
            continue
        cost_truth = inconsistency_cost(truth, base, merged)
        result0 = enumerate_dags(merged, budget=0)
        assert result0.c_star >= 1, seed
        budget = cost_truth - result0.c_star
        assert budget >= 0
        result = enumerate_dags(merged, budget=budget) if budget else result0
        truth_edges = frozenset(truth.edges)
        assert any(frozenset(s.graph.edges) == truth_edges for s in result.solutions), seed
        oracle = brute_force_enumerate(merged, budget=budget)
        assert canonical(result.solutions) == canonical(oracle.solutions_within(budget))
        built += 1
    assert built == 20
    print(
        "PASS spurious-N behavior: 20 constructed cases, c_star >= 1 and the "
        "truth recovered within budget C(truth) - c_star in every case"
    )


def test_c08_metrics_reduction_and_uno_recall(theorem1_runs):
    """Singleton metrics equal classical TP/FP/FN exactly; restricting to
    never-co-observed pairs yields positive MTP whenever the truth has an
    edge there."""
    rng = np.random.default_rng(99)
    for _ in range(100):
        d = int(rng.integers(3, 9))
        truth = random_dag(rng, d, 0.4)
        solution = random_dag(rng, d, 0.4)
        report = evaluate_metrics([solution], truth)
        tp = len(solution.edges & truth.edges)
        fp = len(solution.edges - truth.edges)
        fn = len(truth.edges - solution.edges)
        assert (report.mtp, report.mfp, report.mfn) == (tp, fp, fn)

    runs, _, _ = theorem1_runs
    eligible = 0
    for inst, merged, base, result, _ in runs:
        never = base.never_coobserved_pairs
        truth_pairs = {pair_of(u, w) for u, w in inst.truth.edges}
        if not (truth_pairs & never):
            continue
        eligible += 1
        report = evaluate_metrics(
            [s.graph for s in result.solutions], inst.truth, restrict=never
        )
        assert report.mtp > 0, (inst.m, inst.u, inst.seed)
    assert eligible > 0
    print(
        f"PASS metrics: singleton reduction exact on 100 draws; "
        f"never-co-observed MTP > 0 on all {eligible} eligible ideal instances"
    )


def test_c09_cli_determinism(tmp_path):
    """Every pipeline command, rerun with identical arguments, writes
    byte-identical files."""
    paths = {}

    def run2(name, argv):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}-{tag}"
            assert run_cli([str(x) for x in argv + ["-o", out]]) in (0, 3)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1], f"{name} output differs between reruns"
        paths[name] = tmp_path / f"{name}-a"

    run2("inst", ["generate", "--d", 8, "--p", 0.3, "--m", 2, "--u", 2, "--seed", 5])
    run2("camuv", ["project", "--instance", paths["inst"]])
    run2("noisy", ["inject", "--input", paths["camuv"], "--mode", "spurious-n",
                   "--count", 1, "--seed", 2])
    run2("res", ["enumerate", "--input", paths["camuv"], "--budget", 1])
    run2("orc", ["oracle", "--input", paths["camuv"], "--budget", 1, "--cap", 14])
    run2("met", ["evaluate", "--result", paths["res"], "--instance", paths["inst"]])
    constraints = tmp_path / "cons.json"
    from camuv_merge.documents import constraints_payload, dump_document
    from camuv_merge.refine import ConstraintSet

    edge = read_result(str(paths["res"])).solutions[0].graph.sorted_edges()[0]
    constraints.write_text(
        dump_document("constraints", constraints_payload(ConstraintSet(required_edges=[edge])))
    )
    run2("filt", ["filter", "--result", paths["res"], "--constraints", constraints])
    run2("samp", ["sample", "--result", paths["res"], "--n", 2, "--seed", 9])
    print("PASS determinism: generate/project/inject/enumerate/oracle/evaluate/"
          "filter/sample all byte-identical across reruns")
