import itertools

import numpy as np
import pytest

from camuv_merge import (
    CyclicOverlap,
    Dag,
    IntegrationInput,
    InvalidInput,
    MixedGraph,
    UnknownPair,
    VariableTable,
)
from camuv_merge.instances import generate_instance, project_all
from camuv_merge.integrate import (
    Decision,
    apply_assignment,
    inconsistency_cost,
    is_consistent,
    lower_bound_cost,
    overlap,
    order_open_pairs,
)
from camuv_merge.oracle import _definitional_cost

from conftest import EXAMPLE_ONE_SOLUTIONS


def small_instances(count=12, seed0=0):
    out = []
    seed = seed0
    while len(out) < count:
        for d, m, u, p in ((5, 2, 1, 0.4), (6, 2, 2, 0.35), (7, 2, 2, 0.3)):
            try:
                inst = generate_instance(d, p, m, u, seed)
            except Exception:
                continue
            merged = project_all(inst)
            if len(overlap(merged).open_pairs) <= 6:
                out.append((inst, merged))
        seed += 1
    return out[:count]


def test_input_validation():
    table = VariableTable.default(3)
    g = MixedGraph(observed={0, 1, 2})
    with pytest.raises(InvalidInput):
        IntegrationInput(table, [g])  # m >= 2
    with pytest.raises(InvalidInput):
        # identical observed sets
        IntegrationInput(table, [g, MixedGraph(observed={0, 1, 2})])
    with pytest.raises(InvalidInput):
        # variable 2 never observed
        IntegrationInput(table, [MixedGraph(observed={0}), MixedGraph(observed={0, 1})])


def test_input_requires_shared_variables():
    table = VariableTable.default(4)
    with pytest.raises(InvalidInput):
        IntegrationInput(
            table, [MixedGraph(observed={0, 1}), MixedGraph(observed={2, 3})]
        )


def test_overlap_example_one(example_one):
    base = overlap(example_one)
    assert sorted(base.overlapped.edges) == [(0, 1), (2, 3)]
    assert base.unresolved_pairs == {(0, 3), (1, 2)}
    assert base.never_coobserved_pairs == {(0, 2)}
    assert base.open_pairs == ((0, 3), (1, 2), (0, 2))
    assert overlap(example_one, policy="lex").open_pairs == ((0, 2), (0, 3), (1, 2))
    assert base.identified_pairs[0] == {(0, 1), (1, 3)}
    assert base.identified_pairs[1] == {(1, 3), (2, 3)}


def test_unidentified_pair_resolved_by_other_dataset_edge():
    # {0,1} flagged in dataset 1 but identified as an edge in dataset 2:
    # the overlap edge wins, so the pair is not open
    table = VariableTable.default(3)
    g1 = MixedGraph(observed={0, 1}, unidentified={(0, 1)})
    g2 = MixedGraph(observed={0, 1, 2}, directed={(0, 1)})
    base = overlap(IntegrationInput(table, [g1, g2]))
    assert base.unresolved_pairs == frozenset()
    assert (0, 1) in {(u, w) for u, w in base.overlapped.edges}


def test_overlap_cycle_detection_and_repair():
    table = VariableTable.default(3)
    g1 = MixedGraph(observed={0, 1, 2}, directed={(0, 1), (1, 2)})
    g2 = MixedGraph(observed={0, 1}, directed={(1, 0)})
    merged = IntegrationInput(table, [g1, g2])
    with pytest.raises(CyclicOverlap) as err:
        overlap(merged)
    assert len(err.value.cycle) >= 2
    repaired = overlap(merged, repair=True)
    # datasets in order, edges in canonical order: (1, 0) arrives last, dropped
    assert sorted(repaired.overlapped.edges) == [(0, 1), (1, 2)]


def test_edge_order_policies_and_unknown_policy(example_one):
    base = overlap(example_one)
    assert order_open_pairs([], [], "lex") == ()
    with pytest.raises(ValueError):
        overlap(example_one, policy="random")


def test_apply_assignment(example_one):
    base = overlap(example_one)
    assert apply_assignment(base, {}).edges == base.overlapped.edges
    g = apply_assignment(base, {(0, 2): Decision.FORWARD})
    assert g.edges == base.overlapped.edges | {(0, 2)}
    g = apply_assignment(base, {(0, 2): Decision.BACKWARD, (0, 3): Decision.ABSENT})
    assert g.edges == base.overlapped.edges | {(2, 0)}
    with pytest.raises(UnknownPair):
        apply_assignment(base, {(1, 3): Decision.FORWARD})


def test_is_consistent_example_one(example_one):
    base = overlap(example_one)
    good = Dag(4, [(0, 1), (2, 3), (0, 2)])
    also_good = Dag(4, [(0, 1), (2, 3), (2, 0)])
    bad = Dag(4, [(0, 1), (2, 3)])
    assert is_consistent(good, base, example_one)
    assert is_consistent(also_good, base, example_one)
    assert not is_consistent(bad, base, example_one)
    assert inconsistency_cost(good, base, example_one) == 0
    assert inconsistency_cost(bad, base, example_one) > 0


def test_every_dag_consistent_when_no_pairs_constrained():
    # single-variable overlap, no co-observed pairs beyond the shared one
    table = VariableTable.default(3)
    g1 = MixedGraph(observed={0, 1})
    g2 = MixedGraph(observed={1, 2})
    merged = IntegrationInput(table, [g1, g2])
    base = overlap(merged)
    for edges in ([], [(0, 1)], [(0, 2)], [(2, 0), (1, 2)]):
        candidate = Dag(3, edges)
        assert inconsistency_cost(candidate, base, merged) == _definitional_cost(
            candidate, merged.results, 3
        )


def test_cost_zero_iff_consistent():
    for inst, merged in small_instances(8):
        base = overlap(merged)
        pairs = base.open_pairs
        for choice in itertools.product((0, 1, 2), repeat=min(len(pairs), 3)):
            assignment = {
                p: (Decision.ABSENT, Decision.FORWARD, Decision.BACKWARD)[c]
                for p, c in zip(pairs, choice)
            }
            for p in pairs[len(choice):]:
                assignment[p] = Decision.ABSENT
            g = apply_assignment(base, assignment)
            from camuv_merge.graphs import is_acyclic

            if not is_acyclic(g):
                continue
            candidate = Dag(g.order, g.edges)
            cost = inconsistency_cost(candidate, base, merged)
            assert (cost == 0) == is_consistent(candidate, base, merged)
            assert cost == _definitional_cost(candidate, merged.results, g.order)


def test_cost_invariant_under_dataset_reordering(example_one):
    base = overlap(example_one)
    flipped = IntegrationInput(example_one.table, list(example_one.results[::-1]))
    base_f = overlap(flipped)
    for edges in EXAMPLE_ONE_SOLUTIONS + (((0, 1),), ()):
        candidate = Dag(4, edges)
        assert inconsistency_cost(candidate, base, example_one) == inconsistency_cost(
            candidate, base_f, flipped
        )


def test_cost_permutation_equivariance():
    rng = np.random.default_rng(5)
    for inst, merged in small_instances(4):
        d = merged.dimension
        perm = rng.permutation(d)
        mapping = {int(i): int(perm[i]) for i in range(d)}
        table = VariableTable(tuple(f"n{i}" for i in range(d)))
        relabeled = IntegrationInput(
            table,
            [
                MixedGraph(
                    {mapping[v] for v in g.observed},
                    {(mapping[u], mapping[w]) for u, w in g.directed},
                    {(mapping[i], mapping[j]) for i, j in g.unidentified},
                )
                for g in merged.results
            ],
        )
        candidate = inst.truth
        relabeled_candidate = Dag(
            d, {(mapping[u], mapping[w]) for u, w in candidate.edges}
        )
        assert inconsistency_cost(
            candidate, overlap(merged), merged
        ) == inconsistency_cost(relabeled_candidate, overlap(relabeled), relabeled)


def _full_assignment(pairs, codes):
    return {
        p: (Decision.ABSENT, Decision.FORWARD, Decision.BACKWARD)[c]
        for p, c in zip(pairs, codes)
    }


def test_lower_bound_equals_cost_when_finalized():
    # the bound collapses to the exact cost once every pair is decided
    for inst, merged in small_instances(6):
        base = overlap(merged)
        pairs = base.open_pairs
        rng = np.random.default_rng(11)
        for _ in range(10):
            codes = [int(rng.integers(3)) for _ in pairs]
            assignment = _full_assignment(pairs, codes)
            g = apply_assignment(base, assignment)
            from camuv_merge.graphs import is_acyclic

            if not is_acyclic(g):
                continue
            candidate = Dag(g.order, g.edges)
            assert lower_bound_cost(len(pairs), assignment, base, merged) == \
                inconsistency_cost(candidate, base, merged)


def test_lower_bound_bounds_all_descendants():
    from camuv_merge.graphs import is_acyclic

    for inst, merged in small_instances(4):
        base = overlap(merged)
        pairs = base.open_pairs
        if not pairs:
            continue
        rng = np.random.default_rng(13)
        # always include the root (t = 0) plus one random prefix
        prefixes = [[]]
        t = int(rng.integers(1, len(pairs) + 1))
        prefixes.append([int(rng.integers(3)) for _ in range(t)])
        for prefix_codes in prefixes:
            t = len(prefix_codes)
            partial = _full_assignment(pairs[:t], prefix_codes)
            if not is_acyclic(apply_assignment(base, partial)):
                continue
            bound = lower_bound_cost(t, partial, base, merged)
            # enumerate every completion and compare
            costs = []
            for rest in itertools.product((0, 1, 2), repeat=len(pairs) - t):
                total = _full_assignment(pairs, prefix_codes + list(rest))
                full = apply_assignment(base, total)
                if not is_acyclic(full):
                    continue
                candidate = Dag(full.order, full.edges)
                costs.append(inconsistency_cost(candidate, base, merged))
            assert all(bound <= c for c in costs)
            if t == 0:
                # at the root the bound sits below the tree-wide minimum
                assert bound <= min(costs)


def test_lower_bound_validates_prefix(example_one):
    base = overlap(example_one)
    with pytest.raises(InvalidInput):
        lower_bound_cost(2, {(0, 3): Decision.FORWARD}, base, example_one)
    with pytest.raises(UnknownPair):
        lower_bound_cost(1, {(1, 3): Decision.FORWARD}, base, example_one)
