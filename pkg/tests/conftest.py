import numpy as np
import pytest
from hypothesis import strategies as st

from camuv_merge import (
    Dag,
    DirectedGraph,
    IntegrationInput,
    MixedGraph,
    VariableTable,
)


@pytest.fixture
def example_one() -> IntegrationInput:
    """The 4-variable two-dataset reference instance: dataset 1 sees
    {v1,v2,v4} with edge v1->v2 and pair {v1,v4} unidentified; dataset 2 sees
    {v2,v3,v4} with edge v3->v4 and pair {v2,v3} unidentified.  Exactly two
    candidate DAGs are consistent with both, and each orients the
    never-co-observed pair {v1,v3}."""
    g1 = MixedGraph(observed={0, 1, 3}, directed={(0, 1)}, unidentified={(0, 3)})
    g2 = MixedGraph(observed={1, 2, 3}, directed={(2, 3)}, unidentified={(1, 2)})
    return IntegrationInput(VariableTable(("v1", "v2", "v3", "v4")), [g1, g2])


EXAMPLE_ONE_SOLUTIONS = (
    ((0, 1), (0, 2), (2, 3)),
    ((0, 1), (2, 0), (2, 3)),
)


def random_dag(rng: np.random.Generator, d: int, p: float = 0.3) -> Dag:
    order = rng.permutation(d)
    pos = np.empty(d, dtype=int)
    pos[order] = np.arange(d)
    edges = [
        ((i, j) if pos[i] < pos[j] else (j, i))
        for i in range(d)
        for j in range(i + 1, d)
        if rng.random() < p
    ]
    return Dag(d, edges)


def random_digraph(rng: np.random.Generator, d: int, p: float = 0.3) -> DirectedGraph:
    edges = [
        (i, j) for i in range(d) for j in range(d) if i != j and rng.random() < p
    ]
    return DirectedGraph(d, edges)


@st.composite
def digraphs(draw, min_d: int = 2, max_d: int = 6):
    d = draw(st.integers(min_d, max_d))
    cells = [(i, j) for i in range(d) for j in range(d) if i != j]
    edges = draw(st.frozensets(st.sampled_from(cells)))
    return DirectedGraph(d, edges)


@st.composite
def dags(draw, min_d: int = 2, max_d: int = 6):
    d = draw(st.integers(min_d, max_d))
    order = draw(st.permutations(range(d)))
    pos = {v: k for k, v in enumerate(order)}
    cells = [(i, j) for i in range(d) for j in range(d) if pos[i] < pos[j]]
    edges = draw(st.frozensets(st.sampled_from(cells)))
    return Dag(d, edges)


@st.composite
def graph_view_pairs(draw, min_d: int = 3, max_d: int = 6):
    g = draw(digraphs(min_d, max_d))
    observed = draw(
        st.frozensets(st.integers(0, g.order - 1), min_size=2, max_size=g.order)
    )
    ids = sorted(observed)
    i = draw(st.sampled_from(ids))
    j = draw(st.sampled_from([v for v in ids if v != i]))
    return g, observed, i, j
