"""camuv-merge: integrate CAM-UV causal-discovery results from multiple
datasets with non-identical variable sets by enumerating every DAG whose
unobserved-path structure is consistent with all of them, up to an
inconsistency-cost budget."""

from .graphs import (
    CycleError,
    Dag,
    DirectedGraph,
    GraphError,
    MixedGraph,
    VariableTable,
    is_acyclic,
    pair_of,
    reachable_avoiding,
    topological_order,
)
from .instances import (
    ConstraintsUnsatisfiable,
    ErrorSpec,
    GroundTruthInstance,
    NoEligibleTarget,
    gen_er_dag,
    generate_instance,
    inject_errors,
    project_all,
    sample_views,
)
from .integrate import (
    Assignment,
    CyclicOverlap,
    Decision,
    IntegrationInput,
    InvalidInput,
    OverlapResult,
    UnknownPair,
    apply_assignment,
    inconsistency_cost,
    is_consistent,
    lower_bound_cost,
    overlap,
)
from .metrics import DimensionMismatch, EmptySolutionSet, MetricsReport, evaluate_metrics
from .oracle import CapExceeded, OracleResult, brute_force_enumerate, exhaustive_up_check
from .paths import (
    ObservationView,
    PathWitness,
    has_ubp,
    has_ucp_directed,
    ideal_projection,
    up_nonempty,
    up_witness,
)
from .refine import (
    ConstraintSet,
    ContradictoryConstraints,
    edge_frequency,
    filter_solutions,
    sample_solutions,
    satisfies,
)
from .search import (
    EnumerationResult,
    MonotonicityViolation,
    PriorityMismatch,
    SearchLimits,
    SearchState,
    Solution,
    edge_order,
    enumerate_dags,
    initial_state,
    successors,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
