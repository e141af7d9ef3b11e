"""Random intersection graphs with group-heterogeneous ring sizes:
closed-form edge/isolation quantities, a seeded sampler, graph observables,
brute-force oracles, and Monte Carlo estimators of the connectivity
zero-one transition."""

from .errors import (
    EnumerationBudgetError,
    InvalidParamsError,
    InvariantViolation,
    RegimeViolationError,
    RigraphError,
    UnachievableError,
)
from .graph_analysis import TrialStats, analyze, build_inverted_index, connectivity, isolation_counts
from .model_core import (
    AdvisoryBounds,
    ExactQuantities,
    ModelParams,
    RegimeDiagnostics,
    b_vector,
    beta,
    beta_from_b1,
    cross_moment_ratio,
    cross_moment_ratio_values,
    diagnostics,
    edge_prob,
    exact_quantities,
    expected_isolated,
    expected_isolated_from_b,
    group_edge_prob,
    no_overlap_ratio,
    pairwise_edge_prob,
    ring_sizes_for,
    solve_k1,
)
from .montecarlo import EstimateRow, TrialAggregate, run_trials, wilson_interval
from .oracle import EventProbs, enumerate_event_probs, enumerate_pair_prob
from .sampler import GraphSample, SeedSpec, assign_group, generator_for, mix64, sample_graph, sample_object_set
from .sweeps import (
    RegimeLabel,
    SweepRow,
    SweepSpec,
    classify_from_values,
    classify_regime,
    load_sweep_spec,
    run_sweep,
    simulate_row,
    solve_k1_nearest,
    write_sweep_csv,
)

__version__ = "0.1.0"
