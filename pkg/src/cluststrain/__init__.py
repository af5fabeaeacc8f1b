"""Multi-strain SIR contagion with mutation on clustered random networks.

Generates clustered configuration-model graphs from joint single-edge /
triangle degree distributions, simulates two-strain spreading with in-host
mutation, and computes the matching branching-process predictions
(emergence probability, epidemic threshold, size heuristic), plus a sweep
harness that cross-validates simulation against theory.
"""

from .analytics import (
    ConfigProbs,
    ConvergenceError,
    EmergenceSolution,
    critical_parameter,
    emergence_probability,
    jacobian,
    one_step_irreversible_rho,
    progeny_mean_matrix,
    size_heuristic,
    spectral_radius,
    triangle_config_probs,
)
from .degree_models import (
    ClusterTunable,
    DoublyPoisson,
    JointDegreeModel,
    MomentSet,
    PgfTerms,
    Table,
)
from .graph_gen import (
    ClusteredGraph,
    DegreeSequence,
    GraphDiagnostics,
    assemble,
    dump_edge_list,
    global_clustering,
    sample_degree_sequence,
)
from .harness import (
    CSV_HEADER,
    SweepConfig,
    SweepPoint,
    SweepRow,
    cluster_tunable_grid,
    doubly_poisson_grid,
    empirical_estimates,
    rows_from_csv,
    rows_to_csv,
    run_sweep,
)
from .spread_sim import SimulationOutcome, StrainParams, classify, simulate

__version__ = "0.1.0"

__all__ = [
    "ClusterTunable",
    "ClusteredGraph",
    "ConfigProbs",
    "ConvergenceError",
    "CSV_HEADER",
    "DegreeSequence",
    "DoublyPoisson",
    "EmergenceSolution",
    "GraphDiagnostics",
    "JointDegreeModel",
    "MomentSet",
    "PgfTerms",
    "SimulationOutcome",
    "StrainParams",
    "SweepConfig",
    "SweepPoint",
    "SweepRow",
    "Table",
    "assemble",
    "classify",
    "cluster_tunable_grid",
    "critical_parameter",
    "doubly_poisson_grid",
    "dump_edge_list",
    "emergence_probability",
    "empirical_estimates",
    "global_clustering",
    "jacobian",
    "one_step_irreversible_rho",
    "progeny_mean_matrix",
    "rows_from_csv",
    "rows_to_csv",
    "run_sweep",
    "sample_degree_sequence",
    "simulate",
    "size_heuristic",
    "spectral_radius",
    "triangle_config_probs",
]
