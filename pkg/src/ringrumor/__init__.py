"""Maki-Thompson rumour dynamics on Newman-Watts small-world rings.

Exact stochastic simulation (eager and graph-coupled), mean-field
asymptotics via Lambert W, branching-process threshold estimators, and a
reproducible Monte-Carlo sweep harness with collapse-based threshold
estimation.
"""

from .graph import (
    DegreeStats,
    Graph,
    GraphParams,
    build,
    degree_stats,
    shortcut_probability,
)
from .process import (
    NodeState,
    RunOutcome,
    run,
    run_batch,
    run_coupled,
    verify_absorption_identity,
)
from .meanfield import (
    MeanFieldParams,
    MeanFieldTrajectory,
    StepSizeRejected,
    alpha,
    integrate,
    lambert_w0,
    ode_rhs,
    poisson_expectation,
    z_infinity,
)
from .branching import (
    BlockedCluster,
    BlockingProfile,
    NoRootError,
    ScanLimitExceeded,
    blocked_cluster,
    classify_blocking,
    critical_c,
    expected_blocked_cluster_size,
    expected_run_length,
    subcritical_mean,
    supercritical_mean,
)
from .experiments import (
    ExperimentConfig,
    Histogram,
    MeanFieldComparison,
    NoCollapseError,
    NoiseReport,
    SweepRow,
    SweepTable,
    collect_final_counts,
    compare_noise_sources,
    estimate_thresholds,
    histogram,
    meanfield_comparison,
    monte_carlo,
    paper_scale_config,
)

__version__ = "0.1.0"

__all__ = [
    "BlockedCluster",
    "BlockingProfile",
    "DegreeStats",
    "ExperimentConfig",
    "Graph",
    "GraphParams",
    "Histogram",
    "MeanFieldComparison",
    "MeanFieldParams",
    "MeanFieldTrajectory",
    "NoCollapseError",
    "NodeState",
    "NoiseReport",
    "NoRootError",
    "RunOutcome",
    "ScanLimitExceeded",
    "StepSizeRejected",
    "SweepRow",
    "SweepTable",
    "alpha",
    "blocked_cluster",
    "build",
    "classify_blocking",
    "collect_final_counts",
    "compare_noise_sources",
    "critical_c",
    "degree_stats",
    "estimate_thresholds",
    "expected_blocked_cluster_size",
    "expected_run_length",
    "histogram",
    "integrate",
    "lambert_w0",
    "meanfield_comparison",
    "monte_carlo",
    "ode_rhs",
    "paper_scale_config",
    "poisson_expectation",
    "run",
    "run_batch",
    "run_coupled",
    "shortcut_probability",
    "subcritical_mean",
    "supercritical_mean",
    "verify_absorption_identity",
    "z_infinity",
]
