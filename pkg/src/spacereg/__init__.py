"""spacereg: spacing-weighted kernel regression.

Local linear and local constant kernel estimators whose least-squares
weights carry the design spacings, making them uniformly consistent under
fixed, random, or strongly dependent designs; the only design requirement
is that the maximum gap between neighbouring points shrinks.  The package
also ships Nadaraya-Watson and LOESS-1 comparators, cross-validated
bandwidth selection, mean/covariance estimation for dense functional data,
and a deterministic simulation harness.
"""

__version__ = "0.1.0"

from .bandwidth import (
    CvPlan,
    cross_validate,
    default_h_grid,
    default_span_grid,
    log_grid,
    make_folds,
    rate_heuristic_h,
)
from .design import OrderedSample, RawSample, max_spacing, prepare_sample
from .estimators import (
    FittedCurve,
    LocalWeights,
    beta_weights,
    fit_loess1,
    fit_nw,
    fit_ulc,
    fit_ull,
    local_weights,
    theoretical_interior_bias,
    theoretical_variance_ratio,
)
from .exceptions import (
    CsvFormatError,
    DegenerateGridError,
    InvalidArgumentError,
    NoSolutionError,
    NoValidBandwidthError,
    SingularWindowError,
    SpaceregError,
    UndefinedMetricError,
)
from .functional import (
    MeanCurve,
    TrajectoryBatch,
    covariance_surface,
    mean_function,
    second_moment_surface,
)
from .io import read_batch_csv, read_sample_csv
from .kernels import (
    KERNEL_IDS,
    Kernel,
    KernelMoments,
    boundary_bias_factor,
    eval_scaled,
    get_kernel,
    moments,
    partial_moment,
)
from .simharness import (
    BUILTIN_SCENARIOS,
    ReplicationReport,
    Scenario,
    builtin_scenario,
    empirical_modulus,
    gen_design,
    max_error,
    metric_grid_points,
    mse_holdout,
    run_study,
    target_value,
    wilcoxon_signed_rank,
)

__all__ = [
    "__version__",
    # kernels
    "Kernel", "KernelMoments", "KERNEL_IDS", "get_kernel", "eval_scaled",
    "moments", "partial_moment", "boundary_bias_factor",
    # design
    "RawSample", "OrderedSample", "prepare_sample", "max_spacing",
    # estimators
    "LocalWeights", "FittedCurve", "local_weights", "beta_weights",
    "fit_ull", "fit_ulc", "fit_nw", "fit_loess1",
    "theoretical_interior_bias", "theoretical_variance_ratio",
    # bandwidth
    "CvPlan", "log_grid", "default_h_grid", "default_span_grid",
    "make_folds", "cross_validate", "rate_heuristic_h",
    # functional
    "TrajectoryBatch", "MeanCurve", "mean_function",
    "second_moment_surface", "covariance_surface",
    # simharness
    "Scenario", "ReplicationReport", "BUILTIN_SCENARIOS", "builtin_scenario",
    "target_value", "gen_design", "metric_grid_points", "max_error",
    "empirical_modulus", "mse_holdout", "run_study", "wilcoxon_signed_rank",
    # io
    "read_sample_csv", "read_batch_csv",
    # exceptions
    "SpaceregError", "InvalidArgumentError", "CsvFormatError",
    "DegenerateGridError", "SingularWindowError", "NoValidBandwidthError",
    "NoSolutionError", "UndefinedMetricError",
]
