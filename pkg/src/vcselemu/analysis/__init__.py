"""Evaluation metrics, linear baseline, perturbation study and timing."""

from .baseline import (
    DEFAULT_HALF_WINDOW,
    RIDGE_LAMBDA,
    LinearBaseline,
    fit_linear_baseline,
    window_features,
)
from .benchmark import (
    TIMED_RUNS,
    BenchmarkReport,
    BenchmarkRow,
    rate_equation_benchmark,
    time_median,
)
from .clusters import (
    LevelCluster,
    estimate_delay,
    level_clusters,
    level_spacing_spread,
)
from .metrics import (
    KP4_BER_THRESHOLD,
    KP4_REQUIRED_SNR_DB,
    NmseReport,
    evaluate,
    kp4_margin_db,
    nmse,
    nmse_to_snr_db,
)
from .perturbation import (
    DEFAULT_TRIALS,
    SIGMA_FRACTION,
    PerturbationReport,
    PerturbationRow,
    perturb_block,
    sensitivity_study,
)
from .reports import format_records, format_table, format_value

__all__ = [
    "BenchmarkReport",
    "BenchmarkRow",
    "DEFAULT_HALF_WINDOW",
    "DEFAULT_TRIALS",
    "KP4_BER_THRESHOLD",
    "KP4_REQUIRED_SNR_DB",
    "LevelCluster",
    "LinearBaseline",
    "NmseReport",
    "PerturbationReport",
    "PerturbationRow",
    "RIDGE_LAMBDA",
    "SIGMA_FRACTION",
    "TIMED_RUNS",
    "estimate_delay",
    "evaluate",
    "fit_linear_baseline",
    "format_records",
    "format_table",
    "format_value",
    "kp4_margin_db",
    "level_clusters",
    "level_spacing_spread",
    "nmse",
    "nmse_to_snr_db",
    "perturb_block",
    "rate_equation_benchmark",
    "sensitivity_study",
    "time_median",
    "window_features",
]
