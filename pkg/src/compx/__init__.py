"""compx: empirical time and memory complexity estimation.

Measure an algorithm on geometrically growing samples of a dataset, fit
seven candidate complexity families by least squares, pick the winner by
leave-one-out MSE, and extrapolate the cost of the full dataset.
"""

from .errors import (
    CampaignError,
    CompxError,
    ConfigurationError,
    DegenerateFitError,
    EmptyPlotError,
    InsufficientDataError,
)
from .estimator import ComplexityEstimator
from .families import ComplexityFamily, describe, family_order, transform
from .fitting import (
    BenchmarkResult,
    FittedModel,
    MeasurementSeries,
    Resource,
    fit_all,
    fit_family,
    loo_mse,
    predict_at,
    significance_test,
)
from .measure import (
    CampaignConfig,
    CampaignResult,
    Measurement,
    MemoryProbe,
    ProbeMode,
    TargetKind,
    TargetSpec,
    constant_alert,
    measure_once,
    run_campaign,
)
from .paragons import (
    ParagonTarget,
    accuracy,
    bubble_sort,
    build_paragon,
    find_max,
    permutations_probe,
    shell_sort,
    synthetic_target,
    tree_split_probe,
)
from .plotting import PlotSpec, plot_spec_from, render_plot
from .report import (
    ComplexityReport,
    ResourceReport,
    build_report,
    format_duration,
    format_memory,
    parse_report,
    serialize_report,
)
from .sampling import (
    Dataset,
    SizeSchedule,
    build_schedule,
    default_start_size,
    ingest_dataset,
    rhead,
    sample_head,
    sample_random,
    sample_stratified,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkResult",
    "CampaignConfig",
    "CampaignError",
    "CampaignResult",
    "ComplexityEstimator",
    "ComplexityFamily",
    "ComplexityReport",
    "CompxError",
    "ConfigurationError",
    "Dataset",
    "DegenerateFitError",
    "EmptyPlotError",
    "FittedModel",
    "InsufficientDataError",
    "Measurement",
    "MeasurementSeries",
    "MemoryProbe",
    "ParagonTarget",
    "PlotSpec",
    "ProbeMode",
    "Resource",
    "ResourceReport",
    "SizeSchedule",
    "TargetKind",
    "TargetSpec",
    "accuracy",
    "bubble_sort",
    "build_paragon",
    "build_report",
    "build_schedule",
    "constant_alert",
    "default_start_size",
    "describe",
    "family_order",
    "find_max",
    "fit_all",
    "fit_family",
    "format_duration",
    "format_memory",
    "ingest_dataset",
    "loo_mse",
    "measure_once",
    "parse_report",
    "permutations_probe",
    "plot_spec_from",
    "predict_at",
    "render_plot",
    "rhead",
    "run_campaign",
    "sample_head",
    "sample_random",
    "sample_stratified",
    "serialize_report",
    "shell_sort",
    "significance_test",
    "synthetic_target",
    "transform",
    "tree_split_probe",
]
