"""ssdfit: species sensitivity distributions for censored toxicity data.

Fits log-normal and log-logistic distributions to datasets mixing
exact, left-, right-, and interval-censored concentrations by maximum
likelihood, reports hazardous concentrations HC_p with bootstrap
confidence intervals, and provides the Turnbull nonparametric CDF plus
the classical moment-matching and CDF-regression estimators for
comparison.
"""

__version__ = "0.1.0"

from . import errors
from .bootstrap import (
    BootstrapPlan,
    BootstrapResult,
    ConvergenceVerdict,
    bootstrap_fit,
    check_convergence,
    resample,
)
from .data import (
    CensusSummary,
    Dataset,
    Observation,
    aggregate_species,
    parse_dataset,
    serialize_dataset,
    summarize,
    transform_to_noncensored,
)
from .distributions import (
    FAMILY_LOGLOGISTIC,
    FAMILY_LOGNORMAL,
    DistributionModel,
    canonical_family,
    cdf,
    log_pdf,
    quantile,
)
from .fitting import (
    FitOptions,
    FitResult,
    compare_fits,
    fit_cvm,
    fit_mle,
    fit_moments,
    log_lik_censored,
)
from .hc import HCEstimate, hc_point, hc_with_ci
from .report import (
    CurveTable,
    Report,
    build_report,
    curves_csv,
    hazen_positions,
    render_plot_data,
    report_json,
    turnbull_csv,
)
from .turnbull import TurnbullCurve, turnbull_estimate, turnbull_intervals

__all__ = [
    "__version__",
    "errors",
    "Observation",
    "Dataset",
    "CensusSummary",
    "parse_dataset",
    "serialize_dataset",
    "aggregate_species",
    "transform_to_noncensored",
    "summarize",
    "DistributionModel",
    "FAMILY_LOGNORMAL",
    "FAMILY_LOGLOGISTIC",
    "canonical_family",
    "cdf",
    "log_pdf",
    "quantile",
    "FitOptions",
    "FitResult",
    "log_lik_censored",
    "fit_mle",
    "fit_moments",
    "fit_cvm",
    "compare_fits",
    "TurnbullCurve",
    "turnbull_intervals",
    "turnbull_estimate",
    "BootstrapPlan",
    "BootstrapResult",
    "ConvergenceVerdict",
    "resample",
    "bootstrap_fit",
    "check_convergence",
    "HCEstimate",
    "hc_point",
    "hc_with_ci",
    "Report",
    "CurveTable",
    "hazen_positions",
    "build_report",
    "render_plot_data",
    "report_json",
    "curves_csv",
    "turnbull_csv",
]
