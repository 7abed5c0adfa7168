"""Analysis orchestration and file outputs (JSON report, CSV curves).

``build_report`` runs the requested fits, the optional bootstrap, and
assembles everything the result page shows: census, per-family
parameters, the likelihood ranking, and the HC table with interval
brackets.  The maximum-likelihood fit is always computed per family: it
anchors the ranking, the HC table, and the bootstrap; moment matching
and CDF regression, when requested, are attached as comparison fits
(they only apply to exact-only data and show up in the warnings
otherwise).

Numbers serialize at 6 significant digits unless full precision is
requested, and dictionaries keep a fixed key order, so a fixed input
and seed produce byte-identical output across runs and worker counts.
The bootstrap wall-clock time stays on the in-memory result only; it
never enters the JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bootstrap import BootstrapPlan, BootstrapResult, bootstrap_fit
from .data import CensusSummary, Dataset, summarize
from .distributions import canonical_family, cdf, quantile
from .errors import BootstrapError, FitError, SSDFitError
from .fitting import FitResult, compare_fits, fit_cvm, fit_mle, fit_moments
from .hc import HCEstimate, hc_point, hc_with_ci
from .turnbull import TurnbullCurve, turnbull_estimate

__all__ = [
    "SCHEMA",
    "Report",
    "CurveTable",
    "hazen_positions",
    "build_report",
    "render_plot_data",
    "report_json",
    "curves_csv",
    "turnbull_csv",
]

SCHEMA = "ssdfit-report/1"
_GRID_POINTS = 200
_GRID_TAIL = 0.001

_FITTERS = {"mle": fit_mle, "moments": fit_moments, "cvm": fit_cvm}


def hazen_positions(n: int) -> np.ndarray:
    """Hazen plotting positions (i - 0.5)/n for i = 1..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (np.arange(1, n + 1) - 0.5) / n


@dataclass(frozen=True)
class CurveTable:
    """Plot data: fitted CDF columns on a log-spaced grid plus the
    empirical curve (Turnbull steps for censored data, Hazen ECDF points
    otherwise)."""

    x: np.ndarray
    fitted: dict[str, np.ndarray]
    empirical_kind: str  # "turnbull" | "ecdf"
    empirical_x: np.ndarray
    empirical_cdf: np.ndarray


@dataclass(frozen=True)
class Report:
    """Everything the result page shows, ready for serialization."""

    census: CensusSummary
    fits: dict[str, dict[str, FitResult]]
    ranking: list[tuple[FitResult, float]]
    hc_table: dict[str, list[HCEstimate]]
    bootstrap: dict[str, BootstrapResult] | None
    warnings: tuple[str, ...]
    label: str
    unit: str
    seed: int | None
    tool_version: str


def build_report(
    dataset: Dataset,
    families=("lognormal", "loglogistic"),
    methods=("mle",),
    plan: BootstrapPlan | None = None,
    hc_levels=(5.0, 10.0, 20.0, 50.0),
    workers: int = 1,
) -> Report:
    """Run the full analysis.

    A failed fit never silently drops a family: the error text lands in
    the report warnings.  Raises only when every requested fit failed or
    the dataset itself is invalid.
    """
    families = [canonical_family(f) for f in families]
    families = list(dict.fromkeys(families))
    methods = list(dict.fromkeys(["mle", *methods]))
    hc_levels = [float(p) for p in hc_levels]
    for name in methods:
        if name not in _FITTERS:
            raise ValueError(f"unknown method {name!r}; expected one of {sorted(_FITTERS)}")

    census = summarize(dataset)
    warnings: list[str] = []
    fits: dict[str, dict[str, FitResult]] = {}
    for family in families:
        per_method: dict[str, FitResult] = {}
        for method in methods:
            try:
                per_method[method] = _FITTERS[method](dataset, family)
            except FitError as exc:
                warnings.append(f"{family}/{method}: {exc}")
        if per_method:
            fits[family] = per_method

    ranked_families = [f for f in families if "mle" in fits.get(f, {})]
    if not any(fits.values()):
        raise FitError("all requested fits failed: " + "; ".join(warnings))

    ranking = (
        compare_fits([fits[f]["mle"] for f in ranked_families]) if ranked_families else []
    )

    bootstrap_results: dict[str, BootstrapResult] = {}
    if plan is not None:
        for family in ranked_families:
            try:
                bootstrap_results[family] = bootstrap_fit(
                    dataset, family, plan, hc_levels, workers=workers
                )
            except (BootstrapError, FitError) as exc:
                warnings.append(f"{family}/bootstrap: {exc}")

    hc_table: dict[str, list[HCEstimate]] = {}
    for family in ranked_families:
        model = fits[family]["mle"].model
        rows: list[HCEstimate] = []
        for p in hc_levels:
            result = bootstrap_results.get(family)
            if result is not None:
                try:
                    rows.append(hc_with_ci(result, model, p))
                    continue
                except SSDFitError as exc:
                    warnings.append(f"{family}/hc{p:g}: {exc}")
            rows.append(HCEstimate(p=p, point=hc_point(model, p)))
        hc_table[family] = rows

    return Report(
        census=census,
        fits=fits,
        ranking=ranking,
        hc_table=hc_table,
        bootstrap=bootstrap_results if plan is not None else None,
        warnings=tuple(warnings),
        label=dataset.label,
        unit=dataset.unit,
        seed=plan.seed if plan is not None else None,
        tool_version=__version__,
    )


def render_plot_data(dataset: Dataset, fits) -> CurveTable:
    """Curve table for plotting: needs at least one successful fit.

    The grid spans the 0.001..0.999 quantile range of the widest fit,
    stretched so it brackets every data bound.
    """
    fits = list(fits)
    if not fits:
        raise ValueError("render_plot_data needs at least one fit")
    lo = min(quantile(f.model, _GRID_TAIL) for f in fits)
    hi = max(quantile(f.model, 1.0 - _GRID_TAIL) for f in fits)
    for obs in dataset.observations:
        for bound in (obs.lower, obs.upper):
            if bound is not None:
                lo = min(lo, bound)
                hi = max(hi, bound)
    if not hi > lo:
        lo, hi = lo / 2.0, hi * 2.0
    grid = np.geomspace(lo, hi, _GRID_POINTS)

    fitted: dict[str, np.ndarray] = {}
    for fit in fits:
        fitted.setdefault(fit.model.family, cdf(fit.model, grid))

    census = summarize(dataset)
    if census.n_exact == census.n_total:
        values = np.sort([obs.lower for obs in dataset.observations])
        return CurveTable(
            x=grid,
            fitted=fitted,
            empirical_kind="ecdf",
            empirical_x=values,
            empirical_cdf=hazen_positions(values.size),
        )
    curve = turnbull_estimate(dataset)
    return CurveTable(
        x=grid,
        fitted=fitted,
        empirical_kind="turnbull",
        empirical_x=np.array([right for _, right in curve.intervals]),
        empirical_cdf=np.asarray(curve.cumulative),
    )


def _format_number(value: float, full_precision: bool) -> str:
    return repr(float(value)) if full_precision else format(float(value), ".6g")


def _json_value(value: float | None, full_precision: bool):
    if value is None:
        return None
    return float(value) if full_precision else float(format(float(value), ".6g"))


def _fit_entry(fit: FitResult, full: bool) -> dict:
    return {
        "family": fit.model.family,
        "method": fit.method,
        "mu": _json_value(fit.model.mu, full),
        "sigma": _json_value(fit.model.sigma, full),
        "log_lik": _json_value(fit.log_lik, full),
        "converged": fit.converged,
        "iterations": fit.iterations,
        "n_obs": fit.n_obs,
        "warnings": list(fit.warnings),
    }


def report_json(report: Report, full_precision: bool = False) -> str:
    """Serialize a report with stable key order (schema ssdfit-report/1)."""
    full = full_precision
    census = report.census
    doc = {
        "schema": SCHEMA,
        "tool_version": report.tool_version,
        "label": report.label,
        "unit": report.unit,
        "seed": report.seed,
        "census": {
            "n_total": census.n_total,
            "n_exact": census.n_exact,
            "n_left": census.n_left,
            "n_right": census.n_right,
            "n_interval": census.n_interval,
            "fraction_censored": _json_value(census.fraction_censored, full),
        },
        "fits": {
            family: {method: _fit_entry(fit, full) for method, fit in per.items()}
            for family, per in report.fits.items()
        },
        "ranking": [
            {
                "family": fit.model.family,
                "method": fit.method,
                "log_lik": _json_value(fit.log_lik, full),
                "delta": _json_value(delta, full),
            }
            for fit, delta in report.ranking
        ],
        "hc": {
            family: [
                {
                    "p": _json_value(est.p, full),
                    "point": _json_value(est.point, full),
                    "ci_lower": _json_value(est.ci_lower, full),
                    "ci_upper": _json_value(est.ci_upper, full),
                    "converged": est.converged,
                }
                for est in rows
            ]
            for family, rows in report.hc_table.items()
        },
        "bootstrap": (
            None
            if report.bootstrap is None
            else {
                family: {
                    "converged": result.converged,
                    "advisory": result.advisory,
                    "failures": result.failures,
                    "n_replicates": result.n_replicates,
                }
                for family, result in report.bootstrap.items()
            }
        ),
        "warnings": list(report.warnings),
    }
    return json.dumps(doc, indent=2) + "\n"


def curves_csv(table: CurveTable, full_precision: bool = False) -> str:
    """Tidy CSV of the curve table: columns curve,x,cdf."""
    lines = ["curve,x,cdf"]
    for family, column in table.fitted.items():
        for xv, cv in zip(table.x, column):
            lines.append(
                f"{family},{_format_number(xv, full_precision)},"
                f"{_format_number(cv, full_precision)}"
            )
    for xv, cv in zip(table.empirical_x, table.empirical_cdf):
        lines.append(
            f"{table.empirical_kind},{_format_number(xv, full_precision)},"
            f"{_format_number(cv, full_precision)}"
        )
    return "\n".join(lines) + "\n"


def turnbull_csv(curve: TurnbullCurve, full_precision: bool = False) -> str:
    """Step curve as CSV: cumulative value at each class right endpoint."""
    lines = ["x,cdf"]
    for (_, right), cum in zip(curve.intervals, curve.cumulative):
        lines.append(
            f"{_format_number(right, full_precision)},"
            f"{_format_number(cum, full_precision)}"
        )
    return "\n".join(lines) + "\n"
