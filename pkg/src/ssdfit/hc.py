"""Hazardous concentration estimates: HC_p is the p/100 quantile of the
fitted distribution, optionally packaged with its bootstrap interval.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bootstrap import BootstrapResult, _hc_key
from .distributions import DistributionModel, quantile
from .errors import DegenerateBootstrapError, NotTrackedError

__all__ = ["HCEstimate", "hc_point", "hc_with_ci"]


@dataclass(frozen=True)
class HCEstimate:
    """Point estimate of HC_p with an optional percentile interval.

    ``ci_lower <= ci_upper`` always holds; the point may fall outside
    the interval only pathologically, in which case a warning is set.
    """

    p: float
    point: float
    ci_lower: float | None = None
    ci_upper: float | None = None
    converged: bool | None = None
    warnings: tuple[str, ...] = ()


def hc_point(model: DistributionModel, p: float) -> float:
    """Concentration hazardous to p% of species (0 < p < 100)."""
    p = float(p)
    if not 0.0 < p < 100.0:
        raise ValueError(f"p must lie strictly between 0 and 100, got {p}")
    return quantile(model, p / 100.0)


def hc_with_ci(result: BootstrapResult, model: DistributionModel, p: float) -> HCEstimate:
    """HC_p from the point fit plus the pooled bootstrap interval."""
    p = float(p)
    if p not in result.hc_draws:
        tracked = sorted(result.hc_draws)
        raise NotTrackedError(
            f"HC_{p:g} was not tracked by this bootstrap run; tracked levels: {tracked}"
        )
    draws = result.hc_draws[p]
    lo, hi = result.pooled_ci[_hc_key(p)]
    if draws.size < 2 or not hi - lo > 0.0:
        raise DegenerateBootstrapError(
            f"bootstrap draws for HC_{p:g} are degenerate; no interval available"
        )
    point = hc_point(model, p)
    warnings = ()
    if not lo <= point <= hi:
        warnings = (
            f"point estimate {point:.6g} lies outside its bootstrap interval "
            f"[{lo:.6g}, {hi:.6g}]",
        )
    return HCEstimate(
        p=p,
        point=point,
        ci_lower=lo,
        ci_upper=hi,
        converged=result.converged,
        warnings=warnings,
    )
