"""Nonparametric bootstrap over observations with percentile intervals.

Replicates resample rows with replacement and refit by maximum
likelihood; 95% confidence intervals are the 2.5%/97.5% empirical
quantiles (linear interpolation between order statistics) of the pooled
draws for mu, sigma, and each requested hazardous concentration.

Replicates are grouped into batches.  The convergence check compares
how much the per-batch interval endpoints fluctuate around the pooled
endpoints relative to the pooled interval width; if that exceeds
``eta`` and time remains in the budget, the number of batches doubles
and the run continues.  Batch rounds are atomic and every replicate
draws from its own stream derived from (seed, replicate index), so the
result is a pure function of (dataset, family, plan, hc levels)
regardless of parallelism; the time budget is only consulted between
rounds.

Failed refits (non-identifiable or divergent resamples) are dropped and
counted, never retried, which keeps the replicate streams aligned.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .distributions import canonical_family, quantile
from .errors import (
    AllRefitsFailedError,
    DegenerateBootstrapError,
    FitError,
)
from .fitting import fit_mle

__all__ = [
    "BootstrapPlan",
    "BootstrapResult",
    "ConvergenceVerdict",
    "resample",
    "bootstrap_fit",
    "check_convergence",
]

_CI_LEVELS = (0.025, 0.975)


@dataclass(frozen=True)
class BootstrapPlan:
    """Bootstrap configuration: K batches of B replicates each."""

    batches: int = 5
    batch_size: int = 1000
    seed: int = 0
    time_budget: float = 300.0
    eta: float = 0.05
    max_fail_fraction: float = 0.10

    def __post_init__(self):
        if self.batches < 2:
            raise ValueError("need at least 2 batches for the convergence check")
        if self.batch_size < 100:
            raise ValueError("batch_size must be at least 100")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not self.time_budget > 0.0:
            raise ValueError("time_budget must be positive")
        if not 0.0 < self.eta:
            raise ValueError("eta must be positive")
        if not 0.0 <= self.max_fail_fraction < 1.0:
            raise ValueError("max_fail_fraction must lie in [0, 1)")


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of the batch-fluctuation check."""

    converged: bool
    worst_relative_fluctuation: float
    advisory: str


@dataclass(frozen=True)
class BootstrapResult:
    """Pooled draws, per-batch endpoints, intervals, and the verdict.

    ``pooled_ci`` and ``per_batch_endpoints`` are keyed by quantity name:
    ``mu``, ``sigma``, and ``hc<p>`` per tracked level.  ``converged``
    also requires the failure fraction to stay within the plan's limit;
    ``verdict`` is the pure fluctuation check.
    """

    mu_draws: np.ndarray
    sigma_draws: np.ndarray
    hc_draws: dict[float, np.ndarray]
    per_batch_endpoints: dict[str, np.ndarray]
    pooled_ci: dict[str, tuple[float, float]]
    failures: int
    n_replicates: int
    converged: bool
    verdict: ConvergenceVerdict
    advisory: str
    elapsed: float


def resample(dataset: Dataset, rng: np.random.Generator) -> Dataset:
    """Rows drawn i.i.d. uniformly with replacement, same size, bounds verbatim."""
    n = len(dataset.observations)
    indices = rng.integers(0, n, size=n)
    return Dataset(
        tuple(dataset.observations[i] for i in indices),
        label=dataset.label,
        unit=dataset.unit,
    )


def _replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng((seed, replicate))


def _hc_key(p: float) -> str:
    return f"hc{p:g}"


def _run_batch(args) -> tuple[list[float], list[float], dict[float, list[float]], int]:
    dataset, family, seed, batch_index, batch_size, hc_levels = args
    mus: list[float] = []
    sigmas: list[float] = []
    hcs: dict[float, list[float]] = {p: [] for p in hc_levels}
    failures = 0
    for i in range(batch_size):
        rng = _replicate_rng(seed, batch_index * batch_size + i)
        sample = resample(dataset, rng)
        try:
            fit = fit_mle(sample, family)
        except FitError:
            failures += 1
            continue
        mus.append(fit.model.mu)
        sigmas.append(fit.model.sigma)
        for p in hc_levels:
            hcs[p].append(quantile(fit.model, p / 100.0))
    return mus, sigmas, hcs, failures


def _batch_quantities(batch, hc_levels) -> dict[str, np.ndarray]:
    mus, sigmas, hcs, _ = batch
    out = {"mu": np.asarray(mus), "sigma": np.asarray(sigmas)}
    for p in hc_levels:
        out[_hc_key(p)] = np.asarray(hcs[p])
    return out


def check_convergence(
    per_batch_endpoints: dict[str, np.ndarray],
    pooled_ci: dict[str, tuple[float, float]],
    eta: float,
) -> ConvergenceVerdict:
    """Compare batch-level interval endpoints against the pooled interval.

    For each tracked quantity the fluctuation is the largest absolute
    deviation of any batch endpoint from the pooled endpoint; the
    verdict divides the worst fluctuation by the pooled interval width
    and converges iff that ratio is at most ``eta`` (boundary included).
    """
    for name, endpoints in per_batch_endpoints.items():
        if np.asarray(endpoints).shape[0] < 2:
            raise ValueError(f"need at least 2 batches to check convergence ({name})")
    worst = 0.0
    for name, (lo, hi) in pooled_ci.items():
        width = hi - lo
        if not width > 0.0:
            raise DegenerateBootstrapError(
                f"pooled interval for {name} has zero width; draws are degenerate"
            )
        endpoints = np.asarray(per_batch_endpoints[name], dtype=float)
        fluctuation = float(np.max(np.abs(endpoints - np.array([lo, hi]))))
        worst = max(worst, fluctuation / width)
    converged = worst <= eta
    if converged:
        advisory = (
            "bootstrap converged: the confidence intervals are reliable "
            f"(worst relative fluctuation {worst:.3g} <= {eta:g})"
        )
    else:
        advisory = (
            "bootstrap did not converge: the confidence intervals may be "
            f"unreliable (worst relative fluctuation {worst:.3g} > {eta:g})"
        )
    return ConvergenceVerdict(converged, worst, advisory)


def _pooled_quantities(batches, hc_levels) -> dict[str, np.ndarray]:
    per_batch = [_batch_quantities(b, hc_levels) for b in batches]
    names = ["mu", "sigma"] + [_hc_key(p) for p in hc_levels]
    return {
        name: np.concatenate([q[name] for q in per_batch]) for name in names
    }


def bootstrap_fit(
    dataset: Dataset,
    family: str,
    plan: BootstrapPlan,
    hc_levels=(5.0, 10.0, 20.0, 50.0),
    workers: int = 1,
) -> BootstrapResult:
    """Bootstrap the MLE fit: pooled percentile CIs plus convergence verdict.

    Requires the point fit to succeed (errors propagate).  With
    ``workers`` > 1 batches run in separate processes; results are
    identical to the sequential run.
    """
    family = canonical_family(family)
    hc_levels = [float(p) for p in hc_levels]
    start = time.perf_counter()

    fit_mle(dataset, family)  # the point fit anchors the analysis

    batches: list = []
    k_target = plan.batches
    verdict: ConvergenceVerdict | None = None
    advisory = ""
    converged = False

    while True:
        pending = [
            (dataset, family, plan.seed, b, plan.batch_size, hc_levels)
            for b in range(len(batches), k_target)
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                batches.extend(pool.map(_run_batch, pending))
        else:
            batches.extend(_run_batch(args) for args in pending)

        failures = sum(b[3] for b in batches)
        n_replicates = len(batches) * plan.batch_size
        if failures == n_replicates:
            raise AllRefitsFailedError(
                f"all {n_replicates} bootstrap refits failed"
            )

        pooled = _pooled_quantities(batches, hc_levels)
        pooled_ci = {
            name: (
                float(np.quantile(draws, _CI_LEVELS[0])),
                float(np.quantile(draws, _CI_LEVELS[1])),
            )
            for name, draws in pooled.items()
        }
        usable = [
            _batch_quantities(b, hc_levels) for b in batches if len(b[0]) > 0
        ]
        if len(usable) < 2:
            verdict = ConvergenceVerdict(
                False,
                math.inf,
                "fewer than 2 batches produced successful refits; "
                "convergence cannot be assessed",
            )
        else:
            per_batch_endpoints = {
                name: np.array(
                    [
                        [
                            float(np.quantile(q[name], _CI_LEVELS[0])),
                            float(np.quantile(q[name], _CI_LEVELS[1])),
                        ]
                        for q in usable
                    ]
                )
                for name in pooled_ci
            }
            verdict = check_convergence(per_batch_endpoints, pooled_ci, plan.eta)

        fail_fraction = failures / n_replicates
        fail_ok = fail_fraction <= plan.max_fail_fraction
        converged = verdict.converged and fail_ok
        advisory = verdict.advisory
        if verdict.converged and not fail_ok:
            advisory += (
                f"; however {failures} of {n_replicates} refits failed "
                f"({fail_fraction:.1%} > {plan.max_fail_fraction:.0%})"
            )

        elapsed = time.perf_counter() - start
        if converged or elapsed >= plan.time_budget:
            if not converged and elapsed >= plan.time_budget:
                advisory += "; the time limit was reached"
            break
        if verdict.converged and not fail_ok:
            break  # more batches will not repair a high failure rate
        k_target *= 2

    per_batch_endpoints = {
        name: np.array(
            [
                [
                    float(np.quantile(q[name], _CI_LEVELS[0])),
                    float(np.quantile(q[name], _CI_LEVELS[1])),
                ]
                for q in (_batch_quantities(b, hc_levels) for b in batches)
                if q["mu"].size > 0
            ]
        )
        for name in pooled_ci
    }

    return BootstrapResult(
        mu_draws=pooled["mu"],
        sigma_draws=pooled["sigma"],
        hc_draws={p: pooled[_hc_key(p)] for p in hc_levels},
        per_batch_endpoints=per_batch_endpoints,
        pooled_ci=pooled_ci,
        failures=failures,
        n_replicates=n_replicates,
        converged=converged,
        verdict=verdict,
        advisory=advisory,
        elapsed=time.perf_counter() - start,
    )
