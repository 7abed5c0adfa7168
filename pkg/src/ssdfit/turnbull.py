"""Nonparametric maximum-likelihood CDF for arbitrarily censored data
(the Turnbull estimator), computed by the self-consistency EM iteration.

Observations map to intervals of the real line:

    exact x          ->  [x, x]
    interval (a, b)  ->  (a, b]
    left-censored u  ->  (0, u]
    right-censored l ->  (l, +inf)

The NPMLE can only place mass on the maximal intersections of these
intervals (the equivalence classes), found by scanning the sorted
endpoints for a left endpoint immediately followed by a right endpoint.
Open endpoints are handled by ranking the position "just above v"
after v itself.

Mass that ends up in an unbounded class (right-censored tails) is
reported as a cumulative deficit instead of being renormalized, so the
plotted curve honestly stops below 1.  Within a positive-width class
the curve is drawn flat at the cumulative value of the class's right
endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, Observation
from .errors import NonConvergenceError

__all__ = ["TurnbullCurve", "turnbull_intervals", "turnbull_estimate"]

# A position is (value, side): side 0 is the value itself (closed
# endpoint), side 1 is "just above" it (open endpoint).
_CLOSED = 0
_OPEN = 1


@dataclass(frozen=True)
class TurnbullCurve:
    """Stepwise nonparametric CDF over the finite equivalence classes.

    ``intervals`` are (left, right] support intervals (zero width for
    exact-value classes); ``masses`` the probability per interval;
    ``cumulative`` their running sums.  ``deficit`` is the mass trapped
    beyond the largest finite class, so masses + deficit sum to 1.
    """

    intervals: tuple[tuple[float, float], ...]
    masses: np.ndarray
    cumulative: np.ndarray
    deficit: float
    iterations: int
    log_lik_trace: np.ndarray


def _observation_interval(obs: Observation):
    kind = obs.kind
    if kind == "exact":
        return (obs.lower, _CLOSED), (obs.lower, _CLOSED)
    if kind == "interval":
        return (obs.lower, _OPEN), (obs.upper, _CLOSED)
    if kind == "left":
        return (0.0, _OPEN), (obs.upper, _CLOSED)
    return (obs.lower, _OPEN), (math.inf, _CLOSED)


def _equivalence_classes(dataset: Dataset):
    """Position-space (left, right) pairs of the maximal intersections."""
    endpoints = []
    for obs in dataset.observations:
        left, right = _observation_interval(obs)
        endpoints.append((left, 0))  # left endpoints sort before right
        endpoints.append((right, 1))
    endpoints.sort()
    classes = []
    for (pos_a, side_a), (pos_b, side_b) in zip(endpoints, endpoints[1:]):
        if side_a == 0 and side_b == 1:
            classes.append((pos_a, pos_b))
    return classes


def turnbull_intervals(dataset: Dataset) -> list[tuple[float, float]]:
    """The intervals where the nonparametric MLE may place mass.

    Zero-width entries are exact-value atoms; the last interval may
    extend to +inf when right-censored observations reach past every
    other observation.
    """
    return [(left[0], right[0]) for left, right in _equivalence_classes(dataset)]


def turnbull_estimate(
    dataset: Dataset, tol: float = 1e-9, max_iter: int = 10000
) -> TurnbullCurve:
    """Self-consistent NPMLE of the CDF.

    Starts from equal masses on the equivalence classes; each EM sweep
    shares every observation's unit weight over the classes it covers in
    proportion to the current masses, then averages.  Stops when the
    largest mass change falls below ``tol``; raises
    :class:`NonConvergenceError` (carrying the last iterate) otherwise.
    """
    classes = _equivalence_classes(dataset)
    n = len(dataset.observations)
    m = len(classes)

    membership = np.zeros((n, m), dtype=float)
    for i, obs in enumerate(dataset.observations):
        o_left, o_right = _observation_interval(obs)
        for j, (c_left, c_right) in enumerate(classes):
            if o_left <= c_left and c_right <= o_right:
                membership[i, j] = 1.0
    if not np.all(membership.sum(axis=1) > 0):
        raise AssertionError("every observation must cover at least one class")

    masses = np.full(m, 1.0 / m)
    trace = []
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        covered = membership @ masses
        trace.append(float(np.sum(np.log(covered))))
        updated = masses * (membership.T @ (1.0 / covered)) / n
        change = float(np.max(np.abs(updated - masses)))
        masses = updated
        if change < tol:
            converged = True
            break
    trace.append(float(np.sum(np.log(membership @ masses))))

    curve = _build_curve(classes, masses, iterations, np.asarray(trace))
    if not converged:
        raise NonConvergenceError(
            f"EM did not reach tol={tol:g} within {max_iter} iterations",
            curve=curve,
        )
    return curve


def _build_curve(classes, masses, iterations, trace) -> TurnbullCurve:
    deficit = 0.0
    finite_intervals = []
    finite_masses = []
    for (left, right), mass in zip(classes, masses):
        if math.isinf(right[0]):
            deficit += float(mass)
        else:
            finite_intervals.append((left[0], right[0]))
            finite_masses.append(float(mass))
    finite = np.asarray(finite_masses, dtype=float)
    return TurnbullCurve(
        intervals=tuple(finite_intervals),
        masses=finite,
        cumulative=np.cumsum(finite),
        deficit=deficit,
        iterations=iterations,
        log_lik_trace=trace,
    )
