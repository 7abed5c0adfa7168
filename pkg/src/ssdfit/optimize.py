"""Nelder-Mead simplex minimizer used by the fitting routines.

Termination requires both a relative spread of function values across
the simplex below ``f_tol`` and a simplex diameter below ``x_tol``.
The diameter criterion pins the parameters down to ~1e-8, well inside
the 1e-5 agreement the fit contract demands between restarted runs;
the Newton polish in the fitting layer takes over from there.

Internals use plain Python floats: the objective dimension here is tiny
(two parameters) and the fit gets called thousands of times per
bootstrap, so numpy's small-array overhead would dominate the runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SimplexResult", "nelder_mead"]

_ALPHA = 1.0  # reflection
_GAMMA = 2.0  # expansion
_RHO = 0.5  # contraction
_SIGMA = 0.5  # shrink


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool


def _diameter(points: list[list[float]], dim: int) -> float:
    worst = 0.0
    for k in range(dim):
        coords = [p[k] for p in points]
        worst = max(worst, max(coords) - min(coords))
    return worst


def nelder_mead(
    fn,
    x0,
    step=0.5,
    f_tol: float = 1e-8,
    x_tol: float = 1e-8,
    max_iter: int = 500,
) -> SimplexResult:
    """Minimize ``fn`` from ``x0``; ``step`` sets the initial simplex size.

    ``fn`` receives a list of floats and may return +inf to mark
    forbidden regions.  Fully deterministic: no randomness, stable
    ordering of ties.
    """
    start = [float(v) for v in np.asarray(x0, dtype=float)]
    dim = len(start)
    steps = np.broadcast_to(np.asarray(step, dtype=float), (dim,)).tolist()

    simplex: list[tuple[float, list[float]]] = [(float(fn(start)), start)]
    for i in range(dim):
        vertex = list(start)
        vertex[i] += steps[i]
        simplex.append((float(fn(vertex)), vertex))

    converged = False
    iteration = 0
    while iteration < max_iter:
        simplex.sort(key=lambda entry: entry[0])
        f_best = simplex[0][0]
        f_worst = simplex[-1][0]
        if (
            f_worst != float("inf")
            and (f_worst - f_best) <= f_tol * max(1.0, abs(f_best))
            and _diameter([entry[1] for entry in simplex], dim) <= x_tol
        ):
            converged = True
            break
        iteration += 1

        worst = simplex[-1][1]
        others = [entry[1] for entry in simplex[:-1]]
        centroid = [sum(p[k] for p in others) / dim for k in range(dim)]

        reflected = [c + _ALPHA * (c - w) for c, w in zip(centroid, worst)]
        f_reflected = float(fn(reflected))

        if f_reflected < f_best:
            expanded = [c + _GAMMA * (c - w) for c, w in zip(centroid, worst)]
            f_expanded = float(fn(expanded))
            if f_expanded < f_reflected:
                simplex[-1] = (f_expanded, expanded)
            else:
                simplex[-1] = (f_reflected, reflected)
            continue
        if f_reflected < simplex[-2][0]:
            simplex[-1] = (f_reflected, reflected)
            continue

        contracted = [c + _RHO * (w - c) for c, w in zip(centroid, worst)]
        f_contracted = float(fn(contracted))
        if f_contracted < f_worst:
            simplex[-1] = (f_contracted, contracted)
            continue

        best = simplex[0][1]
        shrunk = [simplex[0]]
        for _, vertex in simplex[1:]:
            moved = [b + _SIGMA * (v - b) for b, v in zip(best, vertex)]
            shrunk.append((float(fn(moved)), moved))
        simplex = shrunk

    simplex.sort(key=lambda entry: entry[0])
    return SimplexResult(
        x=np.asarray(simplex[0][1], dtype=float),
        fun=simplex[0][0],
        iterations=iteration,
        converged=converged,
    )
