"""Small deterministic minimizers used across the package.

One-dimensional: doubling bracket plus golden-section search, for strictly
convex coercive line functions where derivatives may be unavailable.
Multi-dimensional: damped Newton (when a Hessian callback is supplied) or
BFGS, both with Armijo backtracking.  Problem sizes here are tiny (a handful
of coefficients), so clarity and reproducibility beat raw speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

_GOLDEN = (3.0 - np.sqrt(5.0)) / 2.0  # ~0.382, interior split ratio


class ConvergenceError(RuntimeError):
    """An iterative routine ran out of iterations or stalled."""


def bracket_minimum(
    f: Callable[[float], float],
    step: float,
    max_doublings: int = 200,
) -> tuple[float, float, float]:
    """Find a < b < c with f(b) <= min(f(a), f(c)), expanding from 0.

    Assumes f is coercive; the window slides and doubles toward descent until
    the middle point is the smallest.
    """
    a, b, c = -step, 0.0, step
    fa, fb, fc = f(a), f(b), f(c)
    for _ in range(max_doublings):
        if fb <= fa and fb <= fc:
            return a, b, c
        if fa < fb:
            a, b, c = a - 2.0 * (b - a), a, b
            fa, fb, fc = f(a), fa, fb
        else:
            a, b, c = b, c, c + 2.0 * (c - b)
            fa, fb, fc = fb, fc, f(c)
    raise ConvergenceError(
        f"bracketing failed after {max_doublings} doublings: "
        f"bracket=({a}, {b}, {c}), values=({fa}, {fb}, {fc})"
    )


def golden_section(
    f: Callable[[float], float],
    a: float,
    b: float,
    c: float,
    width_tol: float,
    max_iterations: int = 400,
) -> tuple[float, float]:
    """Golden-section search on a bracket (a, b, c); returns (x_min, f_min).

    Near the flat bottom of a smooth function the comparisons degrade to
    rounding noise, but the bracket keeps shrinking, so the returned point is
    within max(width_tol, noise width) of the true minimizer.
    """
    lo, hi = a, c
    x1 = lo + _GOLDEN * (hi - lo)
    x2 = hi - _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iterations):
        if hi - lo <= width_tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = lo + _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = hi - _GOLDEN * (hi - lo)
            f2 = f(x2)
    else:
        raise ConvergenceError(
            f"golden-section search exceeded {max_iterations} iterations: "
            f"bracket=({lo}, {hi}), width={hi - lo}, tol={width_tol}"
        )
    return (x1, f1) if f1 <= f2 else (x2, f2)


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    iterations: int
    converged: bool
    message: str


def minimize_smooth(
    fun: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    *,
    hess: Callable[[np.ndarray], np.ndarray] | None = None,
    stop: Callable[[np.ndarray, np.ndarray], bool] | None = None,
    gtol: float = 1e-10,
    max_iterations: int = 500,
    armijo: float = 1e-4,
    shrink: float = 0.5,
    max_backtracks: int = 60,
) -> MinimizeResult:
    """Minimize a smooth convex function of a few variables.

    Directions come from a damped Newton solve when ``hess`` is given
    (Levenberg escalation on failure) and from BFGS otherwise; both fall back
    to steepest descent whenever the computed direction is not a descent
    direction.  ``stop(x, g)`` overrides the default criterion
    max|g| <= gtol.  Iterates are accepted under the Armijo condition.
    """
    x = np.array(x0, dtype=float)
    n = x.size
    fx = fun(x)
    g = grad(x)
    hinv = np.eye(n)
    first_bfgs_step = True

    def done(xv: np.ndarray, gv: np.ndarray) -> bool:
        if stop is not None:
            return stop(xv, gv)
        return float(np.max(np.abs(gv))) <= gtol

    for it in range(max_iterations):
        if done(x, g):
            return MinimizeResult(x, fx, g, it, True, "converged")

        d = None
        if hess is not None:
            h = hess(x)
            damping = 0.0
            trace_scale = max(float(np.trace(h)) / n, 1e-30)
            for _ in range(12):
                try:
                    cand = np.linalg.solve(h + damping * np.eye(n), -g)
                except np.linalg.LinAlgError:
                    cand = None
                if cand is not None and np.dot(cand, g) < 0.0 and np.all(np.isfinite(cand)):
                    d = cand
                    break
                damping = max(damping * 10.0, 1e-10 * trace_scale)
        else:
            cand = -hinv @ g
            if np.dot(cand, g) < 0.0 and np.all(np.isfinite(cand)):
                d = cand
        if d is None:
            d = -g

        slope = float(np.dot(g, d))
        t = 1.0
        accepted = False
        for _ in range(max_backtracks):
            x_new = x + t * d
            f_new = fun(x_new)
            if f_new <= fx + armijo * t * slope:
                accepted = True
                break
            t *= shrink
        if not accepted:
            if not np.array_equal(d, -g):
                # retry once along steepest descent before giving up
                d = -g
                slope = float(np.dot(g, d))
                t = 1.0
                for _ in range(max_backtracks):
                    x_new = x + t * d
                    f_new = fun(x_new)
                    if f_new <= fx + armijo * t * slope:
                        accepted = True
                        break
                    t *= shrink
            if not accepted:
                return MinimizeResult(
                    x, fx, g, it, done(x, g), "line search stalled"
                )

        g_new = grad(x_new)
        if hess is None:
            s = x_new - x
            yv = g_new - g
            sy = float(np.dot(s, yv))
            if sy > 1e-14 * float(np.linalg.norm(s)) * float(np.linalg.norm(yv)) + 1e-300:
                if first_bfgs_step:
                    hinv = np.eye(n) * (sy / max(float(np.dot(yv, yv)), 1e-300))
                    first_bfgs_step = False
                rho = 1.0 / sy
                eye = np.eye(n)
                left = eye - rho * np.outer(s, yv)
                hinv = left @ hinv @ left.T + rho * np.outer(s, s)
        x, fx, g = x_new, f_new, g_new

    if done(x, g):
        return MinimizeResult(x, fx, g, max_iterations, True, "converged")
    return MinimizeResult(x, fx, g, max_iterations, False, "max iterations exceeded")
