"""Brute-force reference solvers used as ground truth for the representer path.

Deliberately independent of the dual machinery: no duality maps, no dual
norms, no representer coefficients.  Only ``norm``, ``sip`` and regulariser
evaluation are used.  Linearity of the semi-inner product in its first
argument (an axiom) lets the constraint functionals be tabulated once via
sip(e_j, x_i); everything else is a quadratic-penalty minimization driven by
scipy's L-BFGS-B with central-difference gradients, multi-started to hedge
the non-convexity that inadmissible custom regularisers can introduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from sip_interp.regularisers import Regulariser, evaluate
from sip_interp.solver import InterpolationProblem
from sip_interp.space import Vector, _pnorm, sip

__all__ = [
    "OracleConfig",
    "OracleInfeasibleError",
    "solve_constrained_direct",
    "grid_min",
]


class OracleInfeasibleError(RuntimeError):
    """No feasible point survived the final penalty round."""


@dataclass(frozen=True)
class OracleConfig:
    method: str = "penalty"            # "penalty" | "grid"
    penalty_initial: float = 1e2
    penalty_growth: float = 100.0
    penalty_rounds: int = 4
    multi_start: int = 8
    start_scale: float = 2.0
    seed: int = 0
    feasibility_tolerance: float = 1e-6
    inner_max_iterations: int = 400
    grid_half_width: float = 1.5
    grid_resolution: int = 33          # points per axis

    def __post_init__(self) -> None:
        if self.method not in ("penalty", "grid"):
            raise ValueError(f"unknown oracle method {self.method!r}")
        if self.penalty_growth <= 1.0 or self.penalty_initial <= 0.0:
            raise ValueError("penalty weights must be positive and increasing")
        if self.penalty_rounds < 1 or self.multi_start < 1:
            raise ValueError("penalty_rounds and multi_start must be positive")
        if self.grid_resolution < 16:
            raise ValueError("grid resolution must be at least 16 per axis")


def _constraint_matrix(problem: InterpolationProblem) -> np.ndarray:
    """K[i, j] = sip(e_j, x_i); by first-argument linearity sip(f, x_i) = K @ f."""
    space = problem.space
    n = space.dim
    k = np.empty((problem.m, n))
    for j in range(n):
        e = space.vector(np.eye(n)[j])
        for i, x in enumerate(problem.points):
            k[i, j] = sip(e, x)
    return k


def _omega_batch(reg: Regulariser, pts: np.ndarray, space) -> np.ndarray:
    """Regulariser values at the rows of pts (vectorized for radial profiles)."""
    if reg.is_radial:
        t = np.sum(space.weights * np.abs(pts) ** space.p, axis=1) ** (2.0 / space.p)
        return np.asarray(reg.profile(t), dtype=float)
    return np.array([evaluate(reg, Vector._unsafe(row, space)) for row in pts])


def solve_constrained_direct(
    problem: InterpolationProblem,
    reg: Regulariser,
    config: OracleConfig | None = None,
) -> Vector:
    """Minimize the regulariser over the constraint set, without representers.

    Quadratic penalty Omega(f) + mu * sum_i ([f, x_i] - y_i)^2 with mu grown
    geometrically, each round warm-started, over several seeded starts.
    Returns the best minimizer whose honest (sip-computed) constraint
    residual meets the feasibility tolerance.
    """
    cfg = config or OracleConfig()
    space = problem.space
    n = space.dim
    if n > 10:
        raise ValueError("penalty oracle is limited to dim <= 10")
    kmat = _constraint_matrix(problem)
    y = problem.targets

    def objective(fc: np.ndarray, mu: float) -> float:
        r = kmat @ fc - y
        return float(_omega_batch(reg, fc[None, :], space)[0] + mu * np.dot(r, r))

    def gradient(fc: np.ndarray, mu: float) -> np.ndarray:
        # central differences; exact (up to rounding) for the quadratic part
        h = 1e-7 * (1.0 + np.abs(fc))
        pts = np.repeat(fc[None, :], 2 * n, axis=0)
        idx = np.arange(n)
        pts[2 * idx, idx] += h
        pts[2 * idx + 1, idx] -= h
        om = _omega_batch(reg, pts, space)
        res = pts @ kmat.T - y
        vals = om + mu * np.sum(res * res, axis=1)
        return (vals[0::2] - vals[1::2]) / (2.0 * h)

    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(n)]
    starts += [cfg.start_scale * rng.standard_normal(n) for _ in range(cfg.multi_start - 1)]
    mus = [cfg.penalty_initial * cfg.penalty_growth**k for k in range(cfg.penalty_rounds)]

    best: tuple[float, float, np.ndarray] | None = None  # (omega, residual, coords)
    for f0 in starts:
        fc = f0
        for mu in mus:
            result = scipy_minimize(
                objective,
                fc,
                args=(mu,),
                jac=lambda v, mu=mu: gradient(v, mu),
                method="L-BFGS-B",
                options={"maxiter": cfg.inner_max_iterations, "ftol": 1e-15, "gtol": 1e-12},
            )
            fc = result.x
        candidate = Vector(fc, space)
        residual = max(abs(sip(candidate, x) - yi) for x, yi in zip(problem.points, y))
        if residual > cfg.feasibility_tolerance:
            continue
        omega = evaluate(reg, candidate)
        if best is None or omega < best[0] - 1e-14 * max(1.0, abs(best[0])):
            best = (omega, residual, fc)
    if best is None:
        raise OracleInfeasibleError(
            "oracle infeasible: no start reached the feasibility tolerance "
            f"{cfg.feasibility_tolerance:g} after {cfg.penalty_rounds} penalty rounds"
        )
    return Vector(best[2], space)


def grid_min(
    problem: InterpolationProblem,
    reg: Regulariser,
    config: OracleConfig | None = None,
) -> Vector:
    """Exhaustive scan over a cubic grid; sanity check for the penalty oracle.

    Keeps the grid points lying in a slab around every constraint hyperplane
    (slab width proportional to the grid spacing, wide enough that a feasible
    point in a cell guarantees a kept vertex) and returns the one with the
    smallest regulariser value.
    """
    cfg = config or OracleConfig()
    space = problem.space
    n = space.dim
    if n > 3:
        raise ValueError("grid oracle is limited to dim <= 3")
    kmat = _constraint_matrix(problem)
    y = problem.targets

    axis = np.linspace(-cfg.grid_half_width, cfg.grid_half_width, cfg.grid_resolution)
    spacing = axis[1] - axis[0]
    pts = np.array(list(product(axis, repeat=n)))
    slab = 0.501 * spacing * np.sum(np.abs(kmat), axis=1)
    residuals = np.abs(pts @ kmat.T - y)
    mask = np.all(residuals <= slab, axis=1)
    if not np.any(mask):
        raise ValueError("refine grid: no grid point lies inside the constraint slab")
    feasible = pts[mask]
    omegas = _omega_batch(reg, feasible, space)
    return Vector(feasible[int(np.argmin(omegas))], space)
