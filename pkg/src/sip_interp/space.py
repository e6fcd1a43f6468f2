"""Weighted finite-dimensional l^p spaces and their semi-inner-product calculus.

The model space is R^dim under the norm ``||x|| = (sum_i w_i |x_i|^p)^(1/p)``
with strictly positive weights and 1 < p < inf, so the norm is uniformly
convex and uniformly smooth.  In that regime the norm-inducing semi-inner
product is unique and has the closed coordinate form

    [x, y] = ||y||^(2-p) * sum_i w_i x_i |y_i|^(p-1) sign(y_i)

It is linear in the first argument, induces the norm ([x, x] = ||x||^2),
satisfies the Cauchy-Schwarz inequality, and is homogeneous in the second
argument.  The duality map ``x -> x*`` defined by ``x*(y) = [y, x]`` is an
isometric (nonlinear) bijection onto the dual space, which is itself a
weighted l^q space with weights ``w_i^(1-q)`` and conjugate exponent
``q = p/(p-1)``.

All types are immutable after construction and every operation is a pure
function, so concurrent use needs no locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from sip_interp._minimize import (
    ConvergenceError,
    bracket_minimum,
    golden_section,
    minimize_smooth,
)

__all__ = [
    "SpaceConfig",
    "Vector",
    "DualVector",
    "dual_space",
    "norm",
    "sip",
    "duality_map",
    "inverse_duality_map",
    "dual_norm",
    "tangent_component",
    "JamesOrthogonality",
    "james_orthogonality_check",
    "orthogonal_decompose",
    "modulus_of_smoothness_estimate",
    "ContinuityReport",
    "duality_continuity_probe",
    "AxiomReport",
    "axiom_suite",
    "random_direction",
    "random_probe_vector",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class SpaceConfig:
    """A weighted l^p space on R^dim, restricted to 1 < p < inf.

    The restriction keeps the space uniformly convex and uniformly smooth;
    p = 1 and p = inf are rejected.  Weights default to all ones.  The
    conjugate exponent q is always recomputed from p, never stored
    independently, so 1/p + 1/q = 1 holds by construction.
    """

    dim: int
    p: float
    weights: np.ndarray | Sequence[float] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        p = float(self.p)
        if not math.isfinite(p) or p <= 1.0:
            raise ValueError(f"p must lie in the open interval (1, inf), got {p!r}")
        object.__setattr__(self, "p", p)
        w = np.ones(self.dim) if self.weights is None else np.asarray(self.weights, dtype=float)
        if w.shape != (self.dim,):
            raise ValueError(f"weights must have length {self.dim}, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be strictly positive and finite")
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def q(self) -> float:
        """Conjugate exponent, 1/p + 1/q = 1."""
        return self.p / (self.p - 1.0)

    @cached_property
    def dual_weights(self) -> np.ndarray:
        """Weights of the dual l^q space: w_i^(1-q)."""
        return _freeze(self.weights ** (1.0 - self.q))

    def vector(self, coords: Sequence[float] | np.ndarray) -> "Vector":
        return Vector(np.asarray(coords, dtype=float), self)

    def dual(self, coords: Sequence[float] | np.ndarray) -> "DualVector":
        return DualVector(np.asarray(coords, dtype=float), self)

    def zero(self) -> "Vector":
        return Vector(np.zeros(self.dim), self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpaceConfig):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.p == other.p
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.p, self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"SpaceConfig(dim={self.dim}, p={self.p}, weights={self.weights.tolist()})"


def dual_space(space: SpaceConfig) -> SpaceConfig:
    """The dual of weighted l^p: weighted l^q with weights w^(1-q).

    Coordinates of a ``DualVector`` are a genuine element of this space and
    all primal operations (norm, sip, duality map) apply there; the dual of
    the dual recovers the original space up to floating-point rounding of
    the weights.
    """
    return SpaceConfig(space.dim, space.q, space.weights ** (1.0 - space.q))


class _Coords:
    """Shared plumbing for coordinate vectors tagged with their space."""

    __slots__ = ("coords", "space")

    coords: np.ndarray
    space: SpaceConfig

    def __init__(self, coords, space: SpaceConfig, *, _checked: bool = False):
        if not isinstance(space, SpaceConfig):
            raise TypeError("space must be a SpaceConfig")
        if _checked:
            object.__setattr__(self, "coords", coords)
        else:
            arr = np.asarray(coords, dtype=float)
            if arr.shape != (space.dim,):
                raise ValueError(
                    f"coordinate count {arr.shape} does not match space dim {space.dim}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError("coordinates must be finite")
            object.__setattr__(self, "coords", _freeze(arr))
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _unsafe(cls, coords: np.ndarray, space: SpaceConfig):
        """Wrap an array without validation or copying.  Hot-loop use only;
        the caller must guarantee shape, finiteness and non-aliasing."""
        return cls(coords, space, _checked=True)

    def _same_space(self, other: "_Coords") -> None:
        if self.space is not other.space and self.space != other.space:
            raise ValueError("vectors live in different spaces")

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        self._same_space(other)
        return type(self)._unsafe(self.coords + other.coords, self.space)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        self._same_space(other)
        return type(self)._unsafe(self.coords - other.coords, self.space)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, np.floating, np.integer)):
            return NotImplemented
        return type(self)._unsafe(self.coords * float(scalar), self.space)

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)._unsafe(-self.coords, self.space)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.coords.tolist()}, p={self.space.p})"


class Vector(_Coords):
    """An element of a weighted l^p space."""


class DualVector(_Coords):
    """A continuous linear functional on the primal space.

    The action on a primal vector is the plain (weight-free) pairing
    ``a(z) = sum_i a_i z_i``; the weights enter only through the dual norm.
    ``space`` refers to the primal space the functional acts on.
    """

    def __call__(self, v: Vector) -> float:
        self._same_space(v)
        return float(np.dot(self.coords, v.coords))


# -- coordinate-level kernels (hot paths work on raw arrays) -----------------


def _pnorm(weights: np.ndarray, p: float, coords: np.ndarray) -> float:
    return float(np.sum(weights * np.abs(coords) ** p) ** (1.0 / p))


def _sip_coords(weights: np.ndarray, p: float, x: np.ndarray, y: np.ndarray) -> float:
    ny = _pnorm(weights, p, y)
    if ny == 0.0:
        return 0.0
    ypow = np.abs(y) ** (p - 1.0) * np.sign(y)
    return float(ny ** (2.0 - p) * np.dot(weights * x, ypow))


def _duality_coords(weights: np.ndarray, p: float, x: np.ndarray) -> np.ndarray:
    nx = _pnorm(weights, p, x)
    if nx == 0.0:
        return np.zeros_like(x)
    return weights * np.abs(x) ** (p - 1.0) * np.sign(x) * nx ** (2.0 - p)


def _dual_norm_coords(space: SpaceConfig, a: np.ndarray) -> float:
    return float(np.sum(space.dual_weights * np.abs(a) ** space.q) ** (1.0 / space.q))


def _inverse_duality_coords(space: SpaceConfig, a: np.ndarray) -> np.ndarray:
    q = space.q
    big_a = _dual_norm_coords(space, a)
    if big_a == 0.0:
        return np.zeros_like(a)
    return (np.abs(a) / space.weights) ** (q - 1.0) * np.sign(a) * big_a ** (2.0 - q)


# -- public operations --------------------------------------------------------


def norm(x: Vector) -> float:
    """The space norm ``(sum_i w_i |x_i|^p)^(1/p)``; zero iff x = 0."""
    return _pnorm(x.space.weights, x.space.p, x.coords)


def sip(x: Vector, y: Vector) -> float:
    """The unique norm-inducing semi-inner product [x, y].

    Linear in ``x``, homogeneous in ``y``, with [x, x] = ||x||^2 and
    |[x, y]| <= ||x|| ||y||.  The value at y = 0 is defined to be 0, the
    continuous extension of the formula.
    """
    x._same_space(y)
    return _sip_coords(x.space.weights, x.space.p, x.coords, y.coords)


def duality_map(x: Vector) -> DualVector:
    """The dual element x* with x*(y) = [y, x] and dual norm equal to ||x||."""
    return DualVector._unsafe(_duality_coords(x.space.weights, x.space.p, x.coords), x.space)


def dual_norm(a: DualVector) -> float:
    """Norm of a functional: ``(sum_i w_i^(1-q) |a_i|^q)^(1/q)``.

    Equals sup of a(z) over the primal unit sphere.
    """
    return _dual_norm_coords(a.space, a.coords)


def inverse_duality_map(a: DualVector) -> Vector:
    """The unique primal y with duality_map(y) = a; ||y|| = dual norm of a."""
    return Vector._unsafe(_inverse_duality_coords(a.space, a.coords), a.space)


def tangent_component(g: Vector, f: Vector) -> Vector:
    """The part of g tangent to the sphere through f: f_T = g - ([g,f]/[f,f]) f.

    By linearity in the first argument [f_T, f] = 0 exactly, so f_T is a
    James-orthogonal direction at f.  Undefined at f = 0.
    """
    g._same_space(f)
    ff = sip(f, f)
    if ff == 0.0:
        raise ValueError("tangent undefined at origin")
    return Vector._unsafe(g.coords - (sip(g, f) / ff) * f.coords, g.space)


@dataclass(frozen=True)
class JamesOrthogonality:
    """Result of the 1-D norm minimization behind the James criterion."""

    lambda_star: float
    min_norm: float
    is_orthogonal: bool


def james_orthogonality_check(
    y: Vector,
    x: Vector,
    *,
    lambda_tol: float = 1e-6,
    norm_tol: float = 1e-8,
    max_iterations: int = 400,
) -> JamesOrthogonality:
    """Test whether x is normal to y by minimizing lambda -> ||x + lambda*y||.

    The map is strictly convex and coercive, so a doubling bracket followed
    by golden-section search locates the unique minimizer.  ``is_orthogonal``
    holds when the minimizer is at (numerically) zero and the minimum does
    not undercut ||x||, which is equivalent to [y, x] = 0.
    """
    nx, ny = norm(x), norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("james_orthogonality_check requires nonzero vectors")
    w, p = x.space.weights, x.space.p
    xc, yc = x.coords, y.coords

    best = {"lam": 0.0, "val": nx}

    def f(lam: float) -> float:
        val = _pnorm(w, p, xc + lam * yc)
        if val < best["val"]:
            best["lam"], best["val"] = lam, val
        return val

    scale = nx / ny
    lo, mid, hi = bracket_minimum(f, step=scale, max_doublings=max_iterations)
    width_tol = 1e-12 * (1.0 + scale)
    lam_star, _ = golden_section(f, lo, mid, hi, width_tol, max_iterations)
    if f(lam_star) > best["val"]:
        lam_star = best["lam"]
    min_norm = best["val"]
    is_orth = abs(lam_star) <= lambda_tol and min_norm >= nx - norm_tol
    return JamesOrthogonality(lambda_star=lam_star, min_norm=min_norm, is_orthogonal=is_orth)


def _basis_rank(mat: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Rank by pivoted Gaussian elimination, threshold rel_tol * largest pivot."""
    a = np.array(mat, dtype=float, copy=True)
    rows, cols = a.shape
    rank = 0
    pivot_max = 0.0
    for col in range(cols):
        if rank >= rows:
            break
        sub = np.abs(a[rank:, col])
        i = int(np.argmax(sub))
        piv = sub[i]
        pivot_max = max(pivot_max, piv)
        if piv <= rel_tol * max(pivot_max, 1e-300):
            continue
        a[[rank, rank + i]] = a[[rank + i, rank]]
        a[rank + 1 :] -= np.outer(a[rank + 1 :, col] / a[rank, col], a[rank])
        rank += 1
    return rank


def orthogonal_decompose(
    x: Vector,
    basis: Sequence[Vector],
    *,
    tol: float = 1e-10,
    max_iterations: int = 500,
    start: np.ndarray | None = None,
) -> tuple[Vector, Vector]:
    """Split x = x0 + x_perp with x0 the metric projection onto span(basis).

    x0 minimizes ||x - u|| over the span; uniform convexity makes it unique,
    and the first-order condition of the minimization is exactly
    [u, x_perp] = 0 for every u in the span.  The coefficients are found by
    smooth convex minimization of ||residual||^p / p (damped Newton when
    p >= 2, gradient-only quasi-Newton otherwise, since second derivatives
    of the norm blow up at coordinate zeros when p < 2).

    ``start`` overrides the weighted-least-squares warm start; two runs from
    different starts agree to solver tolerance because the minimizer is
    unique.
    """
    space = x.space
    if len(basis) == 0:
        raise ValueError("basis must contain at least one vector")
    for u in basis:
        u._same_space(x)
    bmat = np.stack([u.coords for u in basis])  # k x n
    k = bmat.shape[0]
    if _basis_rank(bmat) < k:
        raise ValueError("rank deficient subspace basis")

    w, p = space.weights, space.p
    xc = x.coords
    bw = bmat * w  # rows scaled by weights

    if start is None:
        gram = bw @ bmat.T
        beta0 = np.linalg.solve(gram, bw @ xc)
    else:
        beta0 = np.asarray(start, dtype=float)
        if beta0.shape != (k,):
            raise ValueError(f"start must have shape ({k},)")

    basis_scale = max(_pnorm(w, p, row) for row in bmat)
    sip_tol = tol * (1.0 + _pnorm(w, p, xc)) * basis_scale

    def fun(beta: np.ndarray) -> float:
        r = xc - bmat.T @ beta
        return float(np.sum(w * np.abs(r) ** p) / p)

    def grad(beta: np.ndarray) -> np.ndarray:
        r = xc - bmat.T @ beta
        return -(bw @ (np.abs(r) ** (p - 1.0) * np.sign(r)))

    def sip_residuals(beta: np.ndarray) -> np.ndarray:
        r = xc - bmat.T @ beta
        nr = _pnorm(w, p, r)
        if nr == 0.0:
            return np.zeros(k)
        return nr ** (2.0 - p) * (bw @ (np.abs(r) ** (p - 1.0) * np.sign(r)))

    def stop(beta: np.ndarray, _g: np.ndarray) -> bool:
        return float(np.max(np.abs(sip_residuals(beta)))) <= sip_tol

    hess = None
    if p >= 2.0:

        def hess(beta: np.ndarray) -> np.ndarray:
            r = xc - bmat.T @ beta
            d = (p - 1.0) * w * np.abs(r) ** (p - 2.0)
            return (bmat * d) @ bmat.T

    result = minimize_smooth(
        fun, grad, beta0, hess=hess, stop=stop, max_iterations=max_iterations
    )
    if not result.converged:
        raise ConvergenceError(
            "orthogonal_decompose did not converge: "
            f"{result.message}; beta={result.x.tolist()}, "
            f"sip residuals={sip_residuals(result.x).tolist()}"
        )
    x0c = bmat.T @ result.x
    x_perp = Vector._unsafe(xc - x0c, space)
    x0 = Vector._unsafe(xc - x_perp.coords, space)
    return x0, x_perp


# -- smoothness and continuity probes -----------------------------------------


def random_direction(space: SpaceConfig, rng: np.random.Generator) -> np.ndarray:
    """Unit vector: Euclidean-uniform direction renormalized in the space norm."""
    while True:
        v = rng.standard_normal(space.dim)
        n = _pnorm(space.weights, space.p, v)
        if n > 1e-12:
            return v / n


def random_probe_vector(
    space: SpaceConfig,
    rng: np.random.Generator,
    mag_low: float = 1e-2,
    mag_high: float = 1e2,
) -> np.ndarray:
    """Probe sample: random direction with log-uniform magnitude."""
    mag = math.exp(rng.uniform(math.log(mag_low), math.log(mag_high)))
    return mag * random_direction(space, rng)


def modulus_of_smoothness_estimate(
    space: SpaceConfig,
    delta: float,
    n_samples: int,
    *,
    seed: int = 0,
    refine_iterations: int = 60,
) -> float:
    """Sampled lower bound on the modulus of smoothness at delta.

    Maximizes (||x+y|| + ||x-y||)/2 - 1 over random pairs with ||x|| = 1,
    ||y|| = delta, then hill-climbs from the best pair.  The true supremum
    is bounded by delta (triangle inequality) and the estimate never
    exceeds it.  For a fixed seed the same sample directions are drawn for
    every delta, so estimate(delta)/delta inherits the monotonicity of the
    sample-wise ratios (each is nondecreasing in delta by convexity).
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    w, p = space.weights, space.p

    def value(xu: np.ndarray, uu: np.ndarray) -> float:
        y = delta * uu
        return 0.5 * (_pnorm(w, p, xu + y) + _pnorm(w, p, xu - y)) - 1.0

    best_x = random_direction(space, rng)
    best_u = random_direction(space, rng)
    best = value(best_x, best_u)
    for _ in range(n_samples - 1):
        xs = random_direction(space, rng)
        us = random_direction(space, rng)
        v = value(xs, us)
        if v > best:
            best, best_x, best_u = v, xs, us

    step = 0.3
    for _ in range(refine_iterations):
        xn = best_x + step * rng.standard_normal(space.dim)
        un = best_u + step * rng.standard_normal(space.dim)
        nx, nu = _pnorm(w, p, xn), _pnorm(w, p, un)
        if nx <= 1e-12 or nu <= 1e-12:
            continue
        xn /= nx
        un /= nu
        v = value(xn, un)
        if v > best:
            best, best_x, best_u = v, xn, un
        else:
            step *= 0.85
    return max(best, 0.0)


@dataclass(frozen=True)
class ContinuityReport:
    """Dual-map perturbation distances along a shrinking ladder of step sizes."""

    ladder: np.ndarray            # perturbation norms, decreasing
    distances: np.ndarray         # n_samples x len(ladder) dual-norm distances
    monotone: bool                # every sample decreases along the ladder
    max_modulus: float            # largest observed dual distance

    def distances_at(self, h: float) -> np.ndarray:
        idx = int(np.argmin(np.abs(self.ladder - h)))
        return self.distances[:, idx]


def duality_continuity_probe(
    space: SpaceConfig,
    n_samples: int,
    *,
    seed: int = 0,
    ladder: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
    min_coordinate: float | None = None,
) -> ContinuityReport:
    """Empirical norm-to-norm continuity of the duality map.

    For unit vectors x (bounded away from sparse vectors) and a fixed unit
    direction u per sample, records ``dual_norm(J(x + h*u) - J(x))`` along a
    geometric ladder of ||h|| and checks the distances decrease to zero.
    Asserts monotone decrease only; no rate is claimed.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    lad = np.asarray(sorted(ladder, reverse=True), dtype=float)
    rng = np.random.default_rng(seed)
    w, p = space.weights, space.p
    if min_coordinate is None:
        min_coordinate = 0.25 / math.sqrt(space.dim)

    dists = np.empty((n_samples, lad.size))
    for s in range(n_samples):
        while True:
            xc = random_direction(space, rng)
            if np.min(np.abs(xc)) >= min_coordinate:
                break
        uc = random_direction(space, rng)
        jx = _duality_coords(w, p, xc)
        for j, h in enumerate(lad):
            jxh = _duality_coords(w, p, xc + h * uc)
            dists[s, j] = _dual_norm_coords(space, jxh - jx)
    diffs = np.diff(dists, axis=1)
    monotone = bool(np.all(diffs <= 1e-12 * np.maximum(dists[:, :-1], 1e-300)))
    return ContinuityReport(
        ladder=_freeze(lad),
        distances=_freeze(dists),
        monotone=monotone,
        max_modulus=float(dists.max()),
    )


# -- axiom verification suite --------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    """Worst relative violations of the semi-inner-product axioms."""

    max_violations: dict[str, float]
    worst_witness: dict[str, dict]
    samples_run: int
    tolerance: float
    cauchy_schwarz_tolerance: float

    @property
    def passed(self) -> bool:
        for name, v in self.max_violations.items():
            lim = self.cauchy_schwarz_tolerance if name == "cauchy_schwarz" else self.tolerance
            if v > lim:
                return False
        return True


_AXIOMS = ("linearity", "positivity", "homogeneity", "cauchy_schwarz")


def _axiom_case(p: float, d: int, per_case: int, seed_pair) -> tuple[dict, dict]:
    space = SpaceConfig(d, p)
    w = space.weights
    rng = np.random.default_rng(seed_pair)
    worst = {name: 0.0 for name in _AXIOMS}
    witness: dict[str, dict] = {name: {} for name in _AXIOMS}
    for _ in range(per_case):
        xc = rng.standard_normal(d)
        yc = rng.standard_normal(d)
        zc = rng.standard_normal(d)
        a, b, lam = rng.uniform(-2.0, 2.0, size=3)

        nx = _pnorm(w, p, xc)
        nyv = _pnorm(w, p, yc)
        nz = _pnorm(w, p, zc)

        lin = abs(
            _sip_coords(w, p, a * xc + b * yc, zc)
            - a * _sip_coords(w, p, xc, zc)
            - b * _sip_coords(w, p, yc, zc)
        ) / (((abs(a) * nx + abs(b) * nyv) * nz) + 1e-300)

        sxx = _sip_coords(w, p, xc, xc)
        pos = max(0.0, -sxx) / (nx * nx + 1e-300)
        pos = max(pos, abs(sxx - nx * nx) / (nx * nx + 1e-300))

        hom = abs(
            _sip_coords(w, p, xc, lam * yc) - lam * _sip_coords(w, p, xc, yc)
        ) / (abs(lam) * nx * nyv + 1e-300)

        sxy = _sip_coords(w, p, xc, yc)
        cs = max(0.0, sxy * sxy - sxx * _sip_coords(w, p, yc, yc)) / (
            (nx * nyv) ** 2 + 1e-300
        )

        for name, v in (
            ("linearity", lin),
            ("positivity", pos),
            ("homogeneity", hom),
            ("cauchy_schwarz", cs),
        ):
            if v > worst[name]:
                worst[name] = v
                witness[name] = {
                    "p": p,
                    "dim": d,
                    "x": xc.tolist(),
                    "y": yc.tolist(),
                    "z": zc.tolist(),
                    "a": float(a),
                    "b": float(b),
                    "lambda": float(lam),
                    "violation": float(v),
                }
    return worst, witness


def axiom_suite(
    p_list: Sequence[float] = (1.2, 1.5, 2.0, 3.0, 4.0, 7.0),
    dims: Sequence[int] = (1, 2, 3, 5, 10),
    n_samples: int = 10_000,
    seed: int = 0,
    *,
    tolerance: float = 1e-9,
    cauchy_schwarz_tolerance: float = 1e-12,
    jobs: int = 1,
) -> AxiomReport:
    """Randomized check of the four semi-inner-product axioms.

    ``n_samples`` random triples total, spread over the (p, dim) grid.  Each
    case gets a child seed derived from its grid index, and results are
    merged in grid order, so the report is identical for any ``jobs`` count.
    Violations are measured relative to the natural scale of each identity.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    cases = [(p, d) for p in p_list for d in dims]
    per_case = -(-n_samples // len(cases))  # ceil

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    lambda args: _axiom_case(args[1][0], args[1][1], per_case, [seed, args[0]]),
                    enumerate(cases),
                )
            )
    else:
        results = [
            _axiom_case(p, d, per_case, [seed, idx]) for idx, (p, d) in enumerate(cases)
        ]

    worst = {name: 0.0 for name in _AXIOMS}
    witness: dict[str, dict] = {name: {} for name in _AXIOMS}
    for case_worst, case_witness in results:
        for name in _AXIOMS:
            if case_worst[name] > worst[name]:
                worst[name] = case_worst[name]
                witness[name] = case_witness[name]

    return AxiomReport(
        max_violations=worst,
        worst_witness=witness,
        samples_run=per_case * len(cases),
        tolerance=tolerance,
        cauchy_schwarz_tolerance=cauchy_schwarz_tolerance,
    )
