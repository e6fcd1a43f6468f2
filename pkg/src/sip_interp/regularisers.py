"""Regularisers on weighted l^p spaces: radial profiles, admissibility probes,
and radial mollification.

A radial regulariser is h(||f||^2) for a non-decreasing profile h; such
functions are non-decreasing along tangential (James-orthogonal) directions
and along the norm, which is what the two sampling probes check.  Profiles
may carry finitely many jump radii; the value exactly at a jump is free
within the monotone bounds.  Custom regularisers host arbitrary functions,
including deliberately inadmissible ones used to demonstrate counterexample
certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from sip_interp.space import (
    SpaceConfig,
    Vector,
    _pnorm,
    norm,
    random_probe_vector,
    sip,
    tangent_component,
)

__all__ = [
    "PowerProfile",
    "PiecewiseProfile",
    "Regulariser",
    "ProbeReport",
    "evaluate",
    "tangential_monotonicity_probe",
    "norm_monotonicity_probe",
    "mollify_radial",
    "builtin_custom",
    "from_description",
    "to_description",
    "BUILTIN_CUSTOM_NAMES",
]


@dataclass(frozen=True)
class PowerProfile:
    """h(t) = t**alpha with alpha > 0; strictly increasing and jump-free."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0.0:
            raise ValueError(f"alpha must be a positive real, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    def __call__(self, t):
        return np.asarray(t, dtype=float) ** self.alpha


@dataclass(frozen=True, eq=False)
class PiecewiseProfile:
    """Piecewise-linear non-decreasing profile with optional jumps.

    ``knots`` are strictly increasing positive radii r_k; in the squared
    variable t = r^2 the profile on segment k (between t_k and t_{k+1},
    with t_0 = 0) is values[k] + slopes[k] * (t - t_k).  Slopes default to
    zero, giving a pure step profile.  ``at_jump[k]`` is the value exactly
    at the knot and must lie between the left and right limits there; it
    defaults to the right limit.
    """

    knots: np.ndarray
    values: np.ndarray
    at_jump: np.ndarray | None = None
    slopes: np.ndarray | None = None

    def __post_init__(self) -> None:
        knots = np.asarray(self.knots, dtype=float)
        values = np.asarray(self.values, dtype=float)
        k = knots.size
        if k < 1:
            raise ValueError("piecewise profile needs at least one knot")
        if np.any(knots <= 0.0) or not np.all(np.isfinite(knots)):
            raise ValueError("knots must be finite positive radii")
        if np.any(np.diff(knots) <= 0.0):
            raise ValueError("knots must be strictly increasing")
        if values.shape != (k + 1,):
            raise ValueError(f"values must have length {k + 1} (one per segment)")
        slopes = (
            np.zeros(k + 1)
            if self.slopes is None
            else np.asarray(self.slopes, dtype=float)
        )
        if slopes.shape != (k + 1,):
            raise ValueError(f"slopes must have length {k + 1}")
        if np.any(slopes < 0.0) or not np.all(np.isfinite(slopes)):
            raise ValueError("slopes must be finite and non-negative")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise ValueError("values must be finite and non-negative")

        t_knots = knots**2
        seg_start = np.concatenate(([0.0], t_knots))
        left = values[:-1] + slopes[:-1] * (t_knots - seg_start[:-1])
        right = values[1:]
        if np.any(left > right * (1.0 + 1e-12) + 1e-12):
            raise ValueError("segment values must be non-decreasing across knots")
        at_jump = right.copy() if self.at_jump is None else np.asarray(self.at_jump, dtype=float)
        if at_jump.shape != (k,):
            raise ValueError(f"at_jump must have length {k}")
        slack = 1e-12 * np.maximum(1.0, np.abs(right))
        if np.any(at_jump < left - slack) or np.any(at_jump > right + slack):
            raise ValueError("at-jump value outside monotone bounds")

        object.__setattr__(self, "knots", _ro(knots))
        object.__setattr__(self, "values", _ro(values))
        object.__setattr__(self, "at_jump", _ro(at_jump))
        object.__setattr__(self, "slopes", _ro(slopes))
        object.__setattr__(self, "_t_knots", _ro(t_knots))
        object.__setattr__(self, "_seg_start", _ro(seg_start))

        # belt-and-braces: dense sweep confirms monotonicity end to end
        grid = np.linspace(0.0, (1.5 * knots[-1]) ** 2, 1001)
        h = self(grid)
        if np.any(np.diff(h) < -1e-12 * np.maximum(1.0, np.abs(h[:-1]))):
            raise ValueError("profile is not non-decreasing on the dense check grid")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        seg = np.searchsorted(self._t_knots, t_arr, side="right")
        out = self.values[seg] + self.slopes[seg] * (t_arr - self._seg_start[seg])
        for j, tj in enumerate(self._t_knots):
            hit = np.abs(t_arr - tj) <= 8.0 * np.finfo(float).eps * max(1.0, tj)
            if np.any(hit):
                out[hit] = self.at_jump[j]
        return float(out[0]) if scalar else out


def _ro(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


RadialProfile = PowerProfile | PiecewiseProfile


@dataclass(frozen=True, eq=False)
class Regulariser:
    """Either a radial profile applied to ||f||^2 or an arbitrary function."""

    profile: RadialProfile | None
    func: Callable[[Vector], float] | None
    label: str

    @staticmethod
    def radial(profile: RadialProfile, label: str | None = None) -> "Regulariser":
        if label is None:
            if isinstance(profile, PowerProfile):
                label = f"power({profile.alpha})"
            else:
                label = f"piecewise({profile.knots.tolist()})"
        return Regulariser(profile=profile, func=None, label=label)

    @staticmethod
    def custom(func: Callable[[Vector], float], label: str) -> "Regulariser":
        return Regulariser(profile=None, func=func, label=label)

    @property
    def is_radial(self) -> bool:
        return self.profile is not None

    def __repr__(self) -> str:
        return f"Regulariser({self.label})"


_BUILTINS: dict[str, Callable[[Vector], float]] = {
    "abs_first_coord": lambda f: abs(float(f.coords[0])),
}

BUILTIN_CUSTOM_NAMES = tuple(sorted(_BUILTINS))


def builtin_custom(name: str) -> Regulariser:
    """Named non-radial regularisers shipped for probe demonstrations."""
    try:
        fn = _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin custom regulariser {name!r}; known: {BUILTIN_CUSTOM_NAMES}"
        ) from None
    return Regulariser.custom(fn, label=name)


def evaluate(reg: Regulariser, f: Vector) -> float:
    """Value of the regulariser at f; must be finite and non-negative."""
    if reg.is_radial:
        value = float(reg.profile(norm(f) ** 2))
    else:
        value = float(reg.func(f))
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(
            f"invalid regulariser output: {reg.label} returned {value!r}"
        )
    return value


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of a sampling probe: a pass up to sampled evidence, or an
    exact counterexample witness re-verified at a 10x tighter tolerance."""

    probe: str                 # "tangential" | "norm"
    verdict: str               # "pass" | "counterexample"
    witness: dict | None
    samples_run: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "probe": self.probe,
            "verdict": self.verdict,
            "witness": self.witness,
            "samples_run": self.samples_run,
            "seed": self.seed,
        }


_LADDER = np.concatenate([-np.logspace(2, -2, 9), np.logspace(-2, 2, 9)])


def tangential_monotonicity_probe(
    reg: Regulariser,
    space: SpaceConfig,
    n_samples: int,
    seed: int,
    *,
    tol: float = 1e-9,
) -> ProbeReport:
    """Check Omega(f) <= Omega(f + f_T) over sampled tangent pairs.

    Directions are uniform on the Euclidean sphere renormalized in the space
    norm, magnitudes log-uniform in [1e-2, 1e2]; each tangent direction is
    swept over a signed geometric magnitude ladder.  The first violating
    sample is refined along its ladder to the largest violation before being
    reported, and the witness is re-verified at a 10x tighter tolerance.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    w, p = space.weights, space.p
    for k in range(n_samples):
        fc = random_probe_vector(space, rng)
        gc = random_probe_vector(space, rng)
        f = Vector._unsafe(fc, space)
        f_t = tangent_component(Vector._unsafe(gc, space), f)
        nt = norm(f_t)
        if nt <= 1e-13 * _pnorm(w, p, gc):
            continue
        u = f_t * (1.0 / nt)
        omega_f = evaluate(reg, f)
        scale = max(1.0, abs(omega_f))
        hit = None
        if reg.is_radial:
            cands = fc[None, :] + _LADDER[:, None] * u.coords[None, :]
            t_vals = np.sum(w * np.abs(cands) ** p, axis=1) ** (2.0 / p)
            violations = omega_f - np.asarray(reg.profile(t_vals), dtype=float)
            idx = int(np.argmax(violations))
            if violations[idx] > tol * scale:
                hit = (float(_LADDER[idx]), float(violations[idx]))
        else:
            for s in _LADDER:
                violation = omega_f - evaluate(reg, f + float(s) * u)
                if violation > tol * scale and (hit is None or violation > hit[1]):
                    hit = (float(s), violation)
        if hit is None:
            continue
        s_best, v_best = hit
        for s in np.linspace(s_best / math.sqrt(10.0), s_best * math.sqrt(10.0), 80):
            violation = omega_f - evaluate(reg, f + float(s) * u)
            if violation > v_best:
                s_best, v_best = float(s), violation
        perturbed = f + s_best * u
        omega_perturbed = evaluate(reg, perturbed)
        if omega_f - omega_perturbed > 0.1 * tol * scale:
            return ProbeReport(
                probe="tangential",
                verdict="counterexample",
                witness={
                    "f": f.coords.tolist(),
                    "f_T": (s_best * u).coords.tolist(),
                    "omega_f": omega_f,
                    "omega_f_plus_fT": omega_perturbed,
                    "violation": omega_f - omega_perturbed,
                },
                samples_run=k + 1,
                seed=seed,
            )
    return ProbeReport("tangential", "pass", None, n_samples, seed)


def norm_monotonicity_probe(
    reg: Regulariser,
    space: SpaceConfig,
    n_samples: int,
    seed: int,
    *,
    tol: float = 1e-9,
) -> ProbeReport:
    """Check Omega(f_hat) <= Omega(f) over sampled pairs with ||f_hat|| < ||f||.

    The norm gap is kept at a strict margin of at least 1e-6.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    for k in range(n_samples):
        inner_c = random_probe_vector(space, rng)
        outer_c = random_probe_vector(space, rng)
        n_inner = _pnorm(space.weights, space.p, inner_c)
        n_outer = _pnorm(space.weights, space.p, outer_c)
        if n_inner > n_outer:
            inner_c, outer_c = outer_c, inner_c
            n_inner, n_outer = n_outer, n_inner
        if n_outer - n_inner < 1e-6:
            continue
        f_hat = Vector._unsafe(inner_c, space)
        f = Vector._unsafe(outer_c, space)
        omega_hat = evaluate(reg, f_hat)
        omega_f = evaluate(reg, f)
        scale = max(1.0, abs(omega_hat))
        violation = omega_hat - omega_f
        if violation > tol * scale:
            # recheck with fresh evaluations at a 10x tighter tolerance
            if evaluate(reg, f_hat) - evaluate(reg, f) > 0.1 * tol * scale:
                return ProbeReport(
                    probe="norm",
                    verdict="counterexample",
                    witness={
                        "f_hat": f_hat.coords.tolist(),
                        "f": f.coords.tolist(),
                        "norm_f_hat": n_inner,
                        "norm_f": n_outer,
                        "omega_f_hat": omega_hat,
                        "omega_f": omega_f,
                        "violation": violation,
                    },
                    samples_run=k + 1,
                    seed=seed,
                )
    return ProbeReport("norm", "pass", None, n_samples, seed)


def mollify_radial(
    reg: Regulariser,
    space: SpaceConfig,
    width: float,
    n_quad: int,
) -> Regulariser:
    """Smooth a regulariser along rays with a one-sided bump kernel.

    Returns f -> integral of rho(t) * Omega((||f|| - t) f / ||f||) dt where
    rho is the polynomial bump c*(1 - (2t/width + 1)^2)^3 supported on
    [-width, 0] with unit mass, integrated by fixed Gauss-Legendre
    quadrature.  The kernel only looks at radii >= ||f||, which is what
    preserves tangential monotonicity of radial non-decreasing inputs; a
    step at radius r is smeared over [r - width, r].

    For radial inputs the value at the origin is direction-independent and
    defined as the integral along an arbitrary unit ray; for non-radial
    customs the origin is rejected.
    """
    if width <= 0.0:
        raise ValueError("width must be positive")
    if n_quad < 8:
        raise ValueError("n_quad must be at least 8")
    nodes, gl_weights = np.polynomial.legendre.leggauss(n_quad)
    t_nodes = (nodes - 1.0) * (width / 2.0)  # map [-1, 1] -> [-width, 0]
    q_weights = gl_weights * (width / 2.0)
    rho = (35.0 / (16.0 * width)) * (1.0 - (2.0 * t_nodes / width + 1.0) ** 2) ** 3
    kernel = q_weights * rho
    mass = float(kernel.sum())
    if abs(mass - 1.0) > 1e-10:
        raise ValueError(f"mollifier quadrature mass {mass} deviates from 1")

    if reg.is_radial:
        profile = reg.profile

        def mollified(f: Vector) -> float:
            s = norm(f)
            return float(kernel @ profile((s - t_nodes) ** 2))

    else:
        base = reg

        def mollified(f: Vector) -> float:
            s = norm(f)
            if s == 0.0:
                raise ValueError(
                    "mollification undefined at origin for non-radial regulariser"
                )
            direction = f * (1.0 / s)
            vals = [
                evaluate(base, (s - float(t)) * direction) for t in t_nodes
            ]
            return float(kernel @ np.asarray(vals))

    return Regulariser.custom(
        mollified, label=f"mollified({reg.label}, width={width})"
    )


# -- tagged description format (the CLI wire format) --------------------------


def from_description(desc: dict) -> Regulariser:
    """Build a regulariser from its tagged-record description.

    Accepted forms: {"type": "power", "alpha": a},
    {"type": "piecewise", "knots": [...], "values": [...], "at_jump": [...]?,
    "slopes": [...]?}, and {"type": "builtin_custom", "name": "..."}.
    """
    if not isinstance(desc, dict):
        raise ValueError(f"regulariser description must be an object, got {type(desc).__name__}")
    kind = desc.get("type")
    if kind == "power":
        if "alpha" not in desc:
            raise ValueError("power regulariser description requires field 'alpha'")
        return Regulariser.radial(PowerProfile(alpha=desc["alpha"]))
    if kind == "piecewise":
        for field in ("knots", "values"):
            if field not in desc:
                raise ValueError(f"piecewise regulariser description requires field {field!r}")
        profile = PiecewiseProfile(
            knots=np.asarray(desc["knots"], dtype=float),
            values=np.asarray(desc["values"], dtype=float),
            at_jump=None if desc.get("at_jump") is None else np.asarray(desc["at_jump"], dtype=float),
            slopes=None if desc.get("slopes") is None else np.asarray(desc["slopes"], dtype=float),
        )
        return Regulariser.radial(profile)
    if kind == "builtin_custom":
        if "name" not in desc:
            raise ValueError("builtin_custom description requires field 'name'")
        return builtin_custom(desc["name"])
    raise ValueError(f"unknown regulariser type {kind!r}")


def to_description(reg: Regulariser) -> dict:
    if isinstance(reg.profile, PowerProfile):
        return {"type": "power", "alpha": reg.profile.alpha}
    if isinstance(reg.profile, PiecewiseProfile):
        return {
            "type": "piecewise",
            "knots": reg.profile.knots.tolist(),
            "values": reg.profile.values.tolist(),
            "at_jump": reg.profile.at_jump.tolist(),
            "slopes": reg.profile.slopes.tolist(),
        }
    if reg.label in _BUILTINS:
        return {"type": "builtin_custom", "name": reg.label}
    raise ValueError(f"regulariser {reg.label!r} has no serializable description")
