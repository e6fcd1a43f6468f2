"""Tests for radial profiles, admissibility probes, and mollification."""

import math

import numpy as np
import pytest

from sip_interp.regularisers import (
    PiecewiseProfile,
    PowerProfile,
    Regulariser,
    builtin_custom,
    evaluate,
    from_description,
    mollify_radial,
    norm_monotonicity_probe,
    tangential_monotonicity_probe,
    to_description,
)
from sip_interp.space import SpaceConfig, norm, random_direction


# -- profiles and evaluation -----------------------------------------------------


def test_power_profile_rejects_nonpositive_alpha():
    with pytest.raises(ValueError):
        PowerProfile(0.0)
    with pytest.raises(ValueError):
        PowerProfile(-1.0)


def test_evaluate_power_one_is_squared_norm():
    space = SpaceConfig(2, 3.0)
    reg = Regulariser.radial(PowerProfile(1.0))
    f = space.vector([2.0, 0.0])
    assert evaluate(reg, f) == pytest.approx(4.0, rel=1e-14)


def test_evaluate_power_half_is_norm():
    space = SpaceConfig(3, 2.5)
    reg = Regulariser.radial(PowerProfile(0.5))
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = space.vector(rng.standard_normal(3))
        assert evaluate(reg, f) == pytest.approx(norm(f), rel=1e-13)


def test_piecewise_at_jump_value_is_returned_on_the_knot():
    profile = PiecewiseProfile(knots=[1.0], values=[0.0, 2.0], at_jump=[1.25])
    reg = Regulariser.radial(profile)
    space = SpaceConfig(2, 3.0)
    assert evaluate(reg, space.vector([1.0, 0.0])) == pytest.approx(1.25)
    assert evaluate(reg, space.vector([0.5, 0.0])) == 0.0
    assert evaluate(reg, space.vector([1.5, 0.0])) == 2.0


def test_piecewise_rejects_at_jump_outside_monotone_bounds():
    with pytest.raises(ValueError, match="at-jump value outside monotone bounds"):
        PiecewiseProfile(knots=[1.0], values=[0.0, 2.0], at_jump=[2.5])
    with pytest.raises(ValueError, match="at-jump value outside monotone bounds"):
        PiecewiseProfile(knots=[1.0], values=[0.0, 2.0], at_jump=[-0.1])


def test_piecewise_rejects_decreasing_values():
    with pytest.raises(ValueError):
        PiecewiseProfile(knots=[1.0], values=[2.0, 1.0])
    with pytest.raises(ValueError):
        PiecewiseProfile(knots=[1.0], values=[0.0, 1.0], slopes=[-0.5, 0.0])
    with pytest.raises(ValueError):
        PiecewiseProfile(knots=[1.0, 0.5], values=[0.0, 1.0, 2.0])


def test_piecewise_strictly_increasing_with_slopes():
    # continuous, strictly increasing in t
    profile = PiecewiseProfile(
        knots=[0.75, 1.5],
        values=[0.0, 0.5625, 3.9375],
        slopes=[1.0, 2.0, 3.0],
        at_jump=[0.5625, 3.9375],
    )
    grid = np.linspace(0.0, 5.0, 500)
    vals = profile(grid)
    assert np.all(np.diff(vals) > 0.0)


def test_custom_regulariser_rejects_bad_outputs():
    space = SpaceConfig(2, 2.0)
    neg = Regulariser.custom(lambda f: -1.0, label="neg")
    with pytest.raises(ValueError, match="invalid regulariser output"):
        evaluate(neg, space.vector([1.0, 0.0]))
    nan = Regulariser.custom(lambda f: math.nan, label="nan")
    with pytest.raises(ValueError, match="invalid regulariser output"):
        evaluate(nan, space.vector([1.0, 0.0]))


def test_builtin_custom_abs_first_coord():
    space = SpaceConfig(2, 2.0)
    reg = builtin_custom("abs_first_coord")
    assert evaluate(reg, space.vector([-3.0, 1.0])) == 3.0
    with pytest.raises(ValueError, match="unknown builtin"):
        builtin_custom("nope")


def test_radial_regularisers_are_rotation_blind():
    rng = np.random.default_rng(1)
    space = SpaceConfig(3, 2.6, [0.7, 1.0, 1.5])
    for reg in (
        Regulariser.radial(PowerProfile(2.0)),
        Regulariser.radial(PiecewiseProfile(knots=[1.0], values=[0.5, 1.5])),
    ):
        for _ in range(100):
            r = math.exp(rng.uniform(-2, 2))
            f1 = space.vector(r * random_direction(space, rng))
            f2 = space.vector(r * random_direction(space, rng))
            v1, v2 = evaluate(reg, f1), evaluate(reg, f2)
            assert abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1))


# -- probes -----------------------------------------------------------------------


RADIAL_VARIANTS = [
    Regulariser.radial(PowerProfile(0.5)),
    Regulariser.radial(PowerProfile(1.0)),
    Regulariser.radial(PowerProfile(2.0)),
    Regulariser.radial(PiecewiseProfile(knots=[1.0], values=[0.5, 1.5], at_jump=[1.0])),
]


@pytest.mark.parametrize("reg", RADIAL_VARIANTS, ids=lambda r: r.label)
def test_radial_variants_pass_both_probes(reg):
    space = SpaceConfig(3, 2.5)
    assert tangential_monotonicity_probe(reg, space, 1500, seed=0).passed
    assert norm_monotonicity_probe(reg, space, 1500, seed=0).passed


def test_abs_first_coord_tangential_counterexample():
    space = SpaceConfig(2, 2.0)
    reg = builtin_custom("abs_first_coord")
    report = tangential_monotonicity_probe(reg, space, 1000, seed=0)
    assert report.verdict == "counterexample"
    w = report.witness
    # the witness is an exact certificate: recheck it from scratch
    f = space.vector(w["f"])
    perturbed = space.vector(np.asarray(w["f"]) + np.asarray(w["f_T"]))
    assert evaluate(reg, f) - evaluate(reg, perturbed) == pytest.approx(
        w["violation"], rel=1e-12
    )
    assert w["violation"] > 1e-9


def test_abs_first_coord_norm_counterexample():
    space = SpaceConfig(2, 2.0)
    reg = builtin_custom("abs_first_coord")
    report = norm_monotonicity_probe(reg, space, 1000, seed=0)
    assert report.verdict == "counterexample"
    w = report.witness
    assert norm(space.vector(w["f_hat"])) < norm(space.vector(w["f"]))
    assert w["omega_f_hat"] > w["omega_f"]


def test_handcrafted_tangential_violation_is_detected_by_formula():
    # f = (1, 1), f_T = (-1/2, 1/2) in the Euclidean plane
    space = SpaceConfig(2, 2.0)
    reg = builtin_custom("abs_first_coord")
    f = space.vector([1.0, 1.0])
    f_t = space.vector([-0.5, 0.5])
    from sip_interp.space import sip

    assert sip(f_t, f) == 0.0
    assert evaluate(reg, f) == 1.0
    assert evaluate(reg, f + f_t) == 0.5


def test_probes_deterministic_given_seed():
    space = SpaceConfig(2, 2.0)
    reg = builtin_custom("abs_first_coord")
    a = tangential_monotonicity_probe(reg, space, 500, seed=42)
    b = tangential_monotonicity_probe(reg, space, 500, seed=42)
    assert a.to_dict() == b.to_dict()
    c = norm_monotonicity_probe(reg, space, 500, seed=42)
    d = norm_monotonicity_probe(reg, space, 500, seed=42)
    assert c.to_dict() == d.to_dict()


def test_probe_rejects_zero_samples():
    space = SpaceConfig(2, 2.0)
    with pytest.raises(ValueError):
        tangential_monotonicity_probe(RADIAL_VARIANTS[0], space, 0, seed=0)


# -- mollification -----------------------------------------------------------------


def test_mollify_constant_profile_is_unchanged():
    space = SpaceConfig(2, 3.0)
    const = Regulariser.radial(PiecewiseProfile(knots=[1.0], values=[2.5, 2.5]))
    smooth = mollify_radial(const, space, width=0.2, n_quad=16)
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = space.vector(rng.standard_normal(2))
        assert evaluate(smooth, f) == pytest.approx(2.5, rel=1e-12)


def test_mollify_linear_profile_shifts_by_kernel_mean():
    # Omega = ||f||; kernel mean is -width/2, so the smoothed value is s + width/2
    space = SpaceConfig(2, 3.0)
    width = 0.3
    smooth = mollify_radial(
        Regulariser.radial(PowerProfile(0.5)), space, width=width, n_quad=32
    )
    for s in (0.2, 1.0, 3.7):
        f = space.vector([s, 0.0])
        assert evaluate(smooth, f) == pytest.approx(s + width / 2.0, abs=1e-10)


def test_mollify_step_profile_is_continuous_and_monotone():
    space = SpaceConfig(2, 3.0)
    width, n_quad = 0.3, 160
    step = Regulariser.radial(PiecewiseProfile(knots=[1.0], values=[1.0, 2.0]))
    smooth = mollify_radial(step, space, width=width, n_quad=n_quad)
    grid = np.linspace(0.4, 1.6, 401)
    vals = np.array([evaluate(smooth, space.vector([s, 0.0])) for s in grid])
    assert np.all(np.diff(vals) >= -1e-12)
    lipschitz = 1.0 * 35.0 / (16.0 * width)  # jump height times kernel peak
    spacing = grid[1] - grid[0]
    assert np.max(np.abs(np.diff(vals))) <= 2.0 * spacing * lipschitz
    # the smeared jump sits on [1 - width, 1]
    assert vals[grid <= 1.0 - width][-1] == pytest.approx(1.0, abs=1e-9)
    assert vals[grid >= 1.0][0] == pytest.approx(2.0, abs=1e-9)


def test_mollified_step_passes_tangential_probe():
    space = SpaceConfig(2, 3.0)
    step = Regulariser.radial(PiecewiseProfile(knots=[1.0], values=[1.0, 2.0]))
    smooth = mollify_radial(step, space, width=0.3, n_quad=64)
    assert tangential_monotonicity_probe(smooth, space, 1500, seed=3).passed


def test_mollify_radial_value_at_origin_is_direction_free():
    space = SpaceConfig(2, 3.0)
    smooth = mollify_radial(
        Regulariser.radial(PowerProfile(0.5)), space, width=0.4, n_quad=32
    )
    # at the origin the integrand is h(t^2) along any ray: mean of |t| = width/2
    assert evaluate(smooth, space.zero()) == pytest.approx(0.2, abs=1e-12)


def test_mollify_custom_rejected_at_origin_only():
    space = SpaceConfig(2, 2.0)
    smooth = mollify_radial(builtin_custom("abs_first_coord"), space, 0.2, 16)
    assert evaluate(smooth, space.vector([1.0, 0.0])) > 0.0
    with pytest.raises(ValueError, match="undefined at origin"):
        evaluate(smooth, space.zero())


def test_mollify_validates_arguments():
    space = SpaceConfig(2, 2.0)
    reg = Regulariser.radial(PowerProfile(1.0))
    with pytest.raises(ValueError):
        mollify_radial(reg, space, width=0.0, n_quad=16)
    with pytest.raises(ValueError):
        mollify_radial(reg, space, width=0.1, n_quad=4)


# -- descriptions --------------------------------------------------------------------


def test_description_roundtrip_power():
    reg = from_description({"type": "power", "alpha": 2})
    assert reg.is_radial
    assert to_description(reg) == {"type": "power", "alpha": 2.0}


def test_description_roundtrip_piecewise():
    desc = {
        "type": "piecewise",
        "knots": [0.5, 1.5],
        "values": [0.0, 1.0, 2.0],
        "at_jump": [0.5, 1.5],
    }
    reg = from_description(desc)
    out = to_description(reg)
    assert out["knots"] == [0.5, 1.5]
    assert out["at_jump"] == [0.5, 1.5]
    assert out["slopes"] == [0.0, 0.0, 0.0]


def test_description_builtin_custom():
    reg = from_description({"type": "builtin_custom", "name": "abs_first_coord"})
    assert not reg.is_radial
    assert to_description(reg) == {"type": "builtin_custom", "name": "abs_first_coord"}


def test_description_errors():
    with pytest.raises(ValueError, match="unknown regulariser type"):
        from_description({"type": "mystery"})
    with pytest.raises(ValueError, match="alpha"):
        from_description({"type": "power"})
    with pytest.raises(ValueError, match="knots"):
        from_description({"type": "piecewise", "values": [1.0]})
    with pytest.raises(ValueError):
        from_description("power")
