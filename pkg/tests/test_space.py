"""Tests for the weighted l^p space calculus."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sip_interp.space import (
    SpaceConfig,
    Vector,
    axiom_suite,
    dual_norm,
    dual_space,
    duality_continuity_probe,
    duality_map,
    inverse_duality_map,
    james_orthogonality_check,
    modulus_of_smoothness_estimate,
    norm,
    orthogonal_decompose,
    random_direction,
    sip,
    tangent_component,
)

ROOT2_4TH = 1.189207115002721        # 2**(1/4)
INV_CBRT2 = 0.7937005259840998       # 2**(-1/3)
INV_SQRT2 = 0.7071067811865476       # 2**(-1/2)


def central_difference_norm_derivative(x, y, h=1e-6):
    """Oracle for the norm differential: d/dt ||x + t y|| at t = 0."""
    return (norm(x + h * y) - norm(x - h * y)) / (2.0 * h)


def pairing_supremum(x, n_angles=200_001):
    """Oracle for the norm of a 2-d vector: sup of a(x) over unit-dual-norm a."""
    space = x.space
    angles = np.linspace(0.0, 2.0 * math.pi, n_angles)
    best = 0.0
    for theta in angles:
        a = space.dual([math.cos(theta), math.sin(theta)])
        na = dual_norm(a)
        best = max(best, a(x) / na)
    return best


# -- SpaceConfig ---------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 0.5, -2.0, math.inf, math.nan])
def test_space_rejects_bad_exponent(p):
    with pytest.raises(ValueError):
        SpaceConfig(2, p)


def test_space_rejects_bad_weights_and_dim():
    with pytest.raises(ValueError):
        SpaceConfig(2, 2.0, [1.0, -1.0])
    with pytest.raises(ValueError):
        SpaceConfig(2, 2.0, [1.0])
    with pytest.raises(ValueError):
        SpaceConfig(0, 2.0)


def test_conjugate_exponent_identity():
    for p in (1.2, 1.5, 2.0, 3.0, 7.0):
        space = SpaceConfig(3, p)
        assert 1.0 / space.p + 1.0 / space.q == pytest.approx(1.0, abs=1e-15)


def test_vector_validation():
    space = SpaceConfig(2, 3.0)
    with pytest.raises(ValueError):
        space.vector([1.0])
    with pytest.raises(ValueError):
        space.vector([1.0, math.nan])
    v = space.vector([1.0, 2.0])
    with pytest.raises(AttributeError):
        v.coords = np.zeros(2)
    with pytest.raises(ValueError):
        v.coords[0] = 7.0  # frozen array


def test_vectors_from_different_spaces_do_not_mix():
    a = SpaceConfig(2, 2.0).vector([1.0, 0.0])
    b = SpaceConfig(2, 3.0).vector([0.0, 1.0])
    with pytest.raises(ValueError):
        sip(a, b)


# -- norm ----------------------------------------------------------------------


def test_norm_euclidean_case():
    space = SpaceConfig(2, 2.0)
    assert norm(space.vector([3.0, 4.0])) == pytest.approx(5.0, abs=1e-15)


def test_norm_zero_vector():
    for p in (1.5, 2.0, 4.0):
        space = SpaceConfig(3, p)
        assert norm(space.zero()) == 0.0


def test_norm_p4_against_pairing_oracle():
    space = SpaceConfig(2, 4.0)
    x = space.vector([1.0, 1.0])
    value = norm(x)
    assert value == pytest.approx(ROOT2_4TH, abs=1e-12)
    assert value == pytest.approx(pairing_supremum(x), rel=1e-8)


def test_norm_weights_scale():
    space = SpaceConfig(2, 2.0, [4.0, 9.0])
    assert norm(space.vector([1.0, 1.0])) == pytest.approx(math.sqrt(13.0), abs=1e-14)


# -- sip -----------------------------------------------------------------------


def test_sip_hilbert_case_is_inner_product():
    space = SpaceConfig(2, 2.0)
    assert sip(space.vector([1.0, 2.0]), space.vector([3.0, 4.0])) == pytest.approx(11.0)


def test_sip_disjoint_supports_vanishes():
    for p in (1.5, 3.0, 7.0):
        space = SpaceConfig(4, p)
        x = space.vector([1.0, 2.0, 0.0, 0.0])
        y = space.vector([0.0, 0.0, -1.0, 5.0])
        assert sip(x, y) == 0.0


def test_sip_p3_matches_norm_derivative_oracle():
    space = SpaceConfig(2, 3.0)
    x = space.vector([1.0, 0.0])
    y = space.vector([1.0, 1.0])
    value = sip(x, y)
    assert value == pytest.approx(INV_CBRT2, abs=1e-12)
    oracle = central_difference_norm_derivative(y, x) * norm(y)
    assert value == pytest.approx(oracle, abs=1e-6)


def test_sip_second_argument_zero_convention():
    space = SpaceConfig(3, 2.5)
    assert sip(space.vector([1.0, 2.0, 3.0]), space.zero()) == 0.0


def test_sip_induces_norm():
    rng = np.random.default_rng(0)
    for p in (1.2, 2.0, 5.0):
        space = SpaceConfig(4, p, rng.uniform(0.5, 2.0, 4))
        x = space.vector(rng.standard_normal(4))
        assert sip(x, x) == pytest.approx(norm(x) ** 2, rel=1e-13)


# -- duality map and inverse ---------------------------------------------------


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_duality_map_fixes_unit_basis_vector(p):
    space = SpaceConfig(3, p)
    e1 = space.vector([1.0, 0.0, 0.0])
    np.testing.assert_allclose(duality_map(e1).coords, e1.coords, atol=1e-15)


def test_duality_map_p4_example():
    space = SpaceConfig(2, 4.0)
    x = space.vector([1.0, 1.0])
    xstar = duality_map(x)
    np.testing.assert_allclose(xstar.coords, [INV_SQRT2, INV_SQRT2], atol=1e-14)
    assert dual_norm(xstar) == pytest.approx(ROOT2_4TH, abs=1e-13)
    rng = np.random.default_rng(1)
    for _ in range(100):
        z = space.vector(rng.standard_normal(2))
        assert xstar(z) == pytest.approx(sip(z, x), rel=1e-12, abs=1e-12)


def test_duality_map_real_homogeneity():
    rng = np.random.default_rng(2)
    space = SpaceConfig(3, 2.7, [1.0, 0.5, 2.0])
    x = space.vector(rng.standard_normal(3))
    np.testing.assert_allclose(
        duality_map(-3.0 * x).coords, -3.0 * duality_map(x).coords, rtol=1e-13
    )


def test_duality_map_of_zero():
    space = SpaceConfig(2, 3.0)
    assert np.all(duality_map(space.zero()).coords == 0.0)
    assert np.all(inverse_duality_map(space.dual([0.0, 0.0])).coords == 0.0)


def test_inverse_duality_is_identity_in_hilbert_space():
    space = SpaceConfig(3, 2.0)
    a = space.dual([0.3, -1.2, 0.5])
    np.testing.assert_allclose(inverse_duality_map(a).coords, a.coords, rtol=1e-14)


def test_inverse_duality_p4_roundtrip_example():
    space = SpaceConfig(2, 4.0)
    a = space.dual([INV_SQRT2, INV_SQRT2])
    np.testing.assert_allclose(inverse_duality_map(a).coords, [1.0, 1.0], rtol=1e-13)


def test_roundtrip_on_random_vectors():
    rng = np.random.default_rng(3)
    for p in (1.5, 3.0, 4.0):
        space = SpaceConfig(5, p, rng.uniform(0.5, 2.0, 5))
        for _ in range(1000):
            x = space.vector(rng.standard_normal(5))
            back = inverse_duality_map(duality_map(x))
            assert np.max(np.abs(back.coords - x.coords)) <= 1e-10 * (1.0 + norm(x))


def test_isometry():
    rng = np.random.default_rng(4)
    for p in (1.2, 2.0, 3.0, 7.0):
        space = SpaceConfig(4, p, rng.uniform(0.5, 2.0, 4))
        for _ in range(200):
            x = space.vector(rng.standard_normal(4))
            assert abs(dual_norm(duality_map(x)) - norm(x)) <= 1e-10 * norm(x)


def test_dual_norm_p2_coincides_with_norm():
    space = SpaceConfig(3, 2.0)
    coords = [0.2, -1.0, 0.7]
    assert dual_norm(space.dual(coords)) == pytest.approx(
        norm(space.vector(coords)), rel=1e-14
    )


def test_dual_norm_zero():
    assert dual_norm(SpaceConfig(2, 4.0).dual([0.0, 0.0])) == 0.0


def test_dual_norm_p4_against_maximization_oracle():
    space = SpaceConfig(2, 4.0)
    a = space.dual([INV_SQRT2, INV_SQRT2])
    assert dual_norm(a) == pytest.approx(ROOT2_4TH, abs=1e-13)
    # local search for sup a(z)/||z|| from random starts
    rng = np.random.default_rng(5)
    best = 0.0
    for _ in range(40):
        z = rng.standard_normal(2)
        step = 0.5
        val = float(a.coords @ z) / norm(space.vector(z))
        for _ in range(200):
            zn = z + step * rng.standard_normal(2)
            vn = float(a.coords @ zn) / norm(space.vector(zn))
            if vn > val:
                z, val = zn, vn
            else:
                step *= 0.9
        best = max(best, val)
    assert best == pytest.approx(dual_norm(a), rel=1e-6)


def test_dual_space_sip_reverses_arguments():
    # [x*, y*] in the dual space equals [y, x] in the primal space
    rng = np.random.default_rng(6)
    space = SpaceConfig(4, 2.7, [0.5, 1.0, 2.0, 1.3])
    dual = dual_space(space)
    for _ in range(200):
        x = space.vector(rng.standard_normal(4))
        y = space.vector(rng.standard_normal(4))
        lhs = sip(
            dual.vector(duality_map(x).coords), dual.vector(duality_map(y).coords)
        )
        assert lhs == pytest.approx(sip(y, x), rel=1e-10, abs=1e-12)


def test_dual_of_dual_recovers_space():
    space = SpaceConfig(3, 1.7, [0.4, 1.1, 2.5])
    again = dual_space(dual_space(space))
    assert again.p == pytest.approx(space.p, rel=1e-15)
    np.testing.assert_allclose(again.weights, space.weights, rtol=1e-12)


# -- norm derivative identity ---------------------------------------------------


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_norm_derivative_matches_sip(p):
    rng = np.random.default_rng(7)
    space = SpaceConfig(4, p)
    for _ in range(100):
        xc = rng.standard_normal(4)
        if p < 2.0:
            while np.min(np.abs(xc)) < 0.2:
                xc = rng.standard_normal(4)
        x = space.vector(xc / norm(space.vector(xc)))
        y = space.vector(rng.standard_normal(4))
        y = y * (1.0 / norm(y))
        fd = central_difference_norm_derivative(x, y, h=1e-5)
        assert fd == pytest.approx(sip(y, x) / norm(x), abs=1e-6)


# -- tangent and James orthogonality ---------------------------------------------


def test_tangent_of_parallel_vector_is_zero():
    space = SpaceConfig(3, 2.5)
    f = space.vector([1.0, -0.5, 2.0])
    np.testing.assert_allclose(tangent_component(2.0 * f, f).coords, 0.0, atol=1e-14)


def test_tangent_hilbert_gram_schmidt():
    space = SpaceConfig(2, 2.0)
    f_t = tangent_component(space.vector([1.0, 1.0]), space.vector([1.0, 0.0]))
    np.testing.assert_allclose(f_t.coords, [0.0, 1.0], atol=1e-15)


def test_tangent_p3_is_james_orthogonal():
    space = SpaceConfig(2, 3.0)
    f = space.vector([1.0, 1.0])
    f_t = tangent_component(space.vector([1.0, 0.0]), f)
    assert abs(sip(f_t, f)) <= 1e-12
    report = james_orthogonality_check(f_t, f)
    assert report.is_orthogonal


def test_tangent_at_origin_raises():
    space = SpaceConfig(2, 3.0)
    with pytest.raises(ValueError, match="tangent undefined at origin"):
        tangent_component(space.vector([1.0, 0.0]), space.zero())


def test_james_orthogonal_axes_hilbert():
    space = SpaceConfig(2, 2.0)
    report = james_orthogonality_check(space.vector([0.0, 1.0]), space.vector([1.0, 0.0]))
    assert report.is_orthogonal
    assert abs(report.lambda_star) <= 1e-6
    assert report.min_norm == pytest.approx(1.0, abs=1e-10)


def test_james_antiparallel_cancellation():
    space = SpaceConfig(3, 2.5)
    x = space.vector([1.0, 2.0, -1.0])
    report = james_orthogonality_check(x, x)
    assert not report.is_orthogonal
    assert report.lambda_star == pytest.approx(-1.0, abs=1e-7)
    assert report.min_norm <= 1e-7


def test_james_agrees_with_sip_sign():
    rng = np.random.default_rng(8)
    space = SpaceConfig(3, 3.0)
    for _ in range(50):
        x = space.vector(rng.standard_normal(3))
        y = space.vector(rng.standard_normal(3))
        report = james_orthogonality_check(y, x)
        sip_orth = abs(sip(y, x)) <= 1e-8 * norm(x) * norm(y)
        assert report.is_orthogonal == sip_orth


# -- orthogonal decomposition ----------------------------------------------------


def test_decompose_point_already_in_span():
    space = SpaceConfig(3, 3.0)
    u = space.vector([1.0, 0.5, -0.2])
    v = space.vector([0.0, 1.0, 1.0])
    x = 2.0 * u + (-1.5) * v
    x0, x_perp = orthogonal_decompose(x, [u, v])
    assert norm(x_perp) <= 1e-9
    np.testing.assert_allclose(x0.coords, x.coords, atol=1e-9)


def test_decompose_coordinate_axis_splits_coordinates():
    for p in (1.5, 2.0, 4.0):
        space = SpaceConfig(2, p)
        x = space.vector([0.7, -1.3])
        x0, x_perp = orthogonal_decompose(x, [space.vector([1.0, 0.0])])
        np.testing.assert_allclose(x0.coords, [0.7, 0.0], atol=1e-10)
        np.testing.assert_allclose(x_perp.coords, [0.0, -1.3], atol=1e-10)


def test_decompose_random_subspace_p25():
    rng = np.random.default_rng(9)
    space = SpaceConfig(4, 2.5)
    x = space.vector(rng.standard_normal(4))
    basis = [space.vector(rng.standard_normal(4)) for _ in range(2)]
    x0, x_perp = orthogonal_decompose(x, basis)
    for u in basis:
        assert abs(sip(u, x_perp)) <= 1e-8
        assert james_orthogonality_check(u, x_perp).is_orthogonal
    # reconstruction is exact to the last bit or two
    np.testing.assert_allclose(x0.coords + x_perp.coords, x.coords, rtol=5e-16)


def test_decompose_unique_from_different_starts():
    rng = np.random.default_rng(10)
    space = SpaceConfig(5, 1.6)
    x = space.vector(rng.standard_normal(5))
    basis = [space.vector(rng.standard_normal(5)) for _ in range(2)]
    x0a, _ = orthogonal_decompose(x, basis)
    x0b, _ = orthogonal_decompose(x, basis, start=np.array([10.0, -10.0]))
    assert np.max(np.abs(x0a.coords - x0b.coords)) <= 1e-8


def test_decompose_rejects_dependent_basis():
    space = SpaceConfig(3, 2.0)
    u = space.vector([1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="rank deficient"):
        orthogonal_decompose(space.vector([1.0, 0.0, 0.0]), [u, 2.0 * u])


# -- smoothness and continuity probes ---------------------------------------------


def test_modulus_estimate_basic_bounds():
    space = SpaceConfig(3, 3.0)
    for delta in (1e-3, 0.1, 1.0):
        est = modulus_of_smoothness_estimate(space, delta, 200, seed=0)
        assert 0.0 <= est <= delta


def test_modulus_estimate_vanishes_with_delta():
    space = SpaceConfig(2, 1.5)
    assert modulus_of_smoothness_estimate(space, 1e-9, 100, seed=0) <= 1e-9


def test_modulus_estimate_hilbert_closed_form():
    space = SpaceConfig(2, 2.0)
    delta = 0.5
    est = modulus_of_smoothness_estimate(space, delta, 3000, seed=0)
    assert est == pytest.approx(math.sqrt(1.0 + delta**2) - 1.0, rel=1e-3)


def test_modulus_estimate_rejects_bad_delta():
    with pytest.raises(ValueError):
        modulus_of_smoothness_estimate(SpaceConfig(2, 2.0), 0.0, 10)


def test_continuity_probe_identity_in_hilbert_space():
    space = SpaceConfig(3, 2.0, [0.5, 1.0, 2.0])
    report = duality_continuity_probe(space, 10, seed=0, ladder=(1e-2, 1e-4))
    # duality map is linear there, so dual distance equals the step size
    np.testing.assert_allclose(report.distances[:, 0], 1e-2, rtol=1e-12)
    np.testing.assert_allclose(report.distances[:, 1], 1e-4, rtol=1e-12)


def test_continuity_probe_p15_small_steps_small_distances():
    report = duality_continuity_probe(SpaceConfig(5, 1.5), 30, seed=1)
    assert report.monotone
    assert np.max(report.distances_at(1e-6)) < 1e-3


def test_zero_perturbation_gives_zero_distance():
    space = SpaceConfig(2, 1.5)
    x = space.vector([0.8, -0.6])
    assert dual_norm(duality_map(x) - duality_map(x)) == 0.0


# -- axiom suite -------------------------------------------------------------------


def test_axiom_suite_quick_pass():
    report = axiom_suite(p_list=(1.5, 3.0), dims=(2, 4), n_samples=400, seed=0)
    assert report.passed
    assert report.max_violations["linearity"] <= 1e-9
    assert report.max_violations["cauchy_schwarz"] <= 1e-12


def test_axiom_suite_jobs_do_not_change_result():
    a = axiom_suite(p_list=(1.5, 3.0), dims=(2, 3), n_samples=200, seed=3, jobs=1)
    b = axiom_suite(p_list=(1.5, 3.0), dims=(2, 3), n_samples=200, seed=3, jobs=3)
    assert a.max_violations == b.max_violations


def test_axiom_suite_rejects_bad_samples():
    with pytest.raises(ValueError):
        axiom_suite(n_samples=0)


# -- hypothesis property tests -------------------------------------------------------

finite_coord = st.floats(
    min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False
)


@settings(max_examples=200, deadline=None)
@given(
    x=st.lists(finite_coord, min_size=3, max_size=3),
    y=st.lists(finite_coord, min_size=3, max_size=3),
    p=st.sampled_from([1.2, 1.5, 2.0, 3.0, 4.0, 7.0]),
)
def test_cauchy_schwarz_property(x, y, p):
    space = SpaceConfig(3, p)
    vx, vy = space.vector(x), space.vector(y)
    lhs = sip(vx, vy) ** 2
    rhs = sip(vx, vx) * sip(vy, vy)
    assert lhs <= rhs + 1e-12 * (norm(vx) * norm(vy)) ** 2 + 1e-300


@settings(max_examples=200, deadline=None)
@given(
    x=st.lists(finite_coord, min_size=2, max_size=2),
    lam=st.one_of(
        st.just(0.0),
        st.floats(min_value=1e-6, max_value=10, allow_nan=False),
        st.floats(min_value=-10, max_value=-1e-6, allow_nan=False),
    ),
    p=st.sampled_from([1.5, 2.0, 3.0]),
)
def test_duality_map_homogeneity_property(x, lam, p):
    space = SpaceConfig(2, p)
    v = space.vector(x)
    lhs = duality_map(lam * v).coords
    rhs = lam * duality_map(v).coords
    scale = np.max(np.abs(rhs)) + 1e-300
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale


def test_random_direction_has_unit_norm():
    rng = np.random.default_rng(12)
    space = SpaceConfig(4, 1.3, [2.0, 0.5, 1.0, 1.0])
    for _ in range(20):
        d = random_direction(space, rng)
        assert norm(space.vector(d)) == pytest.approx(1.0, rel=1e-12)
