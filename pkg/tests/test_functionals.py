"""Dual volumes, entropy, and the image measures on polytopes."""

import numpy as np
import pytest

from mogauss.bodies import (
    Polytope,
    RadialSampleBody,
    ball,
    cube,
    gauss_image_pullback,
    random_body,
    square,
)
from mogauss.errors import ConvexityError, InputError
from mogauss.functionals import (
    SignedSphericalMeasure,
    Triple,
    dual_volume,
    entropy,
    j_measure,
    log_log_triple,
    mo_measure,
    mo_surface_area_measure,
    monge_ampere_residual_2d,
    polar_mo_measure,
    smooth_density_wrt_surface,
)
from mogauss.mofunctions import (
    log_t,
    neg_log_t,
    power,
    power_ratio,
    power_volume,
    reciprocal,
    reciprocal_transform,
)
from mogauss.sphere import SphericalMeasure

CATALAN = 0.915965594177219015

U2 = SphericalMeasure.uniform(2)
U3 = SphericalMeasure.uniform(3)


# ---------------------------------------------------------------------------
# dual volumes and entropy


def test_dual_volume_reciprocal_square():
    # rho = 1/cos on each quarter turn, so the integral of 1/rho is 4 sqrt 2
    v = dual_volume(reciprocal(), U2, square())
    assert v == pytest.approx(4.0 * np.sqrt(2.0), rel=1e-12)


def test_dual_volume_reciprocal_polygon():
    # regular m-gon with support a: 2 m sin(pi/m) / a
    v = dual_volume(reciprocal(), U2, ball(2, m=256, r=3.0))
    assert v == pytest.approx(2 * 256 * np.sin(np.pi / 256) / 3.0, rel=1e-12)


def test_dual_volume_power_is_volume():
    assert dual_volume(power_volume(2), U2, square()) == pytest.approx(
        4.0, rel=1e-12)
    assert dual_volume(power_volume(3), U3, cube()) == pytest.approx(
        8.0, rel=1e-7)


def test_dual_volume_log_square():
    # 8 * integral_0^{pi/4} -log cos = 2 pi log 2 - 4 Catalan
    v = dual_volume(log_t(), U2, square())
    assert v == pytest.approx(2 * np.pi * np.log(2.0) - 4 * CATALAN, rel=1e-12)


def test_dual_volume_rejects_atomic_base():
    atoms = SphericalMeasure.from_atoms(np.eye(2), np.array([1.0, 2.0]))
    with pytest.raises(InputError):
        dual_volume(reciprocal(), atoms, square())


def test_entropy_square():
    assert entropy(U2, square()) == pytest.approx(
        np.pi * np.log(2.0) - 4 * CATALAN, rel=1e-12)


def test_entropy_cube():
    # independent double-integral value
    assert entropy(U3, cube()) == pytest.approx(-5.026608342490774, abs=1e-7)


def test_entropy_ball_vanishes():
    assert abs(entropy(U2, ball(2, m=4096))) < 1e-5


def test_entropy_scale_law():
    K = random_body(2, 7, 21)
    lhs = entropy(U2, K.scaled(2.0))
    rhs = entropy(U2, K) - U2.total_mass() * np.log(2.0)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_dual_volume_scale_covariance():
    K = random_body(2, 8, 22)
    v1 = dual_volume(power_volume(2), U2, K)
    v2 = dual_volume(power_volume(2), U2, K.scaled(2.0))
    assert v2 == pytest.approx(4.0 * v1, rel=1e-12)


# ---------------------------------------------------------------------------
# image measures


def test_log_log_triple_reduces_to_pullback():
    P = random_body(2, 9, 33)
    w = mo_measure(log_log_triple(U2), P).weights
    pb = gauss_image_pullback(U2, P).atom_masses
    assert np.max(np.abs(w - pb) / pb) < 1e-12
    Q = random_body(3, 14, 34)
    w3 = mo_measure(log_log_triple(U3), Q).weights
    pb3 = gauss_image_pullback(U3, Q).atom_masses
    assert np.max(np.abs(w3 - pb3) / pb3) < 1e-6


def test_polar_measure_negates_under_tilde_chart():
    P = random_body(2, 9, 33)
    tr = Triple(reciprocal(), power(2), U2)
    a = polar_mo_measure(tr.with_tilde_chart(), P).weights
    b = mo_measure(tr, P).weights
    assert np.max(np.abs(a + b)) <= 1e-12 * np.max(np.abs(b))


def test_j_measure_polar_plain_cancellation():
    P = random_body(2, 10, 35)
    psi = power(2)
    ja = j_measure(reciprocal_transform(psi), U2, P, polar_variant=True).weights
    jb = j_measure(psi, U2, P, polar_variant=False).weights
    assert np.max(np.abs(ja + jb)) <= 1e-12 * np.max(np.abs(jb))


def test_neg_log_volume_integrand_matches_j_measure():
    # same cells, exactly negated integrand: bitwise agreement
    P = random_body(2, 10, 35)
    psi = power(2)
    ca = mo_measure(Triple(neg_log_t(), psi, U2), P).weights
    jb = j_measure(psi, U2, P, polar_variant=False).weights
    assert np.array_equal(ca, -jb)


def test_facet_formula_power_charts():
    # G = t^n/n, Psi = t^p/p, uniform base: weight = area * h^{1-p}
    P = random_body(2, 9, 33)
    for p in (0.5, 2.0, 3.0):
        w = mo_measure(Triple(power_volume(2), power_ratio(p), U2), P).weights
        exact = P.facet_areas * P.support ** (1.0 - p)
        assert np.max(np.abs(w - exact) / exact) < 1e-12


def test_surface_area_measure_square():
    sm = mo_surface_area_measure(power(1), square())
    assert np.allclose(sm.weights, 2.0, rtol=1e-14)
    assert sm.total() == pytest.approx(8.0, rel=1e-14)


def test_surface_area_measure_matches_mo_measure():
    P = random_body(2, 9, 33)
    psi = power(3)
    w = mo_measure(Triple(power_volume(2), psi, U2), P).weights
    sm = mo_surface_area_measure(psi, P).weights
    assert np.max(np.abs(w - sm) / np.abs(sm)) < 1e-12


def test_measures_of_negative_sign():
    # decreasing volume integrands give strictly negative weights
    P = random_body(2, 8, 36)
    w = mo_measure(Triple(reciprocal(), power(2), U2), P).weights
    assert np.all(w < 0.0)


def test_signed_measure_interface():
    P = square()
    m = mo_measure(Triple(reciprocal(), power(2), U2), P)
    assert m.total() == pytest.approx(float(np.sum(m.weights)), rel=1e-15)
    w = m.weight_at(np.array([1.0, 0.0]))
    assert w == pytest.approx(m.weights[0], rel=1e-15)
    assert m.weight_at(np.array([np.cos(0.3), np.sin(0.3)])) == 0.0
    val = m.integrate(lambda x: x[:, 0] ** 2)
    assert val == pytest.approx(float(np.sum(m.weights * P.normals[:, 0] ** 2)))


def test_triple_describe_and_tilde():
    tr = Triple(reciprocal(), power(2), U2)
    info = tr.describe()
    assert info["volume_integrand"] == "t^-1"
    assert info["addition_chart"] == "t^2"
    assert info["base_measure"] == "density"
    tt = tr.with_tilde_chart().with_tilde_chart()
    x = np.array([[1.0, 0.0]])
    for t in (0.3, 1.0, 4.5):
        assert tt.addition_chart.value(x, t) == pytest.approx(
            tr.addition_chart.value(x, t), rel=1e-14)


def test_weak_convergence_to_uniform():
    # measures of finely faceted balls integrate test functions like the
    # continuum limit, here -lambda/2 for G = 1/t and Psi = t^2
    tr = Triple(reciprocal(), power(2), U2)
    B = ball(2, m=1024)
    w = mo_measure(tr, B).weights
    tests = [
        lambda x: np.ones(len(x)),
        lambda x: x[:, 0] ** 2,
        lambda x: np.cos(2 * np.arctan2(x[:, 1], x[:, 0])),
        lambda x: np.exp(x[:, 0]),
        lambda x: np.abs(x[:, 1]),
    ]
    for f in tests:
        got = float(np.sum(w * f(B.normals)))
        ref = -0.5 * U2.integrate(f)
        assert abs(got - ref) < 1e-4


# ---------------------------------------------------------------------------
# smooth diagnostics


def test_smooth_density_matches_polygon_ratio():
    tr = Triple(reciprocal(), power(2), U2)
    ell = RadialSampleBody.from_support_function(
        lambda d: np.sqrt((1.5 * d[:, 0]) ** 2 + d[:, 1] ** 2), n=512)
    u = np.array([1.0, 0.0])
    dens = smooth_density_wrt_surface(tr, ell, u)
    # closed form at the axis point: (1/h) * (-1/h^2) / (2h) with h = 1.5
    assert dens == pytest.approx(-(1 / 1.5) * (1 / 1.5**2) / 3.0, rel=1e-9)
    P = ell.to_polytope()
    i = P.radial_facet_index(u)
    ratio = mo_measure(tr, P).weights[i] / P.facet_areas[i]
    assert dens == pytest.approx(ratio, rel=1e-3)


def test_monge_ampere_flat_circle():
    h = np.ones(512)
    field = monge_ampere_residual_2d(log_log_triple(U2), h, lambda x: np.ones(len(x)))
    assert field.max_abs <= 1e-10
    assert field.l2_norm <= 1e-10
    assert field.angles.shape == field.residual.shape == (512,)


def test_monge_ampere_detects_perturbation():
    th = 2 * np.pi * np.arange(512) / 512
    h = 1.0 + 0.1 * np.cos(2 * th)
    field = monge_ampere_residual_2d(log_log_triple(U2), h, lambda x: np.ones(len(x)))
    assert field.max_abs > 1e-3


def test_monge_ampere_rejects_nonconvex():
    th = 2 * np.pi * np.arange(256) / 256
    h = 1.0 + 0.4 * np.cos(5 * th)
    with pytest.raises(ConvexityError):
        monge_ampere_residual_2d(log_log_triple(U2), h, lambda x: np.ones(len(x)))


def test_monge_ampere_needs_enough_samples():
    with pytest.raises(InputError):
        monge_ampere_residual_2d(log_log_triple(U2), np.ones(4),
                                 lambda x: np.ones(len(x)))
