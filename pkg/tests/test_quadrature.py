"""Closed-form checks for the interval, circle, and sphere quadrature."""

import numpy as np
import pytest

from mogauss.quadrature import (
    _subdivide,
    adaptive_panels,
    circle_grid,
    fan_triangles,
    fibonacci_sphere,
    gauss_legendre,
    icosahedron_triangles,
    integrate_circle,
    integrate_interval,
    integrate_sphere,
    integrate_spherical_polygon,
    integrate_spherical_triangles,
    integrate_with_log_endpoint,
    panel_nodes,
    sphere_rule,
    spherical_polygon_area,
    spherical_triangle_area,
    triangle_nodes,
)


def test_gauss_legendre_polynomial_exactness():
    # a k-point rule integrates degree 2k-1 exactly
    for k in (4, 8, 16, 32):
        x, w = gauss_legendre(k)
        p = 2 * k - 1
        val = float(np.sum(w * x**p))
        assert val == pytest.approx(0.0, abs=1e-14)
        val = float(np.sum(w * x ** (p - 1)))
        assert val == pytest.approx(2.0 / p, rel=1e-14)


def test_integrate_interval_smooth():
    val, err = integrate_interval(np.sin, 0.0, np.pi)
    assert val == pytest.approx(2.0, abs=1e-13)
    assert err < 1e-10


def test_adaptive_panels_refine_near_feature():
    # a sharp bump forces refinement; nodes from the panels still integrate it
    fn = lambda t: 1.0 / (1e-4 + (t - 0.3) ** 2)
    panels, _, _ = adaptive_panels(fn, 0.0, 1.0, atol=1e-12, rtol=1e-12)
    x, w = panel_nodes(panels)
    exact = (np.arctan(0.7 / 1e-2) + np.arctan(0.3 / 1e-2)) / 1e-2
    assert float(np.sum(w * fn(x))) == pytest.approx(exact, rel=1e-11)
    assert panels.shape[0] > 4


def test_integrate_circle_constant_and_kink():
    val, _ = integrate_circle(lambda th: np.ones_like(th))
    assert val == pytest.approx(2.0 * np.pi, rel=1e-14)
    # |cos| has kinks at pi/2 and 3pi/2; total is 4
    val, _ = integrate_circle(lambda th: np.abs(np.cos(th)),
                              kinks=(np.pi / 2, 3 * np.pi / 2))
    assert val == pytest.approx(4.0, rel=1e-12)


def test_log_endpoint_singularity():
    val, _ = integrate_with_log_endpoint(np.log, 0.0, 1.0, singular_at_a=True)
    assert val == pytest.approx(-1.0, abs=1e-10)
    val, _ = integrate_with_log_endpoint(lambda t: np.log(2.0 - t), 1.0, 2.0,
                                         singular_at_a=False)
    assert val == pytest.approx(-1.0, abs=1e-10)


def test_spherical_triangle_area_octant():
    e = np.eye(3)
    assert spherical_triangle_area(e[0], e[1], e[2]) == pytest.approx(np.pi / 2,
                                                                      rel=1e-14)


def test_icosahedron_covers_sphere():
    tris = icosahedron_triangles()
    total = sum(spherical_triangle_area(*t) for t in tris)
    assert total == pytest.approx(4.0 * np.pi, rel=1e-12)


def test_triangle_nodes_weight_sum_converges_to_area():
    tris = np.asarray(icosahedron_triangles()[:4])
    total = sum(spherical_triangle_area(*t) for t in tris)
    sums = []
    for _ in range(3):
        x, w = triangle_nodes(tris)
        assert np.allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-14)
        sums.append(abs(float(np.sum(w)) - total))
        tris = _subdivide(tris)
    # fixed rule per triangle, so the defect shrinks fast under subdivision
    assert sums[2] < 3e-2 * sums[0]
    assert sums[2] < 1e-5


def test_integrate_sphere_moments():
    val, _ = integrate_sphere(lambda x: np.ones(len(x)))
    assert val == pytest.approx(4.0 * np.pi, rel=1e-9)
    val, _ = integrate_sphere(lambda x: x[:, 2] ** 2)
    assert val == pytest.approx(4.0 * np.pi / 3.0, rel=1e-9)
    val, _ = integrate_sphere(lambda x: x[:, 0])
    assert val == pytest.approx(0.0, abs=1e-12)


def test_integrate_sphere_kink_axes():
    # |x . e3| is non-smooth along the equator; the pre-split handles it
    val, _ = integrate_sphere(lambda x: np.abs(x[:, 2]), rtol=1e-5,
                              kink_axes=(np.array([0.0, 0.0, 1.0]),))
    assert val == pytest.approx(2.0 * np.pi, abs=1e-6)


def test_spherical_polygon_octant():
    verts = np.eye(3)
    assert spherical_polygon_area(verts) == pytest.approx(np.pi / 2, rel=1e-12)
    val, _ = integrate_spherical_polygon(lambda x: np.ones(len(x)), verts)
    assert val == pytest.approx(np.pi / 2, rel=1e-8)


def test_integrate_spherical_triangles_quadratic():
    tris = icosahedron_triangles()
    val, _ = integrate_spherical_triangles(lambda x: x[:, 0] * x[:, 1] + 1.0,
                                           tris, rtol=1e-10)
    assert val == pytest.approx(4.0 * np.pi, rel=1e-9)


def test_fan_triangles_partition_polygon():
    verts = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0.1], [0, -1.0, 0.1]])
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    tris = fan_triangles(verts)
    assert len(tris) == len(verts)
    total = sum(spherical_triangle_area(*t) for t in tris)
    assert total == pytest.approx(spherical_polygon_area(verts), rel=1e-12)


def test_probe_grids():
    x = fibonacci_sphere(257)
    assert x.shape == (257, 3)
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-12)
    g = circle_grid(64)
    assert g.shape == (64, 2)
    # equal spacing: consecutive dot products are constant
    d = np.einsum("ij,ij->i", g, np.roll(g, -1, axis=0))
    assert np.ptp(d) < 1e-12


def test_sphere_rule_mass():
    x, w = sphere_rule(level=3)
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-12)
    assert float(np.sum(w)) == pytest.approx(4.0 * np.pi, rel=1e-6)
