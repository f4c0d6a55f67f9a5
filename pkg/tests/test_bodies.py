"""Polytopes: duality, Wulff/hull constructions, cells, and distances."""

import numpy as np
import pytest

from mogauss.bodies import (
    Polytope,
    RadialSampleBody,
    ball,
    cube,
    gauss_image_pullback,
    hausdorff_distance,
    hull_body,
    random_body,
    simplex,
    square,
    wulff_shape,
)
from mogauss.errors import ConvexityError, InputError
from mogauss.quadrature import circle_grid, fibonacci_sphere
from mogauss.sphere import SphericalMeasure


def probe_dirs(dim, k, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(k, dim))
    return x / np.linalg.norm(x, axis=1)[:, None]


def test_square_geometry():
    sq = square()
    assert sorted(map(tuple, np.round(sq.vertices, 12))) == [
        (-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert sq.inradius == pytest.approx(1.0)
    assert sq.circumradius == pytest.approx(np.sqrt(2.0))
    assert sq.support_value(np.array([1.0, 1.0]) / np.sqrt(2)) == pytest.approx(
        np.sqrt(2.0))
    assert sq.radial_value(np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert np.all(sq.active)


def test_cube_geometry():
    cb = cube()
    assert cb.vertices.shape == (8, 3)
    assert cb.inradius == pytest.approx(1.0)
    assert cb.circumradius == pytest.approx(np.sqrt(3.0))
    d = np.ones(3) / np.sqrt(3.0)
    assert cb.radial_value(d) == pytest.approx(np.sqrt(3.0))
    assert cb.support_value(d) == pytest.approx(np.sqrt(3.0))


def test_simplex_contains_origin():
    for dim in (2, 3):
        s = simplex(dim)
        assert s.dim == dim
        assert s.inradius > 0.0
        assert np.all(s.active)


def test_redundant_facet_is_inactive():
    normals = np.array([[1.0, 0], [0, 1.0], [-1.0, 0], [0, -1.0],
                        [np.sqrt(0.5), np.sqrt(0.5)]])
    support = np.array([1.0, 1.0, 1.0, 1.0, 5.0])
    P = Polytope(normals, support)
    assert list(P.active) == [True, True, True, True, False]
    # the radial map never picks the inactive facet
    idx = P.radial_facet_index(circle_grid(256))
    assert 4 not in set(idx.tolist())


def test_polar_involution_and_support_radial_reciprocity():
    for seed in range(5):
        P = random_body(2, 12, seed)
        PP = P.polar().polar()
        assert hausdorff_distance(P, PP) < 1e-12
        x = probe_dirs(2, 200, seed)
        assert np.max(np.abs(P.polar().support_value(x) * P.radial_value(x) - 1.0)) < 1e-12
    P = random_body(3, 20, 7)
    PP = P.polar().polar()
    assert hausdorff_distance(P, PP) < 1e-9
    x = probe_dirs(3, 200, 7)
    assert np.max(np.abs(P.polar().support_value(x) * P.radial_value(x) - 1.0)) < 1e-10


def test_polar_square_is_diamond():
    d = square().polar()
    assert d.support_value(np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert d.support_value(np.array([1.0, 1.0]) / np.sqrt(2)) == pytest.approx(
        1.0 / np.sqrt(2.0))


def test_wulff_preserves_normal_order():
    th = np.array([0.1, 1.7, 3.0, 4.6])
    dirs = np.column_stack([np.cos(th), np.sin(th)])
    f = np.array([1.0, 1.1, 0.9, 1.05])
    W = wulff_shape(dirs, f)
    assert np.allclose(W.normals, dirs, rtol=0, atol=1e-15)
    assert np.allclose(W.support, f, rtol=0, atol=1e-15)


def test_wulff_hull_duality():
    # [f]* = <1/f> and <f>* = [1/f], on shared direction lists
    rng = np.random.default_rng(3)
    for dim, m, tol in ((2, 14, 1e-12), (3, 24, 1e-9)):
        dirs = probe_dirs(dim, m, seed=dim)
        f = np.exp(rng.uniform(-0.4, 0.4, size=m))
        left = wulff_shape(dirs, f).polar()
        right = hull_body(dirs, 1.0 / f)
        assert hausdorff_distance(left, right) < tol
        left = hull_body(dirs, f).polar()
        right = wulff_shape(dirs, 1.0 / f)
        assert hausdorff_distance(left, right) < tol


def test_radial_extremes_match_radii():
    for P in (random_body(2, 10, 1), random_body(3, 18, 2)):
        x = circle_grid(4096) if P.dim == 2 else fibonacci_sphere(8192)
        rho = P.radial_value(x)
        # a grid only brackets the extremes ...
        assert np.min(rho) >= P.inradius * (1 - 1e-12)
        assert np.max(rho) <= P.circumradius * (1 + 1e-12)
        # ... but they are attained exactly along facet normals and vertices
        assert np.min(P.radial_value(P.normals)) == pytest.approx(
            P.inradius, rel=1e-12)
        vdirs = P.vertices / np.linalg.norm(P.vertices, axis=1)[:, None]
        assert np.max(P.radial_value(vdirs)) == pytest.approx(
            P.circumradius, rel=1e-12)


def test_scaled_and_rotated():
    P = random_body(2, 8, 4)
    Q = P.scaled(2.0)
    x = probe_dirs(2, 50)
    assert np.allclose(Q.support_value(x), 2.0 * P.support_value(x), rtol=1e-14)
    c, s = np.cos(0.3), np.sin(0.3)
    R = np.array([[c, -s], [s, c]])
    Pr = P.rotated(R)
    assert np.allclose(Pr.support_value((R @ x.T).T), P.support_value(x),
                       rtol=0, atol=1e-12)
    with pytest.raises(InputError):
        P.scaled(0.0)


def test_symmetric_random_body():
    P = random_body(2, 12, 5, symmetric=True)
    assert P.is_symmetric()
    Q = random_body(3, 16, 6, symmetric=True)
    assert Q.is_symmetric()
    assert not random_body(2, 9, 5).is_symmetric()


def test_random_body_all_facets_active():
    for seed in range(8):
        assert np.all(random_body(2, 24, seed).active)
    assert np.all(random_body(3, 30, 1).active)


def test_radial_cells_partition_2d():
    P = random_body(2, 9, 11)
    cells = P.radial_cells()
    widths = [b - a for a, b in cells]
    assert np.sum(widths) == pytest.approx(2.0 * np.pi, rel=1e-12)
    # each cell's midpoint ray exits through its own facet
    for i, (a, b) in enumerate(cells):
        mid = 0.5 * (a + b)
        assert P.radial_facet_index(np.array([np.cos(mid), np.sin(mid)])) == i


def test_radial_cells_partition_3d():
    from mogauss.quadrature import spherical_polygon_area
    P = random_body(3, 14, 3)
    total = sum(spherical_polygon_area(c) for c in P.radial_cells())
    assert total == pytest.approx(4.0 * np.pi, rel=1e-9)


def test_reverse_radial_map_agrees_with_polar():
    # the facet of K* hit by a ray is normal to the supporting vertex of K
    for P in (random_body(2, 11, 8), random_body(3, 16, 9)):
        Q = P.polar()
        x = probe_dirs(P.dim, 64, seed=P.dim + 20)
        for xi in x:
            j = Q.radial_facet_index(xi)
            v = P.vertices[np.argmax(P.vertices @ xi)]
            assert np.linalg.norm(Q.normals[j] - v / np.linalg.norm(v)) < 1e-9


def test_gauss_image_pullback_square():
    pb = gauss_image_pullback(SphericalMeasure.uniform(2), square())
    assert np.allclose(pb.atom_masses, np.pi / 2, rtol=1e-12)
    assert pb.total_mass() == pytest.approx(2 * np.pi, rel=1e-12)


def test_gauss_image_pullback_rectangle():
    a, b = 0.8, 1.3
    rect = Polytope(np.array([[1.0, 0], [0, 1.0], [-1.0, 0], [0, -1.0]]),
                    np.array([a, b, a, b]))
    pb = gauss_image_pullback(SphericalMeasure.uniform(2), rect)
    expect = np.array([2 * np.arctan(b / a), 2 * np.arctan(a / b)] * 2)
    assert np.allclose(pb.atom_masses, expect, rtol=1e-12)


def test_gauss_image_pullback_cube():
    pb = gauss_image_pullback(SphericalMeasure.uniform(3), cube())
    assert np.allclose(pb.atom_masses, 4 * np.pi / 6, rtol=1e-6)


def test_hausdorff_scaled_bodies():
    assert hausdorff_distance(square(1.0), square(1.25)) == pytest.approx(
        0.25 * np.sqrt(2.0), rel=1e-12)
    assert hausdorff_distance(cube(1.0), cube(1.25)) == pytest.approx(
        0.25 * np.sqrt(3.0), rel=1e-6)
    assert hausdorff_distance(square(), square()) == 0.0


def test_ball_polytope():
    B = ball(2, m=128, r=2.0)
    x = circle_grid(999)
    assert np.max(np.abs(B.support_value(x) - 2.0)) < 2.0 * (
        1.0 / np.cos(np.pi / 128) - 1.0) + 1e-12
    B3 = ball(3, m=64)
    assert B3.dim == 3 and np.all(B3.active)


def test_from_vertices_round_trip():
    P = random_body(2, 10, 13)
    Q = Polytope.from_vertices(P.vertices)
    assert hausdorff_distance(P, Q) < 1e-12
    P3 = random_body(3, 12, 14)
    Q3 = Polytope.from_vertices(P3.vertices)
    assert hausdorff_distance(P3, Q3) < 1e-10


def test_polytope_needs_interior_origin():
    with pytest.raises(InputError):
        Polytope(np.array([[1.0, 0], [0, 1.0], [-1.0, 0], [0, -1.0]]),
                 np.array([1.0, 1.0, -0.5, 1.0]))


def test_radial_sample_body():
    th = 2 * np.pi * np.arange(512) / 512
    # an ellipse given by radial samples on the implied uniform grid
    rho = 1.0 / np.sqrt((np.cos(th) / 1.5) ** 2 + np.sin(th) ** 2)
    body = RadialSampleBody(rho)
    x = np.array([np.cos(0.37), np.sin(0.37)])
    exact = 1.0 / np.sqrt((x[0] / 1.5) ** 2 + x[1] ** 2)
    assert body.radial_value(x) == pytest.approx(exact, rel=1e-4)


def test_radial_sample_body_from_support():
    # ellipse with semi-axes (1.5, 1): h(u) = sqrt((1.5 ux)^2 + uy^2),
    # and h'' + h = (ab)^2 / h^3
    ell = RadialSampleBody.from_support_function(
        lambda d: np.sqrt((1.5 * d[:, 0]) ** 2 + d[:, 1] ** 2), n=512)
    h, hp = ell.support_and_derivative(0.0)
    assert h == pytest.approx(1.5, rel=1e-9)
    assert abs(hp) < 1e-9
    assert ell.curvature_factor(0.0) == pytest.approx(2.25 / 1.5 ** 3, rel=1e-6)
    th = 0.9
    hh = np.sqrt((1.5 * np.cos(th)) ** 2 + np.sin(th) ** 2)
    assert ell.curvature_factor(th) == pytest.approx(2.25 / hh ** 3, rel=1e-6)


def test_radial_sample_body_rejects_nonconvex():
    th = 2 * np.pi * np.arange(256) / 256
    rho = 1.0 + 0.2 * np.cos(5 * th)
    with pytest.raises(ConvexityError):
        RadialSampleBody(rho)
