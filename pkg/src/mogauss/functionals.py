"""Dual volumes, entropy, and the family of Gauss-image measures.

Everything in this module reduces to integrals over the radial cells of a
polytope.  On the cell of facet i the radial function has the closed form
rho(xi) = h_i / (xi . u_i), so each weight is one adaptive cell integral
divided by a facet-level factor; no ray-shooting happens at quadrature
nodes.  Inactive facets always carry weight exactly 0, which realizes the
absolute continuity of these measures with respect to the surface area
measure.

The central object is the triple (volume integrand, addition chart, base
measure).  The volume integrand G defines the dual volume; the addition
chart Psi enters through its t-derivative in the weight denominators; the
base measure is the lambda the cells are measured with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import Polytope, RadialSampleBody
from .errors import ConvexityError, InputError, OutOfClassError
from .mofunctions import MOFunction, log_t, reciprocal_transform
from .quadrature import (
    _presplit_at_planes,
    fan_triangles,
    integrate_interval,
    integrate_spherical_triangles,
)
from .sphere import SphericalMeasure

CELL_ATOL_2D = 1e-10
CELL_RTOL_3D = 1e-6


@dataclass(frozen=True)
class Triple:
    """The data (G, Psi, lambda) that the measures are built from.

    volume_integrand: the dual-volume integrand G.
    addition_chart:   the function Psi whose t-derivative appears in the
                      weight denominators and whose addition defines the
                      perturbations; must be declared strictly monotone
                      (tag CI or Cd).
    base_measure:     a density measure lambda on the sphere.
    """

    volume_integrand: MOFunction
    addition_chart: MOFunction
    base_measure: SphericalMeasure = field(compare=False)

    def __post_init__(self):
        if not ({"CI", "Cd"} & self.addition_chart.class_tags):
            raise InputError("the addition chart must be declared CI or Cd")
        if self.base_measure.is_atomic:
            raise InputError("the triple's base measure must be a density measure")

    def with_tilde_chart(self) -> "Triple":
        """The same triple with the chart replaced by its reciprocal
        transform (t -> 1/t)."""
        return Triple(self.volume_integrand, reciprocal_transform(self.addition_chart),
                      self.base_measure)

    def describe(self) -> dict:
        return {
            "volume_integrand": self.volume_integrand.name,
            "addition_chart": self.addition_chart.name,
            "base_measure": "atoms" if self.base_measure.is_atomic else "density",
        }


def log_log_triple(base_measure: SphericalMeasure) -> Triple:
    """The classical triple (log t, log t, lambda), for which the tilde
    measure is exactly the Gauss-image pullback of lambda."""
    return Triple(log_t(), log_t(), base_measure)


@dataclass(frozen=True)
class SignedSphericalMeasure:
    """Finitely many weighted directions; weights may have either sign.

    The image measures of a polytope live on its full facet normal list,
    with exact zeros at inactive facets.
    """

    directions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if d.ndim != 2 or w.shape != (d.shape[0],):
            raise InputError("need one weight per direction")
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def total(self) -> float:
        # np.sum uses pairwise summation with a fixed order
        return float(np.sum(self.weights))

    def integrate(self, fn) -> float:
        vals = np.asarray(fn(self.directions), dtype=float)
        return float(np.sum(self.weights * vals))

    def weight_at(self, u, angular_tol: float = 1e-10) -> float:
        """Weight of the atom within angular_tol of u, or 0.0 if none."""
        d = np.linalg.norm(self.directions - np.asarray(u, dtype=float), axis=1)
        j = int(np.argmin(d))
        return float(self.weights[j]) if d[j] <= angular_tol else 0.0

    def __len__(self):
        return self.weights.shape[0]


# ---------------------------------------------------------------------------
# cell integration engine


def _split_points_2d(kinks, a, b):
    """Measure kink angles falling strictly inside (a, b), b possibly > 2pi."""
    if not kinks:
        return []
    ks = np.mod(np.asarray(kinks, dtype=float), 2.0 * np.pi)
    ks = np.concatenate([ks, ks + 2.0 * np.pi])
    inside = ks[(ks > a + 1e-13) & (ks < b - 1e-13)]
    return sorted(set(float(k) for k in inside))


def _cell_integral(body: Polytope, lam: SphericalMeasure, i: int, field_fn,
                   atol2d=CELL_ATOL_2D, rtol3d=CELL_RTOL_3D) -> float:
    """Integral over facet i's radial cell of field_fn(x, rho) d lambda.

    field_fn maps (unit directions (q, dim), radial values (q,)) to (q,)
    values; rho is the facet's closed form h_i / (x . u_i).
    """
    cell = body.radial_cells()[i]
    if cell is None:
        return 0.0
    u = body.normals[i]
    h = body.support[i]
    if body.dim == 2:
        a, b = cell

        def g(th):
            th = np.atleast_1d(th)
            x = np.column_stack([np.cos(th), np.sin(th)])
            rho = h / (x @ u)
            return lam.density(x) * np.asarray(field_fn(x, rho), dtype=float)

        edges = [a] + _split_points_2d(lam.kinks, a, b) + [b]
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi - lo <= 1e-14:
                continue
            total += integrate_interval(g, lo, hi, atol=atol2d * (hi - lo) / (b - a),
                                        rtol=0.0)[0]
        return total

    def g3(x):
        rho = h / (x @ u)
        return lam.density(x) * np.asarray(field_fn(x, rho), dtype=float)

    tris = fan_triangles(cell)
    if lam.kink_axes:
        tris = _presplit_at_planes(tris, lam.kink_axes, depth=4)
    val, _ = integrate_spherical_triangles(g3, tris, rtol=rtol3d, atol=1e-14)
    return val


def _cell_integrals(body, lam, field_fn):
    out = np.zeros(len(body.support))
    for i in range(len(body.support)):
        if body.active[i]:
            out[i] = _cell_integral(body, lam, i, field_fn)
    return out


# ---------------------------------------------------------------------------
# scalar functionals


def dual_volume(volume_integrand: MOFunction, lam: SphericalMeasure, body) -> float:
    """The general dual volume: integral of G(xi, rho(xi)) d lambda.

    ``body`` is a Polytope (cell-exact quadrature) or a callable mapping an
    array of unit directions to positive radial values (direct quadrature
    against lambda).
    """
    if lam.is_atomic:
        raise InputError("dual volume needs a density base measure")
    if isinstance(body, Polytope):
        if lam.dim != body.dim:
            raise InputError("measure and body dimensions differ")
        vals = _cell_integrals(body, lam,
                               lambda x, rho: volume_integrand.value(x, rho))
        return float(np.sum(vals))
    radial = body

    def g(x):
        r = np.asarray(radial(x), dtype=float)
        if np.any(r <= 0.0):
            raise InputError("radial values must be positive")
        return volume_integrand.value(x, r)

    return lam.integrate(g)


def entropy(lam: SphericalMeasure, body: Polytope) -> float:
    """The entropy of the body: integral of log rho of the polar body,
    equivalently minus the integral of log of the support function.
    Zero for the unit ball."""
    return dual_volume(log_t(), lam, body.polar())


# ---------------------------------------------------------------------------
# image measures


def _check_denominators(psi: MOFunction, dirs, ts, active, what: str):
    """Psi_t at the facet points; reject near-zero or wrong-signed values."""
    den = np.zeros(len(ts))
    act = np.where(active)[0]
    if act.size == 0:
        raise InputError("body has no active facets")
    den[act] = psi.t_deriv(dirs[act], ts[act])
    mx = float(np.max(np.abs(den[act])))
    for i in act:
        if abs(den[i]) < 1e-12 * mx:
            raise OutOfClassError(
                f"{what}: chart derivative vanishes at facet {i} "
                f"(|Psi_t| = {abs(den[i]):.3e} < 1e-12 * {mx:.3e})")
        if "CI" in psi.class_tags and den[i] <= 0.0:
            raise OutOfClassError(f"{what}: chart declared increasing but its "
                                  f"derivative is {den[i]:.3e} at facet {i}")
        if "Cd" in psi.class_tags and den[i] >= 0.0:
            raise OutOfClassError(f"{what}: chart declared decreasing but its "
                                  f"derivative is {den[i]:.3e} at facet {i}")
    return den


def _check_integrand_sign(g: MOFunction, body: Polytope):
    """Spot-check the declared sign of G_t at each active cell."""
    if not ({"CI", "Cd"} & g.class_tags):
        return
    for i in np.where(body.active)[0]:
        cell = body.radial_cells()[i]
        if body.dim == 2:
            mid = 0.5 * (cell[0] + cell[1])
            x = np.array([np.cos(mid), np.sin(mid)])
        else:
            x = np.sum(cell, axis=0)
            x = x / np.linalg.norm(x)
        rho = body.support[i] / float(x @ body.normals[i])
        gt = g.t_deriv(x, rho)
        if "CI" in g.class_tags and gt <= 0.0:
            raise OutOfClassError(f"volume integrand declared increasing but its "
                                  f"derivative is {gt:.3e} on the cell of facet {i}")
        if "Cd" in g.class_tags and gt >= 0.0:
            raise OutOfClassError(f"volume integrand declared decreasing but its "
                                  f"derivative is {gt:.3e} on the cell of facet {i}")


def _image_measure(triple: Triple, body: Polytope, polar_denominator: bool,
                   log_volume_integrand: bool) -> SignedSphericalMeasure:
    lam = triple.base_measure
    if lam.dim != body.dim:
        raise InputError("measure and body dimensions differ")
    g = triple.volume_integrand

    if log_volume_integrand:
        # G = log t makes rho * G_t identically 1: the cell integral is
        # lambda of the cell
        field_fn = lambda x, rho: np.ones(np.atleast_2d(x).shape[0])
    else:
        _check_integrand_sign(g, body)
        field_fn = lambda x, rho: rho * g.t_deriv(x, rho)
    cell_ints = _cell_integrals(body, lam, field_fn)

    ts = 1.0 / body.support if polar_denominator else body.support
    what = "polar image measure" if polar_denominator else "image measure"
    den = _check_denominators(triple.addition_chart, body.normals, ts, body.active, what)

    weights = np.zeros(len(body.support))
    act = body.active
    weights[act] = cell_ints[act] / (ts[act] * den[act])
    return SignedSphericalMeasure(body.normals, weights)


def mo_measure(triple: Triple, body: Polytope) -> SignedSphericalMeasure:
    """The Gauss-image measure of the triple: weight at facet i is the cell
    integral of rho G_t(xi, rho) d lambda divided by h_i Psi_t(u_i, h_i).

    For the log-log triple this is exactly the pullback of lambda under
    the radial Gauss image.
    """
    return _image_measure(triple, body, polar_denominator=False,
                          log_volume_integrand=False)


def polar_mo_measure(triple: Triple, body: Polytope) -> SignedSphericalMeasure:
    """The polar variant: the denominator is evaluated at the polar body's
    radial value 1/h_i instead of h_i.  Replacing the chart by its
    reciprocal transform negates the measure: polar(tilde chart) = -plain.
    """
    return _image_measure(triple, body, polar_denominator=True,
                          log_volume_integrand=False)


def mo_surface_area_measure(chart: MOFunction, body: Polytope) -> SignedSphericalMeasure:
    """Facet area divided by the chart derivative at (u_i, h_i).  Agrees
    with mo_measure for G = t^n/n and uniform lambda."""
    den = _check_denominators(chart, body.normals, body.support, body.active,
                              "surface-area measure")
    weights = np.zeros(len(body.support))
    act = body.active
    weights[act] = body.facet_areas[act] / den[act]
    return SignedSphericalMeasure(body.normals, weights)


def j_measure(chart: MOFunction, lam: SphericalMeasure, body: Polytope,
              polar_variant: bool = False) -> SignedSphericalMeasure:
    """The entropy-flavored measure: the volume integrand pinned to log t,
    so each cell integral is just lambda of the cell.

    The polar variant with the tilde chart is the negative of the plain
    variant with the original chart.
    """
    triple = Triple(log_t(), chart, lam)
    return _image_measure(triple, body, polar_denominator=polar_variant,
                          log_volume_integrand=True)


# ---------------------------------------------------------------------------
# smooth-body diagnostics (2D)


def smooth_density_wrt_surface(triple: Triple, body: RadialSampleBody, u) -> float:
    """Density of the Gauss-image measure against surface area measure at
    the outer normal u, for a smooth sampled body.

    The formula is p_lambda(grad h / |grad h|) |grad h|^{1-n}
    G_t(grad h/|grad h|, |grad h|) / Psi_t(u, h(u)), with grad h the full
    spatial gradient of the 1-homogeneous support extension.
    """
    if body.dim != 2:
        raise InputError("smooth densities are implemented on the circle only")
    u = np.asarray(u, dtype=float)
    theta = float(np.arctan2(u[1], u[0]))
    h, hp = body.support_and_derivative(theta)
    grad = hp * np.array([-u[1], u[0]]) + h * u
    gnorm = float(np.hypot(h, hp))
    gdir = grad / gnorm
    lam = triple.base_measure
    p_lam = float(lam.density(gdir[None, :])[0])
    g_t = triple.volume_integrand.t_deriv(gdir, gnorm)
    psi_t = triple.addition_chart.t_deriv(u, h)
    n = body.dim
    return p_lam * gnorm ** (1 - n) * g_t / psi_t


@dataclass(frozen=True)
class ResidualField:
    """Pointwise Monge-Ampere residual on the angular grid."""

    angles: np.ndarray
    residual: np.ndarray
    max_abs: float
    l2_norm: float


def monge_ampere_residual_2d(triple: Triple, support_samples, mu_density,
                             tau: float = 1.0) -> ResidualField:
    """Residual of the planar Monge-Ampere form of the Gauss-image problem.

    support_samples are values of a support function on the uniform
    angular grid theta_j = 2 pi j / N.  The residual at each grid point is

        p_mu - tau * P(grad h) * (h'' + h) * p_lambda(grad h/|grad h|)
                                           / Psi_t(u, h),

    with P(y) = |y|^{1-n} G_t(y/|y|, |y|) and h'' computed spectrally.
    Returns the residual field with its max and L2 norms.  A convexity
    failure (h'' + h <= 0 anywhere) is an error.
    """
    h = np.asarray(support_samples, dtype=float)
    if h.ndim != 1 or h.size < 8:
        raise InputError("need a 1-D grid of at least 8 support samples")
    if np.any(h <= 0.0):
        raise InputError("support samples must be positive")
    n_grid = h.size
    th = 2.0 * np.pi * np.arange(n_grid) / n_grid
    coef = np.fft.rfft(h)
    k = np.arange(coef.size)
    hp = np.fft.irfft(1j * k * coef, n_grid)
    hpp = np.fft.irfft(-(k**2) * coef, n_grid)
    curv = hpp + h
    if np.any(curv <= 0.0):
        j = int(np.argmin(curv))
        raise ConvexityError(f"h'' + h = {curv[j]:.3e} <= 0 at angle {th[j]:.6f}")

    u = np.column_stack([np.cos(th), np.sin(th)])
    t_hat = np.column_stack([-np.sin(th), np.cos(th)])
    grad = hp[:, None] * t_hat + h[:, None] * u
    gnorm = np.hypot(h, hp)
    gdir = grad / gnorm[:, None]

    lam = triple.base_measure
    if lam.is_atomic:
        raise InputError("the base measure must be a density measure")
    p_lam = lam.density(gdir)
    if isinstance(mu_density, SphericalMeasure):
        if mu_density.is_atomic:
            raise InputError("the target measure must be a density measure")
        p_mu = mu_density.density(u)
    else:
        p_mu = np.asarray(mu_density(u), dtype=float)

    g_t = triple.volume_integrand.t_deriv(gdir, gnorm)
    psi_t = triple.addition_chart.t_deriv(u, h)
    big_p = g_t / gnorm  # |y|^{1-n} with n = 2
    residual = p_mu - tau * big_p * curv * p_lam / psi_t
    max_abs = float(np.max(np.abs(residual)))
    l2 = float(np.sqrt(np.sum(residual**2) * (2.0 * np.pi / n_grid)))
    return ResidualField(angles=th, residual=residual, max_abs=max_abs, l2_norm=l2)
