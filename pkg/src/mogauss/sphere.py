"""Finite and density measures on the unit sphere, with the margin
functionals that the existence conditions are stated in.

A measure is either ATOMIC (finitely many weighted directions) or DENSITY
(a nonnegative density against spherical Lebesgue measure).  The margin
functionals all have the shape  min over unit u of  integral K(xi . u)
d mu(xi)  for a kernel K:

* hemisphere margin:      K(s) = max(s, 0),
* even subsphere margin:  K(s) = |s|,
* log-cosine bound:       K(s) = log|s|  (density measures only).

A positive hemisphere margin says the measure is not concentrated on any
closed hemisphere; a positive subsphere margin says an even measure is not
concentrated on any great subsphere; a finite log-cosine bound is the
integrability condition the entropy problem needs.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import DegenerateMeasureError, EvennessError, InputError, QuadratureError
from .quadrature import (
    fibonacci_sphere,
    integrate_circle,
    integrate_interval,
    integrate_sphere,
    integrate_with_log_endpoint,
    sphere_rule,
)

DEFAULT_RTOL = {2: 1e-10, 3: 1e-6}

_MERGE_ANGLE = 1e-10


def _as_unit_rows(dirs, what: str) -> np.ndarray:
    arr = np.asarray(dirs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise InputError(f"{what} must be an array of 2- or 3-vectors")
    nrm = np.linalg.norm(arr, axis=1)
    if np.any(np.abs(nrm - 1.0) > 1e-8):
        raise InputError(f"{what} must be unit vectors")
    return arr / nrm[:, None]


def _merge_atoms(dirs: np.ndarray, masses: np.ndarray):
    kept_dirs, kept_masses = [], []
    for d, m in zip(dirs, masses):
        for j, kd in enumerate(kept_dirs):
            if np.linalg.norm(kd - d) <= _MERGE_ANGLE:
                kept_masses[j] += m
                break
        else:
            kept_dirs.append(d.copy())
            kept_masses.append(float(m))
    return np.array(kept_dirs), np.array(kept_masses)


class SphericalMeasure:
    """A finite Borel measure on S^{dim-1}, atomic or with a density."""

    def __init__(self, *, dim, kind, dirs=None, masses=None, density=None,
                 kinks=(), kink_axes=(), even=None, spec=None):
        self.dim = int(dim)
        self.kind = kind
        self._dirs = dirs
        self._masses = masses
        self._density = density
        self.kinks = tuple(float(k) for k in kinks)
        self.kink_axes = tuple(np.asarray(a, dtype=float) for a in kink_axes)
        self._total = None
        self._even = even
        self.spec = spec

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_atoms(cls, dirs, masses) -> "SphericalMeasure":
        """Atomic measure.  Masses must be positive; directions closer than
        1e-10 radians are treated as one atom and their masses added."""
        dirs = _as_unit_rows(dirs, "atom directions")
        masses = np.asarray(masses, dtype=float)
        if masses.shape != (dirs.shape[0],):
            raise InputError("need one mass per atom direction")
        if not np.all(np.isfinite(masses)) or np.any(masses <= 0.0):
            raise InputError("atom masses must be positive and finite")
        dirs, masses = _merge_atoms(dirs, masses)
        spec = {"dim": dirs.shape[1], "type": "atoms",
                "directions": [list(map(float, d)) for d in dirs],
                "masses": [float(m) for m in masses]}
        return cls(dim=dirs.shape[1], kind="atoms", dirs=dirs, masses=masses, spec=spec)

    @classmethod
    def from_density(cls, dim, density, kinks=(), kink_axes=(), even=None,
                     spec=None) -> "SphericalMeasure":
        """Density measure.  ``density`` maps an (m, dim) array of unit
        vectors to an (m,) array of nonnegative values.  ``kinks`` (angles,
        dim 2) or ``kink_axes`` (directions, dim 3) mark where the density
        is continuous but not smooth, so quadrature can split there.  The
        evenness flag is probed when not supplied."""
        if int(dim) not in (2, 3):
            raise InputError("dim must be 2 or 3")
        meas = cls(dim=int(dim), kind="density", density=density, kinks=kinks,
                   kink_axes=kink_axes, even=even, spec=spec)
        probe = meas.density(meas._probe_grid())
        if not np.all(np.isfinite(probe)) or np.any(probe < 0.0):
            raise InputError("density must be finite and nonnegative")
        return meas

    @classmethod
    def uniform(cls, dim) -> "SphericalMeasure":
        """Spherical Lebesgue measure (total 2 pi on S^1, 4 pi on S^2)."""
        return cls.from_density(dim, lambda x: np.ones(np.atleast_2d(x).shape[0]),
                                even=True, spec={"dim": int(dim), "type": "density",
                                                 "density": "uniform"})

    # -- basic access ------------------------------------------------------

    @property
    def is_atomic(self) -> bool:
        return self.kind == "atoms"

    @property
    def atom_directions(self) -> np.ndarray:
        if not self.is_atomic:
            raise InputError("not an atomic measure")
        return self._dirs

    @property
    def atom_masses(self) -> np.ndarray:
        if not self.is_atomic:
            raise InputError("not an atomic measure")
        return self._masses

    def density(self, x) -> np.ndarray:
        if self.is_atomic:
            raise InputError("atomic measure has no density")
        return np.asarray(self._density(np.atleast_2d(np.asarray(x, dtype=float))), dtype=float)

    def _probe_grid(self) -> np.ndarray:
        if self.dim == 2:
            th = np.linspace(0.0, 2.0 * np.pi, 65)[:-1] + 0.0123
            return np.column_stack([np.cos(th), np.sin(th)])
        return fibonacci_sphere(128)

    @property
    def even(self) -> bool:
        """True when the measure is invariant under xi -> -xi."""
        if self._even is None:
            if self.is_atomic:
                self._even = self._atoms_even()
            else:
                g = self._probe_grid()
                a, b = self.density(g), self.density(-g)
                scale = max(float(np.max(np.abs(a))), 1e-300)
                self._even = bool(np.max(np.abs(a - b)) <= 1e-10 * scale)
        return self._even

    def _atoms_even(self) -> bool:
        for d, m in zip(self._dirs, self._masses):
            hit = np.where(np.linalg.norm(self._dirs + d, axis=1) <= 1e-10)[0]
            if hit.size != 1 or abs(self._masses[hit[0]] - m) > 1e-10 * max(1.0, abs(m)):
                return False
        return True

    # -- integration -------------------------------------------------------

    def integrate(self, fn, kinks=(), kink_axes=(), rtol=None, atol=0.0) -> float:
        """Integral of fn against the measure.

        fn maps an (m, dim) array of unit vectors to (m,) values.  Extra
        kinks of fn itself can be declared per call.  A non-finite fn value
        at any node is an error that names the node.
        """
        if self.is_atomic:
            vals = np.asarray(fn(self._dirs), dtype=float)
            if vals.shape != (self._dirs.shape[0],):
                vals = np.array([float(fn(d[None, :])) for d in self._dirs])
            if not np.all(np.isfinite(vals)):
                bad = self._dirs[~np.isfinite(vals)][0]
                raise QuadratureError(f"integrand is not finite at atom {bad}")
            return float(np.sum(vals * self._masses))
        rtol = DEFAULT_RTOL[self.dim] if rtol is None else rtol
        if self.dim == 2:
            def g(th):
                th = np.atleast_1d(th)
                x = np.column_stack([np.cos(th), np.sin(th)])
                return self.density(x) * np.asarray(fn(x), dtype=float)
            val, _ = integrate_circle(g, kinks=tuple(self.kinks) + tuple(kinks),
                                      atol=atol, rtol=rtol)
            return val
        def g3(x):
            return self.density(x) * np.asarray(fn(x), dtype=float)
        val, _ = integrate_sphere(g3, rtol=rtol, atol=atol,
                                  kink_axes=tuple(self.kink_axes) + tuple(kink_axes))
        return val

    def total_mass(self) -> float:
        if self._total is None:
            if self.is_atomic:
                self._total = float(np.sum(self._masses))
            else:
                self._total = self.integrate(lambda x: np.ones(np.atleast_2d(x).shape[0]))
            if self._total <= 0.0:
                raise DegenerateMeasureError("measure has nonpositive total mass")
        return self._total

    # -- transforms --------------------------------------------------------

    def rotated(self, R) -> "SphericalMeasure":
        R = np.asarray(R, dtype=float)
        if R.shape != (self.dim, self.dim):
            raise InputError("rotation matrix has the wrong shape")
        if self.is_atomic:
            return SphericalMeasure.from_atoms(self._dirs @ R.T, self._masses.copy())
        p = self._density
        if self.dim == 2:
            c, s = R[0, 0], R[1, 0]
            dphi = float(np.arctan2(s, c))
            kinks = tuple(k + dphi for k in self.kinks)
            return SphericalMeasure.from_density(2, lambda x: p(np.atleast_2d(x) @ R),
                                                 kinks=kinks, even=self._even)
        axes = tuple(R @ a for a in self.kink_axes)
        return SphericalMeasure.from_density(3, lambda x: p(np.atleast_2d(x) @ R),
                                             kink_axes=axes, even=self._even)

    def scaled(self, c: float) -> "SphericalMeasure":
        c = float(c)
        if c <= 0.0:
            raise InputError("measure scale factor must be positive")
        if self.is_atomic:
            return SphericalMeasure.from_atoms(self._dirs, c * self._masses)
        p = self._density
        return SphericalMeasure.from_density(self.dim, lambda x: c * p(x),
                                             kinks=self.kinks, kink_axes=self.kink_axes,
                                             even=self._even)

    def __repr__(self):
        if self.is_atomic:
            return f"SphericalMeasure(dim={self.dim}, {len(self._masses)} atoms)"
        return f"SphericalMeasure(dim={self.dim}, density)"


def is_even(measure: SphericalMeasure) -> bool:
    return measure.even


def tilted_cosine_squared(dim, axis, amplitude) -> SphericalMeasure:
    """Density 1 + amplitude * (x . axis)^2: smooth, even, anisotropic.

    amplitude must exceed -1 so the density stays positive.
    """
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    a = float(amplitude)
    if a <= -1.0:
        raise InputError("amplitude must be > -1 for a positive density")
    spec = {"dim": int(dim), "type": "density", "density": "tilted_cos2",
            "params": {"axis": [float(v) for v in axis], "amplitude": a}}
    return SphericalMeasure.from_density(
        dim, lambda x: 1.0 + a * (np.atleast_2d(x) @ axis) ** 2,
        even=True, spec=spec)


def offset_abs_cosine(dim, axis, offset) -> SphericalMeasure:
    """Density offset + |x . axis|: even, continuous, kinked on the great
    subsphere orthogonal to the axis.  The kink locations are declared so
    quadrature can split there."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    c = float(offset)
    if c < 0.0:
        raise InputError("offset must be nonnegative")
    spec = {"dim": int(dim), "type": "density", "density": "abs_cos",
            "params": {"axis": [float(v) for v in axis], "offset": c}}
    if int(dim) == 2:
        phi = float(np.arctan2(axis[1], axis[0]))
        kinks = (phi + 0.5 * np.pi, phi + 1.5 * np.pi)
        return SphericalMeasure.from_density(
            2, lambda x: c + np.abs(np.atleast_2d(x) @ axis),
            kinks=kinks, even=True, spec=spec)
    return SphericalMeasure.from_density(
        3, lambda x: c + np.abs(np.atleast_2d(x) @ axis),
        kink_axes=(axis,), even=True, spec=spec)


# ---------------------------------------------------------------------------
# margin functionals


def _kernel(name):
    if name == "pos":
        return lambda s: np.maximum(s, 0.0)
    if name == "abs":
        return np.abs
    raise ValueError(name)


def _coarse_us(dim):
    if dim == 2:
        th = 2.0 * np.pi * np.arange(4096) / 4096
        return np.column_stack([np.cos(th), np.sin(th)])
    return fibonacci_sphere(8192)


def _density_grid(measure):
    """Fixed nodes/weights and sampled density for coarse margin scans."""
    if measure.dim == 2:
        n = 16384
        th = 2.0 * np.pi * np.arange(n) / n
        nodes = np.column_stack([np.cos(th), np.sin(th)])
        w = np.full(n, 2.0 * np.pi / n)
    else:
        nodes, w = sphere_rule(level=4)
    return nodes, w * measure.density(nodes)


def _margin_exact_atomic(measure, kern, u):
    s = measure.atom_directions @ u
    return float(np.sum(measure.atom_masses * kern(s)))


def _margin_atomic_exact(measure, kern, us):
    """Exact atomic margin via the finite minimizer candidate set.

    Between sign changes of the dots xi_i . u the margin is a single
    sinusoid along any great circle, so it has no interior minimum above
    zero; the minimizing pole is a breakpoint (2D: a direction orthogonal
    to an atom) or an arrangement vertex (3D: orthogonal to two atoms).
    Local refinement can stall ~1e-7 above an exact-zero margin, which is
    fatal when the margin is a degeneracy certificate.
    """
    dirs = measure.atom_directions
    cands = [us, dirs, -dirs]
    if measure.dim == 2:
        perp = np.column_stack([-dirs[:, 1], dirs[:, 0]])
        cands += [perp, -perp]
    elif dirs.shape[0] <= 512:
        cross = np.cross(dirs[:, None, :], dirs[None, :, :]).reshape(-1, 3)
        nrm = np.linalg.norm(cross, axis=1)
        keep = nrm > 1e-12
        if np.any(keep):
            cross = cross[keep] / nrm[keep][:, None]
            cands += [cross, -cross]
    cu = np.concatenate(cands)
    best_val, best_u = np.inf, cu[0]
    for lo in range(0, cu.shape[0], 4096):
        block = cu[lo:lo + 4096]
        vals = kern(block @ dirs.T) @ measure.atom_masses
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_u = float(vals[j]), block[j]
    return best_val, best_u


def _margin_quad_density(measure, kern_name, u, rtol):
    """Accurate kernel integral for a density measure at one pole u."""
    kern = _kernel(kern_name)
    if measure.dim == 2:
        phi = float(np.arctan2(u[1], u[0]))
        cut = (phi - np.pi / 2.0, phi + np.pi / 2.0)

        def g(th):
            th = np.atleast_1d(th)
            x = np.column_stack([np.cos(th), np.sin(th)])
            return measure.density(x) * kern(np.cos(th - phi))

        val, _ = integrate_circle(g, kinks=tuple(measure.kinks) + cut, rtol=rtol)
        return val
    # colatitude bands around the pole: the kernel's crease sits on the
    # equator theta = pi/2 alone, so two smooth 1-D integrals suffice.
    # Triangle subdivision against the crease is far more expensive.
    a = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    nphi = 1024
    ph = 2.0 * np.pi * np.arange(nphi) / nphi
    ring = np.outer(np.cos(ph), e1) + np.outer(np.sin(ph), e2)

    def band(thetas):
        thetas = np.atleast_1d(thetas)
        out = np.empty_like(thetas)
        for i, th in enumerate(thetas):
            pts = np.sin(th) * ring + np.cos(th) * u[None, :]
            mean_p = float(np.mean(measure.density(pts)))
            out[i] = 2.0 * np.pi * mean_p * kern(np.cos(th)) * np.sin(th)
        return out

    eq = np.pi / 2.0
    v1, _ = integrate_interval(band, 0.0, eq, rtol=rtol)
    v2, _ = integrate_interval(band, eq, np.pi, rtol=rtol)
    return v1 + v2


def _refine_margin(measure, u0, evaluate):
    """Local minimization around the coarse argmin u0."""
    if measure.dim == 2:
        phi0 = float(np.arctan2(u0[1], u0[0]))
        h = 2.0 * np.pi / 4096

        def f(phi):
            return evaluate(np.array([np.cos(phi), np.sin(phi)]))

        res = minimize_scalar(f, bounds=(phi0 - 2 * h, phi0 + 2 * h), method="bounded",
                              options={"xatol": 1e-10})
        u = np.array([np.cos(res.x), np.sin(res.x)])
        return float(res.fun), u
    # tangent chart at u0
    a = np.array([1.0, 0.0, 0.0]) if abs(u0[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u0, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u0, e1)
    h = np.sqrt(4.0 * np.pi / 8192)

    def f(ab):
        v = u0 + ab[0] * e1 + ab[1] * e2
        return evaluate(v / np.linalg.norm(v))

    res = minimize(f, np.zeros(2), method="Nelder-Mead",
                   options={"xatol": 1e-5, "fatol": 1e-9, "initial_simplex":
                            np.array([[0.0, 0.0], [h, 0.0], [0.0, h]]), "maxfev": 80})
    v = u0 + res.x[0] * e1 + res.x[1] * e2
    v /= np.linalg.norm(v)
    return float(res.fun), v


def _margin(measure, kern_name):
    kern = _kernel(kern_name)
    us = _coarse_us(measure.dim)
    if measure.is_atomic:
        return _margin_atomic_exact(measure, kern, us)
    nodes, pw = _density_grid(measure)
    best_val, best_u = np.inf, None
    for lo in range(0, us.shape[0], 512):
        block = us[lo:lo + 512]
        vals = kern(block @ nodes.T) @ pw
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_u = float(vals[j]), block[j]
    rtol = 1e-11 if measure.dim == 2 else 1e-7
    return _refine_margin(measure, best_u,
                          lambda u: _margin_quad_density(measure, kern_name, u, rtol))


def hemisphere_margin(measure: SphericalMeasure):
    """min over unit u of the measure's integral of max(xi . u, 0).

    Zero exactly when the measure lives on a closed hemisphere; the
    returned direction is the minimizing pole.
    """
    return _margin(measure, "pos")


def subsphere_margin_even(measure: SphericalMeasure):
    """min over unit u of the integral of |xi . u|, for even measures.

    Zero exactly when the (even) measure is concentrated on the great
    subsphere orthogonal to the returned direction.
    """
    if not measure.even:
        raise EvennessError("subsphere margin is defined for even measures")
    return _margin(measure, "abs")


# -- log-cosine bound -------------------------------------------------------


def _log_kernel_2d(measure, phi, rtol=1e-11):
    """Integral of p(theta) log|cos(theta - phi)| over the circle.

    Splits at the two zeros of the cosine and at the measure's own kinks;
    panels touching a zero use geometric end shells down to width 1e-14.
    """
    two_pi = 2.0 * np.pi
    sing = np.mod(np.array([phi - np.pi / 2.0, phi + np.pi / 2.0]), two_pi)
    cand = [sing]
    if measure.kinks:
        cand.append(np.asarray(measure.kinks, dtype=float))
    cuts = np.sort(np.mod(np.concatenate(cand), two_pi))
    cuts = cuts[np.concatenate([[True], np.diff(cuts) > 1e-12])]
    edges = np.concatenate([cuts, [cuts[0] + two_pi]])

    def g(th):
        th = np.atleast_1d(th)
        x = np.column_stack([np.cos(th), np.sin(th)])
        return measure.density(x) * np.log(np.abs(np.cos(th - phi)))

    def is_sing(angle):
        d = np.abs(np.mod(angle - sing + np.pi, two_pi) - np.pi)
        return bool(np.min(d) < 1e-9)

    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 1e-12:
            continue
        s_lo, s_hi = is_sing(lo), is_sing(hi)
        if s_lo and s_hi:
            mid = 0.5 * (lo + hi)
            total += integrate_with_log_endpoint(g, lo, mid, True, atol=rtol)[0]
            total += integrate_with_log_endpoint(g, mid, hi, False, atol=rtol)[0]
        elif s_lo:
            total += integrate_with_log_endpoint(g, lo, hi, True, atol=rtol)[0]
        elif s_hi:
            total += integrate_with_log_endpoint(g, lo, hi, False, atol=rtol)[0]
        else:
            total += integrate_interval(g, lo, hi, atol=rtol, rtol=rtol)[0]
    return total


def _log_kernel_3d(measure, u, rtol=1e-8):
    """Integral of p(xi) log|xi . u| over S^2, by colatitude bands.

    The inner integral over each latitude circle is smooth and periodic
    (trapezoid, 512 nodes); the outer colatitude integral has a log
    singularity at the equator, handled with geometric end shells.
    """
    a = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    nphi = 512
    ph = 2.0 * np.pi * np.arange(nphi) / nphi
    ring = np.outer(np.cos(ph), e1) + np.outer(np.sin(ph), e2)

    def band(thetas):
        thetas = np.atleast_1d(thetas)
        out = np.empty_like(thetas)
        for i, th in enumerate(thetas):
            pts = np.sin(th) * ring + np.cos(th) * u[None, :]
            mean_p = float(np.mean(measure.density(pts)))
            out[i] = 2.0 * np.pi * mean_p * np.log(abs(np.cos(th))) * np.sin(th)
        return out

    eq = np.pi / 2.0
    v1 = integrate_with_log_endpoint(band, 0.0, eq, False, atol=rtol)[0]
    v2 = integrate_with_log_endpoint(band, eq, np.pi, True, atol=rtol)[0]
    return v1 + v2


def log_cosine_bound(measure: SphericalMeasure):
    """min over unit u of the integral of log|xi . u|, density measures only.

    Returns (value, u); value is -inf when the integral diverges at the
    minimizing pole.  Atomic measures are rejected: placing u orthogonal to
    any atom always drives the integral to -inf.
    """
    if measure.is_atomic:
        raise InputError("the log-cosine bound is defined for density measures")
    us = _coarse_us(measure.dim)[::4]
    nodes, pw = _density_grid(measure)
    best_val, best_u = np.inf, None
    for lo in range(0, us.shape[0], 512):
        block = us[lo:lo + 512]
        dots = np.abs(block @ nodes.T)
        vals = np.log(np.maximum(dots, 1e-300)) @ pw
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_u = float(vals[j]), block[j]

    if measure.dim == 2:
        def ev(u):
            return _log_kernel_2d(measure, float(np.arctan2(u[1], u[0])))
    else:
        def ev(u):
            return _log_kernel_3d(measure, u)
    val, u = _refine_margin(measure, best_u, ev)
    if not np.isfinite(val) or val < -1e9:
        return float("-inf"), u
    return val, u
