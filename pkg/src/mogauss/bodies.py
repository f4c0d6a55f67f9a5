"""Convex polytopes with the origin interior, their polars, and the
radial-Gauss-image combinatorics.

A body is stored by its facet data: unit outward normals u_i and support
numbers h_i > 0.  Facets that do not meet the body (their halfplane is
implied by the others, or touches only at a lower-dimensional face) are
retained in the arrays but flagged inactive; they carry zero facet area and
an empty radial cell, which is exactly the weight the image measures give
them.

Construction is exact-to-float in 2D (angular sort, then adjacent
halfplane intersections) and goes through the dual convex hull in 3D
(vertices of conv{u_i / h_i} are the active facets; dual facet planes give
the body's vertices).

The radial cell of facet i is the set of unit directions xi whose ray
leaves the body through that facet; over the cell, the radial function is
the closed form h_i / (xi . u_i).  All the image-measure integrals in this
package are sums of per-cell integrals of that closed form, never global
ray shooting.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import ConvexityError, HemisphereError, InputError
from .quadrature import fibonacci_sphere, spherical_polygon_area

_DISTINCT_TOL = 1e-10
_REDUNDANT_TOL = 1e-12
_MERGE_TOL = 1e-9
_SUPPORT_TOL = 1e-10


def _unit_rows(arr, what):
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise InputError(f"{what} must be an (m, 2) or (m, 3) array")
    nrm = np.linalg.norm(arr, axis=1)
    if np.any(nrm < 1e-12):
        raise InputError(f"{what} contains a zero vector")
    return arr / nrm[:, None]


def _check_distinct(normals):
    m = normals.shape[0]
    for i in range(m):
        d = np.linalg.norm(normals[i + 1:] - normals[i], axis=1)
        if d.size and np.min(d) <= _DISTINCT_TOL:
            j = i + 1 + int(np.argmin(d))
            raise InputError(f"facet normals {i} and {j} coincide")


def _check_not_hemisphere(normals):
    """Raise unless the normals positively span the space (bounded body)."""
    m, n = normals.shape
    if n == 2:
        ang = np.sort(np.mod(np.arctan2(normals[:, 1], normals[:, 0]), 2.0 * np.pi))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))
        if m < 3 or np.max(gaps) >= np.pi - 1e-12:
            raise HemisphereError("normals lie in a closed halfplane; the body is unbounded")
        return
    # maximize eps s.t. sum(lam_i u_i) = 0, sum(lam_i) = 1, lam_i >= eps
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((n + 1, m + 1))
    A_eq[:n, :m] = normals.T
    A_eq[n, :m] = 1.0
    b_eq = np.zeros(n + 1)
    b_eq[n] = 1.0
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * (m + 1), method="highs")
    if not res.success or -res.fun <= 1e-12:
        raise HemisphereError("normals lie in a closed hemisphere; the body is unbounded")


def _intersect_2d(u1, h1, u2, h2):
    det = u1[0] * u2[1] - u1[1] * u2[0]
    return np.array([(h1 * u2[1] - h2 * u1[1]) / det,
                     (h2 * u1[0] - h1 * u2[0]) / det])


class Polytope:
    """A convex polytope containing the origin in its interior."""

    def __init__(self, normals, support, *, _skip_checks=False):
        normals = _unit_rows(normals, "facet normals")
        support = np.asarray(support, dtype=float)
        if support.shape != (normals.shape[0],):
            raise InputError("need one support number per facet normal")
        if not np.all(np.isfinite(support)) or np.any(support <= 0.0):
            raise InputError("support numbers must be positive and finite")
        if not _skip_checks:
            _check_distinct(normals)
            _check_not_hemisphere(normals)
        self.normals = normals
        self.support = support
        self.dim = normals.shape[1]
        if self.dim == 2:
            self._build_2d()
        else:
            self._build_3d()
        self._verify_support()
        for a in (self.normals, self.support, self.vertices, self.facet_areas):
            a.setflags(write=False)

    # -- construction ------------------------------------------------------

    def _build_2d(self):
        m = self.normals.shape[0]
        ang = np.mod(np.arctan2(self.normals[:, 1], self.normals[:, 0]), 2.0 * np.pi)
        order = list(np.argsort(ang, kind="stable"))
        scale = float(np.max(self.support))
        tol = _REDUNDANT_TOL * scale

        cand = order[:]
        while True:
            removed = False
            k = len(cand)
            if k < 3:
                raise InputError("fewer than three facets remain; inconsistent input")
            j = 0
            while j < len(cand) and len(cand) >= 3:
                k = len(cand)
                ip, jj, kn = cand[(j - 1) % k], cand[j], cand[(j + 1) % k]
                gap = np.mod(ang[kn] - ang[ip], 2.0 * np.pi)
                if 1e-14 < gap < np.pi - 1e-14:
                    v = _intersect_2d(self.normals[ip], self.support[ip],
                                      self.normals[kn], self.support[kn])
                    if float(self.normals[jj] @ v) <= self.support[jj] + tol:
                        cand.pop(j)
                        removed = True
                        continue
                j += 1
            if not removed:
                break

        active = np.zeros(m, dtype=bool)
        active[cand] = True
        k = len(cand)
        verts = np.array([_intersect_2d(self.normals[cand[j]], self.support[cand[j]],
                                        self.normals[cand[(j + 1) % k]],
                                        self.support[cand[(j + 1) % k]])
                          for j in range(k)])
        # vertex j sits between facets cand[j] and cand[j+1]
        self.vertices = verts
        self.active = active
        areas = np.zeros(m)
        fverts = [None] * m
        cells = [None] * m
        vang = np.mod(np.arctan2(verts[:, 1], verts[:, 0]), 2.0 * np.pi)
        for j, fi in enumerate(cand):
            a, b = verts[(j - 1) % k], verts[j]
            areas[fi] = float(np.linalg.norm(b - a))
            fverts[fi] = np.array([(j - 1) % k, j])
            t0, t1 = vang[(j - 1) % k], vang[j]
            if t1 <= t0:
                t1 += 2.0 * np.pi
            cells[fi] = (float(t0), float(t1))
        self.facet_areas = areas
        self.facet_vertex_ids = fverts
        self._cells = cells

    def _build_3d(self):
        m = self.normals.shape[0]
        scale = float(np.max(self.support))
        dual_pts = self.normals / self.support[:, None]
        hull = ConvexHull(dual_pts)
        active = np.zeros(m, dtype=bool)
        active[hull.vertices] = True

        # one primal vertex per dual facet plane; merge the duplicates that
        # triangulation of coplanar dual facets produces
        eqs = hull.equations
        prim = -eqs[:, :3] / eqs[:, 3][:, None]
        order = np.lexsort((prim[:, 2], prim[:, 1], prim[:, 0]))
        vscale = float(np.max(np.linalg.norm(prim, axis=1)))
        groups = []
        for idx in order:
            for g in groups:
                if np.linalg.norm(prim[idx] - prim[g[0]]) <= _MERGE_TOL * vscale:
                    g.append(idx)
                    break
            else:
                groups.append([idx])
        verts = np.array([np.mean(prim[g], axis=0) for g in groups])
        self.vertices = verts

        dots = verts @ self.normals.T  # (k, m)
        incid = dots >= self.support[None, :] - _MERGE_TOL * scale
        areas = np.zeros(m)
        fverts = [None] * m
        cells = [None] * m
        for i in range(m):
            if not active[i]:
                continue
            ids = np.where(incid[:, i])[0]
            if ids.size < 3:
                active[i] = False
                continue
            u = self.normals[i]
            a = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            t1 = np.cross(u, a)
            t1 /= np.linalg.norm(t1)
            t2 = np.cross(u, t1)
            pts = verts[ids]
            cen = np.mean(pts, axis=0)
            th = np.arctan2((pts - cen) @ t2, (pts - cen) @ t1)
            ids = ids[np.argsort(th, kind="stable")]
            pts = verts[ids]
            x, y = (pts - cen) @ t1, (pts - cen) @ t2
            area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
            if area <= (_MERGE_TOL * scale) ** 2:
                active[i] = False
                continue
            areas[i] = abs(area)
            fverts[i] = ids
            cells[i] = pts / np.linalg.norm(pts, axis=1)[:, None]
        self.active = active
        self.facet_areas = areas
        self.facet_vertex_ids = fverts
        self._cells = cells

    def _verify_support(self):
        scale = float(np.max(self.support))
        dots = self.vertices @ self.normals.T
        hmax = np.max(dots, axis=0)
        bad_hi = np.where(hmax > self.support + _SUPPORT_TOL * scale)[0]
        if bad_hi.size:
            raise InputError(f"facet {bad_hi[0]}: support not reproduced "
                             f"(max vertex excess {float(np.max(hmax - self.support)):.3e})")
        act = np.where(self.active)[0]
        bad_lo = act[hmax[act] < self.support[act] - _SUPPORT_TOL * scale]
        if bad_lo.size:
            raise InputError(f"active facet {bad_lo[0]}: support not reproduced")

    @classmethod
    def from_halfspaces(cls, normals, support) -> "Polytope":
        return cls(normals, support)

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        """Convex hull of the given points, which must surround the origin."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise InputError("points must be an (m, 2) or (m, 3) array")
        hull = ConvexHull(pts)
        eqs = hull.equations
        if np.any(eqs[:, -1] >= -1e-12 * float(np.max(np.abs(pts)))):
            raise InputError("the origin is not interior to the hull of the points")
        nrm = np.linalg.norm(eqs[:, :-1], axis=1)
        normals = eqs[:, :-1] / nrm[:, None]
        support = -eqs[:, -1] / nrm
        # merge coplanar hull facets (3D triangulation artifacts)
        keep_n, keep_h = [], []
        for u, h in zip(normals, support):
            dup = False
            for v, g in zip(keep_n, keep_h):
                if np.linalg.norm(u - v) <= _MERGE_TOL and abs(h - g) <= _MERGE_TOL * max(1.0, g):
                    dup = True
                    break
            if not dup:
                keep_n.append(u)
                keep_h.append(h)
        return cls(np.array(keep_n), np.array(keep_h))

    # -- evaluation --------------------------------------------------------

    def support_value(self, x):
        """Support function at x (any vectors, not just unit ones)."""
        x = np.asarray(x, dtype=float)
        dots = np.atleast_2d(x) @ self.vertices.T
        out = np.max(dots, axis=1)
        return float(out[0]) if x.ndim == 1 else out

    def radial_value(self, x):
        """Radial function at x: the largest s with s x in the body."""
        x = np.asarray(x, dtype=float)
        dots = np.atleast_2d(x) @ self.normals.T
        with np.errstate(divide="ignore"):
            ratios = np.where(dots > 0.0, self.support[None, :] / dots, np.inf)
        out = np.min(ratios, axis=1)
        return float(out[0]) if x.ndim == 1 else out

    def radial_facet_index(self, x):
        """Index of the facet the ray through x exits: the radial Gauss
        image as a map on directions.  Ties resolve to the lowest index."""
        x = np.asarray(x, dtype=float)
        dots = np.atleast_2d(x) @ self.normals.T
        with np.errstate(divide="ignore"):
            ratios = np.where(dots > 0.0, self.support[None, :] / dots, np.inf)
        out = np.argmin(ratios, axis=1)
        return int(out[0]) if x.ndim == 1 else out

    def radial_cells(self):
        """Per-facet radial cell: angle interval (2D) or ordered unit
        directions of a geodesic polygon (3D); None for inactive facets."""
        return list(self._cells)

    def cell_sphere_area(self, i) -> float:
        if self._cells[i] is None:
            return 0.0
        if self.dim == 2:
            a, b = self._cells[i]
            return b - a
        return spherical_polygon_area(self._cells[i])

    # -- derived bodies ----------------------------------------------------

    def polar(self) -> "Polytope":
        """The polar body: support numbers are reciprocals of vertex radii,
        normals are the vertex directions."""
        r = np.linalg.norm(self.vertices, axis=1)
        return Polytope(self.vertices / r[:, None], 1.0 / r)

    def scaled(self, c: float) -> "Polytope":
        c = float(c)
        if c <= 0.0:
            raise InputError("scale factor must be positive")
        return Polytope(self.normals, c * self.support, _skip_checks=True)

    def rotated(self, R) -> "Polytope":
        R = np.asarray(R, dtype=float)
        if R.shape != (self.dim, self.dim):
            raise InputError("rotation matrix has the wrong shape")
        return Polytope(self.normals @ R.T, self.support.copy())

    # -- predicates --------------------------------------------------------

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """True when the facet data is invariant under x -> -x."""
        scale = float(np.max(self.support))
        for u, h in zip(self.normals, self.support):
            d = np.linalg.norm(self.normals + u[None, :], axis=1)
            j = int(np.argmin(d))
            if d[j] > tol or abs(self.support[j] - h) > tol * scale:
                return False
        return True

    @property
    def inradius(self) -> float:
        return float(np.min(self.support))

    @property
    def circumradius(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def __repr__(self):
        na = int(np.sum(self.active))
        return (f"Polytope(dim={self.dim}, facets={len(self.support)} "
                f"({na} active), vertices={len(self.vertices)})")


# ---------------------------------------------------------------------------
# Aleksandrov-type bodies from sphere data


def wulff_shape(dirs, values) -> Polytope:
    """The intersection of the halfspaces x . xi_i <= f_i.

    The result's support function is <= f everywhere, with equality at the
    normals of active facets.  Directions concentrated on a closed
    hemisphere are rejected since the intersection would be unbounded.
    """
    return Polytope(dirs, values)


def hull_body(dirs, values) -> Polytope:
    """The convex hull of the points f_i xi_i.

    Computed through the polar identity: the hull body is the polar of the
    Wulff shape of 1/f.  Entries whose point lands inside the hull of the
    others show up as inactive facets of that Wulff shape.
    """
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0.0):
        raise InputError("hull body needs positive radial values")
    return wulff_shape(dirs, 1.0 / values).polar()


def gauss_image_pullback(lam, body: Polytope):
    """The measure sending each spherical Borel set omega to lam of the set
    of directions whose ray exits the body through a facet with normal in
    omega.  Concretely: an atom at each active facet normal, weighted by
    lam of that facet's radial cell.

    lam must be a density measure; for atomic lam, atoms sitting on shared
    cell boundaries would make the value ill-defined.
    """
    from .sphere import SphericalMeasure

    if lam.is_atomic:
        raise InputError("the pullback needs a density measure")
    if lam.dim != body.dim:
        raise InputError("measure and body dimensions differ")
    dirs, masses = [], []
    ones = lambda x: np.ones(np.atleast_2d(x).shape[0])
    for i in range(len(body.support)):
        cell = body.radial_cells()[i]
        if cell is None:
            continue
        w = _integrate_over_cell(lam, body, i, ones)
        if w > 0.0:
            dirs.append(body.normals[i])
            masses.append(w)
    return SphericalMeasure.from_atoms(np.array(dirs), np.array(masses))


def _integrate_over_cell(lam, body, i, fn, rtol=None, atol=0.0):
    """Integral of fn against lam restricted to facet i's radial cell."""
    from .quadrature import integrate_interval, integrate_spherical_polygon

    cell = body.radial_cells()[i]
    if cell is None:
        return 0.0
    if body.dim == 2:
        a, b = cell

        def g(th):
            th = np.atleast_1d(th)
            x = np.column_stack([np.cos(th), np.sin(th)])
            return lam.density(x) * np.asarray(fn(x), dtype=float)

        rtol = 1e-12 if rtol is None else rtol
        val, _ = integrate_interval(g, a, b, atol=atol if atol else 1e-14, rtol=rtol)
        return val

    def g3(x):
        return lam.density(x) * np.asarray(fn(x), dtype=float)

    from .quadrature import _presplit_at_planes, fan_triangles, integrate_spherical_triangles

    rtol = 1e-8 if rtol is None else rtol
    tris = fan_triangles(cell)
    # creased densities refine forever unless the crease runs along edges
    if lam.kink_axes:
        tris = _presplit_at_planes(tris, lam.kink_axes, depth=4)
    val, _ = integrate_spherical_triangles(g3, tris, rtol=rtol, atol=atol)
    return val


# ---------------------------------------------------------------------------
# stock bodies


def ball(dim: int, m: int = 256, r: float = 1.0) -> Polytope:
    """Polytopal ball: tangent planes to the sphere of radius r at m
    roughly uniform directions.  Every facet is active."""
    if dim == 2:
        th = 2.0 * np.pi * np.arange(m) / m
        normals = np.column_stack([np.cos(th), np.sin(th)])
    else:
        normals = fibonacci_sphere(m)
    return Polytope(normals, np.full(m, float(r)))


def square(r: float = 1.0) -> Polytope:
    return Polytope(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
                    np.full(4, float(r)))


def cube(r: float = 1.0) -> Polytope:
    normals = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0],
                        [0, -1.0, 0], [0, 0, 1.0], [0, 0, -1.0]])
    return Polytope(normals, np.full(6, float(r)))


def simplex(dim: int) -> Polytope:
    """A regular simplex with the origin at its centroid."""
    if dim == 2:
        th = np.array([np.pi / 2, np.pi / 2 + 2 * np.pi / 3, np.pi / 2 + 4 * np.pi / 3])
        normals = np.column_stack([np.cos(th), np.sin(th)])
        return Polytope(normals, np.ones(3))
    verts = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0],
                      [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]) / np.sqrt(3.0)
    return Polytope(-verts, np.ones(4) / 3.0)


def random_body(dim: int, m: int, seed: int, symmetric: bool = False) -> Polytope:
    """A random polytope with all m facets active.

    The facets are tangent planes of a random smooth strictly convex body
    (a trigonometric support function in 2D, an ellipsoid in 3D) at
    jittered but well-separated directions, so none is redundant.
    """
    rng = np.random.default_rng(seed)
    if dim == 2:
        base = 2.0 * np.pi * np.arange(m) / m
        th = base + rng.uniform(-0.25, 0.25) * (2.0 * np.pi / m) \
            + rng.uniform(-0.3, 0.3, size=m) * (2.0 * np.pi / m)
        if symmetric:
            half = m // 2
            if m % 2:
                raise InputError("a symmetric body needs an even facet count")
            th = np.concatenate([th[:half], th[:half] + np.pi])
        ks = np.array([2, 3, 4]) if not symmetric else np.array([2, 4])
        amp = rng.uniform(-1.0, 1.0, size=(ks.size, 2))
        budget = 0.5 / np.sum((ks**2 - 1))
        h = np.ones_like(th)
        for k, (a, b) in zip(ks, amp):
            h += budget * (a * np.cos(k * th) + b * np.sin(k * th))
        normals = np.column_stack([np.cos(th), np.sin(th)])
        return Polytope(normals, h)
    axes = rng.uniform(0.7, 1.4, size=3)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    A = q @ np.diag(axes**2) @ q.T
    dirs = fibonacci_sphere(m)
    jitter = rng.normal(scale=0.2 * np.sqrt(4.0 * np.pi / m), size=(m, 3))
    dirs = dirs + jitter
    if symmetric:
        half = m // 2
        if m % 2:
            raise InputError("a symmetric body needs an even facet count")
        dirs = np.concatenate([dirs[:half], -dirs[:half]])
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    h = np.sqrt(np.einsum("ij,jk,ik->i", dirs, A, dirs))
    return Polytope(dirs, h)


# ---------------------------------------------------------------------------
# distances


def hausdorff_distance(P: Polytope, Q: Polytope) -> float:
    """Hausdorff distance, as the sup-norm gap of the support functions.

    Exact in 2D (per-arc closed form); in 3D a dense probe maximum over a
    Fibonacci grid joined with both bodies' normals and vertex directions.
    """
    if P.dim != Q.dim:
        raise InputError("bodies live in different dimensions")
    if P.dim == 2:
        return _hausdorff_2d(P, Q)
    dirs = [fibonacci_sphere(4096), P.normals, Q.normals,
            P.vertices / np.linalg.norm(P.vertices, axis=1)[:, None],
            Q.vertices / np.linalg.norm(Q.vertices, axis=1)[:, None]]
    x = np.concatenate(dirs)
    return float(np.max(np.abs(P.support_value(x) - Q.support_value(x))))


def _hausdorff_2d(P: Polytope, Q: Polytope) -> float:
    brk = []
    for B in (P, Q):
        act = np.where(B.active)[0]
        a = np.arctan2(B.normals[act, 1], B.normals[act, 0])
        brk.append(np.mod(a, 2.0 * np.pi))
    edges = np.sort(np.unique(np.concatenate(brk)))
    edges = np.concatenate([edges, [edges[0] + 2.0 * np.pi]])
    best = 0.0
    for t0, t1 in zip(edges[:-1], edges[1:]):
        tm = 0.5 * (t0 + t1)
        um = np.array([np.cos(tm), np.sin(tm)])
        v = P.vertices[int(np.argmax(P.vertices @ um))]
        w = Q.vertices[int(np.argmax(Q.vertices @ um))]
        C, S = v[0] - w[0], v[1] - w[1]
        R = float(np.hypot(C, S))
        cand = [abs(C * np.cos(t) + S * np.sin(t)) for t in (t0, t1)]
        tstar = np.arctan2(S, C)
        for t in (tstar, tstar + np.pi):
            if np.mod(t - t0, 2.0 * np.pi) <= (t1 - t0):
                cand.append(R)
        best = max(best, max(cand))
    return best


# ---------------------------------------------------------------------------
# densely sampled smooth bodies


class RadialSampleBody:
    """A smooth convex body given by radial samples on the uniform angular
    grid theta_j = 2 pi j / N (planar only).

    Support values may be passed alongside; otherwise they are taken from
    the convex hull of the sample points.  The support function and its
    derivatives at arbitrary angles come from the trigonometric
    interpolant of the support samples, so the grid should resolve the
    body (N a power of two, 256 and up, works well).
    """

    def __init__(self, radial_values, support_values=None):
        rho = np.asarray(radial_values, dtype=float)
        if rho.ndim != 1 or rho.size < 8:
            raise InputError("need a 1-D grid of at least 8 radial samples")
        if not np.all(np.isfinite(rho)) or np.any(rho <= 0.0):
            raise InputError("radial samples must be positive and finite")
        n = rho.size
        self.dim = 2
        self.angles = 2.0 * np.pi * np.arange(n) / n
        self.directions = np.column_stack([np.cos(self.angles), np.sin(self.angles)])
        self.radial = rho
        hull = Polytope.from_vertices(rho[:, None] * self.directions)
        # convex position: every sample must sit on its hull's boundary
        rr = hull.radial_value(self.directions)
        gap = (rr - rho) / rr
        if np.any(gap > 1e-8):
            j = int(np.argmax(gap))
            raise ConvexityError(
                f"radial sample {j} (angle {self.angles[j]:.6f}) lies inside the "
                f"hull of the samples by a relative depth of {gap[j]:.3e}")
        if support_values is None:
            support = hull.support_value(self.directions)
        else:
            support = np.asarray(support_values, dtype=float)
            if support.shape != rho.shape:
                raise InputError("support samples must match the radial grid")
            if np.any(support < rho * (1.0 - 1e-8)):
                raise InputError("support values may not undercut the radial ones")
        self.support = support
        self._hull = hull
        self._coef = np.fft.rfft(support)
        w = np.full(self._coef.size, 2.0 / n)
        w[0] = 1.0 / n
        if n % 2 == 0:
            w[-1] = 1.0 / n
        self._coef_weights = w
        for a in (self.angles, self.directions, self.radial, self.support):
            a.setflags(write=False)

    def _series(self, theta: float, deriv: int) -> float:
        k = np.arange(self._coef.size)
        phase = np.exp(1j * k * theta) * (1j * k) ** deriv
        return float(np.sum(self._coef_weights * np.real(self._coef * phase)))

    def support_and_derivative(self, theta: float):
        """(h, h') of the trigonometric interpolant at the angle theta."""
        return self._series(theta, 0), self._series(theta, 1)

    def curvature_factor(self, theta: float) -> float:
        """h'' + h at the angle theta (positive on smooth convex bodies)."""
        return self._series(theta, 2) + self._series(theta, 0)

    def radial_value(self, x):
        return self._hull.radial_value(x)

    def to_polytope(self) -> Polytope:
        return self._hull

    @classmethod
    def from_support_function(cls, fn, n: int = 512) -> "RadialSampleBody":
        """Sample a smooth support function on the uniform grid; radial
        values come from the intersection of the sampled half-planes."""
        th = 2.0 * np.pi * np.arange(n) / n
        dirs = np.column_stack([np.cos(th), np.sin(th)])
        h = np.asarray(fn(dirs), dtype=float)
        if h.shape != (n,) or np.any(h <= 0.0):
            raise InputError("the support function must be positive on the grid")
        wulff = Polytope(dirs, h)
        rho = wulff.radial_value(dirs)
        return cls(rho, h)

    def __repr__(self):
        return f"RadialSampleBody(n={self.radial.size})"
