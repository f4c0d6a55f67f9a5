"""Deterministic adaptive quadrature on S^1 and S^2.

Two engines drive every integral in the package.  On the circle, adaptive
Gauss-Legendre panels over angle intervals, with explicit splitting at
declared integrand kinks.  On the 2-sphere, recursive geodesic-triangle
subdivision with a fixed degree-5 rule per triangle.  Refinement decisions
depend only on the integrand values, so repeated calls with the same data
reproduce the same node set bit for bit.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureError

# panel orders for the error estimate: accept when GL(2k) agrees with GL(k)
_K_LO = 16
_K_HI = 32


@lru_cache(maxsize=None)
def gauss_legendre(k: int):
    x, w = np.polynomial.legendre.leggauss(k)
    return x, w


def _panel_estimates(fn, a, b):
    """GL estimates of integral over [a,b] at the two panel orders."""
    xl, wl = gauss_legendre(_K_LO)
    xh, wh = gauss_legendre(_K_HI)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    flo = np.asarray(fn(mid + half * xl), dtype=float)
    fhi = np.asarray(fn(mid + half * xh), dtype=float)
    if not (np.all(np.isfinite(flo)) and np.all(np.isfinite(fhi))):
        bad = mid + half * (xl if not np.all(np.isfinite(flo)) else xh)
        raise QuadratureError(f"non-finite integrand value in panel [{a}, {b}] near t={bad[0]}")
    return half * np.sum(wl * flo), half * np.sum(wh * fhi)


def adaptive_panels(fn, a: float, b: float, atol: float = 1e-12, rtol: float = 1e-12,
                    max_depth: int = 48):
    """Subdivide [a,b] until GL-16/GL-32 agree per panel.

    Returns (panels, values, errors): sorted arrays of panel endpoints
    (m, 2), the GL-32 value per panel, and the per-panel error estimate.
    The tolerance is shared among panels in proportion to width.
    """
    if not b > a:
        raise QuadratureError(f"empty interval [{a}, {b}]")
    width = b - a
    # rough global scale for the relative part of the tolerance
    lo0, hi0 = _panel_estimates(fn, a, b)
    scale = abs(hi0)
    stack = [(a, b, lo0, hi0, 0)]
    done = []
    while stack:
        pa, pb, lo, hi, depth = stack.pop()
        tol_here = max(atol, rtol * scale) * (pb - pa) / width
        if abs(hi - lo) <= tol_here or depth >= max_depth:
            if depth >= max_depth and abs(hi - lo) > 100.0 * max(tol_here, 1e-300):
                raise QuadratureError(
                    f"adaptive panel refinement stalled on [{pa}, {pb}] "
                    f"(err {abs(hi - lo):.3e}, tol {tol_here:.3e})")
            done.append((pa, pb, hi, abs(hi - lo)))
            continue
        pm = 0.5 * (pa + pb)
        llo, lhi = _panel_estimates(fn, pa, pm)
        rlo, rhi = _panel_estimates(fn, pm, pb)
        scale = max(scale, abs(lhi) + abs(rhi))
        stack.append((pm, pb, rlo, rhi, depth + 1))
        stack.append((pa, pm, llo, lhi, depth + 1))
    done.sort(key=lambda p: p[0])
    panels = np.array([[p[0], p[1]] for p in done])
    values = np.array([p[2] for p in done])
    errors = np.array([p[3] for p in done])
    return panels, values, errors


def integrate_interval(fn, a: float, b: float, atol: float = 1e-12,
                       rtol: float = 1e-12) -> tuple[float, float]:
    """Adaptive integral of fn over [a,b]; returns (value, error estimate)."""
    _, values, errors = adaptive_panels(fn, a, b, atol=atol, rtol=rtol)
    return float(np.sum(values)), float(np.sum(errors))


def panel_nodes(panels: np.ndarray, k: int = _K_HI):
    """Frozen GL nodes/weights for a fixed panel decomposition.

    Re-evaluating a family of integrands on one frozen node set keeps the
    quadrature error common to all of them, which 1-parameter solves
    (constraint normalization) exploit.
    """
    x, w = gauss_legendre(k)
    mids = 0.5 * (panels[:, 0] + panels[:, 1])
    halfs = 0.5 * (panels[:, 1] - panels[:, 0])
    nodes = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    weights = (halfs[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_circle(fn, kinks=(), atol: float = 1e-12, rtol: float = 1e-12) -> tuple[float, float]:
    """Integral of fn(theta) over one full period [0, 2pi).

    `kinks` lists angles where the integrand is non-smooth; the interval is
    pre-split there so each adaptive panel sees an analytic integrand.
    """
    two_pi = 2.0 * np.pi
    cuts = np.sort(np.mod(np.asarray(list(kinks), dtype=float), two_pi)) if len(kinks) else np.array([])
    if cuts.size:
        # drop near-duplicate cut angles, then close the circle
        keep = np.concatenate([[True], np.diff(cuts) > 1e-13])
        cuts = cuts[keep]
        edges = np.concatenate([cuts, [cuts[0] + two_pi]])
    else:
        edges = np.array([0.0, two_pi])
    total, err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 1e-13:
            continue
        v, e = integrate_interval(fn, lo, hi, atol=atol * (hi - lo) / two_pi, rtol=rtol)
        total += v
        err += e
    return total, err


def integrate_with_log_endpoint(fn, a: float, b: float, singular_at_a: bool,
                                atol: float = 1e-12, min_width: float = 1e-14):
    """Integral over [a,b] of an integrand with an integrable logarithmic
    singularity at one endpoint.

    Geometric shells toward the singular end down to `min_width`, plain GL
    inside each shell.  The truncated sliver contributes O(w log w) with
    w = min_width, far below any tolerance used here.
    """
    if not singular_at_a:
        return integrate_with_log_endpoint(lambda t: fn(a + b - t), a, b, True,
                                           atol=atol, min_width=min_width)
    width = b - a
    # constant per-shell budget: a width-proportional share would fall below
    # the cancellation noise of the integrand near the singular end and set
    # off runaway refinement there
    n_shells = max(1, int(np.ceil(np.log2(width / min_width))) + 1)
    shell_tol = atol / n_shells
    total, err = 0.0, 0.0
    hi = b
    while hi - a > min_width:
        lo = max(a + (hi - a) * 0.5, a + min_width)
        if hi - a <= 2.0 * min_width:
            lo = a + min_width
        v, e = integrate_interval(fn, lo, hi, atol=shell_tol, rtol=1e-13)
        total += v
        err += e
        if lo <= a + min_width:
            break
        hi = lo
    return total, err


# ---------------------------------------------------------------------------
# S^2: geodesic triangles

# degree-5 rule on the reference triangle, barycentric coordinates
_T5_A = (6.0 - np.sqrt(15.0)) / 21.0
_T5_B = (6.0 + np.sqrt(15.0)) / 21.0
_T5_BARY = np.array(
    [[1 / 3, 1 / 3, 1 / 3],
     [_T5_A, _T5_A, 1 - 2 * _T5_A], [_T5_A, 1 - 2 * _T5_A, _T5_A], [1 - 2 * _T5_A, _T5_A, _T5_A],
     [_T5_B, _T5_B, 1 - 2 * _T5_B], [_T5_B, 1 - 2 * _T5_B, _T5_B], [1 - 2 * _T5_B, _T5_B, _T5_B]])
_T5_W = np.array([9 / 40,
                  (155 - np.sqrt(15)) / 1200, (155 - np.sqrt(15)) / 1200, (155 - np.sqrt(15)) / 1200,
                  (155 + np.sqrt(15)) / 1200, (155 + np.sqrt(15)) / 1200, (155 + np.sqrt(15)) / 1200])


def spherical_triangle_area(a, b, c) -> float:
    """Solid angle of the geodesic triangle (a,b,c) on S^2."""
    num = abs(np.linalg.det(np.stack([a, b, c])))
    den = 1.0 + np.dot(a, b) + np.dot(b, c) + np.dot(c, a)
    return 2.0 * np.arctan2(num, den)


def _tri_rule_values(fn, tris):
    """Rule estimate of the spherical integral over each triangle.

    tris: (m,3,3).  Uses the radial-projection identity: the solid-angle
    element over the planar triangle with plane offset D is D dA / |p|^3.
    """
    A, B, C = tris[:, 0, :], tris[:, 1, :], tris[:, 2, :]
    n = np.cross(B - A, C - A)
    nrm = np.linalg.norm(n, axis=1)
    area2 = nrm  # twice the planar area
    with np.errstate(invalid="ignore"):
        nhat = n / nrm[:, None]
    D = np.einsum("ij,ij->i", nhat, A)
    # nodes: (m, q, 3)
    p = np.einsum("qk,mkj->mqj", _T5_BARY, tris)
    pn = np.linalg.norm(p, axis=2)
    x = p / pn[:, :, None]
    vals = np.asarray(fn(x.reshape(-1, 3)), dtype=float).reshape(p.shape[0], p.shape[1])
    if not np.all(np.isfinite(vals)):
        bad = x.reshape(-1, 3)[~np.isfinite(vals.ravel())][0]
        raise QuadratureError(f"non-finite integrand value on S^2 near {bad}")
    integ = 0.5 * area2 * D * np.sum(_T5_W[None, :] * vals / pn**3, axis=1)
    return integ


def triangle_nodes(tris):
    """Frozen nodes and weights of the degree-5 rule over geodesic
    triangles: sum(w * f(x)) estimates the integral over the union.

    Same construction as the adaptive estimates; subdivide the triangles
    first to set the accuracy.
    """
    tris = np.asarray(tris, dtype=float)
    A, B, C = tris[:, 0, :], tris[:, 1, :], tris[:, 2, :]
    n = np.cross(B - A, C - A)
    nrm = np.linalg.norm(n, axis=1)
    with np.errstate(invalid="ignore"):
        nhat = n / nrm[:, None]
    D = np.einsum("ij,ij->i", nhat, A)
    p = np.einsum("qk,mkj->mqj", _T5_BARY, tris)
    pn = np.linalg.norm(p, axis=2)
    x = p / pn[:, :, None]
    w = 0.5 * (nrm * D)[:, None] * _T5_W[None, :] / pn**3
    return x.reshape(-1, 3), w.reshape(-1)


def _subdivide(tris):
    A, B, C = tris[:, 0, :], tris[:, 1, :], tris[:, 2, :]
    ab = A + B
    bc = B + C
    ca = C + A
    ab /= np.linalg.norm(ab, axis=1)[:, None]
    bc /= np.linalg.norm(bc, axis=1)[:, None]
    ca /= np.linalg.norm(ca, axis=1)[:, None]
    m = tris.shape[0]
    out = np.empty((4 * m, 3, 3))
    out[0::4] = np.stack([A, ab, ca], axis=1)
    out[1::4] = np.stack([ab, B, bc], axis=1)
    out[2::4] = np.stack([ca, bc, C], axis=1)
    out[3::4] = np.stack([ab, bc, ca], axis=1)
    return out


def integrate_spherical_triangles(fn, tris, rtol: float = 1e-9, atol: float = 0.0,
                                  max_depth: int = 22, min_depth: int = 0):
    """Adaptive integral of fn over a union of geodesic triangles.

    Per-triangle acceptance: the 4-child refinement must agree with the
    parent within the triangle's area share of the global tolerance.
    Returns (value, error estimate).
    """
    tris = np.asarray(tris, dtype=float)
    if tris.ndim == 2:
        tris = tris[None, :, :]
    areas = np.array([spherical_triangle_area(*t) for t in tris])
    total_area = float(np.sum(areas))
    if total_area <= 0.0:
        return 0.0, 0.0
    parent_vals = _tri_rule_values(fn, tris)
    # relative tolerance references the total variation, not the signed sum,
    # so integrands that cancel (odd functions) terminate instead of refining
    # toward a zero tolerance
    scale = max(float(np.sum(np.abs(parent_vals))), atol)
    accepted = 0.0
    accepted_err = 0.0
    depth = 0
    while tris.shape[0]:
        depth += 1
        children = _subdivide(tris)
        child_vals = _tri_rule_values(fn, children)
        grouped = child_vals.reshape(-1, 4).sum(axis=1)
        err = np.abs(grouped - parent_vals)
        tol_i = np.maximum(atol, rtol * scale) * (areas / total_area)
        ok = (err <= tol_i) | (depth > max_depth)
        if depth > max_depth and np.any(err[ok] > 100.0 * np.maximum(tol_i[ok], 1e-300)):
            raise QuadratureError("spherical triangle refinement stalled")
        if depth <= min_depth:
            ok[:] = False
        accepted += float(np.sum(grouped[ok]))
        accepted_err += float(np.sum(err[ok]))
        keep = ~ok
        tris = children.reshape(-1, 4, 3, 3)[keep].reshape(-1, 3, 3)
        parent_vals = child_vals.reshape(-1, 4)[keep].ravel()
        child_areas = np.repeat(areas[keep], 4) * 0.25
        areas = child_areas
        scale = max(scale, abs(accepted + float(np.sum(parent_vals))))
    return accepted, accepted_err


def fan_triangles(verts: np.ndarray):
    """Fan triangulation of a spherical polygon from its direction centroid."""
    verts = np.asarray(verts, dtype=float)
    c = verts.sum(axis=0)
    nc = np.linalg.norm(c)
    if nc < 1e-12:
        raise QuadratureError("spherical polygon has no well-defined centroid")
    c = c / nc
    m = verts.shape[0]
    tris = np.empty((m, 3, 3))
    for j in range(m):
        tris[j, 0] = c
        tris[j, 1] = verts[j]
        tris[j, 2] = verts[(j + 1) % m]
    return tris


def integrate_spherical_polygon(fn, verts, rtol: float = 1e-9, atol: float = 0.0):
    """Adaptive integral of fn over the geodesic polygon with the given
    counterclockwise vertex directions."""
    return integrate_spherical_triangles(fn, fan_triangles(verts), rtol=rtol, atol=atol)


def spherical_polygon_area(verts) -> float:
    tris = fan_triangles(verts)
    return float(sum(spherical_triangle_area(*t) for t in tris))


@lru_cache(maxsize=None)
def icosahedron_triangles():
    """The 20 faces of the regular icosahedron, as unit-vertex triangles."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    v = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            v.append((0.0, s1 * 1.0, s2 * phi))
            v.append((s1 * 1.0, s2 * phi, 0.0))
            v.append((s2 * phi, 0.0, s1 * 1.0))
    v = np.array(sorted(set(v)))
    v /= np.linalg.norm(v, axis=1)[:, None]
    from scipy.spatial import ConvexHull

    hull = ConvexHull(v)
    tris = []
    for simplex in hull.simplices:
        a, b, c = v[simplex]
        if np.dot(np.cross(b - a, c - a), a) < 0:
            b, c = c, b
        tris.append((a, b, c))
    tris = np.array(tris)
    tris.setflags(write=False)
    return tris


def _edge_plane_crossing(a, b, u):
    """The point of the geodesic arc a-b on the plane u.x = 0, or None."""
    p = a * float(b @ u) - b * float(a @ u)
    n = np.linalg.norm(p)
    if n == 0.0:
        return None
    p = p / n
    if p @ (a + b) < 0.0:
        p = -p
    return p


def _clip_triangle_at_plane(tri, u, tol=1e-12):
    """Cut one geodesic triangle along the great circle u.x = 0 into
    pieces lying entirely on one side, crossing points becoming vertices."""
    s = tri @ u
    pos = s > tol
    neg = s < -tol
    if not (np.any(pos) and np.any(neg)):
        return [tri]
    # rotate so the vertex alone on its strict side comes first
    for k in range(3):
        i, j, l = k, (k + 1) % 3, (k + 2) % 3
        if (pos[i] and not pos[j] and not pos[l]) or \
                (neg[i] and not neg[j] and not neg[l]):
            break
    a, b, c = tri[i], tri[j], tri[l]
    sb, sc = s[j], s[l]
    if abs(sb) <= tol:
        p = _edge_plane_crossing(a, c, u)
        pieces = [[a, b, p], [b, c, p]] if p is not None else [[a, b, c]]
    elif abs(sc) <= tol:
        p = _edge_plane_crossing(a, b, u)
        pieces = [[a, p, c], [p, b, c]] if p is not None else [[a, b, c]]
    else:
        pab = _edge_plane_crossing(a, b, u)
        pca = _edge_plane_crossing(c, a, u)
        if pab is None or pca is None:
            return [tri]
        pieces = [[a, pab, pca], [pab, b, c], [pab, c, pca]]
    return [np.asarray(t, dtype=float) for t in pieces]


def _presplit_at_planes(tris, axes, depth: int = 0):
    """Cut triangles exactly along each plane u.x = 0 so integrand creases
    run along triangle edges instead of through interiors.  depth is kept
    for call-site compatibility; the cut is exact in a single pass."""
    del depth
    out = [np.asarray(t, dtype=float) for t in np.asarray(tris, dtype=float)]
    for u in axes:
        u = np.asarray(u, dtype=float)
        nxt = []
        for t in out:
            nxt.extend(_clip_triangle_at_plane(t, u))
        out = nxt
    kept = [t for t in out if spherical_triangle_area(*t) > 1e-24]
    if not kept:
        return np.asarray(tris, dtype=float)
    return np.array(kept)


def integrate_sphere(fn, rtol: float = 1e-9, atol: float = 0.0, kink_axes=()):
    """Adaptive integral of fn over all of S^2.

    kink_axes: directions u such that the integrand has a crease on the
    great circle u.x = 0; straddling triangles are pre-split (depth 5).
    """
    tris = icosahedron_triangles()
    tris = _presplit_at_planes(tris, kink_axes, depth=5)
    return integrate_spherical_triangles(fn, tris, rtol=rtol, atol=atol)


def sphere_rule(level: int = 3):
    """Fixed quadrature rule on S^2: subdivided icosahedron, degree-5 rule
    per triangle, per-triangle weights rescaled so each triangle integrates
    constants to its exact solid angle."""
    tris = icosahedron_triangles()
    for _ in range(level):
        tris = _subdivide(tris)
    A, B, C = tris[:, 0, :], tris[:, 1, :], tris[:, 2, :]
    n = np.cross(B - A, C - A)
    nrm = np.linalg.norm(n, axis=1)
    nhat = n / nrm[:, None]
    D = np.einsum("ij,ij->i", nhat, A)
    p = np.einsum("qk,mkj->mqj", _T5_BARY, tris)
    pn = np.linalg.norm(p, axis=2)
    nodes = (p / pn[:, :, None]).reshape(-1, 3)
    w_raw = 0.5 * nrm[:, None] * D[:, None] * _T5_W[None, :] / pn**3
    exact = np.array([spherical_triangle_area(*t) for t in tris])
    w = (w_raw * (exact / w_raw.sum(axis=1))[:, None]).reshape(-1)
    return nodes, w


def fibonacci_sphere(k: int) -> np.ndarray:
    """k near-uniform directions on S^2 (golden-angle spiral)."""
    i = np.arange(k, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / k
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    th = golden * i
    return np.column_stack([r * np.cos(th), r * np.sin(th), z])


def circle_grid(k: int) -> np.ndarray:
    th = 2.0 * np.pi * np.arange(k) / k
    return np.column_stack([np.cos(th), np.sin(th)])
