"""Polytopes, support and radial functions, and polar duality.

Builds a few bodies, checks the polar involution and the reciprocal
relation h_{K*}(x) rho_K(x) = 1 numerically, and shows the two dual
constructions from raw spherical data: the intersection body [f] and
the hull body <f>, related by [f]* = <1/f>.
"""

import numpy as np

from mogauss.bodies import (
    ball,
    cube,
    hausdorff_distance,
    hull_body,
    random_body,
    square,
    wulff_shape,
)

# ---------------------------------------------------------------------
# 1. support and radial values of the unit square
# ---------------------------------------------------------------------

S = square()
print("square facets:", len(S.support))
x = np.array([np.cos(0.3), np.sin(0.3)])
print("h_S(0.3 rad) =", S.support_value(x))
print("rho_S(0.3 rad) =", S.radial_value(x))

# the polar of the square is the diamond: support becomes 1/radial
D = S.polar()
print("polar support values:", np.round(D.support, 12))

# ---------------------------------------------------------------------
# 2. polar duality is an involution, and h_{K*} rho_K = 1
# ---------------------------------------------------------------------

K = random_body(2, 17, seed=4)
KK = K.polar().polar()
print("\nHausdorff(K, K**) =", hausdorff_distance(K, KK))

probes = np.random.default_rng(0).normal(size=(500, 2))
probes /= np.linalg.norm(probes, axis=1)[:, None]
rec = K.polar().support_value(probes) * K.radial_value(probes)
print("max |h_{K*} rho_K - 1| over 500 directions:", np.max(np.abs(rec - 1.0)))

# ---------------------------------------------------------------------
# 3. intersection body vs hull body of the same data
# ---------------------------------------------------------------------
# Given positive values f on a finite direction set, [f] intersects the
# halfspaces {x . u <= f(u)} while <f> takes the convex hull of the
# points f(u) u.  They are polar to each other after inverting f.

rng = np.random.default_rng(7)
dirs = rng.normal(size=(25, 3))
dirs /= np.linalg.norm(dirs, axis=1)[:, None]
f = rng.uniform(0.8, 1.3, size=25)

W = wulff_shape(dirs, f)
H = hull_body(dirs, 1.0 / f)
print("\nHausdorff([f]*, <1/f>) =", hausdorff_distance(W.polar(), H))

# not every input plane has to touch the intersection body
print("active facets of [f]:", int(np.sum(W.active)), "of", len(f))

# ---------------------------------------------------------------------
# 4. radial extremes against facet and vertex data
# ---------------------------------------------------------------------
# The radial function over the facet normals attains the inradius, and
# over the vertex directions the circumradius.

C = cube()
rho_n = C.radial_value(C.normals)
vdirs = C.vertices / np.linalg.norm(C.vertices, axis=1)[:, None]
rho_v = C.radial_value(vdirs)
print("\ncube inradius  =", rho_n.min(), "(exact 1)")
print("cube circumradius =", rho_v.max(), "(exact sqrt(3) =", np.sqrt(3.0), ")")

# a fine polygon approximates the disc from inside
B = ball(2, m=512)
print("\n512-gon support range:", B.support.min(), "to", B.support.max())
print("512-gon radial at a vertex direction:",
      B.radial_value(B.vertices[0] / np.linalg.norm(B.vertices[0])))
