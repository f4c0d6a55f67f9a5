"""Image measures of a polytope under a weight triple.

A triple (G, Psi, lambda) assigns each body a signed atomic measure on
its facet normals.  This script computes those weights for a few
triples, checks the plain Gauss-image pullback appears for the
logarithmic triple, and shows the sign relation between a triple and
its tilde companion on the polar side.
"""

import numpy as np

from mogauss.bodies import random_body, square
from mogauss.functionals import (
    Triple,
    log_log_triple,
    mo_measure,
    mo_surface_area_measure,
    polar_mo_measure,
)
from mogauss.bodies import gauss_image_pullback
from mogauss.mofunctions import power, power_ratio, power_volume, reciprocal
from mogauss.sphere import SphericalMeasure, tilted_cosine_squared

U2 = SphericalMeasure.uniform(2)

# ---------------------------------------------------------------------
# 1. the logarithmic triple reproduces the Gauss-image pullback
# ---------------------------------------------------------------------
# With G = Psi = log t the weight at a facet normal is exactly the
# lambda-mass of the radial cell of that facet.

S = square()
w = mo_measure(log_log_triple(U2), S).weights
pb = gauss_image_pullback(U2, S).atom_masses
print("log-log weights:", np.round(w, 12))
print("pullback masses:", np.round(pb, 12))
print("each should be pi/2 =", np.pi / 2)

# a tilted density changes the cell masses but the two stay equal
lam = tilted_cosine_squared(2, [1.0, 0.0], 0.5)
K = random_body(2, 11, seed=3)
w = mo_measure(log_log_triple(lam), K).weights
pb = gauss_image_pullback(lam, K).atom_masses
print("\ntilted density, max relative gap:", np.max(np.abs(w - pb) / pb))

# ---------------------------------------------------------------------
# 2. the power special case against plain facet geometry
# ---------------------------------------------------------------------
# For G = t^n/n, Psi = t^p/p and the uniform density the weight at
# facet i is  area_i * h_i^(1-p), the classical p-weighted surface
# measure of the polytope.

p = 2.0
tr = Triple(power_volume(2), power_ratio(p), U2)
w = mo_measure(tr, K).weights
sam = mo_surface_area_measure(power_ratio(p), K).weights
print("\npower case (p = 2):")
print("  measure weights   :", np.round(w[:4], 8), "...")
print("  area * h^(1-p)    :", np.round(sam[:4], 8), "...")
print("  max relative gap  :", np.max(np.abs(w - sam) / sam))

# ---------------------------------------------------------------------
# 3. signs, and the polar-side companion
# ---------------------------------------------------------------------
# A decreasing volume integrand makes the weights negative; the tilde
# triple evaluated on the polar side cancels them atom for atom.

tr = Triple(reciprocal(), power(2), U2)
w = mo_measure(tr, K).weights
print("\nreciprocal integrand weights are negative:", bool(np.all(w < 0.0)))

wp = polar_mo_measure(tr.with_tilde_chart(), K).weights
print("max |polar tilde + original| =", np.max(np.abs(wp + w)))
print("(zero up to roundoff: the two measures are mutual negatives)")

# describe() names the pieces of a triple
print("\ntriple description:", tr.describe())
