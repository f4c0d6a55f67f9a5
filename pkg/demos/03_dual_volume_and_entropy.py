"""Dual volumes and the entropy functional.

The dual volume integrates G(xi, rho_K(xi)) against a spherical
density; entropy is the special case G = log t up to sign convention.
This script evaluates both on bodies with known closed forms and
demonstrates scale covariance and convergence to the smooth limit.
"""

import numpy as np

from mogauss.bodies import ball, cube, square
from mogauss.functionals import dual_volume, entropy
from mogauss.mofunctions import log_t, power_volume, reciprocal
from mogauss.sphere import SphericalMeasure

U2 = SphericalMeasure.uniform(2)
U3 = SphericalMeasure.uniform(3)

# ---------------------------------------------------------------------
# 1. areas and volumes from the radial function
# ---------------------------------------------------------------------
# G = t^n/n against the uniform density gives the Lebesgue measure.

print("area of the square   :", dual_volume(power_volume(2), U2, square()),
      "(exact 4)")
print("volume of the cube   :", dual_volume(power_volume(3), U3, cube()),
      "(exact 8)")

# G = 1/t on the square: integral of sec(theta) over four quarter turns
v = dual_volume(reciprocal(), U2, square())
print("reciprocal integrand :", v, "(exact 4 sqrt 2 =", 4 * np.sqrt(2.0), ")")

# ---------------------------------------------------------------------
# 2. entropy closed forms
# ---------------------------------------------------------------------
# E(K) = -integral of log rho_K.  For the unit square the integral has
# the closed form pi log 2 - 4 G with G Catalan's constant.

CATALAN = 0.915965594177219015
e = entropy(U2, square())
print("\nentropy of the square:", e)
print("closed form          :", np.pi * np.log(2.0) - 4.0 * CATALAN)

# entropy of a scaled body shifts by -mass * log c
c = 2.5
print("\nE(cK) - E(K) + |lambda| log c =",
      entropy(U2, square().scaled(c)) - e + 2 * np.pi * np.log(c))

# ---------------------------------------------------------------------
# 3. polygonal bodies converge to the smooth limit
# ---------------------------------------------------------------------
# Inscribed regular m-gons have entropy -> 0 = E(disc) like 1/m^2.

for m in (16, 64, 256, 1024):
    print(f"entropy of inscribed {m:5d}-gon: {entropy(U2, ball(2, m=m)):.3e}")

# the dual volume of the m-gon under G = t^2/2 approaches pi
for m in (16, 256):
    print(f"area of {m}-gon:", dual_volume(power_volume(2), U2, ball(2, m=m)))
print("disc area:", np.pi)

# G = log t reproduces entropy with the opposite sign
Q = cube().polar().scaled(1.3)
print("\ndual_volume(log t) + entropy =",
      dual_volume(log_t(), U3, Q) + entropy(U3, Q))
