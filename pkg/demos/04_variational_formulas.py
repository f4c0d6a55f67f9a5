"""Finite-difference verification of the variational formulas.

The derivative of the dual volume along a one-parameter family of
perturbed data equals the integral of the bump against the image
measure of the base body (with a sign flip on the hull-polar side).
The verifiers compute central differences at shrinking step sizes and
compare against that atomic integral.
"""

import numpy as np

from mogauss.bodies import random_body
from mogauss.functionals import Triple, log_log_triple
from mogauss.mofunctions import log_t, power, power_volume, reciprocal
from mogauss.sphere import SphericalMeasure
from mogauss.variation import (
    PerturbationFamily,
    verify_hull_variation,
    verify_wulff_variation,
)

U2 = SphericalMeasure.uniform(2)


def show(rep):
    print(f"\n{rep.scenario}  (kind: {rep.kind})")
    print(f"  analytic derivative: {rep.analytic:+.10f}")
    print("  eps        central difference   error")
    for e, fd, err in zip(rep.eps, rep.fd_values, rep.errors):
        print(f"  {e:.0e}   {fd:+.10f}      {err:.2e}")
    print("  passed:", rep.passed)


# one base body and a fixed random bump direction for all scenarios
body = random_body(2, 9, seed=21)
rng = np.random.default_rng(1)
bump = rng.uniform(-1.0, 1.0, size=len(body.support))

# ---------------------------------------------------------------------
# 1. intersection-body side, logarithmic triple
# ---------------------------------------------------------------------
fam = PerturbationFamily(log_t(), body.normals, body.support, bump)
show(verify_wulff_variation(log_log_triple(U2), fam, scenario="wulff, log chart"))

# ---------------------------------------------------------------------
# 2. intersection-body side, power chart
# ---------------------------------------------------------------------
# perturbation now happens in the chart: Psi(t) = t^2, so the family is
# (h^2 + eps g)^(1/2) rather than h + eps g
fam2 = PerturbationFamily(power(2), body.normals, body.support, bump)
tr = Triple(power_volume(2), power(2), U2)
show(verify_wulff_variation(tr, fam2, scenario="wulff, square chart"))

# a decreasing volume integrand flips the sign of the derivative
tr = Triple(reciprocal(), power(2), U2)
show(verify_wulff_variation(tr, fam2, scenario="wulff, reciprocal integrand"))

# ---------------------------------------------------------------------
# 3. hull-polar side, including the entropy functional
# ---------------------------------------------------------------------
show(verify_hull_variation(log_log_triple(U2), fam, scenario="hull, log chart"))
show(verify_hull_variation(log_log_triple(U2), fam, entropy_mode=True,
                           scenario="hull, entropy functional"))
