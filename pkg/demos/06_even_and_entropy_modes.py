"""Even-data problems and the entropy-constrained variant.

For origin-symmetric targets the problem comes in three flavors: a
minimization, a maximization (needing a decreasing integrand and a
vanishing-on-subspheres certificate), and an entropy-constrained
normalization.  Infeasible (mode, G, Psi) combinations are rejected
up front with a typed error.
"""

import numpy as np

from mogauss.errors import HypothesisError
from mogauss.functionals import Triple, entropy
from mogauss.mofunctions import log_t, power, power_volume, reciprocal
from mogauss.solver import Mode, ProblemSpec, solve, solve_j_problem
from mogauss.sphere import SphericalMeasure, log_cosine_bound

U2 = SphericalMeasure.uniform(2)

# an even target: antipodal atom pairs with equal masses
masses = np.array([1.0, 1.4, 0.7, 1.1, 0.9])
th = np.pi * np.arange(5) / 5 + 0.2
d = np.column_stack([np.cos(th), np.sin(th)])
mu = SphericalMeasure.from_atoms(np.vstack([d, -d]),
                                 np.concatenate([masses, masses]))

# ---------------------------------------------------------------------
# 1. even minimization and maximization
# ---------------------------------------------------------------------

sol_min = solve(ProblemSpec(Triple(reciprocal(), power(-2), U2), mu,
                            Mode.EVEN_MIN))
print("even min:", sol_min.status, " kkt:", sol_min.residual_sup)
print("  antipodal support gap:",
      np.max(np.abs(sol_min.K.support[:5] - sol_min.K.support[5:])))

sol_max = solve(ProblemSpec(Triple(reciprocal(), power(2), U2), mu,
                            Mode.EVEN_MAX, mu_vanishes_on_subspheres=True))
print("even max:", sol_max.status, " kkt:", sol_max.residual_sup)

# the maximization refuses to run without the certificate
try:
    solve(ProblemSpec(Triple(reciprocal(), power(2), U2), mu, Mode.EVEN_MAX))
except HypothesisError as e:
    print("without the vanishing certificate:", e)

# ---------------------------------------------------------------------
# 2. entropy-constrained normalization
# ---------------------------------------------------------------------
# The constraint pins the entropy of the hull body of the solution
# data, which is the polar of the solved intersection body.

sol_e = solve(ProblemSpec(Triple(log_t(), power(2), U2), mu,
                          Mode.ENTROPY_EVEN))
print("\nentropy mode:", sol_e.status, " kkt:", sol_e.residual_sup)
print("  entropy of the hull body:", entropy(U2, sol_e.K.polar()))
val, pole = log_cosine_bound(U2)
print("  log-cosine bound of lambda:", val, "attained at", np.round(pole, 6))

# the entropy-flavored front end picks mode and chart automatically:
# an increasing-integrand chart goes through the reciprocal transform
# into the even minimization, anything else monotone lands here
sol_j = solve_j_problem(power(2), U2, mu, even=True)
print("  solve_j_problem(t^2) mode:", sol_j.mode.name, " status:", sol_j.status)
sol_j0 = solve_j_problem(log_t(), U2, mu, even=True)
print("  solve_j_problem(log t) mode:", sol_j0.mode.name,
      " status:", sol_j0.status)

# ---------------------------------------------------------------------
# 3. typed rejection of infeasible combinations
# ---------------------------------------------------------------------

bad = [
    (Mode.GENERAL_MIN, reciprocal(), power(2)),
    (Mode.GAUSS_IMAGE, power_volume(2), power(2)),
    (Mode.EVEN_MAX, reciprocal(), power(-2)),
]
print()
for mode, g, psi in bad:
    try:
        solve(ProblemSpec(Triple(g, psi, U2), mu, mode,
                          mu_vanishes_on_subspheres=True))
    except HypothesisError as e:
        print(f"rejected {mode.name} with G={g.name}, Psi={psi.name}")
