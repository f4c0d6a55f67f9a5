"""Orlicz-type addition of a perturbation to a positive function on
directions, and finite-difference verification of the variational
formulas that tie the dual volumes to the image measures.

The addition acts through a strictly monotone chart Psi: the perturbed
values are f_eps = Psi^{-1}(Psi(f) + eps * g), computed pointwise by a
bracketed Newton iteration.  The verification routines compare central
differences of a dual volume along such a family with the matching
atomic integral of g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import Polytope, wulff_shape
from .errors import DomainError, InputError
from .functionals import (
    CELL_ATOL_2D,
    CELL_RTOL_3D,
    Triple,
    dual_volume,
    j_measure,
    mo_measure,
    polar_mo_measure,
)
from .mofunctions import T_MAX, T_MIN, MOFunction, log_t

_INVERT_TOL = 1e-13
_DELTA_CAP = 1e9


def _charts_match(a: MOFunction, b: MOFunction) -> bool:
    if a is b:
        return True
    if a.spec is not None and b.spec is not None:
        return a.spec == b.spec
    return False


@dataclass(frozen=True)
class PerturbationFamily:
    """A one-parameter family of positive functions on a direction list.

    delta is the half-width of the admissible parameter range, computed
    at construction so that the shifted chart values stay inside the
    range of the chart over its validity interval.
    """

    chart: MOFunction
    directions: np.ndarray
    base: np.ndarray
    bump: np.ndarray
    delta: float = 0.0

    def __post_init__(self):
        if not ({"CI", "Cd"} & self.chart.class_tags):
            raise InputError("the chart must be declared CI or Cd")
        dirs = np.asarray(self.directions, dtype=float)
        f = np.asarray(self.base, dtype=float)
        g = np.asarray(self.bump, dtype=float)
        if dirs.ndim != 2 or dirs.shape[1] not in (2, 3):
            raise InputError("directions must be an (m, 2) or (m, 3) array")
        m = dirs.shape[0]
        if f.shape != (m,) or g.shape != (m,):
            raise InputError("base and bump values must match the direction list")
        if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
            raise InputError("base values must be positive and finite")
        if not np.all(np.isfinite(g)):
            raise InputError("bump values must be finite")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "base", f)
        object.__setattr__(self, "bump", g)
        object.__setattr__(self, "delta", self._admissible_halfwidth())

    def _admissible_halfwidth(self) -> float:
        delta = _DELTA_CAP
        for xi, fv, gv in zip(self.directions, self.base, self.bump):
            if gv == 0.0:
                continue
            s = self.chart.value(xi, fv)
            ends = sorted([self.chart.value(xi, T_MIN), self.chart.value(xi, T_MAX)])
            # room toward each end of the attainable chart values
            delta = min(delta, (ends[1] - s) / abs(gv), (s - ends[0]) / abs(gv))
        return float(delta * (1.0 - 1e-9))

    def __len__(self):
        return self.base.shape[0]


def _invert_chart(chart: MOFunction, xi, target: float, start: float) -> float:
    """Solve chart(xi, t) = target for t, starting from a known interior
    value.  Geometric bracket expansion, then Newton safeguarded by the
    bracket."""
    increasing = "CI" in chart.class_tags
    val = chart.value(xi, start)
    tol = _INVERT_TOL * max(1.0, abs(target))
    if abs(val - target) <= tol:
        return start
    # expand a bracket [lo, hi] with the target between the endpoint values
    go_up = (target > val) == increasing
    lo, hi = start, start
    step = 2.0
    while True:
        if go_up:
            hi = min(hi * step, T_MAX)
            end_val = chart.value(xi, hi)
            if (end_val >= target) == increasing or hi >= T_MAX:
                break
        else:
            lo = max(lo / step, T_MIN)
            end_val = chart.value(xi, lo)
            if (end_val <= target) == increasing or lo <= T_MIN:
                break
    if lo > hi:
        lo, hi = hi, lo
    t = start if lo <= start <= hi else 0.5 * (lo + hi)
    for _ in range(200):
        val = chart.value(xi, t)
        if abs(val - target) <= tol:
            return t
        if (val < target) == increasing:
            lo = t
        else:
            hi = t
        dv = chart.t_deriv(xi, t)
        t_new = t - (val - target) / dv if dv != 0.0 else 0.5 * (lo + hi)
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * hi:
            return 0.5 * (lo + hi)
        t = t_new
    raise DomainError(f"chart inversion stalled at target {target:.6e}")


def mo_add(fam: PerturbationFamily, eps: float) -> np.ndarray:
    """The perturbed values f_eps on the family's direction list.

    eps = 0 returns the base values exactly (no inversion round trip).
    """
    if abs(eps) > fam.delta:
        raise DomainError(f"|eps| = {abs(eps):.3e} exceeds the admissible "
                          f"half-width {fam.delta:.3e}")
    if eps == 0.0:
        return fam.base.copy()
    out = np.empty(len(fam))
    for i, (xi, fv, gv) in enumerate(zip(fam.directions, fam.base, fam.bump)):
        target = fam.chart.value(xi, fv) + eps * gv
        out[i] = _invert_chart(fam.chart, xi, target, fv)
    return out


# ---------------------------------------------------------------------------
# finite-difference verification


@dataclass(frozen=True)
class VariationReport:
    """Outcome of one finite-difference check of a variational formula."""

    scenario: str
    kind: str
    eps: tuple
    fd_values: tuple
    analytic: float
    errors: tuple
    quadrature_floor: tuple
    lipschitz: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "kind": self.kind,
            "analytic": self.analytic,
            "table": [
                {"eps": e, "fd": d, "analytic": self.analytic, "error": r,
                 "quadrature_floor": q}
                for e, d, r, q in zip(self.eps, self.fd_values, self.errors,
                                      self.quadrature_floor)
            ],
            "lipschitz": self.lipschitz,
            "passed": bool(self.passed),
        }


DEFAULT_EPS = (1e-2, 1e-3, 1e-4, 1e-5)


def _fd_report(scenario, kind, eps_list, functional, analytic, floor_scale,
               lipschitz) -> VariationReport:
    eps_list = tuple(float(e) for e in eps_list)
    if any(e <= 0.0 for e in eps_list) or any(
            e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise InputError("eps values must be positive and strictly decreasing")
    fd = []
    floors = []
    for e in eps_list:
        fd.append((functional(e) - functional(-e)) / (2.0 * e))
        floors.append(floor_scale / (2.0 * e))
    errors = [abs(d - analytic) for d in fd]
    ok = all(e2 <= e1 or e2 <= 10.0 * q
             for e1, e2, q in zip(errors, errors[1:], floors[1:]))
    ok = ok and errors[-1] <= max(1e-6, 1e-3 * abs(analytic))
    return VariationReport(scenario=scenario, kind=kind, eps=eps_list,
                           fd_values=tuple(fd), analytic=float(analytic),
                           errors=tuple(errors),
                           quadrature_floor=tuple(floors),
                           lipschitz=float(lipschitz), passed=bool(ok))


def _empirical_lipschitz(fam: PerturbationFamily, eps: float) -> float:
    e = min(eps, 0.5 * fam.delta)
    if e <= 0.0:
        return 0.0
    return float(np.max(np.abs(mo_add(fam, e) - fam.base)) / e)


def _quad_floor(body: Polytope) -> float:
    n_active = int(np.sum(body.active))
    if body.dim == 2:
        return CELL_ATOL_2D * n_active
    return CELL_RTOL_3D  # relative; scaled by the caller where needed


def verify_wulff_variation(triple: Triple, fam: PerturbationFamily,
                           eps_list=DEFAULT_EPS, scenario: str = "") -> VariationReport:
    """Check that the derivative of the dual volume of the intersection
    body of f_eps matches the atomic integral of the bump against the
    image measure of the base body."""
    if not _charts_match(triple.addition_chart, fam.chart):
        raise InputError("the family's chart must equal the triple's")
    base_body = wulff_shape(fam.directions, fam.base)
    meas = mo_measure(triple, base_body)
    analytic = float(np.sum(fam.bump * meas.weights))

    def functional(e):
        return dual_volume(triple.volume_integrand, triple.base_measure,
                           wulff_shape(fam.directions, mo_add(fam, e)))

    return _fd_report(scenario or "wulff dual-volume variation", "wulff",
                      eps_list, functional, analytic,
                      _quad_floor(base_body), _empirical_lipschitz(fam, eps_list[-1]))


def verify_hull_variation(triple: Triple, fam: PerturbationFamily,
                          eps_list=DEFAULT_EPS, entropy_mode: bool = False,
                          scenario: str = "") -> VariationReport:
    """Check the hull-polar counterpart: the derivative of the dual volume
    of the polar of the hull body of f_eps equals minus the integral of
    the bump against the polar image measure.

    In entropy mode the functional is the entropy of the hull body and
    the reference measure is the polar-variant entropy measure."""
    if not _charts_match(triple.addition_chart, fam.chart):
        raise InputError("the family's chart must equal the triple's")
    # the polar of the hull body of f is the intersection body of 1/f,
    # built directly to avoid a polar round trip
    base_polar = wulff_shape(fam.directions, 1.0 / fam.base)
    if entropy_mode:
        meas = j_measure(triple.addition_chart, triple.base_measure, base_polar,
                         polar_variant=True)

        def functional(e):
            # entropy of the hull body: the log-integrand dual volume of its polar
            return dual_volume(log_t(), triple.base_measure,
                               wulff_shape(fam.directions, 1.0 / mo_add(fam, e)))
    else:
        meas = polar_mo_measure(triple, base_polar)

        def functional(e):
            return dual_volume(triple.volume_integrand, triple.base_measure,
                               wulff_shape(fam.directions, 1.0 / mo_add(fam, e)))

    analytic = -float(np.sum(fam.bump * meas.weights))
    kind = "hull-entropy" if entropy_mode else "hull"
    return _fd_report(scenario or f"{kind} variation", kind, eps_list,
                      functional, analytic, _quad_floor(base_polar),
                      _empirical_lipschitz(fam, eps_list[-1]))
