"""Constrained-optimization solver for the Gauss-image measure problems.

The discrete problem: given finitely many target directions u_i with
masses mu_i, find a convex body K whose image measure matches mu up to a
multiplier.  Following the variational structure of the problem, the
decision variables are chart coordinates s_i = Psi(u_i, r_i); the body
K = [1/r] is the polar of the hull of the points r_i u_i, the objective
sum(mu_i s_i) is linear, and the constraint pins the mode's dual volume
of K to its unit-ball value.  The gradient of the constraint is itself a
measure evaluation, so the KKT residual of the optimization equals the
measure-matching residual of the geometric problem.

Feasibility of a mode is decided by declared class tags and limits of
(G, Psi) together with concentration margins of mu and lambda; every
rejected combination raises a typed error naming the failed condition.
The six documented infeasible class combinations (each rejected, tested,
and matching a necessity direction of the existence theory):

  1. GENERAL_MIN with an increasing chart (Psi in C_I);
  2. GENERAL_MIN with an increasing volume integrand (G in G_I or C_I);
  3. GAUSS_IMAGE with a decreasing chart and decreasing integrand
     (Psi in C_d, G in G_d: neither branch applies);
  4. GAUSS_IMAGE with an increasing volume integrand (G in G_I);
  5. EVEN_MAX with an increasing volume integrand (needs G in G_d);
  6. EVEN_MAX with a decreasing chart (needs Psi in C_I).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .bodies import Polytope, wulff_shape
from .errors import (
    DegenerateMeasureError,
    HypothesisError,
    InputError,
    MoGaussError,
    OutOfClassError,
)
from .functionals import Triple, dual_volume, mo_measure, polar_mo_measure
from .mofunctions import (
    MOFunction,
    classify,
    log_t,
    neg_log_t,
    reciprocal_transform,
)
from .quadrature import (
    _presplit_at_planes,
    _subdivide,
    fan_triangles,
    panel_nodes,
    triangle_nodes,
)
from .sphere import (
    SphericalMeasure,
    hemisphere_margin,
    is_even,
    log_cosine_bound,
    subsphere_margin_even,
)
from .variation import _invert_chart


class Mode(Enum):
    GENERAL_MIN = "general_min"
    GAUSS_IMAGE = "gauss_image"
    EVEN_MIN = "even_min"
    EVEN_MAX = "even_max"
    ENTROPY_EVEN = "entropy_even"


_EVEN_MODES = {Mode.EVEN_MIN, Mode.EVEN_MAX, Mode.ENTROPY_EVEN}
_MAX_MODES = {Mode.EVEN_MAX, Mode.ENTROPY_EVEN}

_MARGIN_REL = 1e-10


def _tags(f: MOFunction):
    return f.class_tags


def _classify_entry(f: MOFunction) -> dict:
    try:
        rep = classify(f)
        return {"consistent": bool(rep.consistent), "failures": list(rep.failures),
                "fd_max_rel_err": rep.fd_max_rel_err}
    except OutOfClassError as e:
        return {"consistent": False, "failures": [str(e)], "fd_max_rel_err": None}


def _lambda_spread_ok(lam: SphericalMeasure) -> tuple[bool, str]:
    """lambda must not concentrate on a closed hemisphere; a strictly
    positive density passes by inspection."""
    if not lam.is_atomic:
        from .quadrature import circle_grid, fibonacci_sphere
        probe = circle_grid(256) if lam.dim == 2 else fibonacci_sphere(512)
        if float(np.min(lam.density(probe))) > 0.0:
            return True, "density strictly positive on probe grid"
    val, _ = hemisphere_margin(lam)
    ok = val > _MARGIN_REL * lam.total_mass()
    return ok, f"hemisphere margin {val:.3e}"


def _mode_conditions(mode: Mode, g: MOFunction, psi: MOFunction,
                     lam: SphericalMeasure, mu: SphericalMeasure,
                     vanishing_flag: bool) -> list[dict]:
    tg, tp = _tags(g), _tags(psi)
    conds = []

    def add(name, ok, detail=""):
        conds.append({"name": name, "ok": bool(ok), "detail": detail})

    if mode in (Mode.GENERAL_MIN, Mode.EVEN_MIN):
        b1 = "Cd" in tp and psi.limit_at_zero == "inf" and "Gd" in tg
        b2 = "Cd" in tg and g.limit_at_zero == "inf" and "Gd" in tp
        add("class combination",
            b1 or b2,
            "needs (Psi in C_d with lim_0 Psi = inf and G in G_d) or "
            "(G in C_d with lim_0 G = inf and Psi in G_d)")
    elif mode is Mode.GAUSS_IMAGE:
        b1 = "CI" in tp and psi.limit_at_inf == "inf" and "Gd" in tg
        b2 = "Cd" in tg and g.limit_at_zero == "inf" and "GI" in tp
        add("class combination",
            b1 or b2,
            "needs (Psi in C_I with lim_inf Psi = inf and G in G_d) or "
            "(G in C_d with lim_0 G = inf and Psi in G_I)")
    elif mode is Mode.EVEN_MAX:
        add("class combination",
            "CI" in tp and "Gd" in tg,
            "needs Psi in C_I and G in G_d")
        add("mu vanishes on great subspheres (declared)", vanishing_flag,
            "set mu_vanishes_on_subspheres=True to assert the hypothesis")
    elif mode is Mode.ENTROPY_EVEN:
        add("chart monotone",
            bool({"CI", "Cd"} & tp),
            "needs Psi in C_I, or C_d handled through the reciprocal transform")
        lc, _ = log_cosine_bound(lam)
        add("log-cosine bound finite",
            np.isfinite(lc) and lc > -1e9,
            f"log-cosine bound {lc:.6e}")

    if mode in _EVEN_MODES:
        add("mu even", is_even(mu), "")
        add("lambda even", is_even(lam), "")
        add("integrands even in direction",
            g.even_in_direction and psi.even_in_direction,
            "even modes need G(-xi, t) = G(xi, t) and likewise for Psi")
        if is_even(mu):
            sm = subsphere_margin_even(mu)[0]
            add("mu subsphere margin positive",
                sm > _MARGIN_REL * mu.total_mass(), f"margin {sm:.3e}")
    else:
        hm = hemisphere_margin(mu)[0]
        add("mu hemisphere margin positive",
            hm > _MARGIN_REL * mu.total_mass(), f"margin {hm:.3e}")
        ok, detail = _lambda_spread_ok(lam)
        add("lambda not concentrated on a hemisphere", ok, detail)
    return conds


@dataclass(frozen=True)
class ProblemSpec:
    """A measure-matching problem: triple, atomic target, mode.

    The hypothesis report is assembled at construction (class tags,
    classification evidence, concentration margins); solve() refuses to
    run when it fails.  The chart actually used for the decision
    variables is stored alongside (the reciprocal transform is applied
    here, once, for the modes that need it).
    """

    triple: Triple
    mu: SphericalMeasure
    mode: Mode
    mu_vanishes_on_subspheres: bool = False
    hypothesis_report: dict = field(default=None, compare=False)
    chart: MOFunction = field(default=None, compare=False)

    def __post_init__(self):
        if not self.mu.is_atomic:
            raise InputError("the solver's target measure must be atomic")
        if self.mu.dim != self.triple.base_measure.dim:
            raise InputError("target and base measures live in different dimensions")
        g = self.triple.volume_integrand
        psi = self.triple.addition_chart
        lam = self.triple.base_measure
        conds = _mode_conditions(self.mode, g, psi, lam, self.mu,
                                 self.mu_vanishes_on_subspheres)
        chart = psi
        if self.mode is Mode.GAUSS_IMAGE:
            chart = reciprocal_transform(psi)
        elif self.mode is Mode.ENTROPY_EVEN and "CI" not in psi.class_tags:
            chart = reciprocal_transform(psi)
        report = {
            "mode": self.mode.value,
            "conditions": conds,
            "classify": {"volume_integrand": _classify_entry(g),
                         "addition_chart": _classify_entry(psi)},
            "passed": all(c["ok"] for c in conds),
        }
        object.__setattr__(self, "hypothesis_report", report)
        object.__setattr__(self, "chart", chart)

    @property
    def constraint_integrand(self) -> MOFunction:
        return log_t() if self.mode is Mode.ENTROPY_EVEN else self.triple.volume_integrand

    @property
    def maximize(self) -> bool:
        return self.mode in _MAX_MODES

    @property
    def even(self) -> bool:
        return self.mode in _EVEN_MODES


@dataclass
class SolveOptions:
    tol: float = None          # default 1e-6 (2D) / 1e-4 (3D)
    max_iter: int = 5000
    R_max: float = 1e3
    r_min: float = 1e-3
    lift_period: int = 50
    lift_factor: float = 1.01
    armijo: float = 1e-4
    depth_3d: int = 2
    verbose: bool = False


@dataclass(frozen=True)
class Solution:
    K: Polytope
    multiplier: float
    residual_sup: float
    objective_trace: tuple
    constraint_trace: tuple
    status: str
    mode: Mode
    iterations: int
    message: str = ""


# ---------------------------------------------------------------------------
# frozen cell quadrature bound to one body


class _FrozenCells:
    """Quadrature nodes frozen on the radial cells of a polytope.

    Scaling the body moves no cell walls, so the same nodes evaluate the
    dual volume and the polar image measure of every scaled copy c*K.
    Node weights absorb the base-measure density.
    """

    def __init__(self, lam: SphericalMeasure, body: Polytope, depth_3d: int = 2):
        self.body = body
        self.blocks = [None] * len(body.support)
        cells = body.radial_cells()
        for i in np.where(body.active)[0]:
            u = body.normals[i]
            h = body.support[i]
            if body.dim == 2:
                a, b = cells[i]
                edges = [a]
                for k in lam.kinks:
                    for kk in (k % (2 * np.pi), k % (2 * np.pi) + 2 * np.pi):
                        if a + 1e-13 < kk < b - 1e-13:
                            edges.append(kk)
                edges = sorted(edges) + [b]
                th_all, w_all = [], []
                for lo, hi in zip(edges[:-1], edges[1:]):
                    if hi - lo <= 1e-14:
                        continue
                    # smooth integrands: composite GL on eighth-cell panels
                    k = max(1, int(np.ceil((hi - lo) / (np.pi / 8))))
                    cuts = np.linspace(lo, hi, k + 1)
                    pan = np.column_stack([cuts[:-1], cuts[1:]])
                    nodes, wts = panel_nodes(pan, k=32)
                    th_all.append(nodes)
                    w_all.append(wts)
                th = np.concatenate(th_all)
                wts = np.concatenate(w_all)
                x = np.column_stack([np.cos(th), np.sin(th)])
            else:
                tris = fan_triangles(cells[i])
                if lam.kink_axes:
                    tris = _presplit_at_planes(tris, lam.kink_axes, depth=3)
                for _ in range(depth_3d):
                    tris = _subdivide(tris)
                x, wts = triangle_nodes(tris)
            wl = wts * lam.density(x)
            rho = h / (x @ u)
            self.blocks[i] = (x, wl, rho)

    def dual_volume(self, g: MOFunction, c: float) -> float:
        total = 0.0
        for blk in self.blocks:
            if blk is None:
                continue
            x, wl, rho = blk
            total += float(np.sum(wl * g.value(x, c * rho)))
        return total

    def measure_weights(self, g: MOFunction, chart: MOFunction, c: float) -> np.ndarray:
        """Weights of the polar image measure of c * body at every facet."""
        body = self.body
        w = np.zeros(len(body.support))
        active = [i for i, blk in enumerate(self.blocks) if blk is not None]
        if not active:
            return w
        for i in active:
            x, wl, rho = self.blocks[i]
            w[i] = float(np.sum(wl * (c * rho) * g.t_deriv(x, c * rho)))
        t_pol = 1.0 / (c * body.support[active])
        den = chart.t_deriv(body.normals[active], t_pol)
        w[active] /= t_pol * den
        return w


def _bisect_scale(value_fn, target: float, c_lo: float, c_hi: float,
                  tol: float) -> float:
    """Root of value_fn(c) = target on [c_lo, c_hi] by bisection; the
    function is strictly monotone in c for monotone integrands."""
    f_lo = value_fn(c_lo) - target
    f_hi = value_fn(c_hi) - target
    grow = 0
    while f_lo * f_hi > 0.0 and grow < 60:
        c_lo *= 0.5
        c_hi *= 2.0
        f_lo = value_fn(c_lo) - target
        f_hi = value_fn(c_hi) - target
        grow += 1
    if f_lo * f_hi > 0.0:
        raise InputError("no scale satisfies the constraint on any bracket")
    if f_lo == 0.0:
        return c_lo
    if f_hi == 0.0:
        return c_hi
    for _ in range(200):
        c_mid = 0.5 * (c_lo + c_hi)
        f_mid = value_fn(c_mid) - target
        if abs(f_mid) <= tol or (c_hi - c_lo) <= 1e-15 * c_hi:
            return c_mid
        if (f_mid > 0.0) == (f_hi > 0.0):
            c_hi, f_hi = c_mid, f_mid
        else:
            c_lo, f_lo = c_mid, f_mid
    return 0.5 * (c_lo + c_hi)


def _unit_ball_value(g: MOFunction, lam: SphericalMeasure) -> float:
    return lam.integrate(lambda x: g.value(x, np.ones(np.atleast_2d(x).shape[0])))


def normalize_to_constraint(g: MOFunction, lam: SphericalMeasure,
                            body: Polytope) -> tuple[float, Polytope]:
    """Scale the polar of the body so its dual volume matches the unit
    ball's.

    Returns (c0, c0 * body.polar()); the bracket for c0 comes from the
    polar's radial extremes (at the ends the scaled body is inside,
    respectively outside, the unit ball, so monotone integrands cross).
    The bisection target is 1e-12 relative.
    """
    if not ({"CI", "Cd"} & g.class_tags):
        raise InputError("constraint normalization needs a strictly monotone "
                         "volume integrand (declared CI or Cd)")
    polar = body.polar()
    target = _unit_ball_value(g, lam)
    tol = 1e-12 * max(abs(target), lam.total_mass())
    froz = _FrozenCells(lam, polar, depth_3d=3)
    c0 = _bisect_scale(lambda c: froz.dual_volume(g, c), target,
                       1.0 / polar.circumradius, 1.0 / polar.inradius, tol)
    # polish on the fully adaptive evaluator in case the frozen nodes bias
    exact = lambda c: dual_volume(g, lam, polar.scaled(c))
    if abs(exact(c0) - target) > tol:
        c0 = _bisect_scale(exact, target, 0.95 * c0, c0 / 0.95, tol)
    return c0, polar.scaled(c0)


# ---------------------------------------------------------------------------
# the solve loop


def _antipodal_pairs(dirs: np.ndarray) -> np.ndarray:
    m = dirs.shape[0]
    pair = np.full(m, -1, dtype=int)
    for i in range(m):
        d = np.linalg.norm(dirs + dirs[i][None, :], axis=1)
        j = int(np.argmin(d))
        if d[j] > 1e-10:
            raise HypothesisError("even mode", f"atom {i} has no antipodal partner")
        pair[i] = j
    return pair


def _chart_values(chart: MOFunction, dirs, r) -> np.ndarray:
    return np.asarray(chart.value(dirs, np.asarray(r, dtype=float)), dtype=float)


def _invert_all(chart: MOFunction, dirs, s, r_start) -> np.ndarray:
    out = np.empty(len(s))
    for i, (u, target, start) in enumerate(zip(dirs, s, r_start)):
        out[i] = _invert_chart(chart, u, float(target), float(start))
    return out


def solve(spec: ProblemSpec, opts: SolveOptions = None) -> Solution:
    """Projected-gradient solution of the measure-matching problem.

    Every iterate is re-projected onto the constraint by the exact 1-D
    scaling, so the objective trace is a trace along the constraint set;
    a step is accepted on sufficient objective improvement.  Exit states:
    OK (KKT residual at tolerance, verified on the adaptive quadrature),
    NON_CONVERGED (cap or stall; best iterate returned), DIVERGED (size
    guards tripped).
    """
    opts = opts or SolveOptions()
    if not spec.hypothesis_report["passed"]:
        failed = "; ".join(c["name"] + (f" ({c['detail']})" if c["detail"] else "")
                           for c in spec.hypothesis_report["conditions"]
                           if not c["ok"])
        raise HypothesisError(spec.mode.value, failed)

    dirs = spec.mu.atom_directions
    mu_w = spec.mu.atom_masses
    m = dirs.shape[0]
    dim = dirs.shape[1]
    lam = spec.triple.base_measure
    chart = spec.chart
    g_con = spec.constraint_integrand
    if not ({"CI", "Cd"} & chart.class_tags):
        raise HypothesisError(spec.mode.value,
                              "the decision chart must be declared CI or Cd")
    tol = opts.tol if opts.tol is not None else (1e-6 if dim == 2 else 1e-4)
    sign = -1.0 if spec.maximize else 1.0
    pair = _antipodal_pairs(dirs) if spec.even else None

    target = _unit_ball_value(g_con, lam)
    con_tol = 1e-12 * max(abs(target), lam.total_mass())
    mu_total = float(np.sum(mu_w))
    mu_ratio = mu_w / mu_total

    def tie(v):
        return 0.5 * (v + v[pair]) if pair is not None else v

    def project(r_vals):
        """Scale r so K = [1/r] satisfies the constraint.  Scaling moves
        no cell walls, so the frozen nodes of the unscaled body serve the
        scaled one with the factor folded into the t-argument; returns
        (r_scaled, scaled body, frozen cells, scale, constraint value)."""
        body = Polytope(dirs, 1.0 / r_vals, _skip_checks=True)
        froz = _FrozenCells(lam, body, depth_3d=opts.depth_3d)
        c0 = _bisect_scale(lambda c: froz.dual_volume(g_con, c), target,
                           1.0 / body.circumradius, 1.0 / body.inradius, con_tol)
        r_new = tie(r_vals / c0)
        return (r_new, body.scaled(c0), froz, c0,
                froz.dual_volume(g_con, c0))

    # feasibility witness: the unit ball, i.e. r built from equal radii
    wulff_shape(dirs, np.ones(m))  # runs the hemisphere/validity checks once
    r, body, froz, scale_c, con_val = project(np.ones(m))

    obj_trace = []
    con_trace = []
    best = None
    status = "NON_CONVERGED"
    message = ""
    alpha_ws = 0.5
    it = 0

    for it in range(1, opts.max_iter + 1):
        s = _chart_values(chart, dirs, r)
        obj = float(np.sum(mu_w * s))
        w = froz.measure_weights(g_con, chart, scale_c)
        W = float(np.sum(w))
        if W == 0.0:
            raise DegenerateMeasureError("the image measure of the iterate "
                                         "has zero total mass")
        kkt = float(np.max(np.abs(mu_ratio - w / W)))
        obj_trace.append(obj)
        con_trace.append(con_val)
        if best is None or kkt < best[0]:
            best = (kkt, r.copy())

        if body.circumradius > opts.R_max or body.inradius < opts.r_min:
            status = "DIVERGED"
            message = (f"size guard tripped: circumradius {body.circumradius:.3e}, "
                       f"inradius {body.inradius:.3e}")
            break

        if kkt <= tol:
            exact_w = polar_mo_measure(Triple(g_con, chart, lam), body).weights
            exact_W = float(np.sum(exact_w))
            exact_kkt = float(np.max(np.abs(mu_ratio - exact_w / exact_W)))
            if exact_kkt <= tol:
                status = "OK"
                break
            # frozen quadrature was too coarse near the tolerance: deepen
            opts = replace(opts, depth_3d=opts.depth_3d + 1)
            r, body, froz, scale_c, con_val = project(r)
            continue

        # gradient step in the chart coordinates, projected onto the
        # tangent of the constraint (gradient of the constraint is -w)
        mu_eff = tie(mu_w.copy()) if pair is not None else mu_w
        w_eff = tie(w.copy()) if pair is not None else w
        wn = float(np.dot(w_eff, w_eff))
        d = -sign * (mu_eff - (np.dot(mu_eff, w_eff) / wn) * w_eff)
        d = tie(d) if pair is not None else d
        dmax = float(np.max(np.abs(d)))
        if dmax == 0.0:
            message = "zero projected gradient"
            break
        d = d / dmax
        slope = float(np.sum(mu_w * d))  # directional derivative of the objective

        alpha = alpha_ws
        accepted = False
        while alpha > 1e-14:
            s_try = s + alpha * d
            try:
                r_try = _invert_all(chart, dirs, s_try, r)
                r_try, body_t, froz_t, c_t, con_t = project(r_try)
            except MoGaussError:
                alpha *= 0.5
                continue
            obj_try = float(np.sum(mu_w * _chart_values(chart, dirs, r_try)))
            gain = sign * (obj - obj_try)
            if gain >= opts.armijo * alpha * abs(slope):
                r, body, froz, scale_c, con_val = r_try, body_t, froz_t, c_t, con_t
                alpha_ws = min(2.0 * alpha, 10.0)
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            inactive = ~body.active
            if np.any(inactive):
                r = tie(np.where(inactive, r * opts.lift_factor, r))
                r, body, froz, scale_c, con_val = project(r)
                alpha_ws = 0.5
                continue
            message = "line search stalled"
            break
        if opts.lift_period and it % opts.lift_period == 0:
            inactive = ~body.active
            if np.any(inactive):
                r = tie(np.where(inactive, r * opts.lift_factor, r))
                r, body, froz, scale_c, con_val = project(r)

    if status != "OK" and best is not None and status != "DIVERGED":
        r = best[1]
        r, body, froz, scale_c, con_val = project(r)

    K = Polytope(dirs, 1.0 / r)
    # polish the constraint on the adaptive evaluator, then measure the
    # residual on the body actually returned
    v_exact = dual_volume(g_con, lam, K)
    scale_ref = max(abs(target), lam.total_mass())
    if abs(v_exact - target) > 1e-8 * scale_ref:
        c_fix = _bisect_scale(lambda c: dual_volume(g_con, lam, K.scaled(c)),
                              target, 0.9, 1.0 / 0.9, con_tol)
        K = K.scaled(c_fix)
        con_val = dual_volume(g_con, lam, K)
    else:
        con_val = v_exact
    con_trace.append(con_val)
    exact_w = polar_mo_measure(Triple(g_con, chart, lam), K).weights
    exact_W = float(np.sum(exact_w))
    if exact_W == 0.0:
        raise DegenerateMeasureError("the image measure of the final body "
                                     "has zero total mass")
    residual_sup = float(np.max(np.abs(mu_ratio - exact_w / exact_W)))
    if status == "OK" and residual_sup > tol:
        status = "NON_CONVERGED"
        message = "adaptive re-check exceeded tolerance"

    return Solution(K=K, multiplier=mu_total / exact_W,
                    residual_sup=residual_sup,
                    objective_trace=tuple(obj_trace),
                    constraint_trace=tuple(con_trace),
                    status=status, mode=spec.mode, iterations=it,
                    message=message)


# ---------------------------------------------------------------------------
# residual against a candidate body


@dataclass(frozen=True)
class ResidualReport:
    residual_sup: float
    multiplier: float
    matched: int
    total_atoms: int


def residual_report(triple: Triple, mu: SphericalMeasure, K: Polytope,
                    which: str = "tilde") -> ResidualReport:
    """Measure-matching residual of a candidate body: the sup over target
    atoms of |mu_i/|mu| - w_i/W|, with w the tilde or polar image measure
    of K.  Target atoms with no matching facet normal (1e-10 angular)
    count at weight zero."""
    if not mu.is_atomic:
        raise InputError("the residual needs an atomic target measure")
    if which not in ("tilde", "polar"):
        raise InputError('which must be "tilde" or "polar"')
    meas = mo_measure(triple, K) if which == "tilde" else polar_mo_measure(triple, K)
    W = meas.total()
    if W == 0.0:
        raise DegenerateMeasureError("image measure of the candidate body is "
                                     "identically zero")
    mu_w = mu.atom_masses
    mu_total = float(np.sum(mu_w))
    matched = 0
    worst = 0.0
    for u, m_i in zip(mu.atom_directions, mu_w):
        w_i = meas.weight_at(u)
        if w_i != 0.0:
            matched += 1
        worst = max(worst, abs(m_i / mu_total - w_i / W))
    return ResidualReport(residual_sup=float(worst),
                          multiplier=float(mu_total / W),
                          matched=matched, total_atoms=len(mu_w))


def residual(triple: Triple, mu: SphericalMeasure, K: Polytope,
             which: str = "tilde") -> float:
    return residual_report(triple, mu, K, which).residual_sup


# ---------------------------------------------------------------------------
# the entropy-flavored problem


def solve_j_problem(chart: MOFunction, lam: SphericalMeasure,
                    mu: SphericalMeasure, even: bool = False,
                    opts: SolveOptions = None) -> Solution:
    """Measure matching for the entropy-flavored measures.

    Charts in G_I reduce to the problem with G = -log t, whose tilde
    measure is minus the entropy-flavored one (even targets go through
    the reciprocal transform so the minimization hypotheses hold).  Any
    other strictly monotone chart, log t included, is handled by the
    even entropy mode, whose gradient measure is the entropy-flavored
    one up to overall sign; the matching residual is sign-free.
    """
    if "GI" in chart.class_tags:
        triple = Triple(neg_log_t(), reciprocal_transform(chart) if even else chart,
                        lam)
        mode = Mode.EVEN_MIN if even else Mode.GAUSS_IMAGE
    elif {"CI", "Cd"} & chart.class_tags:
        if not even:
            raise HypothesisError("j problem",
                                  "a chart outside G_I requires the even "
                                  "entropy mode (pass even=True)")
        triple = Triple(log_t(), chart, lam)
        mode = Mode.ENTROPY_EVEN
    else:
        raise HypothesisError("j problem",
                              "the chart must be in G_I, or strictly monotone "
                              "for the even entropy mode")
    return solve(ProblemSpec(triple, mu, mode), opts)
