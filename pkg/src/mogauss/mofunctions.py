"""Musielak-Orlicz integrands and their class bookkeeping.

An integrand here is a function of a unit direction and a positive scalar,
F(xi, t), together with its partial derivative in t.  The package keeps
explicit track of which structural class each function belongs to, because
the measures and the solver modes are only defined (or only well-posed) for
certain class combinations:

``C``    continuous with continuous t-derivative on (0, inf),
``CI``   member of C with strictly positive t-derivative,
``Cd``   member of C with strictly negative t-derivative,
``GI``   positive and increasing with limits 0 at 0+ and inf at inf,
``Gd``   positive and decreasing with limits inf at 0+ and 0 at inf.

Values are trusted only on ``[T_MIN, T_MAX]``; evaluation outside raises
:class:`~mogauss.errors.DomainError` rather than extrapolating.

The reciprocal substitution t -> 1/t (see :func:`reciprocal_transform`)
swaps increasing and decreasing classes and is an involution.  It is the
bridge between the polar and the non-polar problems and is applied, at most
once, when a solver specification is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InputError, OutOfClassError

T_MIN = 1e-8
T_MAX = 1e8

CLASS_TAGS = frozenset({"C", "CI", "Cd", "GI", "Gd"})

_TILDE_TAG = {"C": "C", "CI": "Cd", "Cd": "CI", "GI": "Gd", "Gd": "GI"}


def _check_t(t):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite argument t")
    if np.any(arr < T_MIN) or np.any(arr > T_MAX):
        bad = arr[(arr < T_MIN) | (arr > T_MAX)].ravel()[0]
        raise DomainError(f"argument t={bad!r} outside validity range [{T_MIN}, {T_MAX}]")
    return arr


def _check_xi(xi):
    if xi is None:
        return None
    arr = np.asarray(xi, dtype=float)
    nrm = np.linalg.norm(arr, axis=-1)
    if np.any(np.abs(nrm - 1.0) > 1e-8):
        raise DomainError("direction argument is not a unit vector")
    return arr


@dataclass(frozen=True)
class MOFunction:
    """A direction-dependent Orlicz-type integrand F(xi, t).

    Parameters
    ----------
    name:
        Human-readable label used in reports and reprs.
    evaluator, t_derivative:
        Callables ``(xi, t) -> value`` where ``xi`` is ``None``, a unit
        vector, or an array of unit vectors, and ``t`` is a float or an
        array broadcastable against ``xi``'s leading shape.  They are only
        ever called with ``t`` inside the validity range.
    class_tags:
        The structural classes the function is declared to belong to; a
        subset of ``{"C", "CI", "Cd", "GI", "Gd"}``.  Declarations are
        verified lazily by :func:`classify`, not at construction.
    limit_at_zero, limit_at_inf:
        One of ``"zero"``, ``"finite"``, ``"inf"``, ``"-inf"``: the
        behaviour of F(xi, .) at the two ends of (0, inf).  Solver mode
        guards read these flags.
    even_in_direction:
        True when F(-xi, t) = F(xi, t) for all xi.  Direction-independent
        functions are trivially even.
    spec:
        JSON-serializable description for round-tripping, or None for
        ad-hoc functions that cannot be written to a file.
    """

    name: str
    evaluator: Callable
    t_derivative: Callable
    class_tags: frozenset
    limit_at_zero: str
    limit_at_inf: str
    even_in_direction: bool = True
    spec: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        tags = frozenset(self.class_tags)
        if not tags <= CLASS_TAGS:
            raise InputError(f"unknown class tags {sorted(tags - CLASS_TAGS)}")
        object.__setattr__(self, "class_tags", tags)

    def value(self, xi, t):
        """F(xi, t).  Raises DomainError off the validity range."""
        tt = _check_t(t)
        out = self.evaluator(_check_xi(xi), tt)
        return float(out) if np.ndim(t) == 0 and np.ndim(out) == 0 else np.asarray(out, dtype=float)

    def t_deriv(self, xi, t):
        """dF/dt (xi, t).  Raises DomainError off the validity range."""
        tt = _check_t(t)
        out = self.t_derivative(_check_xi(xi), tt)
        return float(out) if np.ndim(t) == 0 and np.ndim(out) == 0 else np.asarray(out, dtype=float)

    def __repr__(self):
        tags = ",".join(sorted(self.class_tags))
        return f"MOFunction({self.name}; tags={{{tags}}})"


def reciprocal_transform(f: MOFunction) -> MOFunction:
    """The substitution t -> 1/t with the induced derivative.

    Returns the function g(xi, t) = f(xi, 1/t), whose t-derivative is
    -t^{-2} f_t(xi, 1/t).  Applying the transform twice gives back the
    original function (up to roundoff in 1/(1/t)).  Increasing classes map
    to decreasing ones and vice versa, and the two limit flags swap.
    """
    inner_eval = f.evaluator
    inner_deriv = f.t_derivative

    def ev(xi, t):
        return inner_eval(xi, 1.0 / t)

    def dv(xi, t):
        return -inner_deriv(xi, 1.0 / t) / (t * t)

    if f.spec is not None and set(f.spec.keys()) == {"tilde"}:
        spec = f.spec["tilde"]
        name = f.name[6:-1] if f.name.startswith("tilde(") else f"tilde({f.name})"
    else:
        spec = {"tilde": f.spec} if f.spec is not None else None
        name = f"tilde({f.name})"
    return MOFunction(
        name=name,
        evaluator=ev,
        t_derivative=dv,
        class_tags=frozenset(_TILDE_TAG[tag] for tag in f.class_tags),
        limit_at_zero=f.limit_at_inf,
        limit_at_inf=f.limit_at_zero,
        even_in_direction=f.even_in_direction,
        spec=spec,
    )


# ---------------------------------------------------------------------------
# built-in families


def power(p: float) -> MOFunction:
    """t^p.  Increasing classes for p > 0, decreasing for p < 0."""
    p = float(p)
    if p > 0:
        tags, lz, li = frozenset({"C", "CI", "GI"}), "zero", "inf"
    elif p < 0:
        tags, lz, li = frozenset({"C", "Cd", "Gd"}), "inf", "zero"
    else:
        tags, lz, li = frozenset({"C"}), "finite", "finite"
    return MOFunction(
        name=f"t^{p:g}",
        evaluator=lambda xi, t: t**p,
        t_derivative=lambda xi, t: p * t ** (p - 1.0),
        class_tags=tags,
        limit_at_zero=lz,
        limit_at_inf=li,
        spec={"builtin": "power", "params": {"p": p}},
    )


def reciprocal() -> MOFunction:
    """1/t, the decreasing power of exponent -1."""
    return power(-1.0)


def power_ratio(p: float) -> MOFunction:
    """t^p / |p|, the normalized power family.

    For p > 0 this is t^p/p, increasing from 0 to inf.  For p < 0 the
    denominator is |p| so the function stays positive and decreasing; its
    t-derivative is then -t^{p-1}.
    """
    p = float(p)
    if p == 0.0:
        raise InputError("power_ratio requires p != 0")
    sgn = 1.0 if p > 0 else -1.0
    if p > 0:
        tags, lz, li = frozenset({"C", "CI", "GI"}), "zero", "inf"
    else:
        tags, lz, li = frozenset({"C", "Cd", "Gd"}), "inf", "zero"
    return MOFunction(
        name=f"t^{p:g}/{abs(p):g}",
        evaluator=lambda xi, t: t**p / abs(p),
        t_derivative=lambda xi, t: sgn * t ** (p - 1.0),
        class_tags=tags,
        limit_at_zero=lz,
        limit_at_inf=li,
        spec={"builtin": "power_ratio", "params": {"p": p}},
    )


def power_volume(n: int) -> MOFunction:
    """t^n / n for an integer dimension n; the dual-volume integrand."""
    n = int(n)
    if n <= 0:
        raise InputError("power_volume requires n >= 1")
    return MOFunction(
        name=f"t^{n}/{n}",
        evaluator=lambda xi, t: t ** float(n) / n,
        t_derivative=lambda xi, t: t ** float(n - 1),
        class_tags=frozenset({"C", "CI", "GI"}),
        limit_at_zero="zero",
        limit_at_inf="inf",
        spec={"builtin": "power_volume", "params": {"n": n}},
    )


def log_t() -> MOFunction:
    """log t.  Increasing, but signed, so in C and CI only."""
    return MOFunction(
        name="log t",
        evaluator=lambda xi, t: np.log(t),
        t_derivative=lambda xi, t: 1.0 / t,
        class_tags=frozenset({"C", "CI"}),
        limit_at_zero="-inf",
        limit_at_inf="inf",
        spec={"builtin": "log", "params": {}},
    )


def neg_log_t() -> MOFunction:
    """-log t.  Decreasing, signed; in C and Cd."""
    return MOFunction(
        name="-log t",
        evaluator=lambda xi, t: -np.log(t),
        t_derivative=lambda xi, t: -1.0 / t,
        class_tags=frozenset({"C", "Cd"}),
        limit_at_zero="inf",
        limit_at_inf="-inf",
        spec={"builtin": "neg_log", "params": {}},
    )


def exp_decay() -> MOFunction:
    """e^{-t}.  Positive and decreasing, but bounded at 0, so not in Gd."""
    return MOFunction(
        name="exp(-t)",
        evaluator=lambda xi, t: np.exp(-t),
        t_derivative=lambda xi, t: -np.exp(-t),
        class_tags=frozenset({"C", "Cd"}),
        limit_at_zero="finite",
        limit_at_inf="zero",
        spec={"builtin": "exp_decay", "params": {}},
    )


def _weight_interp_2d(dirs: np.ndarray, weights: np.ndarray):
    ang = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2.0 * np.pi)
    order = np.argsort(ang)
    ang, weights = ang[order], weights[order]
    ang_ext = np.concatenate([ang, [ang[0] + 2.0 * np.pi]])
    w_ext = np.concatenate([weights, [weights[0]]])

    def w(xi):
        x = np.atleast_2d(xi)
        th = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * np.pi)
        th = np.where(th < ang_ext[0], th + 2.0 * np.pi, th)
        out = np.interp(th, ang_ext, w_ext)
        return out if np.ndim(xi) > 1 else float(out[0])

    return w


def _weight_nearest_3d(dirs: np.ndarray, weights: np.ndarray):
    def w(xi):
        x = np.atleast_2d(xi)
        idx = np.argmax(x @ dirs.T, axis=1)
        out = weights[idx]
        return out if np.ndim(xi) > 1 else float(out[0])

    return w


def weighted_power(dirs, weights, p: float) -> MOFunction:
    """w(xi) t^p with a tabulated direction weight.

    ``dirs`` are unit vectors (2 or 3 columns) and ``weights`` their
    positive values.  Between table entries the weight is interpolated
    linearly in angle on the circle, and by nearest table direction on the
    sphere.  The function is flagged even when the table is symmetric under
    xi -> -xi (same weight at the antipode, within 1e-10).
    """
    dirs = np.asarray(dirs, dtype=float)
    weights = np.asarray(weights, dtype=float)
    p = float(p)
    if dirs.ndim != 2 or dirs.shape[1] not in (2, 3):
        raise InputError("weight table directions must have 2 or 3 columns")
    if weights.shape != (dirs.shape[0],):
        raise InputError("weight table needs one weight per direction")
    if np.any(weights <= 0.0):
        raise InputError("weight table values must be positive")
    if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1.0) > 1e-8):
        raise InputError("weight table directions must be unit vectors")
    if p == 0.0:
        raise InputError("weighted_power requires p != 0")

    even = True
    for d, wv in zip(dirs, weights):
        match = np.where(np.linalg.norm(dirs + d, axis=1) < 1e-10)[0]
        if match.size == 0 or abs(weights[match[0]] - wv) > 1e-10 * max(1.0, abs(wv)):
            even = False
            break

    wfun = _weight_interp_2d(dirs, weights) if dirs.shape[1] == 2 else _weight_nearest_3d(dirs, weights)

    def ev(xi, t):
        if xi is None:
            raise DomainError("direction-dependent function evaluated without a direction")
        return wfun(xi) * t**p

    def dv(xi, t):
        if xi is None:
            raise DomainError("direction-dependent function evaluated without a direction")
        return wfun(xi) * p * t ** (p - 1.0)

    if p > 0:
        tags, lz, li = frozenset({"C", "CI", "GI"}), "zero", "inf"
    else:
        tags, lz, li = frozenset({"C", "Cd", "Gd"}), "inf", "zero"
    table = [list(d) + [float(wv)] for d, wv in zip(dirs, weights)]
    return MOFunction(
        name=f"w(xi) t^{p:g}",
        evaluator=ev,
        t_derivative=dv,
        class_tags=tags,
        limit_at_zero=lz,
        limit_at_inf=li,
        even_in_direction=even,
        spec={"tabulated_weight": table, "power": p},
    )


_BUILTINS = {
    "power": lambda params: power(**params),
    "power_ratio": lambda params: power_ratio(**params),
    "power_volume": lambda params: power_volume(**params),
    "log": lambda params: log_t(**params),
    "neg_log": lambda params: neg_log_t(**params),
    "exp_decay": lambda params: exp_decay(**params),
}


def function_to_json(f: MOFunction) -> dict:
    if f.spec is None:
        raise InputError(f"function {f.name!r} has no serializable description")
    return f.spec


def function_from_json(obj) -> MOFunction:
    """Rebuild a function from its JSON description.

    Accepted forms: ``{"builtin": name, "params": {...}}``, the tabulated
    form ``{"tabulated_weight": [[x, y(, z), w], ...], "power": p}``, and
    ``{"tilde": <either form>}``.  Anything else, including extra fields,
    is rejected.
    """
    if not isinstance(obj, dict):
        raise InputError("function description must be a JSON object")
    keys = set(obj.keys())
    if keys == {"tilde"}:
        return reciprocal_transform(function_from_json(obj["tilde"]))
    if keys in ({"builtin"}, {"builtin", "params"}):
        name = obj["builtin"]
        if name not in _BUILTINS:
            raise InputError(f"unknown builtin function {name!r}")
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise InputError("'params' must be an object")
        try:
            return _BUILTINS[name](params)
        except TypeError as exc:
            raise InputError(f"bad params for builtin {name!r}: {exc}") from None
    if keys == {"tabulated_weight", "power"}:
        table = np.asarray(obj["tabulated_weight"], dtype=float)
        if table.ndim != 2 or table.shape[1] not in (3, 4):
            raise InputError("tabulated_weight rows must be [x, y, w] or [x, y, z, w]")
        return weighted_power(table[:, :-1], table[:, -1], obj["power"])
    raise InputError(f"unrecognized function description fields {sorted(keys)}")


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassificationReport:
    declared_tags: frozenset
    verified_tags: frozenset
    fd_max_rel_err: float
    failures: tuple

    @property
    def consistent(self) -> bool:
        return not self.failures


def _probe_directions(f: MOFunction):
    if f.spec is not None and "tabulated_weight" in f.spec:
        dim = len(f.spec["tabulated_weight"][0]) - 1
        if dim == 2:
            th = np.linspace(0.0, 2.0 * np.pi, 17)[:-1]
            return [np.array([np.cos(a), np.sin(a)]) for a in th]
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(16, 3))
        return list(pts / np.linalg.norm(pts, axis=1)[:, None])
    return [None]


def _end_trend(f: MOFunction, xi, ts, v_mid):
    """(endpoint value, diverges, vanishes) from three probes toward an end.

    A single blow-up threshold misses slow divergence (log t gains only
    2.3 per decade), so divergence is read off the increments instead:
    steps that keep their size over successive decades do not converge.
    Bounded tails are extrapolated geometrically before the smallness
    test so that slow algebraic decay (t^0.25 near 0) still counts as
    vanishing.
    """
    v = np.array([float(f.value(xi, t)) for t in ts])
    scale = max(1.0, abs(v_mid))
    d1, d2 = v[1] - v[0], v[2] - v[1]
    if abs(v[2]) > 1e2 * scale:
        return v[2], True, False
    diverges = abs(d2) > 0.5 * abs(d1) and abs(d2) > 1e-3 * scale
    small = abs(v[2]) < 1e-2 * scale
    if not small and not diverges and abs(d1) > 0.0 and abs(d2) < 0.9 * abs(d1):
        r = abs(d2) / abs(d1)
        limit = v[2] + d2 * r / (1.0 - r)
        small = abs(limit) < 1e-2 * scale
    return v[2], diverges, small


def classify(f: MOFunction, fd_tol: float = 1e-6) -> ClassificationReport:
    """Probe a function and verify its declared classes.

    Samples a log-spaced grid well inside the validity range, checks the
    declared derivative against central finite differences (relative error
    at most ``fd_tol``), determines which classes the samples support, and
    checks the declared limit flags against end-of-range trends.  Raises
    :class:`OutOfClassError` when a declared tag or flag is contradicted;
    otherwise returns the report.
    """
    ts = np.geomspace(1e-6, 1e6, 121)
    delta = 1e-6
    failures = []
    fd_max = 0.0
    pos_all, inc_all, dec_all = True, True, True
    for xi in _probe_directions(f):
        vals = f.value(xi, ts)
        ders = f.t_deriv(xi, ts)
        if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(ders))):
            failures.append("non-finite value or derivative on the probe grid")
            break
        fd = (f.value(xi, ts * (1.0 + delta)) - f.value(xi, ts * (1.0 - delta))) / (2.0 * delta * ts)
        # the difference of two nearby values carries a rounding floor; a
        # disagreement below ten times that floor is not evidence
        floor = np.finfo(float).eps * np.abs(vals) / (delta * ts)
        scale = np.maximum(np.abs(ders), np.max(np.abs(ders)) * 1e-9 + 1e-300)
        excess = np.maximum(np.abs(fd - ders) - 10.0 * floor, 0.0)
        fd_max = max(fd_max, float(np.max(excess / scale)))
        # ignore points where the value has underflowed relative to the
        # grid's peak; strict signs are meaningless there (e.g. exp(-t)
        # at t = 1e6 is a float zero)
        live = np.abs(vals) > np.max(np.abs(vals)) * 1e-280
        pos_all &= bool(np.all(vals[live] > 0.0))
        inc_all &= bool(np.all(ders[live] > 0.0))
        dec_all &= bool(np.all(ders[live] < 0.0))
    if fd_max > fd_tol:
        failures.append(
            f"t_derivative disagrees with finite differences (rel err {fd_max:.3e} > {fd_tol:g})")

    verified = {"C"}
    if inc_all:
        verified.add("CI")
    if dec_all:
        verified.add("Cd")

    # limit trends from the three probe points nearest each end
    xi0 = _probe_directions(f)[0]
    v_mid = float(f.value(xi0, 1.0))
    v_lo, grows_at_zero, small_at_zero = _end_trend(f, xi0, (1e-4, 1e-5, 1e-6), v_mid)
    v_hi, grows_at_inf, small_at_inf = _end_trend(f, xi0, (1e4, 1e5, 1e6), v_mid)
    if pos_all and inc_all and small_at_zero and grows_at_inf and v_hi > 0:
        verified.add("GI")
    if pos_all and dec_all and grows_at_zero and v_lo > 0 and small_at_inf:
        verified.add("Gd")

    flag_checks = {
        ("zero", "at 0"): small_at_zero, ("inf", "at 0"): grows_at_zero and v_lo > 0,
        ("-inf", "at 0"): grows_at_zero and v_lo < 0, ("finite", "at 0"): not grows_at_zero,
        ("zero", "at inf"): small_at_inf, ("inf", "at inf"): grows_at_inf and v_hi > 0,
        ("-inf", "at inf"): grows_at_inf and v_hi < 0, ("finite", "at inf"): not grows_at_inf,
    }
    for flag, where in ((f.limit_at_zero, "at 0"), (f.limit_at_inf, "at inf")):
        if (flag, where) in flag_checks and not flag_checks[(flag, where)]:
            failures.append(f"declared limit {flag!r} {where} contradicted by probes")

    missing = f.class_tags - verified
    if missing:
        failures.append(f"declared tags {sorted(missing)} not supported by probes "
                        f"(verified {sorted(verified)})")
    report = ClassificationReport(
        declared_tags=f.class_tags,
        verified_tags=frozenset(verified),
        fd_max_rel_err=fd_max,
        failures=tuple(failures),
    )
    if failures:
        raise OutOfClassError(f"{f.name}: " + "; ".join(failures))
    return report
