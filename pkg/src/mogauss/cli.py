"""Command-line front end.

Commands
--------
classify-function   check a function's declared class tags numerically
dual-volume         dual volume of a body for a volume integrand
entropy             entropy of a body against a base measure
measure             image measures (--kind tilde|polar|surface|jtilde|j|pullback)
pullback            base-measure pullback under the radial Gauss image
verify-variation    finite-difference check of the variational formulas
ma-residual         2D Monge-Ampere residual of a support function
solve               run the measure-matching solver
residual            measure-matching residual of a candidate body
export              convert a JSON result file to CSV

Exit codes: 0 success (and pass, where the command verifies something);
2 unreadable input or bad arguments; 3 violated precondition (class tags,
hypotheses, geometry); 4 solver finished without convergence.

Numeric console output is printed with 17 significant digits, enough to
reproduce every double exactly.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fileio
from .bodies import (
    Polytope,
    ball,
    cube,
    gauss_image_pullback,
    simplex,
    square,
    wulff_shape,
)
from .errors import (
    ConvexityError,
    DegenerateMeasureError,
    DomainError,
    EvennessError,
    HemisphereError,
    HypothesisError,
    InputError,
    MoGaussError,
    OutOfClassError,
    QuadratureError,
)
from .functionals import (
    Triple,
    dual_volume,
    entropy,
    j_measure,
    mo_measure,
    mo_surface_area_measure,
    monge_ampere_residual_2d,
    polar_mo_measure,
)
from .mofunctions import (
    classify,
    exp_decay,
    function_from_json,
    log_t,
    neg_log_t,
    power,
    power_ratio,
    power_volume,
    reciprocal,
    reciprocal_transform,
)
from .solver import Mode, ProblemSpec, SolveOptions, residual_report, solve
from .sphere import SphericalMeasure
from .variation import PerturbationFamily, verify_hull_variation, verify_wulff_variation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NOT_CONVERGED = 4

_PRECONDITION_ERRORS = (HypothesisError, OutOfClassError, HemisphereError,
                        EvennessError, ConvexityError, DegenerateMeasureError)


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


# ---------------------------------------------------------------------------
# argument loading

_FUNCTION_BUILTINS = {
    "log": log_t,
    "neg-log": neg_log_t,
    "recip": reciprocal,
    "exp-decay": exp_decay,
}


def _load_function(text: str):
    """A function argument: a builtin name (log, neg-log, recip, exp-decay,
    power:P, power-ratio:P, volume:N) or a path to a JSON description."""
    if text in _FUNCTION_BUILTINS:
        return _FUNCTION_BUILTINS[text]()
    for prefix, maker in (("power:", power), ("power-ratio:", power_ratio),
                          ("volume:", power_volume)):
        if text.startswith(prefix):
            arg = text[len(prefix):]
            value = int(arg) if prefix == "volume:" else float(arg)
            return maker(value)
    return function_from_json(fileio.load_json(text))


_THETA_BUILTINS = {
    # (G, Psi) pairs; the base measure comes from --lambda
    "log-log": lambda: (log_t(), log_t()),
    "recip-square": lambda: (reciprocal(), power(2)),
    "neglog-square": lambda: (neg_log_t(), power(2)),
}


def _load_theta(text: str):
    if text in _THETA_BUILTINS:
        return _THETA_BUILTINS[text]()
    obj = fileio.load_json(text)
    if not isinstance(obj, dict) or "G" not in obj or "Psi" not in obj:
        raise InputError("a theta file needs 'G' and 'Psi' function fields")
    return function_from_json(obj["G"]), function_from_json(obj["Psi"])


_BODY_BUILTINS = {
    "square": lambda: square(),
    "cube": lambda: cube(),
    "ball2": lambda: ball(2),
    "ball3": lambda: ball(3),
    "simplex2": lambda: simplex(2),
    "simplex3": lambda: simplex(3),
}


def _load_body(text: str) -> Polytope:
    if text in _BODY_BUILTINS:
        return _BODY_BUILTINS[text]()
    return fileio.body_from_json(fileio.load_json(text))


def _load_measure(text: str, dim: int) -> SphericalMeasure:
    if text == "uniform":
        return SphericalMeasure.uniform(dim)
    return fileio.measure_from_json(fileio.load_json(text))


def _print_signed(measure) -> None:
    for u, w in zip(measure.directions, measure.weights):
        print("  ".join(_fmt(c) for c in u) + "  " + _fmt(w))


# ---------------------------------------------------------------------------
# commands


def _cmd_classify(args) -> int:
    fn = _load_function(args.function)
    report = classify(fn)
    print(f"function: {fn.name}")
    print(f"declared tags: {', '.join(sorted(report.declared_tags))}")
    print(f"verified tags: {', '.join(sorted(report.verified_tags))}")
    print(f"max relative derivative error vs finite differences: "
          f"{_fmt(report.fd_max_rel_err)}")
    print("consistent: yes")
    return EXIT_OK


def _cmd_dual_volume(args) -> int:
    g, _ = _load_theta(args.theta)
    body = _load_body(args.body)
    lam = _load_measure(args.lam, body.dim)
    value = dual_volume(g, lam, body)
    print(_fmt(value))
    return EXIT_OK


def _cmd_entropy(args) -> int:
    body = _load_body(args.body)
    lam = _load_measure(args.lam, body.dim)
    print(_fmt(entropy(lam, body)))
    return EXIT_OK


def _cmd_measure(args) -> int:
    body = _load_body(args.body)
    lam = _load_measure(args.lam, body.dim)
    if args.kind == "pullback":
        meas = gauss_image_pullback(lam, body)
        obj = fileio.measure_to_json(meas)
        for u, m in zip(meas.atom_directions, meas.atom_masses):
            print("  ".join(_fmt(c) for c in u) + "  " + _fmt(m))
    else:
        g, psi = _load_theta(args.theta)
        if args.kind == "tilde":
            meas = mo_measure(Triple(g, psi, lam), body)
        elif args.kind == "polar":
            meas = polar_mo_measure(Triple(g, psi, lam), body)
        elif args.kind == "surface":
            meas = mo_surface_area_measure(psi, body)
        elif args.kind == "jtilde":
            meas = j_measure(psi, lam, body, polar_variant=False)
        else:
            meas = j_measure(psi, lam, body, polar_variant=True)
        obj = fileio.signed_measure_to_json(meas)
        _print_signed(meas)
    if args.out:
        fileio.save_json(obj, args.out)
    return EXIT_OK


def _cmd_pullback(args) -> int:
    body = _load_body(args.body)
    lam = _load_measure(args.lam, body.dim)
    meas = gauss_image_pullback(lam, body)
    for u, m in zip(meas.atom_directions, meas.atom_masses):
        print("  ".join(_fmt(c) for c in u) + "  " + _fmt(m))
    if args.out:
        fileio.save_json(fileio.measure_to_json(meas), args.out)
    return EXIT_OK


def _default_variation_scenarios(seed: int):
    rng = np.random.default_rng(seed)
    lam = SphericalMeasure.uniform(2)
    sq = square()
    bump = rng.uniform(-0.5, 0.5, size=4)
    yield ("wulff log-log square",
           lambda: verify_wulff_variation(
               Triple(log_t(), log_t(), lam),
               PerturbationFamily(log_t(), sq.normals, sq.support, bump),
               scenario="wulff log-log square"))
    yield ("hull recip-square square",
           lambda: verify_hull_variation(
               Triple(reciprocal(), power(2), lam),
               PerturbationFamily(power(2), sq.normals, sq.support, bump),
               scenario="hull recip-square square"))
    yield ("hull entropy square",
           lambda: verify_hull_variation(
               Triple(log_t(), power(2), lam),
               PerturbationFamily(power(2), sq.normals, sq.support, bump),
               entropy_mode=True, scenario="hull entropy square"))


def _cmd_verify_variation(args) -> int:
    if args.scenario != "default":
        raise InputError("the only shipped scenario set is 'default'")
    reports = []
    all_pass = True
    for name, run in _default_variation_scenarios(args.seed):
        rep = run()
        reports.append(rep.to_json())
        all_pass = all_pass and rep.passed
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status}  {name}: analytic {_fmt(rep.analytic)}, "
              f"final error {_fmt(rep.errors[-1])}")
    if args.out:
        fileio.save_json({"seed": args.seed, "scenarios": reports}, args.out)
    return EXIT_OK if all_pass else EXIT_PRECONDITION


def _cmd_ma_residual(args) -> int:
    g, psi = _load_theta(args.theta)
    body = _load_body(args.body)
    if body.dim != 2:
        raise InputError("the Monge-Ampere residual is 2D only")
    lam = _load_measure(args.lam, 2)
    th = 2.0 * np.pi * np.arange(args.grid) / args.grid
    dirs = np.column_stack([np.cos(th), np.sin(th)])
    samples = np.array([body.support_value(u) for u in dirs])
    field = monge_ampere_residual_2d(Triple(g, psi, lam), samples,
                                     lambda x: np.ones(np.atleast_2d(x).shape[0]),
                                     tau=args.tau)
    print(f"max |residual|: {_fmt(field.max_abs)}")
    print(f"l2 norm:        {_fmt(field.l2_norm)}")
    if args.out:
        fileio.save_json({"tau": args.tau, "grid": int(args.grid),
                          "angles": [float(a) for a in field.angles],
                          "residual": [float(r) for r in field.residual]},
                         args.out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    g, psi = _load_theta(args.theta)
    mu = _load_measure(args.mu, 0)
    if not mu.is_atomic:
        raise InputError("--mu must name an atomic measure file")
    lam = _load_measure(args.lam, mu.dim)
    mode = Mode(args.mode)
    spec = ProblemSpec(Triple(g, psi, lam), mu, mode,
                       mu_vanishes_on_subspheres=args.assert_vanishing)
    opts = SolveOptions()
    if args.tol is not None:
        opts.tol = args.tol
    if args.max_iter is not None:
        opts.max_iter = args.max_iter
    sol = solve(spec, opts)
    print(f"status:     {sol.status}")
    print(f"iterations: {sol.iterations}")
    print(f"residual:   {_fmt(sol.residual_sup)}")
    print(f"multiplier: {_fmt(sol.multiplier)}")
    if sol.message:
        print(f"note:       {sol.message}")
    if args.out:
        obj = fileio.solution_to_json(sol)
        obj["options"] = {"tol": opts.tol, "max_iter": opts.max_iter,
                          "seed": args.seed}
        fileio.save_json(obj, args.out)
    return EXIT_OK if sol.status == "OK" else EXIT_NOT_CONVERGED


def _cmd_residual(args) -> int:
    g, psi = _load_theta(args.theta)
    body = _load_body(args.body)
    mu = _load_measure(args.mu, body.dim)
    lam = _load_measure(args.lam, body.dim)
    rep = residual_report(Triple(g, psi, lam), mu, body, which=args.kind)
    print(f"residual:   {_fmt(rep.residual_sup)}")
    print(f"multiplier: {_fmt(rep.multiplier)}")
    print(f"matched atoms: {rep.matched} of {rep.total_atoms}")
    return EXIT_OK


def _cmd_export(args) -> int:
    obj = fileio.load_json(args.input)
    fileio.export_csv(obj, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# self test


def _selftest() -> int:
    failures = []

    def check(name, ok):
        print(("PASS  " if ok else "FAIL  ") + name)
        if not ok:
            failures.append(name)

    lam = SphericalMeasure.uniform(2)
    sq = square()

    meas = mo_measure(Triple(log_t(), log_t(), lam), sq)
    check("log-log measure of the square is pi/2 per facet",
          bool(np.allclose(meas.weights, np.pi / 2, rtol=0, atol=1e-10)))

    theta = Triple(reciprocal(), power(2), lam)
    tilde = mo_measure(theta, sq).weights
    polar = polar_mo_measure(Triple(reciprocal(), reciprocal_transform(power(2)),
                                    lam), sq).weights
    check("polar measure with the reciprocal chart negates the tilde measure",
          bool(np.max(np.abs(tilde + polar)) <= 1e-12 * np.max(np.abs(tilde))))

    mu = SphericalMeasure.from_atoms(sq.normals, np.ones(4))
    sol = solve(ProblemSpec(theta, mu, Mode.GAUSS_IMAGE))
    check("square solve reaches tolerance",
          sol.status == "OK" and sol.residual_sup <= 1e-6)

    field = monge_ampere_residual_2d(
        Triple(log_t(), log_t(), lam), np.ones(128),
        lambda x: np.ones(np.atleast_2d(x).shape[0]))
    check("flat support solves the round Monge-Ampere problem",
          field.max_abs <= 1e-10)

    fam = PerturbationFamily(log_t(), sq.normals, sq.support,
                             np.array([0.4, -0.2, 0.1, 0.3]))
    rep = verify_wulff_variation(Triple(log_t(), log_t(), lam), fam)
    check("variational formula holds on the square", rep.passed)

    print(f"{5 - len(failures)} of 5 checks passed")
    return EXIT_OK if not failures else EXIT_PRECONDITION


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mogauss",
        description="Gauss-image measures of convex bodies: computation and solving.",
        epilog="Exit codes: 0 success/pass, 2 bad input, 3 precondition "
               "violation, 4 solver did not converge.")
    parser.add_argument("--selftest", action="store_true",
                        help="run the quick verification tier and exit")
    sub = parser.add_subparsers(dest="command")

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        if flags.get("theta"):
            p.add_argument("--theta", required=flags["theta"] == "req",
                           help="builtin pair (log-log, recip-square, "
                                "neglog-square) or a JSON file with G and Psi")
        if flags.get("body"):
            p.add_argument("--body", required=flags["body"] == "req",
                           help="builtin body (square, cube, ball2, ball3, "
                                "simplex2, simplex3) or a JSON file")
        if flags.get("mu"):
            p.add_argument("--mu", required=flags["mu"] == "req",
                           help="atomic measure JSON file")
        if flags.get("lam"):
            p.add_argument("--lambda", dest="lam", default="uniform",
                           help="'uniform' (default) or a measure JSON file")
        if flags.get("out"):
            p.add_argument("--out", default=None, help="output file path")
        p.set_defaults(fn=fn)
        return p

    p = add("classify-function", _cmd_classify)
    p.add_argument("--function", required=True,
                   help="builtin (log, neg-log, recip, exp-decay, power:P, "
                        "power-ratio:P, volume:N) or a JSON file")

    add("dual-volume", _cmd_dual_volume, theta="req", body="req", lam=True)
    add("entropy", _cmd_entropy, body="req", lam=True)

    p = add("measure", _cmd_measure, theta="opt", body="req", lam=True, out=True)
    p.add_argument("--kind", required=True,
                   choices=["tilde", "polar", "surface", "jtilde", "j", "pullback"])

    add("pullback", _cmd_pullback, body="req", lam=True, out=True)

    p = add("verify-variation", _cmd_verify_variation, out=True)
    p.add_argument("--scenario", default="default")
    p.add_argument("--seed", type=int, default=0)

    p = add("ma-residual", _cmd_ma_residual, theta="req", body="req", lam=True,
            out=True)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--tau", type=float, default=1.0)

    p = add("solve", _cmd_solve, theta="req", mu="req", lam=True, out=True)
    p.add_argument("--mode", required=True,
                   choices=[m.value for m in Mode])
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assert-vanishing", action="store_true",
                   help="declare that mu vanishes on great subspheres "
                        "(required by the even max mode)")

    p = add("residual", _cmd_residual, theta="req", body="req", mu="req", lam=True)
    p.add_argument("--kind", default="tilde", choices=["tilde", "polar"])

    p = add("export", _cmd_export, out=True)
    p.add_argument("input", help="JSON result file to convert")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.selftest:
        return _selftest()
    if not getattr(args, "command", None):
        parser.print_help()
        return EXIT_INPUT
    if getattr(args, "command", None) == "measure" and args.kind != "pullback" \
            and not args.theta:
        parser.error("measure: --theta is required unless --kind pullback")
    if getattr(args, "command", None) == "export" and not args.out:
        parser.error("export: --out is required")
    try:
        return args.fn(args)
    except _PRECONDITION_ERRORS as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, DomainError, QuadratureError, json.JSONDecodeError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MoGaussError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
