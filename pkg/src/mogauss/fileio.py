"""JSON interchange for functions, measures, bodies, and solver results.

JSON is the canonical format; CSV is an export sink only.  Writing goes
through :func:`dump_canonical`, which fixes key order and float text (the
shortest representation that parses back to the same double), so reading
a file this module wrote and writing it again reproduces it byte for
byte.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .bodies import Polytope
from .errors import InputError
from .functionals import SignedSphericalMeasure, Triple
from .mofunctions import MOFunction, function_from_json, function_to_json
from .solver import Mode, Solution
from .sphere import (
    SphericalMeasure,
    offset_abs_cosine,
    tilted_cosine_squared,
)


def dump_canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def save_json(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_canonical(obj))


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# measures


def measure_to_json(measure: SphericalMeasure) -> dict:
    if measure.spec is None:
        raise InputError("this measure has no serializable description "
                         "(ad-hoc density callables cannot be written)")
    return measure.spec


def measure_from_json(obj) -> SphericalMeasure:
    if not isinstance(obj, dict) or "type" not in obj or "dim" not in obj:
        raise InputError("measure description needs 'type' and 'dim' fields")
    dim = int(obj["dim"])
    if obj["type"] == "atoms":
        return SphericalMeasure.from_atoms(np.asarray(obj["directions"], dtype=float),
                                           np.asarray(obj["masses"], dtype=float))
    if obj["type"] == "density":
        name = obj.get("density")
        params = obj.get("params", {})
        if name == "uniform":
            return SphericalMeasure.uniform(dim)
        if name == "tilted_cos2":
            return tilted_cosine_squared(dim, params["axis"], params["amplitude"])
        if name == "abs_cos":
            return offset_abs_cosine(dim, params["axis"], params["offset"])
        raise InputError(f"unknown density family {name!r}")
    raise InputError(f"unknown measure type {obj['type']!r}")


def signed_measure_to_json(measure: SignedSphericalMeasure) -> dict:
    return {"type": "signed_atoms", "dim": int(measure.dim),
            "directions": [list(map(float, d)) for d in measure.directions],
            "weights": [float(w) for w in measure.weights]}


def signed_measure_from_json(obj) -> SignedSphericalMeasure:
    if not isinstance(obj, dict) or obj.get("type") != "signed_atoms":
        raise InputError("expected a signed_atoms measure description")
    return SignedSphericalMeasure(np.asarray(obj["directions"], dtype=float),
                                  np.asarray(obj["weights"], dtype=float))


# ---------------------------------------------------------------------------
# bodies


def body_to_json(body: Polytope) -> dict:
    return {"type": "polytope", "dim": int(body.dim),
            "normals": [list(map(float, u)) for u in body.normals],
            "support": [float(h) for h in body.support]}


def body_from_json(obj) -> Polytope:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("body description needs a 'type' field")
    if obj["type"] == "polytope":
        return Polytope(np.asarray(obj["normals"], dtype=float),
                        np.asarray(obj["support"], dtype=float))
    if obj["type"] == "vertices":
        return Polytope.from_vertices(np.asarray(obj["vertices"], dtype=float))
    raise InputError(f"unknown body type {obj['type']!r}")


# ---------------------------------------------------------------------------
# triples and solutions


def triple_to_json(triple: Triple) -> dict:
    return {"volume_integrand": function_to_json(triple.volume_integrand),
            "addition_chart": function_to_json(triple.addition_chart),
            "base_measure": measure_to_json(triple.base_measure)}


def triple_from_json(obj) -> Triple:
    for key in ("volume_integrand", "addition_chart", "base_measure"):
        if key not in obj:
            raise InputError(f"triple description is missing {key!r}")
    return Triple(function_from_json(obj["volume_integrand"]),
                  function_from_json(obj["addition_chart"]),
                  measure_from_json(obj["base_measure"]))


def solution_to_json(sol: Solution) -> dict:
    return {"type": "solution", "mode": sol.mode.value, "status": sol.status,
            "multiplier": float(sol.multiplier),
            "residual_sup": float(sol.residual_sup),
            "iterations": int(sol.iterations), "message": sol.message,
            "objective_trace": [float(v) for v in sol.objective_trace],
            "constraint_trace": [float(v) for v in sol.constraint_trace],
            "body": body_to_json(sol.K)}


def solution_from_json(obj) -> Solution:
    if not isinstance(obj, dict) or obj.get("type") != "solution":
        raise InputError("expected a solution description")
    return Solution(K=body_from_json(obj["body"]),
                    multiplier=float(obj["multiplier"]),
                    residual_sup=float(obj["residual_sup"]),
                    objective_trace=tuple(obj["objective_trace"]),
                    constraint_trace=tuple(obj["constraint_trace"]),
                    status=obj["status"], mode=Mode(obj["mode"]),
                    iterations=int(obj["iterations"]),
                    message=obj.get("message", ""))


# ---------------------------------------------------------------------------
# CSV export


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def export_csv(obj, path) -> None:
    """Write a measure, signed measure, body, or solution JSON object as
    CSV columns for external plotting."""
    kind = obj.get("type") if isinstance(obj, dict) else None
    if kind == "signed_atoms":
        dim = int(obj["dim"])
        header = ["u" + str(k) for k in range(1, dim + 1)] + ["weight"]
        rows = [list(map(float, d)) + [float(w)]
                for d, w in zip(obj["directions"], obj["weights"])]
    elif kind == "atoms":
        dim = int(obj["dim"])
        header = ["u" + str(k) for k in range(1, dim + 1)] + ["mass"]
        rows = [list(map(float, d)) + [float(m)]
                for d, m in zip(obj["directions"], obj["masses"])]
    elif kind == "polytope":
        dim = int(obj["dim"])
        header = ["u" + str(k) for k in range(1, dim + 1)] + ["support"]
        rows = [list(map(float, u)) + [float(h)]
                for u, h in zip(obj["normals"], obj["support"])]
    elif kind == "solution":
        return export_csv(obj["body"], path)
    else:
        raise InputError("no CSV export for this object")
    with open(path, "w") as fh:
        fh.write(_csv_text(header, rows))
