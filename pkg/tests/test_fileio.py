"""JSON round trips and CSV export."""

import numpy as np
import pytest

from mogauss.bodies import random_body, square
from mogauss.errors import InputError
from mogauss.fileio import (
    body_from_json,
    body_to_json,
    dump_canonical,
    export_csv,
    load_json,
    measure_from_json,
    measure_to_json,
    save_json,
    signed_measure_from_json,
    signed_measure_to_json,
    solution_from_json,
    solution_to_json,
    triple_from_json,
    triple_to_json,
)
from mogauss.functionals import Triple, mo_measure
from mogauss.mofunctions import power, reciprocal
from mogauss.solver import Mode, ProblemSpec, solve
from mogauss.sphere import SphericalMeasure, tilted_cosine_squared

U2 = SphericalMeasure.uniform(2)


def test_measure_round_trip_atomic():
    rng = np.random.default_rng(1)
    d = rng.normal(size=(5, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    m = SphericalMeasure.from_atoms(d, rng.uniform(0.5, 2.0, 5))
    back = measure_from_json(measure_to_json(m))
    assert np.array_equal(back.atom_directions, m.atom_directions)
    assert np.array_equal(back.atom_masses, m.atom_masses)
    assert back.is_atomic


def test_measure_round_trip_density():
    for m in (U2, SphericalMeasure.uniform(3),
              tilted_cosine_squared(2, [1.0, 0.0], 0.5),
              tilted_cosine_squared(3, [0.0, 0.0, 1.0], 0.25)):
        back = measure_from_json(measure_to_json(m))
        assert back.dim == m.dim
        assert back.total_mass() == pytest.approx(m.total_mass(), rel=1e-12)


def test_signed_measure_round_trip():
    P = random_body(2, 7, 3)
    m = mo_measure(Triple(reciprocal(), power(2), U2), P)
    back = signed_measure_from_json(signed_measure_to_json(m))
    assert np.array_equal(back.directions, m.directions)
    assert np.array_equal(back.weights, m.weights)


def test_body_round_trip():
    P = random_body(3, 12, 4)
    back = body_from_json(body_to_json(P))
    assert np.array_equal(back.normals, P.normals)
    assert np.array_equal(back.support, P.support)


def test_triple_round_trip():
    tr = Triple(reciprocal(), power(2), tilted_cosine_squared(2, [1.0, 0.0], 0.5))
    back = triple_from_json(triple_to_json(tr))
    x = np.array([[np.cos(0.4), np.sin(0.4)]])
    for t in (0.3, 1.7):
        assert back.volume_integrand.value(x, t) == tr.volume_integrand.value(x, t)
        assert back.addition_chart.value(x, t) == tr.addition_chart.value(x, t)
    assert back.base_measure.total_mass() == pytest.approx(
        tr.base_measure.total_mass(), rel=1e-12)


def test_solution_round_trip():
    mu = SphericalMeasure.from_atoms(square().normals, np.ones(4))
    sol = solve(ProblemSpec(Triple(reciprocal(), power(2), U2), mu,
                            Mode.GAUSS_IMAGE))
    back = solution_from_json(solution_to_json(sol))
    assert back.status == sol.status
    assert back.mode is sol.mode
    assert back.multiplier == sol.multiplier
    assert np.array_equal(back.K.support, sol.K.support)


def test_dump_canonical_is_stable(tmp_path):
    P = random_body(2, 9, 5)
    p1 = tmp_path / "body.json"
    p2 = tmp_path / "body2.json"
    save_json(body_to_json(P), p1)
    save_json(body_to_json(body_from_json(load_json(p1))), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_dump_canonical_rejects_nan():
    with pytest.raises(ValueError):
        dump_canonical({"x": float("nan")})


def test_export_csv_signed_measure(tmp_path):
    P = random_body(2, 6, 6)
    m = mo_measure(Triple(reciprocal(), power(2), U2), P)
    path = tmp_path / "weights.csv"
    export_csv(signed_measure_to_json(m), path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 7
    header = lines[0].split(",")
    assert header[-1] == "weight"
    row = lines[1].split(",")
    assert float(row[-1]) == pytest.approx(m.weights[0], rel=1e-15)


def test_export_csv_body(tmp_path):
    P = square()
    path = tmp_path / "body.csv"
    export_csv(body_to_json(P), path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 5


def test_measure_from_json_garbage():
    with pytest.raises(InputError):
        measure_from_json({"kind": "nonsense"})
