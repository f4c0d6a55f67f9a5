"""Built-in integrand families, the reciprocal transform, and classification."""

import numpy as np
import pytest

from mogauss.errors import DomainError, InputError, OutOfClassError
from mogauss.mofunctions import (
    MOFunction,
    classify,
    exp_decay,
    function_from_json,
    function_to_json,
    log_t,
    neg_log_t,
    power,
    power_ratio,
    power_volume,
    reciprocal,
    reciprocal_transform,
    weighted_power,
)

TS = np.geomspace(1e-5, 1e5, 41)


def test_power_values_and_derivative():
    f = power(2.0)
    assert f.value(None, 3.0) == pytest.approx(9.0)
    assert f.t_deriv(None, 3.0) == pytest.approx(6.0)
    assert "CI" in f.class_tags and "GI" in f.class_tags


def test_power_ratio_scales_by_exponent():
    g = power_ratio(2.0)
    assert g.value(None, 3.0) == pytest.approx(4.5)
    h = power_ratio(-1.0)
    # t^p / |p| keeps the value positive for negative exponents
    assert h.value(None, 2.0) == pytest.approx(0.5)
    assert h.t_deriv(None, 2.0) < 0.0


def test_power_volume_is_power_ratio_of_dimension():
    for n in (2, 3):
        f = power_volume(n)
        assert f.value(None, 1.7) == pytest.approx(1.7**n / n, rel=1e-14)


def test_log_pair():
    f = log_t()
    g = neg_log_t()
    for t in (0.2, 1.0, 7.5):
        assert f.value(None, t) == pytest.approx(np.log(t))
        assert g.value(None, t) == pytest.approx(-np.log(t))
    assert f.value(None, 1.0) == 0.0
    assert "CI" in f.class_tags and "Cd" in g.class_tags


def test_exp_decay_monotone():
    f = exp_decay()
    # stay below the underflow knee of e^-t
    ts = np.geomspace(1e-5, 500.0, 41)
    vals = f.value(None, ts)
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals > 0.0)


def test_reciprocal_is_inverse_power():
    f = reciprocal()
    assert f.value(None, 4.0) == pytest.approx(0.25)
    assert f.t_deriv(None, 2.0) == pytest.approx(-0.25)


@pytest.mark.parametrize("f", [power(0.5), power(3.0), power_ratio(-2.0),
                               log_t(), neg_log_t(), exp_decay(), reciprocal()])
def test_derivative_matches_finite_differences(f):
    t = TS
    d = 1e-5
    fd = (f.value(None, t * (1 + d)) - f.value(None, t * (1 - d))) / (2 * d * t)
    an = f.t_deriv(None, t)
    scale = np.maximum(np.abs(an), 1e-12)
    assert np.max(np.abs(fd - an) / scale) < 1e-4


def test_domain_guard():
    f = power(2.0)
    with pytest.raises(DomainError):
        f.value(None, 0.0)
    with pytest.raises(DomainError):
        f.value(None, -1.0)
    with pytest.raises(DomainError):
        f.t_deriv(None, 1e12)


def test_reciprocal_transform_values():
    f = reciprocal_transform(power(3.0))
    assert f.value(None, 1.7) == pytest.approx(1.7**-3, rel=1e-14)
    # chain rule: d/dt f(1/t) = -t^-2 f'(1/t)
    assert f.t_deriv(None, 2.0) == pytest.approx(-3.0 * 2.0**-4, rel=1e-14)


def test_reciprocal_transform_involution():
    f = power_ratio(2.5)
    ff = reciprocal_transform(reciprocal_transform(f))
    assert np.max(np.abs(ff.value(None, TS) - f.value(None, TS))
                  / np.abs(f.value(None, TS))) < 1e-12
    assert ff.class_tags == f.class_tags
    assert ff.limit_at_zero == f.limit_at_zero
    assert ff.limit_at_inf == f.limit_at_inf
    assert ff.name == f.name


def test_reciprocal_transform_flips_classes_and_limits():
    f = power(2.0)
    g = reciprocal_transform(f)
    assert "Cd" in g.class_tags and "Gd" in g.class_tags
    assert g.limit_at_zero == f.limit_at_inf
    assert g.limit_at_inf == f.limit_at_zero


def test_weighted_power_direction_dependence():
    dirs = np.array([[1.0, 0.0], [0.0, 1.0]])
    f = weighted_power(dirs, np.array([1.0, 2.0]), 2.0)
    assert f.value(np.array([0.0, 1.0]), 3.0) == pytest.approx(18.0)
    assert f.value(np.array([1.0, 0.0]), 3.0) == pytest.approx(9.0)
    assert not f.even_in_direction or np.allclose(
        f.value(np.array([-1.0, 0.0]), 3.0), 9.0)


@pytest.mark.parametrize("f", [power(2.0), power_ratio(0.5), log_t(),
                               neg_log_t(), exp_decay(), reciprocal(),
                               reciprocal_transform(power(2.0))])
def test_classify_accepts_builtins(f):
    rep = classify(f)
    assert rep.consistent
    assert rep.fd_max_rel_err < 1e-6
    assert f.class_tags & {"CI", "Cd"} <= rep.verified_tags


def test_classify_rejects_wrong_declaration():
    bad = MOFunction(name="mislabeled", evaluator=lambda xi, t: t**2,
                     t_derivative=lambda xi, t: 2.0 * t,
                     class_tags=frozenset({"C", "Cd"}),
                     limit_at_zero="zero", limit_at_inf="inf")
    with pytest.raises(OutOfClassError):
        classify(bad)


def test_classify_rejects_wrong_derivative():
    bad = MOFunction(name="bad-deriv", evaluator=lambda xi, t: t**2,
                     t_derivative=lambda xi, t: 3.0 * t,
                     class_tags=frozenset({"C", "CI"}),
                     limit_at_zero="zero", limit_at_inf="inf")
    with pytest.raises(OutOfClassError):
        classify(bad)


def test_unknown_tag_rejected_at_construction():
    with pytest.raises(InputError):
        MOFunction(name="x", evaluator=lambda xi, t: t,
                   t_derivative=lambda xi, t: 1.0,
                   class_tags=frozenset({"weird"}),
                   limit_at_zero="zero", limit_at_inf="inf")


@pytest.mark.parametrize("f", [power(2.0), power_ratio(-1.5), power_volume(3),
                               log_t(), neg_log_t(), exp_decay()])
def test_json_round_trip_builtins(f):
    obj = function_to_json(f)
    g = function_from_json(obj)
    ts = np.geomspace(1e-3, 1e3, 13)
    assert np.allclose(g.value(None, ts), f.value(None, ts), rtol=0, atol=0)
    assert g.class_tags == f.class_tags


def test_json_round_trip_tilde():
    f = reciprocal_transform(power_ratio(2.0))
    g = function_from_json(function_to_json(f))
    ts = np.geomspace(1e-3, 1e3, 13)
    assert np.allclose(g.value(None, ts), f.value(None, ts), rtol=0, atol=0)


def test_json_tabulated_weight():
    th = np.linspace(0.0, 2.0 * np.pi, 9)[:-1]
    rows = [[float(np.cos(a)), float(np.sin(a)), 1.0 + 0.5 * float(np.cos(2 * a))]
            for a in th]
    f = function_from_json({"tabulated_weight": rows, "power": 2.0})
    x = np.array([1.0, 0.0])
    assert f.value(x, 2.0) == pytest.approx(1.5 * 4.0, rel=1e-9)
    rep = classify(f)
    assert rep.consistent


def test_json_rejects_garbage():
    with pytest.raises(InputError):
        function_from_json({"builtin": "no-such-family"})
    with pytest.raises(InputError):
        function_from_json({"surprise": 1})
