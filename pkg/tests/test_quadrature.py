"""Quadrature engine tests: analytic oracles, error-estimate honesty,
linearity, and the change-of-variables consistency between the unit-interval
and semi-infinite forms."""

import math

import numpy as np
import pytest

from zetamix.quadrature import (
    EndpointHint,
    NonFiniteIntegrandError,
    QuadratureSpec,
    integrate_interval,
    integrate_interval_batch,
    integrate_semi_infinite,
    integrate_unit,
)

SPEC = QuadratureSpec()
SINGULAR_SPEC = QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9, hint_levels=12).with_hints(
    left=True, right=True
)


def romberg_oracle(f, lo: float, hi: float, max_k: int = 18, tol: float = 1e-12) -> float:
    """Fixed-grid Romberg ladder; independent of the adaptive engine."""
    rows = []
    h = hi - lo
    prev_sum = 0.5 * (f(lo) + f(hi))
    rows.append([h * prev_sum])
    for k in range(1, max_k + 1):
        h *= 0.5
        xs = lo + h * np.arange(1, 2**k, 2)
        prev_sum += float(np.sum(f(xs)))
        row = [h * prev_sum]
        factor = 1.0
        for prev in rows[-1]:
            factor *= 4.0
            row.append(row[-1] + (row[-1] - prev) / (factor - 1.0))
        rows.append(row)
        if k > 3 and abs(rows[-1][-1] - rows[-2][-1]) < tol:
            break
    return rows[-1][-1]


def test_unit_constant():
    res = integrate_unit(lambda p: np.ones_like(p), SPEC)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_unit_log_power_gamma_identity():
    # the -ln p substitution turns this into the factorial integral
    res = integrate_unit(lambda p: (-np.log(p)) ** 1.0, SPEC.with_hints(left=True))
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_unit_singular_beta_half_half():
    res = integrate_unit(lambda p: p**-0.5 * (1.0 - p) ** -0.5, SINGULAR_SPEC)
    assert res.value == pytest.approx(math.pi, abs=1e-8)


def test_semi_infinite_exponential():
    res = integrate_semi_infinite(lambda y: np.exp(-y), SPEC)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_semi_infinite_gamma_function():
    res = integrate_semi_infinite(lambda y: y**1.5 * np.exp(-y), SPEC)
    assert res.converged
    # Gamma(2.5) = 1.5 * 0.5 * sqrt(pi)
    assert res.value == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-10)


def test_semi_infinite_log_kernel_vs_romberg():
    def f(y):
        return np.log(y + 1.0) / (y + 1.0) * np.exp(-y)

    oracle = romberg_oracle(f, 0.0, 60.0)
    res = integrate_semi_infinite(f, SPEC)
    assert res.converged
    assert res.value == pytest.approx(oracle, abs=1e-9)
    assert res.value == pytest.approx(0.26596538503240918, rel=1e-10)


def test_interval_plain():
    res = integrate_interval(lambda w: np.ones_like(w), 0.5, 1.0, SPEC)
    assert res.value == pytest.approx(0.5, abs=1e-13)


def test_interval_power_rule():
    p, r = 0.5, 1.5
    res = integrate_interval(
        lambda w: (w - p) ** (r - 2.0), p, 1.0, SPEC.with_hints(left=True)
    )
    assert res.converged
    assert res.value == pytest.approx((1.0 - p) ** (r - 1.0) / (r - 1.0), abs=1e-8)


def test_interval_log_antiderivative():
    res = integrate_interval(lambda w: -np.log(w) / w, 0.25, 1.0, SPEC)
    assert res.converged
    assert res.value == pytest.approx(math.log(4.0) ** 2 / 2.0, abs=1e-11)


ORACLE_FAMILY = [
    (lambda p: np.ones_like(p), 1.0, QuadratureSpec()),
    (lambda p: p**3 - 2.0 * p + 1.0, 0.25, QuadratureSpec()),
    (lambda p: (-np.log(p)) ** 2, 2.0, QuadratureSpec().with_hints(left=True)),
    (lambda p: p**-0.5, 2.0, QuadratureSpec(hint_levels=12).with_hints(left=True)),
    (
        lambda p: p**-0.5 * (1.0 - p) ** -0.5,
        math.pi,
        QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9, hint_levels=12).with_hints(left=True, right=True),
    ),
]


@pytest.mark.parametrize("f,truth,spec", ORACLE_FAMILY)
def test_error_estimate_honesty(f, truth, spec):
    res = integrate_unit(f, spec)
    assert abs(res.value - truth) <= 3.0 * max(res.error_estimate, 1e-15)


def test_linearity():
    f = lambda p: (-np.log(p)) ** 1.5
    g = lambda p: p**2
    a, b = 2.5, -1.25
    spec = SPEC.with_hints(left=True)
    fv = integrate_unit(f, spec)
    gv = integrate_unit(g, spec)
    combo = integrate_unit(lambda p: a * f(p) + b * g(p), spec)
    tol = 3.0 * (abs(a) * fv.error_estimate + abs(b) * gv.error_estimate + combo.error_estimate)
    assert abs(combo.value - (a * fv.value + b * gv.value)) <= max(tol, 1e-12)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_substitution_consistency(s):
    # the same mass in p-space and in y = -ln p space
    def g(p):
        return (-np.log(p)) ** (s - 1.0)

    unit = integrate_unit(g, SPEC.with_hints(left=True))

    def g_log(y):
        return y ** (s - 1.0) * np.exp(-y)

    semi = integrate_semi_infinite(g_log, SPEC.with_hints(left=s < 2.0))
    assert unit.converged and semi.converged
    tol = 2.0 * (max(SPEC.abs_tol, SPEC.rel_tol * abs(unit.value)) * 2.0)
    assert abs(unit.value - semi.value) <= tol


def test_vector_integrand_batch():
    xs = np.arange(5.0)

    def f(p):
        return np.exp(np.log(p)[:, None] * xs[None, :])  # p^x columns

    res = integrate_interval_batch(f, 0.0, 1.0, SPEC)
    assert res.converged
    expect = 1.0 / (xs + 1.0)
    np.testing.assert_allclose(res.values, expect, atol=1e-11)


def test_non_finite_integrand_reports_abscissa():
    def f(p):
        with np.errstate(invalid="ignore"):
            return np.log(p - 0.3)  # NaN left of 0.3

    with pytest.raises(NonFiniteIntegrandError) as exc:
        integrate_unit(f, SPEC)
    assert 0.0 < exc.value.abscissa < 0.3


def test_non_convergence_flagged_not_raised():
    # max_subdivisions too small to resolve the singularity
    starved = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=4)
    res = integrate_unit(lambda p: p**-0.9, starved.with_hints(left=True))
    assert not res.converged
    assert res.error_estimate > 0.0
    assert res.evaluations > 0


def test_converged_respects_tolerances():
    spec = QuadratureSpec(abs_tol=1e-6, rel_tol=1e-6)
    res = integrate_unit(lambda p: np.cos(p), spec)
    assert res.converged
    assert res.error_estimate <= max(spec.abs_tol, spec.rel_tol * abs(res.value))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadratureSpec(hint_levels=0)
    with pytest.raises(ValueError):
        QuadratureSpec(endpoint_hints=frozenset({"left"}))
    spec = QuadratureSpec().with_hints(left=True)
    assert EndpointHint.LEFT_SINGULAR in spec.endpoint_hints


def test_interval_argument_validation():
    with pytest.raises(ValueError):
        integrate_interval(lambda w: w, 1.0, 0.5, SPEC)
    with pytest.raises(ValueError):
        integrate_interval(lambda w: w, 0.0, math.inf, SPEC)
