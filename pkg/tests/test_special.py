"""Special-function tests against brute-force series oracles.

The oracles here are deliberately primitive: raw chunked partial sums with
integral tail brackets. They share no code with the adaptive
Euler-Maclaurin evaluation they check.
"""

import math

import numpy as np
import pytest

from zetamix.special import (
    SpecialFnAccuracy,
    generalized_harmonic,
    hurwitz_zeta,
    log_gamma,
    riemann_zeta,
)


def brute_zeta_tail(s: float, a: int, n_terms: int) -> tuple[float, float]:
    """Sum of k^-s for k >= a by raw summation to a+n_terms, with the
    remainder bracketed by integrals; returns (midpoint, half-width)."""
    stop = a + n_terms
    total = 0.0
    for start in range(a, stop, 10**6):
        k = np.arange(start, min(stop, start + 10**6), dtype=float)
        total += float(np.sum(k ** (-s)))
    lower = stop ** (1.0 - s) / (s - 1.0)  # integral test bracket
    upper = lower + stop ** (-s)
    mid = total + 0.5 * (lower + upper)
    return mid, 0.5 * (upper - lower)


def test_log_gamma_classical_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)


@pytest.mark.parametrize("z", [0.5, 1.3, 7.9])
def test_log_gamma_recurrence(z):
    lhs = math.exp(log_gamma(z + 1.0))
    rhs = z * math.exp(log_gamma(z))
    assert lhs == pytest.approx(rhs, rel=1e-11)


@pytest.mark.parametrize("z", [0.25, 0.5, 1.0, 3.7, 30.0, 1e4, 1e6])
def test_log_gamma_against_integral_oracle(z):
    # Stirling series with correction terms, an independent route for z >= 12;
    # smaller z lifted with the recurrence
    shift = 0
    zz = z
    while zz < 12.0:
        zz += 1.0
        shift += 1
    series = (
        (zz - 0.5) * math.log(zz)
        - zz
        + 0.5 * math.log(2.0 * math.pi)
        + 1.0 / (12.0 * zz)
        - 1.0 / (360.0 * zz**3)
        + 1.0 / (1260.0 * zz**5)
        - 1.0 / (1680.0 * zz**7)
    )
    for k in range(shift):
        series -= math.log(z + k)
    assert log_gamma(z) == pytest.approx(series, rel=1e-12, abs=1e-12)


def test_riemann_zeta_basel():
    assert riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6.0, abs=1e-13)
    assert riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90.0, abs=1e-13)


def test_riemann_zeta_3_2_by_brute_force():
    mid, half = brute_zeta_tail(1.5, 1, 40_000_000)
    assert half < 3e-12
    val = riemann_zeta(1.5)
    assert abs(val - mid) <= half + 1e-12 * abs(mid)
    # frozen from the bracket oracle above
    assert val == pytest.approx(2.6123753486854883433, rel=1e-12)


def test_riemann_zeta_approaches_one():
    v = riemann_zeta(30.0)
    assert 1.0 < v < 1.0 + 1e-8


def test_hurwitz_tail_convention():
    assert hurwitz_zeta(2.0, 0) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)
    assert hurwitz_zeta(2.0, 1) == pytest.approx(math.pi**2 / 6.0 - 1.0, rel=1e-12)


def test_hurwitz_by_brute_force():
    mid, half = brute_zeta_tail(3.0, 6, 10_000_000)
    assert half < 1e-15
    val = hurwitz_zeta(3.0, 5)
    assert abs(val - mid) <= half + 1e-12 * abs(mid)
    assert val == pytest.approx(0.016394866122557248, rel=1e-12)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_hurwitz_decreasing_in_n(s):
    values = [hurwitz_zeta(s, n) for n in (0, 1, 2, 5, 10, 100, 10_000)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_generalized_harmonic_small_cases():
    assert generalized_harmonic(0, 2.0) == 0.0
    assert generalized_harmonic(1, 2.0) == 1.0
    assert generalized_harmonic(3, 2.0) == pytest.approx(49.0 / 36.0, rel=1e-15)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [0, 1, 7, 64, 100])
def test_partition_identity(n, s):
    total = generalized_harmonic(n, s) + hurwitz_zeta(s, n)
    assert total == pytest.approx(riemann_zeta(s), abs=1e-11)


def test_domain_errors():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            log_gamma(bad)
    for bad_s in (1.0, 0.5, math.nan):
        with pytest.raises(ValueError):
            riemann_zeta(bad_s)
        with pytest.raises(ValueError):
            hurwitz_zeta(bad_s, 1)
        with pytest.raises(ValueError):
            generalized_harmonic(3, bad_s)
    with pytest.raises(ValueError):
        hurwitz_zeta(2.0, -1)
    with pytest.raises(ValueError):
        generalized_harmonic(-2, 2.0)


def test_accuracy_knobs_validated():
    with pytest.raises(ValueError):
        SpecialFnAccuracy(abs_tol=0.0)
    with pytest.raises(ValueError):
        SpecialFnAccuracy(max_terms=0)
    tight = SpecialFnAccuracy(abs_tol=1e-14, max_terms=10**7)
    assert riemann_zeta(2.0, tight) == pytest.approx(math.pi**2 / 6.0, abs=1e-13)
