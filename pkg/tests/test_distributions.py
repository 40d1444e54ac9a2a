"""Base-distribution tests: parameter validation, classical values, ratio
recursions as independent oracles, and tail-point bounds."""

import math

import numpy as np
import pytest

from zetamix.distributions import (
    GammaParams,
    NbParams,
    YuleParams,
    ZetaParams,
    beta_pdf,
    gamma_pdf,
    nb_pmf,
    nb_tail_point,
    poisson_pmf,
    poisson_tail_point,
    yule_pmf,
    yule_tail_point,
    zeta_pmf,
    zeta_tail_point,
)
from zetamix.quadrature import QuadratureSpec, integrate_semi_infinite
from zetamix.special import hurwitz_zeta, riemann_zeta


def nb_pmf_by_recursion(x: int, r: float, p: float) -> float:
    """Independent route: f(0) = (1-p)^r and f(k+1)/f(k) = (r+k) p / (k+1)."""
    val = (1.0 - p) ** r
    for k in range(x):
        val *= (r + k) * p / (k + 1.0)
    return val


def yule_pmf_by_recursion(x: int, b: float) -> float:
    """f(0) = b/(b+1) and f(k+1)/f(k) = (k+1)/(k+b+2)."""
    val = b / (b + 1.0)
    for k in range(x):
        val *= (k + 1.0) / (k + b + 2.0)
    return val


def test_param_validation():
    with pytest.raises(ValueError):
        ZetaParams(1.0)
    with pytest.raises(ValueError):
        ZetaParams(math.nan)
    with pytest.raises(ValueError):
        NbParams(0.0, 0.5)
    with pytest.raises(ValueError):
        NbParams(1.0, 1.0)
    with pytest.raises(ValueError):
        NbParams(1.0, 0.0)
    with pytest.raises(ValueError):
        GammaParams(1.0, 0.0)
    with pytest.raises(ValueError):
        YuleParams(-1.0)


def test_zeta_pmf_values():
    params = ZetaParams(2.0)
    assert zeta_pmf(0, params) == pytest.approx(6.0 / math.pi**2, rel=1e-13)
    assert zeta_pmf(1, params) == pytest.approx(6.0 / math.pi**2 / 4.0, rel=1e-13)
    # frozen via the series oracle for zeta(1.5)
    assert zeta_pmf(9, ZetaParams(1.5)) == pytest.approx(0.012104989666816426, rel=1e-12)


def test_zeta_pmf_rejects_negative():
    with pytest.raises(ValueError):
        zeta_pmf(-1, ZetaParams(2.0))
    with pytest.raises(ValueError):
        zeta_pmf(1.5, ZetaParams(2.0))


def test_zeta_ratio_is_power_of_two():
    for s in (1.5, 2.0, 3.0):
        params = ZetaParams(s)
        ratio = zeta_pmf(0, params) / zeta_pmf(1, params)
        assert ratio == pytest.approx(2.0**s, rel=1e-12)


def test_nb_pmf_geometric_reduction():
    params = NbParams(1.0, 0.3)
    assert nb_pmf(0, params) == pytest.approx(0.7, rel=1e-14)
    assert nb_pmf(2, params) == pytest.approx(0.3**2 * 0.7, rel=1e-14)
    for x in range(20):
        assert nb_pmf(x, params) == pytest.approx(0.3**x * 0.7, rel=1e-12)


def test_nb_pmf_against_recursion():
    # frozen independently: 0.11711901638931229 for (3, r=2.5, p=0.4)
    params = NbParams(2.5, 0.4)
    assert nb_pmf(3, params) == pytest.approx(0.11711901638931229, rel=1e-12)
    for x in (0, 1, 5, 17):
        assert nb_pmf(x, params) == pytest.approx(
            nb_pmf_by_recursion(x, 2.5, 0.4), rel=1e-12
        )


def test_nb_ratio_at_origin():
    for r, p in ((0.25, 0.3), (1.0, 0.5), (3.7, 0.8)):
        params = NbParams(r, p)
        assert nb_pmf(0, params) / nb_pmf(1, params) == pytest.approx(
            1.0 / (r * p), rel=1e-12
        )


def test_poisson_pmf_values():
    assert poisson_pmf(0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert poisson_pmf(1, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert poisson_pmf(5, 2.5) == pytest.approx(2.5**5 * math.exp(-2.5) / 120.0, rel=1e-13)
    with pytest.raises(ValueError):
        poisson_pmf(1, 0.0)


def test_gamma_pdf_values():
    assert gamma_pdf(1.0, GammaParams(1.0, 1.0)) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert gamma_pdf(0.5, GammaParams(2.0, 3.0)) == pytest.approx(
        9.0 * 0.5 * math.exp(-1.5), rel=1e-13
    )
    with pytest.raises(ValueError):
        gamma_pdf(0.0, GammaParams(1.0, 1.0))


def test_gamma_pdf_normalizes():
    params = GammaParams(2.5, 1.5)
    res = integrate_semi_infinite(lambda lam: gamma_pdf(lam, params), QuadratureSpec())
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_beta_pdf_values():
    assert beta_pdf(0.5, 1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert beta_pdf(0.25, 1.0, 2.0) == pytest.approx(1.5, rel=1e-14)
    assert beta_pdf(0.5, 2.0, 2.0) == pytest.approx(1.5, rel=1e-14)
    with pytest.raises(ValueError):
        beta_pdf(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        beta_pdf(1.0, 1.0, 1.0)


def test_yule_pmf_values():
    assert yule_pmf(0, YuleParams(1.0)) == pytest.approx(0.5, rel=1e-13)
    assert yule_pmf(1, YuleParams(1.0)) == pytest.approx(1.0 / 6.0, rel=1e-13)
    # frozen via log-gamma arithmetic and the ratio recursion
    assert yule_pmf(4, YuleParams(2.5)) == pytest.approx(0.014208014208014208, rel=1e-12)
    for x in (0, 2, 9):
        assert yule_pmf(x, YuleParams(2.5)) == pytest.approx(
            yule_pmf_by_recursion(x, 2.5), rel=1e-12
        )


def test_yule_ratio():
    for b in (0.5, 1.0, 2.5):
        params = YuleParams(b)
        assert yule_pmf(0, params) / yule_pmf(1, params) == pytest.approx(b + 2.0, rel=1e-12)


@pytest.mark.parametrize(
    "pmf,params",
    [
        (zeta_pmf, ZetaParams(2.0)),
        (nb_pmf, NbParams(2.5, 0.4)),
        (yule_pmf, YuleParams(2.5)),
    ],
)
def test_pmf_positive_and_normalized(pmf, params):
    xs = np.arange(0, 2000)
    vals = pmf(xs, params)
    assert np.all(vals >= 0.0)  # log-space evaluation can underflow, never go negative
    assert np.all(vals[:300] > 0.0)
    assert np.all(vals < 1.0)
    # partial mass plus a conservative tail allowance reaches one
    partial = float(vals.sum())
    assert partial < 1.0 + 1e-12
    assert partial > 1.0 - 0.05  # the 2000-term head carries nearly all mass


def test_zeta_tail_point():
    params = ZetaParams(2.0)
    for eps in (1e-3, 1e-6):
        x = zeta_tail_point(eps, params)
        tail_at = hurwitz_zeta(2.0, x + 1) / riemann_zeta(2.0)
        tail_before = hurwitz_zeta(2.0, x) / riemann_zeta(2.0)
        assert tail_at < eps <= tail_before


def test_zeta_tail_point_heavy_shape():
    x = zeta_tail_point(1e-9, ZetaParams(1.5))
    # tail ~ 2 X^{-1/2} / zeta(3/2): the 1e-9 point sits near 5.9e17
    assert 1e17 < x < 1e18


def test_nb_tail_point_bounds_mass():
    params = NbParams(2.5, 0.4)
    x = nb_tail_point(1e-8, params)
    mass = float(nb_pmf(np.arange(0, x + 1), params).sum())
    assert 1.0 - mass < 1e-8


def test_poisson_tail_point_bounds_mass():
    x = poisson_tail_point(1e-8, 2.5)
    mass = float(poisson_pmf(np.arange(0, x + 1), 2.5).sum())
    assert 1.0 - mass < 1e-8


def test_yule_tail_point_bounds_mass():
    params = YuleParams(2.5)
    x = yule_tail_point(1e-6, params)
    mass = float(yule_pmf(np.arange(0, x + 1), params).sum())
    assert 1.0 - mass < 1e-6


def test_tail_point_eps_validation():
    with pytest.raises(ValueError):
        zeta_tail_point(0.0, ZetaParams(2.0))
    with pytest.raises(ValueError):
        zeta_tail_point(1.5, ZetaParams(2.0))
