"""Base distributions: Zeta, Negative Binomial, Poisson, Gamma, Beta, Yule.

Every discrete PMF lives on the 0-based sample space x in {0, 1, 2, ...} so
that the Zeta, Negative Binomial and Poisson families share a common support.
PMFs are evaluated in log-space and exponentiated once at the end; parameters
are validated at construction so the hot quadrature loops never re-check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import hurwitz_zeta, log_gamma, riemann_zeta

__all__ = [
    "ZetaParams",
    "NbParams",
    "GammaParams",
    "YuleParams",
    "zeta_pmf",
    "nb_pmf",
    "poisson_pmf",
    "gamma_pdf",
    "beta_pdf",
    "yule_pmf",
    "zeta_tail_point",
    "nb_tail_point",
    "poisson_tail_point",
    "yule_tail_point",
]


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive and finite, got {value}")
    return value


@dataclass(frozen=True)
class ZetaParams:
    s: float

    def __post_init__(self) -> None:
        s = float(self.s)
        if not math.isfinite(s) or s <= 1.0:
            raise ValueError(f"Zeta shape must satisfy s > 1, got {s}")
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class NbParams:
    r: float
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _positive(self.r, "Negative Binomial shape r"))
        p = float(self.p)
        if not (0.0 < p < 1.0):
            raise ValueError(f"Negative Binomial p must lie in (0, 1), got {p}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class GammaParams:
    shape: float
    rate: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", _positive(self.shape, "Gamma shape"))
        object.__setattr__(self, "rate", _positive(self.rate, "Gamma rate"))


@dataclass(frozen=True)
class YuleParams:
    b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", _positive(self.b, "Yule shape b"))


def _check_x(x) -> np.ndarray | int:
    """Validate count argument(s); returns an int or an int64 array."""
    arr = np.asarray(x)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"counts must be integers, got {x!r}")
        arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError(f"counts must be nonnegative, got {x!r}")
    if arr.ndim == 0:
        return int(arr)
    return arr


def zeta_pmf(x, params: ZetaParams):
    """(x+1)^{-s} / zeta(s); accepts a scalar count or an integer array."""
    x = _check_x(x)
    return (x + 1.0) ** (-params.s) / riemann_zeta(params.s)


def nb_log_coeff(x: int, r: float) -> float:
    """log of the binomial-type coefficient Gamma(r+x) / (Gamma(r) x!)."""
    return log_gamma(r + x) - log_gamma(r) - log_gamma(x + 1.0)


def nb_pmf(x, params: NbParams):
    x = _check_x(x)
    r, p = params.r, params.p
    log1mp = math.log1p(-p)
    logp = math.log(p)
    if isinstance(x, np.ndarray):
        coeff = np.array([nb_log_coeff(int(v), r) for v in x.ravel()]).reshape(x.shape)
        return np.exp(coeff + x * logp + r * log1mp)
    return math.exp(nb_log_coeff(x, r) + x * logp + r * log1mp)


def poisson_pmf(x, lam: float):
    lam = _positive(lam, "Poisson rate")
    x = _check_x(x)
    if isinstance(x, np.ndarray):
        logfac = np.array([log_gamma(int(v) + 1.0) for v in x.ravel()]).reshape(x.shape)
        return np.exp(x * math.log(lam) - lam - logfac)
    return math.exp(x * math.log(lam) - lam - log_gamma(x + 1.0))


def gamma_pdf(lam, params: GammaParams):
    """Gamma density in the (shape, rate) parametrization; lam > 0."""
    arr = np.asarray(lam, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"gamma_pdf requires lam > 0, got {lam!r}")
    a, beta = params.shape, params.rate
    logpdf = a * math.log(beta) + (a - 1.0) * np.log(arr) - beta * arr - log_gamma(a)
    out = np.exp(logpdf)
    return out if arr.ndim else float(out)


def beta_pdf(p, a: float, b: float):
    a = _positive(a, "Beta a")
    b = _positive(b, "Beta b")
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise ValueError(f"beta_pdf requires p in (0, 1), got {p!r}")
    lognorm = log_gamma(a + b) - log_gamma(a) - log_gamma(b)
    out = np.exp(lognorm + (a - 1.0) * np.log(arr) + (b - 1.0) * np.log1p(-arr))
    return out if arr.ndim else float(out)


def yule_pmf(x, params: YuleParams):
    x = _check_x(x)
    b = params.b
    lead = math.log(b) + log_gamma(b + 1.0)
    if isinstance(x, np.ndarray):
        lg = np.array(
            [log_gamma(int(v) + 1.0) - log_gamma(int(v) + b + 2.0) for v in x.ravel()]
        ).reshape(x.shape)
        return np.exp(lead + lg)
    return math.exp(lead + log_gamma(x + 1.0) - log_gamma(x + b + 2.0))


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise ValueError(f"tail mass must lie in (0, 1), got {eps}")
    return eps


def zeta_tail_point(eps: float, params: ZetaParams) -> int:
    """Smallest X with P(X' > X) < eps under Zeta(s); exact via Hurwitz tails."""
    eps = _check_eps(eps)
    s = params.s
    z = riemann_zeta(s)

    def tail(x: int) -> float:
        return hurwitz_zeta(s, x + 1) / z

    hi = 1
    while tail(hi) >= eps:
        hi *= 2
    lo = hi // 2 if hi > 1 else 0
    while lo < hi:
        mid = (lo + hi) // 2
        if tail(mid) < eps:
            hi = mid
        else:
            lo = mid + 1
    return hi


def nb_tail_point(eps: float, params: NbParams) -> int:
    """Smallest X with an analytic geometric tail bound below eps."""
    eps = _check_eps(eps)
    r, p = params.r, params.p

    def bound(x: int) -> float:
        # pmf ratio f(k+1)/f(k) = (r+k)p/(k+1) is bounded by rho for k > x
        rho = max(p, (r + x + 1) * p / (x + 2))
        if rho >= 1.0:
            return math.inf
        return nb_pmf(x + 1, params) / (1.0 - rho)

    x = 1
    while bound(x) >= eps:
        x *= 2
        if x > 2**62:
            raise RuntimeError("negative binomial tail bound failed to close")
    lo, hi = x // 2, x
    while lo < hi:
        mid = (lo + hi) // 2
        if bound(mid) < eps:
            hi = mid
        else:
            lo = mid + 1
    return hi


def poisson_tail_point(eps: float, lam: float) -> int:
    eps = _check_eps(eps)
    lam = _positive(lam, "Poisson rate")
    x = max(1, math.ceil(2.0 * lam))
    while True:
        rho = lam / (x + 2.0)
        if rho < 1.0 and poisson_pmf(x + 1, lam) / (1.0 - rho) < eps:
            return x
        x *= 2


def yule_tail_point(eps: float, params: YuleParams) -> int:
    """Exact: P(X >= k) = Gamma(b+1) Gamma(k+1) / Gamma(k+b+1)."""
    eps = _check_eps(eps)
    b = params.b

    def tail(x: int) -> float:
        k = x + 1
        return math.exp(log_gamma(b + 1.0) + log_gamma(k + 1.0) - log_gamma(k + b + 1.0))

    hi = 1
    while tail(hi) >= eps:
        hi *= 2
    lo = hi // 2 if hi > 1 else 0
    while lo < hi:
        mid = (lo + hi) // 2
        if tail(mid) < eps:
            hi = mid
        else:
            lo = mid + 1
    return hi
