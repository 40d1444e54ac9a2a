"""Special functions: log-gamma, Riemann/Hurwitz zeta, generalized harmonic numbers.

All zeta-type sums here use the 0-based indexing convention of the rest of the
package: ``hurwitz_zeta(s, n)`` is the tail sum over ``i >= n`` of
``(i + 1)**(-s)``, so that ``generalized_harmonic(n, s) + hurwitz_zeta(s, n)``
recovers ``riemann_zeta(s)`` exactly.

Only real arguments with ``s > 1`` are supported; there is no analytic
continuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "SpecialFnAccuracy",
    "DEFAULT_ACCURACY",
    "log_gamma",
    "riemann_zeta",
    "hurwitz_zeta",
    "generalized_harmonic",
]


@dataclass(frozen=True)
class SpecialFnAccuracy:
    """Accuracy knobs for the series evaluations."""

    abs_tol: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive and finite, got {self.abs_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_ACCURACY = SpecialFnAccuracy()

# Bernoulli-number coefficients B_{2j}/(2j)! for the Euler-Maclaurin tail,
# j = 1..4; the j=5 term is used only for the remainder bound.
_EM_COEF = (1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0)
_EM_NEXT_COEF = 1.0 / 47900160.0  # |B_10|/10!


def log_gamma(z: float) -> float:
    """Natural log of the Gamma function for z > 0.

    Delegates to the platform ``lgamma`` (accurate to a few ulp over the whole
    positive axis, which is the only regime the package needs).
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise ValueError(f"log_gamma requires a positive finite argument, got {z}")
    return math.lgamma(z)


def _rising_factorial(s: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= s + i
    return out


def _em_remainder_bound(s: float, n: int) -> float:
    # magnitude of the first omitted Euler-Maclaurin term
    return _EM_NEXT_COEF * _rising_factorial(s, 9) * n ** (-(s + 9.0))


def _zeta_tail_from(s: float, a: int, acc: SpecialFnAccuracy) -> float:
    """Sum of k**(-s) over integers k >= a (a >= 1), via direct terms plus an
    Euler-Maclaurin correction at an adaptively chosen cut N."""
    n = max(a, 16)
    while _em_remainder_bound(s, n) > 0.01 * acc.abs_tol and (n - a) < acc.max_terms:
        n *= 2
    direct = 0.0
    if n > a:
        k = np.arange(a, n, dtype=np.float64)
        direct = float(np.sum(k ** (-s)))
    tail = n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** (-s)
    power = n ** (-s - 1.0)
    for j, coef in enumerate(_EM_COEF):
        tail += coef * _rising_factorial(s, 2 * j + 1) * power
        power /= n * n
    return direct + tail


@lru_cache(maxsize=512)
def _zeta_cached(s: float, abs_tol: float, max_terms: int) -> float:
    return _zeta_tail_from(s, 1, SpecialFnAccuracy(abs_tol, max_terms))


def _check_s(s: float, name: str) -> float:
    s = float(s)
    if not math.isfinite(s) or s <= 1.0:
        raise ValueError(f"{name} requires s > 1 (series diverges otherwise), got {s}")
    return s


def riemann_zeta(s: float, accuracy: SpecialFnAccuracy = DEFAULT_ACCURACY) -> float:
    """zeta(s) = sum over x >= 0 of (x+1)**(-s), for s > 1."""
    s = _check_s(s, "riemann_zeta")
    return _zeta_cached(s, accuracy.abs_tol, accuracy.max_terms)


def hurwitz_zeta(s: float, n: int, accuracy: SpecialFnAccuracy = DEFAULT_ACCURACY) -> float:
    """Tail sum over i >= n of (i+1)**(-s); hurwitz_zeta(s, 0) == riemann_zeta(s)."""
    s = _check_s(s, "hurwitz_zeta")
    n = _check_count(n, "hurwitz_zeta")
    return _zeta_tail_from(s, n + 1, accuracy)


def _check_count(n, name: str) -> int:
    if n != int(n) or n < 0:
        raise ValueError(f"{name} requires a nonnegative integer index, got {n}")
    return int(n)


def generalized_harmonic(n: int, s: float) -> float:
    """H_{n,s} = sum over i = 0..n-1 of (i+1)**(-s); H_{0,s} = 0."""
    s = _check_s(s, "generalized_harmonic")
    n = _check_count(n, "generalized_harmonic")
    total = 0.0
    chunk = 10**6
    for start in range(1, n + 1, chunk):
        stop = min(n + 1, start + chunk)
        k = np.arange(start, stop, dtype=np.float64)
        total += float(np.sum(k ** (-s)))
    return total
