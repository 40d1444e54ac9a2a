"""Mixing densities that turn Negative Binomial and Poisson kernels into Zeta.

The density over the success parameter p splits by the Negative Binomial
shape r:

* r = 1:      (-ln p)^{s-1} / (zeta(s) Gamma(s) (1-p))                  (closed)
* r = 2:      (-ln p)^s / (zeta(s) Gamma(s+1) (1-p)^2)                  (closed)
* r > 1:      (r-1)/(zeta(s) Gamma(s) (1-p)^r) * K(p; r-2, s-1)         (integral)
* 0 < r < 1:  [ (s-1) K(p; r-1, s-2) + (r-1) K(p; r-1, s-1) ]
                  / (zeta(s) Gamma(s) (1-p)^r)                          (signed)

with the shared kernel K(p; a, c) = int_p^1 (w-p)^a (-ln w)^c w^{-(a+1)} dw.
The r < 1 case is a quasi-PDF: it integrates to one but is negative on a
neighborhood of p = 0.

The transform gamma = 1/p gives the density on (1, inf) linking the geometric
series to the zeta series, and mixing the Gamma(r, (1-p)/p) kernel over p
gives the (r-invariant) Poisson rate density on (0, inf).

All densities are only evaluated on the open interval: arguments within 1e-12
of an endpoint are rejected rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .quadrature import (
    QuadratureConvergenceError,
    QuadratureResult,
    QuadratureSpec,
    integrate_interval,
    integrate_semi_infinite,
    integrate_unit,
)
from .special import log_gamma, riemann_zeta

__all__ = [
    "MixingKind",
    "MixingDensityKind",
    "MultipleSignChangesError",
    "mixing_pdf_r1",
    "mixing_pdf_r2_closed",
    "mixing_pdf_r_gt1",
    "mixing_quasi_pdf_r_lt1",
    "gamma_transform_pdf",
    "lambda_mixing_pdf",
    "lambda_mixing_pdf_via_r",
    "mixing_pdf",
    "mixing_normalization",
    "find_sign_change",
    "quasi_total_variation",
]

# Evaluation is restricted to the open interval; see module docstring.
P_DOMAIN_MARGIN = 1e-12

# Below this s the (-ln w)^{s-1} factor dominates the inner integrals and we
# switch them to the t = -ln(w) variable.
_LOG_SUBSTITUTION_THRESHOLD = 1.2


class MixingKind(Enum):
    R1_CLOSED = "r1_closed"
    R2_CLOSED = "r2_closed"
    R_GT1_INTEGRAL = "r_gt1_integral"
    R_LT1_QUASI = "r_lt1_quasi"
    GAMMA_TRANSFORM = "gamma_transform"
    LAMBDA_MIXING = "lambda_mixing"


@dataclass(frozen=True)
class MixingDensityKind:
    """Tagged selector for one of the mixing densities."""

    tag: MixingKind
    s: float
    r: float | None = None

    def __post_init__(self) -> None:
        s = float(self.s)
        if not math.isfinite(s) or s <= 1.0:
            raise ValueError(f"mixing densities require s > 1, got {s}")
        object.__setattr__(self, "s", s)
        r = self.r
        tag = self.tag
        if tag in (MixingKind.GAMMA_TRANSFORM, MixingKind.LAMBDA_MIXING):
            if r is not None:
                raise ValueError(f"{tag.value} carries no shape parameter, got r={r}")
            return
        if r is None:
            raise ValueError(f"{tag.value} requires a shape parameter r")
        r = float(r)
        object.__setattr__(self, "r", r)
        if tag is MixingKind.R1_CLOSED and r != 1.0:
            raise ValueError(f"r1_closed requires r = 1, got {r}")
        if tag is MixingKind.R2_CLOSED and r != 2.0:
            raise ValueError(f"r2_closed requires r = 2, got {r}")
        if tag is MixingKind.R_GT1_INTEGRAL and not r > 1.0:
            raise ValueError(f"r_gt1_integral requires r > 1, got {r}")
        if tag is MixingKind.R_LT1_QUASI and not (0.0 < r < 1.0):
            raise ValueError(f"r_lt1_quasi requires 0 < r < 1, got {r}")

    @classmethod
    def for_nb_shape(cls, r: float, s: float) -> "MixingDensityKind":
        r = float(r)
        if not math.isfinite(r) or r <= 0:
            raise ValueError(f"Negative Binomial shape must be positive, got {r}")
        if r == 1.0:
            return cls(MixingKind.R1_CLOSED, s, 1.0)
        if r == 2.0:
            return cls(MixingKind.R2_CLOSED, s, 2.0)
        if r > 1.0:
            return cls(MixingKind.R_GT1_INTEGRAL, s, r)
        return cls(MixingKind.R_LT1_QUASI, s, r)


class MultipleSignChangesError(RuntimeError):
    """The quasi-PDF changed sign more than once on the probe grid."""

    def __init__(self, brackets):
        self.brackets = tuple(brackets)
        super().__init__(
            f"expected a single sign change, found {len(self.brackets)} brackets: {self.brackets}"
        )


def _check_p(p, allow_array: bool = True):
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise ValueError(f"p must be finite, got {p!r}")
    if np.any(arr < P_DOMAIN_MARGIN) or np.any(arr > 1.0 - P_DOMAIN_MARGIN):
        raise ValueError(
            f"p must lie in [{P_DOMAIN_MARGIN}, 1 - {P_DOMAIN_MARGIN}]; got {p!r}"
        )
    if arr.ndim and not allow_array:
        raise ValueError("expected a scalar p")
    return arr


def _check_s(s: float) -> float:
    s = float(s)
    if not math.isfinite(s) or s <= 1.0:
        raise ValueError(f"requires s > 1, got {s}")
    return s


def mixing_pdf_r1(p, s: float):
    """Closed-form mixing density for the geometric (r = 1) kernel."""
    s = _check_s(s)
    arr = _check_p(p)
    norm = riemann_zeta(s) * math.exp(log_gamma(s))
    out = (-np.log(arr)) ** (s - 1.0) / (norm * (1.0 - arr))
    return out if arr.ndim else float(out)


def mixing_pdf_r2_closed(p, s: float):
    """Closed form of the r = 2 mixing density."""
    s = _check_s(s)
    arr = _check_p(p)
    norm = riemann_zeta(s) * math.exp(log_gamma(s + 1.0))
    out = (-np.log(arr)) ** s / (norm * (1.0 - arr) ** 2)
    return out if arr.ndim else float(out)


def _transform_order(exponent: float) -> int:
    """Power m for the endpoint substitution z = (scale) v^m.

    A factor z^e becomes v^{m(1+e)-1} dv up to smooth terms; m is chosen so
    the transformed exponent is at least 1/2 (capped at 24, which covers the
    shapes in scope; beyond the cap the residual singularity is left to
    adaptive refinement).
    """
    if exponent >= 1.0:
        return 1
    if exponent >= 0.0:
        return 3
    return min(24, math.ceil(1.5 / (1.0 + exponent)))


def _kernel_spec(spec: QuadratureSpec) -> QuadratureSpec:
    # kernel values can be astronomically small near p = 1; converge on
    # relative error with a hard absolute floor, no endpoint pre-split
    # (the substitutions below already remove the singularities)
    return replace(
        spec, abs_tol=min(spec.abs_tol, 1e-14), endpoint_hints=frozenset()
    )


def _kernel_integral(
    p: float, a: float, c: float, s: float, spec: QuadratureSpec, one_minus_p: float | None = None
) -> QuadratureResult:
    """K(p; a, c) = int_p^1 (w-p)^a (-ln w)^c w^{-(a+1)} dw.

    The interval is split at its midpoint and each half is mapped by a
    power-law substitution anchored at its endpoint, with the singular factor
    carried analytically in the new variable: the (w-p)^a factor on the left
    half and the (-ln w)^c factor on the right half become plain powers of v
    with nonnegative exponent, so neither cancellation nor endpoint blowup
    ever occurs. The complement 1-w is tracked in closed form throughout,
    keeping the kernel well-conditioned arbitrarily close to p = 1 (callers
    integrating in the y = -ln p variable pass the exact complement).

    For s below the substitution threshold the same treatment is applied in
    the t = -ln(w) variable, where the kernel reads
    int_0^{-ln p} (e^{-t} - p)^a t^c e^{a t} dt.
    """
    kspec = _kernel_spec(spec)
    omp = (1.0 - p) if one_minus_p is None else one_minus_p
    if s < _LOG_SUBSTITUTION_THRESHOLD:
        return _kernel_integral_logspace(p, a, c, omp, kspec)

    w_left = 0.5 * omp  # mid - p for mid = (p+1)/2
    m1 = _transform_order(a)
    pow_left = m1 * (1.0 + a) - 1.0
    log_lead = (1.0 + a) * math.log(w_left) + math.log(m1)

    def left(v: np.ndarray) -> np.ndarray:
        # assembled in log space: the w^{-(a+1)} factor overflows in linear
        # space when p is far below the singular-exponent overflow point
        vm = v**m1
        w = p + w_left * vm
        if p >= 0.5:
            # w may approach 1; go through the exactly-tracked complement
            one_minus_w = omp * (1.0 - 0.5 * vm)
            minus_ln_w = -np.log1p(-one_minus_w)
        else:
            minus_ln_w = -np.log(w)
        logs = log_lead + pow_left * np.log(v) + c * np.log(minus_ln_w)
        return np.exp(logs - (a + 1.0) * np.log(w))

    w_right = 0.5 * omp  # 1 - mid
    m2 = _transform_order(c)
    pow_right = m2 * (1.0 + c) - 1.0

    def right(v: np.ndarray) -> np.ndarray:
        vm = v**m2
        one_minus_w = w_right * vm
        w = 1.0 - one_minus_w  # w >= (1+p)/2, no cancellation
        w_minus_p = omp * (1.0 - 0.5 * vm)
        # -ln(w) = one_minus_w * ratio with ratio -> 1 at the endpoint
        ratio = np.where(vm > 0, -np.log1p(-one_minus_w) / np.where(one_minus_w > 0, one_minus_w, 1.0), 1.0)
        return (
            w_right ** (1.0 + c)
            * m2
            * v**pow_right
            * ratio**c
            * w_minus_p**a
            * w ** (-(a + 1.0))
        )

    lo = integrate_unit(left, kspec)
    hi = integrate_unit(right, kspec)
    return QuadratureResult(
        lo.value + hi.value,
        lo.error_estimate + hi.error_estimate,
        lo.evaluations + hi.evaluations,
        lo.converged and hi.converged,
    )


def _kernel_integral_logspace(
    p: float, a: float, c: float, one_minus_p: float, kspec: QuadratureSpec
) -> QuadratureResult:
    top = -math.log1p(-one_minus_p) if one_minus_p < 0.5 else -math.log(p)
    half = 0.5 * top

    m1 = _transform_order(c)
    pow_left = m1 * (1.0 + c) - 1.0

    def left(v: np.ndarray) -> np.ndarray:
        t = half * v**m1
        # e^{-t} - p = p expm1(top - t), stable for p near 1
        base = p * np.expm1(top - t)
        return half ** (1.0 + c) * m1 * v**pow_left * base**a * np.exp(a * t)

    m2 = _transform_order(a)
    pow_right = m2 * (1.0 + a) - 1.0

    def right(v: np.ndarray) -> np.ndarray:
        delta = half * v**m2  # distance to the upper limit t = -ln p
        t = top - delta
        # e^{-t} - p = p expm1(delta) = p delta * ratio with ratio -> 1
        ratio = np.where(delta > 0, np.expm1(delta) / np.where(delta > 0, delta, 1.0), 1.0)
        return (
            (p * half) ** a
            * half
            * m2
            * v**pow_right
            * ratio**a
            * t**c
            * np.exp(a * t)
        )

    lo = integrate_unit(left, kspec)
    hi = integrate_unit(right, kspec)
    return QuadratureResult(
        lo.value + hi.value,
        lo.error_estimate + hi.error_estimate,
        lo.evaluations + hi.evaluations,
        lo.converged and hi.converged,
    )


def _kernel_or_raise(
    p: float,
    a: float,
    c: float,
    s: float,
    spec: QuadratureSpec,
    what: str,
    one_minus_p: float | None = None,
) -> float:
    res = _kernel_integral(p, a, c, s, spec, one_minus_p)
    if not res.converged:
        raise QuadratureConvergenceError(
            f"{what} inner integral did not converge at p={p}", res.error_estimate
        )
    return res.value


def mixing_pdf_r_gt1(p, r: float, s: float, spec: QuadratureSpec):
    """Integral-form mixing density for shapes r > 1."""
    s = _check_s(s)
    r = float(r)
    if not r > 1.0:
        raise ValueError(f"requires r > 1, got {r}")
    arr = _check_p(p)
    norm = riemann_zeta(s) * math.exp(log_gamma(s))

    def one(pv: float) -> float:
        kern = _kernel_or_raise(pv, r - 2.0, s - 1.0, s, spec, "r>1 mixing density")
        return (r - 1.0) * kern / (norm * (1.0 - pv) ** r)

    if arr.ndim:
        return np.array([one(float(v)) for v in arr])
    return one(float(arr))


def mixing_quasi_pdf_r_lt1(p, r: float, s: float, spec: QuadratureSpec):
    """Signed mixing quasi-density for shapes 0 < r < 1.

    Negative values near p = 0 are expected; the two kernel integrals are
    evaluated separately and combined with compensated summation.
    """
    s = _check_s(s)
    r = float(r)
    if not (0.0 < r < 1.0):
        raise ValueError(f"requires 0 < r < 1, got {r}")
    arr = _check_p(p)
    norm = riemann_zeta(s) * math.exp(log_gamma(s))

    def one(pv: float) -> float:
        k1 = _kernel_or_raise(pv, r - 1.0, s - 2.0, s, spec, "quasi density")
        k2 = _kernel_or_raise(pv, r - 1.0, s - 1.0, s, spec, "quasi density")
        combined = math.fsum(((s - 1.0) * k1, (r - 1.0) * k2))
        return combined / (norm * (1.0 - pv) ** r)

    if arr.ndim:
        return np.array([one(float(v)) for v in arr])
    return one(float(arr))


def gamma_transform_pdf(gamma, s: float):
    """Density of gamma = 1/p on (1, inf): (ln g)^{s-1} / (zeta(s) Gamma(s) g (g-1))."""
    s = _check_s(s)
    arr = np.asarray(gamma, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 1.0):
        raise ValueError(f"gamma must lie in (1, inf), got {gamma!r}")
    norm = riemann_zeta(s) * math.exp(log_gamma(s))
    out = np.log(arr) ** (s - 1.0) / (norm * arr * (arr - 1.0))
    return out if arr.ndim else float(out)


def lambda_mixing_pdf(lam: float, s: float, spec: QuadratureSpec) -> float:
    """Poisson-rate mixing density.

    The defining integral over y in (0, inf) of (ln(y+1))^{s-1}/(y+1) e^{-lam y}
    is evaluated in the scaled variable tau = lam * y, where it reads
    int_0^inf (ln(1 + tau/lam))^{s-1} e^{-tau} / (lam + tau) dtau. The
    exponential factor pins the support to tau in (0, ~50) uniformly in lam;
    the raw form develops an unresolvable boundary layer at y ~ 1/lam for
    small rates and at y ~ 1/lam near zero for large ones.
    """
    s = _check_s(s)
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise ValueError(f"requires lam > 0, got {lam}")
    norm = riemann_zeta(s) * math.exp(log_gamma(s))

    res = integrate_semi_infinite(_lambda_scaled_integrand(lam, s), spec.with_hints(left=s < 2.0))
    if not res.converged:
        raise QuadratureConvergenceError(
            f"lambda mixing density did not converge at lam={lam}", res.error_estimate
        )
    return res.value / norm


def _lambda_scaled_integrand(lam: float, s: float):
    def integrand(tau: np.ndarray) -> np.ndarray:
        return np.log1p(tau / lam) ** (s - 1.0) * np.exp(-tau) / (lam + tau)

    return integrand


def lambda_mixing_pdf_via_r(lam: float, r: float, s: float, spec: QuadratureSpec) -> float:
    """Poisson-rate density computed by mixing the Gamma(r, (1-p)/p) kernel
    over the shape-r success density; invariant over r >= 1."""
    s = _check_s(s)
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise ValueError(f"requires lam > 0, got {lam}")
    r = float(r)
    if r != 1.0 and not r > 1.0:
        raise ValueError(f"requires r = 1 or r > 1 (quasi regime unsupported), got {r}")

    if r == 1.0:
        density = lambda parr: mixing_pdf_r1(parr, s)
    elif r == 2.0:
        density = lambda parr: mixing_pdf_r2_closed(parr, s)
    else:
        density = lambda parr: mixing_pdf_r_gt1(parr, r, s, spec)

    lgr = log_gamma(r)
    loglam = math.log(lam)

    def integrand(parr: np.ndarray) -> np.ndarray:
        rates = (1.0 - parr) / parr
        logkern = r * np.log(rates) + (r - 1.0) * loglam - rates * lam - lgr
        return np.exp(logkern) * density(parr)

    res = integrate_unit(integrand, spec.with_hints(right=s < 2.0))
    if not res.converged:
        raise QuadratureConvergenceError(
            f"lambda mixing via r={r} did not converge at lam={lam}", res.error_estimate
        )
    return res.value


def mixing_pdf(point: float, kind: MixingDensityKind, spec: QuadratureSpec) -> float:
    """Dispatch a single density evaluation on a tagged kind."""
    if kind.tag is MixingKind.R1_CLOSED:
        return mixing_pdf_r1(point, kind.s)
    if kind.tag is MixingKind.R2_CLOSED:
        return mixing_pdf_r2_closed(point, kind.s)
    if kind.tag is MixingKind.R_GT1_INTEGRAL:
        return mixing_pdf_r_gt1(point, kind.r, kind.s, spec)
    if kind.tag is MixingKind.R_LT1_QUASI:
        return mixing_quasi_pdf_r_lt1(point, kind.r, kind.s, spec)
    if kind.tag is MixingKind.GAMMA_TRANSFORM:
        return gamma_transform_pdf(point, kind.s)
    return lambda_mixing_pdf(point, kind.s, spec)


def mixing_normalization(kind: MixingDensityKind, spec: QuadratureSpec) -> QuadratureResult:
    """Integrate the selected density over its whole domain (sanity: 1).

    The success-parameter kinds are integrated in the y = -ln p variable and
    the reciprocal transform in z = gamma - 1, with the density formulas
    inlined in the transformed variable. In those coordinates the singular
    endpoint sits at 0, where floating-point numbers are dense, so the
    quadrature can resolve shapes with s < 2 whose density grows like
    (1-p)^{s-2}; the raw p parametrization would run into the documented
    evaluation margin near p = 1 first.
    """
    s = kind.s
    norm = riemann_zeta(s) * math.exp(log_gamma(s))
    tag = kind.tag

    if tag is MixingKind.LAMBDA_MIXING:

        def lam_integrand(lams: np.ndarray) -> np.ndarray:
            return np.array([lambda_mixing_pdf(float(v), s, spec) for v in lams])

        deep = replace(spec, hint_levels=12)
        return integrate_semi_infinite(lam_integrand, deep.with_hints(left=True))

    if tag is MixingKind.GAMMA_TRANSFORM:

        def z_integrand(z: np.ndarray) -> np.ndarray:
            return np.log1p(z) ** (s - 1.0) / (norm * (1.0 + z) * z)

        return integrate_semi_infinite(z_integrand, spec.with_hints(left=True))

    r = kind.r
    if tag is MixingKind.R1_CLOSED:

        def y_integrand(y: np.ndarray) -> np.ndarray:
            return y ** (s - 1.0) * np.exp(-y) / (norm * (-np.expm1(-y)))

    elif tag is MixingKind.R2_CLOSED:

        def y_integrand(y: np.ndarray) -> np.ndarray:
            return y**s * np.exp(-y) / (norm * s * np.expm1(-y) ** 2)

    elif tag is MixingKind.R_GT1_INTEGRAL:

        def y_one(y: float) -> float:
            pv = math.exp(-y)
            if pv == 0.0:  # kernel grows only like y^s; the weight is gone
                return 0.0
            omp = -math.expm1(-y)
            kern = _kernel_or_raise(pv, r - 2.0, s - 1.0, s, spec, "r>1 normalization", omp)
            return (r - 1.0) * kern * pv / (norm * omp**r)

        def y_integrand(y: np.ndarray) -> np.ndarray:
            return np.array([y_one(float(v)) for v in y])

    else:

        def y_one(y: float) -> float:
            pv = math.exp(-y)
            if pv == 0.0:
                return 0.0
            omp = -math.expm1(-y)
            k1 = _kernel_or_raise(pv, r - 1.0, s - 2.0, s, spec, "quasi normalization", omp)
            k2 = _kernel_or_raise(pv, r - 1.0, s - 1.0, s, spec, "quasi normalization", omp)
            return math.fsum(((s - 1.0) * k1, (r - 1.0) * k2)) * pv / (norm * omp**r)

        def y_integrand(y: np.ndarray) -> np.ndarray:
            return np.array([y_one(float(v)) for v in y])

    return integrate_semi_infinite(y_integrand, spec.with_hints(left=True))


_PROBE_GRID_SIZE = 48


def find_sign_change(r: float, s: float, spec: QuadratureSpec, *, tol: float = 1e-9) -> float:
    """Locate the p where the quasi-PDF crosses from negative to positive.

    Probes a log-spaced grid, requires exactly one bracket (raising
    MultipleSignChangesError otherwise), then bisects. The returned p*
    satisfies |quasi(p*)| <= tol or sits in a bracket narrower than 1e-12.
    """
    r = float(r)
    if not (0.0 < r < 1.0):
        raise ValueError(f"sign change only exists for 0 < r < 1, got {r}")
    s = _check_s(s)

    grid = np.logspace(math.log10(2e-12), math.log10(0.95), _PROBE_GRID_SIZE)
    values = [mixing_quasi_pdf_r_lt1(float(q), r, s, spec) for q in grid]
    brackets = [
        (float(grid[i]), float(grid[i + 1]))
        for i in range(len(grid) - 1)
        if (values[i] < 0.0) != (values[i + 1] < 0.0)
    ]
    if not brackets:
        raise RuntimeError(
            f"failed to bracket a sign change for r={r}, s={s}; "
            f"density may be one-signed on the probe grid"
        )
    if len(brackets) > 1:
        raise MultipleSignChangesError(brackets)

    lo, hi = brackets[0]
    flo = mixing_quasi_pdf_r_lt1(lo, r, s, spec)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = mixing_quasi_pdf_r_lt1(mid, r, s, spec)
        if abs(fmid) <= tol or (hi - lo) < 1e-12:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise RuntimeError(f"sign-change bisection did not converge for r={r}, s={s}")


def quasi_total_variation(r: float, s: float, spec: QuadratureSpec) -> float:
    """int_0^1 |quasi-PDF| dp, split at the sign change (reporting aid)."""
    pstar = find_sign_change(r, s, spec)

    def f(parr: np.ndarray) -> np.ndarray:
        return mixing_quasi_pdf_r_lt1(parr, r, s, spec)

    left = integrate_interval(f, P_DOMAIN_MARGIN, pstar, spec.with_hints(left=True))
    right = integrate_interval(f, pstar, 1.0 - P_DOMAIN_MARGIN, spec.with_hints(right=True))
    return abs(left.value) + abs(right.value)
