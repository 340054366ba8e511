"""Standard normal cdf, quantile, and sandwich bounds on the upper quantile.

The quantile uses Wichura's AS241 (PPND16) rational approximation followed by
one Newton step against the cdf.  The step is taken on the smaller tail
probability, so ``upper_quantile(alpha)`` stays accurate for tiny ``alpha``
where ``1 - alpha`` would round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_BETA = 1.02
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
ALPHA_MAX = INV_SQRT_2PI
ENDPOINT_TOL = 1e-12

_SQRT2 = math.sqrt(2.0)

# AS241 coefficients, |q| <= 0.425
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
# intermediate tail, r <= 5
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
# far tail
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


def _poly(coef, x):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x + c
    return acc


def std_normal_pdf(x: float) -> float:
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def std_normal_cdf(x: float) -> float:
    """Phi(x); saturates to 0 or 1 in the far tails."""
    return 0.5 * math.erfc(-x / _SQRT2)


def _lower_tail_quantile(q: float) -> float:
    """Phi^{-1}(q) for 0 < q <= 0.5 (result <= 0), polished once."""
    d = q - 0.5
    if abs(d) <= 0.425:
        r = 0.180625 - d * d
        x = d * _poly(_A, r) / _poly(_B, r)
    else:
        r = math.sqrt(-math.log(q))
        if r <= 5.0:
            r -= 1.6
            x = -_poly(_C, r) / _poly(_D, r)
        else:
            r -= 5.0
            x = -_poly(_E, r) / _poly(_F, r)
    dens = std_normal_pdf(x)
    if dens > 0.0:
        x -= (std_normal_cdf(x) - q) / dens
    return x


def std_normal_quantile(p: float) -> float:
    """Inverse of the standard normal cdf on the open interval (0, 1).

    Raises
    ------
    DomainError
        If ``p`` is not strictly between 0 and 1.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs 0 < p < 1, got {p!r}")
    if p <= 0.5:
        return _lower_tail_quantile(p)
    # 1 - p is exact for p >= 0.5
    return -_lower_tail_quantile(1.0 - p)


def upper_quantile(alpha: float) -> float:
    """Phi^{-1}(1 - alpha), computed from ``alpha`` directly."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"tail probability must lie in (0, 1), got {alpha!r}")
    if alpha <= 0.5:
        return -_lower_tail_quantile(alpha)
    return _lower_tail_quantile(1.0 - alpha)


def _check_alpha(alpha: float) -> None:
    if not (ENDPOINT_TOL < alpha < ALPHA_MAX - ENDPOINT_TOL):
        raise DomainError(
            f"alpha must lie in (0, 1/sqrt(2*pi)) at least {ENDPOINT_TOL:g} "
            f"from either end, got {alpha!r}"
        )


def quantile_upper_bound(alpha: float, beta: float = DEFAULT_BETA) -> float:
    """beta * sqrt(-log(-x log x)) with x = 2*pi*alpha**2.

    Strictly exceeds ``upper_quantile(alpha)`` whenever ``beta >= 1.02``.
    """
    _check_alpha(alpha)
    if beta < DEFAULT_BETA:
        raise DomainError(f"beta must be >= {DEFAULT_BETA}, got {beta!r}")
    return _upper_formula(alpha, beta)


def _upper_formula(alpha, beta):
    x = 2.0 * math.pi * alpha * alpha
    return beta * math.sqrt(-math.log(-x * math.log(x)))


def quantile_lower_bound(alpha: float) -> float:
    """sqrt(-log(x (1 - log x))) with x = 2*pi*alpha**2."""
    _check_alpha(alpha)
    x = 2.0 * math.pi * alpha * alpha
    return math.sqrt(-math.log(x * (1.0 - math.log(x))))


@dataclass(frozen=True)
class QuantileBounds:
    alpha: float
    beta: float
    lower: float
    exact: float
    upper: float

    @property
    def sandwich_ok(self) -> bool:
        return self.lower < self.exact < self.upper


def quantile_bounds(alpha: float, beta: float = DEFAULT_BETA) -> QuantileBounds:
    return QuantileBounds(
        alpha=alpha,
        beta=beta,
        lower=quantile_lower_bound(alpha),
        exact=upper_quantile(alpha),
        upper=quantile_upper_bound(alpha, beta),
    )


def bound_sweep(
    alpha_min: float, alpha_max: float, points: int, beta: float = DEFAULT_BETA
) -> list[QuantileBounds]:
    """Evaluate the sandwich on a log-spaced grid of ``points`` alphas."""
    if points < 1:
        raise DomainError(f"points must be >= 1, got {points}")
    if not 0.0 < alpha_min <= alpha_max:
        raise DomainError(f"need 0 < alpha_min <= alpha_max, got {alpha_min}, {alpha_max}")
    grid = np.logspace(math.log10(alpha_min), math.log10(alpha_max), points)
    return [quantile_bounds(float(a), beta) for a in grid]


def unscaled_upper_violations(alphas) -> np.ndarray:
    """Alphas where the beta = 1 version of the upper bound fails to exceed the quantile."""
    alphas = np.asarray(alphas, dtype=float)
    bad = [a for a in alphas if _upper_formula(a, 1.0) <= upper_quantile(a)]
    return np.asarray(bad)
