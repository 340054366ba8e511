"""Regret phenotypes: fit linear, power and logarithmic growth models.

    linear  R(t) = a + b t
    power   R(t) = a t^b
    log     R(t) = a + b log t

The series is classified by the smallest sum of squared residuals.  Exact ties
(up to rounding) go to the earliest model in the order above, so noise-free
``R = c t`` is linear rather than power with ``b = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MODELS = ("linear", "power", "log")
B_RANGE = (0.05, 2.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PhenotypeFit:
    model: str
    a: float
    b: float
    ssr: float

    def predict(self, t):
        t = np.asarray(t, dtype=float)
        if self.model == "linear":
            return self.a + self.b * t
        if self.model == "power":
            return self.a * t**self.b
        return self.a + self.b * np.log(t)


@dataclass(frozen=True)
class PhenotypeResult:
    fits: dict
    selected: str

    @property
    def best(self) -> PhenotypeFit:
        return self.fits[self.selected]


def _ols(x, y):
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    a, b = float(coef[0]), float(coef[1])
    r = y - (a + b * x)
    return a, b, float(r @ r)


def _power_ssr(b, t, y):
    tb = t**b
    a = float(y @ tb) / float(tb @ tb)
    r = y - a * tb
    return float(r @ r), a


def _golden(f, lo, hi, tol=1e-10, max_iter=200):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return c if fc <= fd else d


def _fit_power(t, y, b_range=B_RANGE):
    lo, hi = b_range
    b = _golden(lambda v: _power_ssr(v, t, y)[0], lo, hi)
    ssr, a = _power_ssr(b, t, y)
    # Gauss-Newton on (a, b) sharpens the bracketed optimum to machine precision
    logt = np.log(t)
    for _ in range(20):
        tb = t**b
        r = y - a * tb
        J = np.column_stack([tb, a * tb * logt])
        step, *_ = np.linalg.lstsq(J, r, rcond=None)
        a2, b2 = a + step[0], min(max(b + step[1], lo), hi)
        r2 = y - a2 * t**b2
        ssr2 = float(r2 @ r2)
        if not ssr2 < ssr:
            break
        a, b, ssr = float(a2), float(b2), ssr2
    return a, b, ssr


def fit_phenotype(series, t=None, b_range=B_RANGE) -> PhenotypeResult:
    """Fit all three models to ``series`` observed at ``t`` (default 1..len)."""
    y = np.asarray(series, dtype=float).ravel()
    if y.size < 3:
        raise ValueError(f"need at least 3 points, got {y.size}")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    t = np.arange(1, y.size + 1, dtype=float) if t is None else np.asarray(t, dtype=float)
    if t.shape != y.shape or np.any(t < 1):
        raise ValueError("t must match the series and start at 1 or later")
    if not np.any(y):
        zero = {m: PhenotypeFit(m, 0.0, 0.0, 0.0) for m in MODELS}
        return PhenotypeResult(zero, "linear")
    fits = {
        "linear": PhenotypeFit("linear", *_ols(t, y)),
        "power": PhenotypeFit("power", *_fit_power(t, y, b_range)),
        "log": PhenotypeFit("log", *_ols(np.log(t), y)),
    }
    best = min(f.ssr for f in fits.values())
    tol = 1e-12 * max(1.0, float(y @ y))
    selected = next(m for m in MODELS if fits[m].ssr <= best + tol)
    return PhenotypeResult(fits, selected)


def classify(series) -> str:
    return fit_phenotype(series).selected
