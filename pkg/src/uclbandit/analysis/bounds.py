"""Closed-form regret, pull-count, switching and cost bounds.

Every function takes the arm means (or an :class:`Environment`), a horizon
``T`` (scalar or array), and the sampling variance.  Arms with zero gap are
dropped from per-arm output; ``arms`` records which indices remain.  Bounds
carrying ``log log T`` need ``T > 1``; curves are normally only reported for
``T >= 3`` where that term is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..normal_quantile import DEFAULT_BETA, DomainError
from ..policies import SQRT_2PIE

PI2_6 = math.pi**2 / 6.0
LOG2 = math.log(2.0)
LOGLOG2 = math.log(LOG2)


@dataclass(frozen=True, eq=False)
class BoundCurve:
    """Bound values on a horizon grid.

    ``per_arm`` has shape ``(len(arms), len(t))`` and covers suboptimal arms
    only; ``total`` is the aggregate over arms (regret or cost).
    """

    name: str
    t: np.ndarray
    arms: np.ndarray
    per_arm: np.ndarray
    total: np.ndarray
    constants: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class BlockBounds:
    pulls: BoundCurve
    switches: BoundCurve
    regret: np.ndarray
    cost: np.ndarray | None


def _resolve(env_or_means, sigma_s2):
    means = np.asarray(getattr(env_or_means, "means", env_or_means), dtype=float)
    if sigma_s2 is None:
        noise = getattr(env_or_means, "noise", None)
        if noise is None:
            raise ValueError("sigma_s2 is required when passing bare means")
        sigma_s2 = noise.variance
    if not sigma_s2 > 0:
        raise DomainError(f"sigma_s2 must be > 0, got {sigma_s2}")
    gaps = means.max() - means
    arms = np.flatnonzero(gaps > 0)
    return means, gaps, arms, float(sigma_s2)


def _horizon(T, minimum=1.0):
    t = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(t <= minimum):
        raise DomainError(f"horizon must exceed {minimum:g}, got min {t.min():g}")
    return t


def _check(beta, K):
    if beta < DEFAULT_BETA:
        raise DomainError(f"beta must be >= {DEFAULT_BETA}, got {beta}")
    if not K > 0:
        raise DomainError(f"K must be > 0, got {K}")


def kl_gaussian(delta, sigma_s2: float):
    """D(p_i || p_best) for equal-variance Gaussians: delta^2 / (2 sigma_s^2)."""
    return np.asarray(delta, dtype=float) ** 2 / (2.0 * sigma_s2)


def gammas(delta, sigma_s2: float, beta: float = DEFAULT_BETA, K: float = SQRT_2PIE):
    """(gamma_1, gamma_2, gamma_3) for gap(s) ``delta``."""
    c = 4.0 * beta**2 * sigma_s2 / np.asarray(delta, dtype=float) ** 2
    g1 = 2.0 * c + 1.0 / LOG2 + 2.0 / K
    g2 = c * (1.0 - LOG2) + 2.0 + 8.0 / K + math.log(4.0) / K
    g3 = g1 * LOG2 * (2.0 - LOGLOG2) - (c * LOGLOG2 - g2) * (1.0 + PI2_6)
    return g1, g2, g3


def bound_lai_robbins(env, T, sigma_s2: float | None = None) -> BoundCurve:
    """Asymptotic lower bound log T / D(p_i || p_best) = (2 sigma_s^2 / gap^2) log T.

    The o(1) correction is dropped, so this is only the leading term.
    """
    _, gaps, arms, s2 = _resolve(env, sigma_s2)
    t = _horizon(T)
    d = gaps[arms]
    per_arm = np.log(t)[None, :] / kl_gaussian(d, s2)[:, None]
    return BoundCurve("lai_robbins", t, arms, per_arm, d @ per_arm,
                      {"sigma_s2": s2, "kl": kl_gaussian(d, s2)})


def bound_theorem2(env, T, beta: float = DEFAULT_BETA, K: float = SQRT_2PIE,
                   sigma_s2: float | None = None) -> BoundCurve:
    """Deterministic UCL: per-arm expected pulls and total expected regret."""
    _check(beta, K)
    _, gaps, arms, s2 = _resolve(env, sigma_s2)
    t = _horizon(T)
    d = gaps[arms][:, None]
    c = 4.0 * beta**2 * s2 / d**2
    lt = np.log(t)[None, :]
    per_arm = (2.0 * c + 2.0 / K) * lt + c * (1.0 - LOG2 - np.log(lt)) + 1.0 + 2.0 / K
    return BoundCurve("theorem2", t, arms, per_arm, gaps[arms] @ per_arm,
                      {"beta": beta, "K": K, "sigma_s2": s2})


def bound_theorem3(env, T, beta: float = DEFAULT_BETA, K: float = SQRT_2PIE,
                   sigma_s2: float | None = None) -> BoundCurve:
    """Stochastic UCL with the cooling schedule: the deterministic bound plus pi^2/6 per arm."""
    b2 = bound_theorem2(env, T, beta, K, sigma_s2)
    per_arm = b2.per_arm + PI2_6
    d = np.asarray(getattr(env, "means", env), dtype=float)
    gaps = d.max() - d
    return BoundCurve("theorem3", b2.t, b2.arms, per_arm, gaps[b2.arms] @ per_arm, b2.constants)


def _block_terms(gaps, arms, s2, t, beta, K):
    d = gaps[arms]
    g1, g2, g3 = gammas(d, s2, beta, K)
    c = (4.0 * beta**2 * s2 / d**2)[:, None]
    lt = np.log(t)[None, :]
    llt = np.log(lt)
    pulls = g1[:, None] * lt - c * llt + g2[:, None]
    switches = (g1 * LOG2)[:, None] * llt + g3[:, None]
    return d, (g1, g2, g3), pulls, switches


def bound_theorem5(env, T, costs=None, beta: float = DEFAULT_BETA, K: float = SQRT_2PIE,
                   sigma_s2: float | None = None) -> BlockBounds:
    """Block UCL: pulls, switches, regret total and (if costs given) cost total.

    With several optimal arms the cost term uses the largest expected row
    maximum among them.
    """
    _check(beta, K)
    means, gaps, arms, s2 = _resolve(env, sigma_s2)
    t = _horizon(T)
    d, (g1, g2, g3), pulls, switches = _block_terms(gaps, arms, s2, t, beta, K)
    consts = {"beta": beta, "K": K, "sigma_s2": s2, "gamma1": g1, "gamma2": g2, "gamma3": g3}
    regret = d @ pulls
    cost = None
    if costs is None:
        costs = getattr(env, "costs", None)
    if costs is not None:
        cmax = np.asarray(costs, dtype=float).max(axis=1)
        c_best = float(cmax[gaps == 0].max())
        cost = (cmax[arms] + c_best) @ switches + c_best
        consts["c_max"] = cmax
        consts["c_best"] = c_best
    pulls_c = BoundCurve("theorem5_pulls", t, arms, pulls, regret, consts)
    sw_c = BoundCurve("theorem5_switches", t, arms, switches, switches.sum(axis=0), consts)
    return BlockBounds(pulls_c, sw_c, regret, cost)


def bound_theorem6(env, T, beta: float = DEFAULT_BETA, K: float = SQRT_2PIE,
                   sigma_s2: float | None = None) -> BoundCurve:
    """Graphical block UCL: per-arm expected pulls and total expected regret."""
    _check(beta, K)
    _, gaps, arms, s2 = _resolve(env, sigma_s2)
    t = _horizon(T)
    d, (g1, g2, g3), pulls, switches = _block_terms(gaps, arms, s2, t, beta, K)
    # shared traversal term: every suboptimal arm's switch bound, doubled
    travel = 2.0 * switches.sum(axis=0) + 1.0
    per_arm = pulls + travel[None, :]
    return BoundCurve("theorem6", t, arms, per_arm, d @ per_arm,
                      {"beta": beta, "K": K, "sigma_s2": s2, "gamma1": g1, "gamma2": g2, "gamma3": g3})
