"""Gaussian conjugate beliefs over arm means.

Two representations share one interface (``mean``, ``std``, ``update``):

* :class:`DiagonalBelief` keeps per-arm counts and empirical means and uses the
  closed-form posterior.  An uninformative prior (``sigma0_sq = inf``) is exact:
  unsampled arms report infinite variance.
* :class:`FullBelief` keeps the precision matrix, its inverse (updated by a
  rank-one Sherman-Morrison step) and the information vector ``Lambda @ mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNINFORMATIVE = math.inf


class PriorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PriorSpec:
    """N(mu0, Sigma0) with Sigma0_ij = sigma0_sq * exp(-|x_i - x_j| / lam).

    ``lam = 0`` gives ``sigma0_sq * I``.  ``sigma0_sq = UNINFORMATIVE`` is only
    allowed with ``lam = 0``.
    """

    mu0: np.ndarray
    sigma0_sq: float
    lam: float = 0.0
    positions: np.ndarray | None = None

    def __post_init__(self):
        mu0 = np.array(self.mu0, dtype=float).ravel()
        object.__setattr__(self, "mu0", mu0)
        if not self.sigma0_sq > 0:
            raise PriorError(f"sigma0_sq must be > 0, got {self.sigma0_sq}")
        if self.lam < 0:
            raise PriorError(f"correlation length must be >= 0, got {self.lam}")
        if self.lam > 0:
            if self.positions is None:
                raise PriorError("correlated prior (lam > 0) needs arm positions")
            if math.isinf(self.sigma0_sq):
                raise PriorError("uninformative prior cannot be combined with correlations")
            pos = np.array(self.positions, dtype=float)
            if pos.ndim == 1:
                pos = pos[:, None]
            if pos.shape[0] != mu0.size:
                raise PriorError(f"{pos.shape[0]} positions for {mu0.size} arms")
            object.__setattr__(self, "positions", pos)

    @property
    def n_arms(self) -> int:
        return self.mu0.size

    @property
    def is_diagonal(self) -> bool:
        return self.lam == 0

    @property
    def is_uninformative(self) -> bool:
        return math.isinf(self.sigma0_sq)

    def covariance(self) -> np.ndarray:
        if self.is_uninformative:
            raise PriorError("uninformative prior has no finite covariance")
        if self.is_diagonal:
            return self.sigma0_sq * np.eye(self.n_arms)
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        dist = np.sqrt(np.sum(diff**2, axis=-1))
        return self.sigma0_sq * np.exp(-dist / self.lam)

    def diagonalized(self) -> "PriorSpec":
        return PriorSpec(self.mu0, self.sigma0_sq)


def uniform_prior(n_arms: int, mu0: float, sigma0_sq: float = UNINFORMATIVE) -> PriorSpec:
    return PriorSpec(np.full(n_arms, float(mu0)), sigma0_sq)


def make_exponential_prior(mu0, sigma0_sq: float, lam: float, positions=None) -> PriorSpec:
    """Exponential spatial covariance prior; scalar ``mu0`` is broadcast over arms."""
    if np.ndim(mu0) == 0:
        if positions is None:
            raise PriorError("scalar mu0 needs positions to know the number of arms")
        mu0 = np.full(np.shape(positions)[0], float(mu0))
    return PriorSpec(np.asarray(mu0, dtype=float), sigma0_sq, lam, positions)


class DiagonalBelief:
    """Independent per-arm posteriors with known sampling variance."""

    def __init__(self, mu0, sigma_s2: float, sigma0_sq: float = UNINFORMATIVE):
        if not sigma_s2 > 0:
            raise PriorError(f"sampling variance must be > 0, got {sigma_s2}")
        self.mu0 = np.array(mu0, dtype=float)
        self.sigma_s2 = float(sigma_s2)
        self.sigma0_sq = float(sigma0_sq)
        self.delta2 = 0.0 if math.isinf(sigma0_sq) else sigma_s2 / sigma0_sq
        n = self.mu0.size
        self.counts = np.zeros(n, dtype=np.int64)
        self.emp_mean = np.zeros(n)
        self.mean = self.mu0.copy()
        self.var = np.full(n, self.sigma0_sq)

    @property
    def n_arms(self) -> int:
        return self.mu0.size

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(self.var)

    def update(self, arm: int, reward: float) -> "DiagonalBelief":
        n = self.counts[arm] + 1
        self.counts[arm] = n
        self.emp_mean[arm] += (reward - self.emp_mean[arm]) / n
        d = self.delta2
        self.mean[arm] = (d * self.mu0[arm] + n * self.emp_mean[arm]) / (d + n)
        self.var[arm] = self.sigma_s2 / (d + n)
        return self


class FullBelief:
    """Correlated Gaussian belief updated through the precision matrix."""

    def __init__(self, mu0, cov0, sigma_s2: float):
        if not sigma_s2 > 0:
            raise PriorError(f"sampling variance must be > 0, got {sigma_s2}")
        cov0 = np.array(cov0, dtype=float)
        try:
            chol = np.linalg.cholesky(cov0)
        except np.linalg.LinAlgError:
            raise PriorError("prior covariance is not positive definite") from None
        self.sigma_s2 = float(sigma_s2)
        self.mu0 = np.array(mu0, dtype=float)
        n = self.mu0.size
        eye = np.eye(n)
        inv_chol = np.linalg.solve(chol, eye)
        self.precision = inv_chol.T @ inv_chol
        self.cov = cov0.copy()
        self.info = self.precision @ self.mu0
        self.mean = self.mu0.copy()
        self.counts = np.zeros(n, dtype=np.int64)
        self.emp_mean = np.zeros(n)

    @property
    def n_arms(self) -> int:
        return self.mu0.size

    @property
    def var(self) -> np.ndarray:
        return np.diag(self.cov).copy()

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(np.diag(self.cov))

    def update(self, arm: int, reward: float) -> "FullBelief":
        s2 = self.sigma_s2
        self.info[arm] += reward / s2
        self.precision[arm, arm] += 1.0 / s2
        col = self.cov[:, arm].copy()
        self.cov -= np.outer(col, col) / (s2 + col[arm])
        self.cov = 0.5 * (self.cov + self.cov.T)
        self.mean = self.cov @ self.info
        n = self.counts[arm] + 1
        self.counts[arm] = n
        self.emp_mean[arm] += (reward - self.emp_mean[arm]) / n
        return self

    def inverse_error(self) -> float:
        """max |Lambda Sigma - I|; drift check between the two accumulators."""
        return float(np.max(np.abs(self.precision @ self.cov - np.eye(self.n_arms))))


def make_belief(prior: PriorSpec, sigma_s2: float):
    """Diagonal belief for ``lam == 0`` priors, full otherwise."""
    if prior.is_diagonal:
        return DiagonalBelief(prior.mu0, sigma_s2, prior.sigma0_sq)
    return FullBelief(prior.mu0, prior.covariance(), sigma_s2)


def update_diagonal(belief: DiagonalBelief, arm: int, reward: float) -> DiagonalBelief:
    return belief.update(arm, reward)


def update_full(belief: FullBelief, arm: int, reward: float) -> FullBelief:
    return belief.update(arm, reward)


def prior_quality(prior: PriorSpec, means) -> float:
    """zeta = max_i |m_i - mu0_i| / sigma0."""
    if prior.is_uninformative:
        raise PriorError("prior quality is undefined for an uninformative prior")
    m = np.asarray(getattr(means, "means", means), dtype=float)
    return float(np.max(np.abs(m - prior.mu0)) / math.sqrt(prior.sigma0_sq))
