"""Regret and transition-cost accounting over a completed run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class RunTrace:
    """Arms and rewards of one run; step ``t`` is stored at index ``t - 1``.

    ``means`` are the true arm means of the environment that produced the run.
    ``is_goal`` is only set for graphical runs.
    """

    arms: np.ndarray
    rewards: np.ndarray
    means: np.ndarray
    is_goal: np.ndarray | None = None

    def __post_init__(self):
        arms = np.asarray(self.arms, dtype=np.int64)
        rewards = np.asarray(self.rewards, dtype=float)
        means = np.asarray(getattr(self.means, "means", self.means), dtype=float)
        if arms.shape != rewards.shape or arms.ndim != 1:
            raise ValueError(f"arms {arms.shape} and rewards {rewards.shape} must be equal-length 1-D")
        if arms.size and (arms.min() < 0 or arms.max() >= means.size):
            raise ValueError("arm index out of range")
        object.__setattr__(self, "arms", arms)
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "means", means)

    @property
    def horizon(self) -> int:
        return self.arms.size

    @property
    def t(self) -> np.ndarray:
        return np.arange(1, self.horizon + 1)

    @property
    def transitions(self) -> np.ndarray:
        """True where the arm differs from the previous step's (first step False)."""
        out = np.zeros(self.horizon, dtype=bool)
        out[1:] = self.arms[1:] != self.arms[:-1]
        return out

    @property
    def gaps(self) -> np.ndarray:
        return self.means.max() - self.means


def cumulative_expected_regret(trace: RunTrace) -> np.ndarray:
    return np.cumsum(trace.gaps[trace.arms])


def observed_regret(trace: RunTrace) -> np.ndarray:
    """m_best * t minus the realized cumulative reward."""
    return trace.means.max() * trace.t - np.cumsum(trace.rewards)


def transition_cost(trace: RunTrace, costs) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    step = np.zeros(trace.horizon)
    step[1:] = c[trace.arms[:-1], trace.arms[1:]]
    return np.cumsum(step)


def pull_counts(trace: RunTrace, T: int | None = None) -> np.ndarray:
    """n_i^T for every arm (whole trace by default)."""
    arms = trace.arms if T is None else trace.arms[:T]
    return np.bincount(arms, minlength=trace.means.size)


def switch_counts(trace: RunTrace, T: int | None = None) -> np.ndarray:
    """s_i^T: number of transitions into arm i from a different arm."""
    arms = trace.arms if T is None else trace.arms[:T]
    into = arms[1:][arms[1:] != arms[:-1]]
    return np.bincount(into, minlength=trace.means.size)


def regret_from_counts(trace: RunTrace, T: int | None = None) -> float:
    """sum_i gap_i * n_i^T; equals the expected regret at T."""
    return float(trace.gaps @ pull_counts(trace, T))
