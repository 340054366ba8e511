"""Upper credible limit decision rules and the UCB1 baseline.

Every policy object owns its belief and exposes ``select(t, u)`` and
``observe(arm, reward)``.  ``u`` is one uniform draw in [0, 1) supplied by the
runner for every step; only the stochastic rule consumes it, but passing it
unconditionally keeps random streams aligned across algorithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .normal_quantile import DomainError, upper_quantile

SQRT_2PIE = math.sqrt(2.0 * math.pi * math.e)

ALGORITHMS = ("deterministic_ucl", "stochastic_ucl", "block_ucl", "graphical_block_ucl", "ucb1")


@dataclass(frozen=True)
class UclConfig:
    """Credible-limit parameters.

    ``temperature`` is ``"cooling"`` (gap-based schedule), ``"deterministic"``
    (argmax), or a constant float >= 0.  ``credibility_exponent`` selects
    alpha_t = 1/(K t) (1) or 1/(K t^2) (2).
    """

    K: float = SQRT_2PIE
    credibility_exponent: int = 1
    temperature: str | float = "cooling"

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError(f"K must be > 0, got {self.K}")
        if self.credibility_exponent not in (1, 2):
            raise ValueError(f"credibility_exponent must be 1 or 2, got {self.credibility_exponent}")
        temp = self.temperature
        if isinstance(temp, str):
            if temp not in ("cooling", "deterministic"):
                raise ValueError(f"temperature must be 'cooling', 'deterministic' or a number, got {temp!r}")
        elif not temp >= 0:
            raise ValueError(f"constant temperature must be >= 0, got {temp}")

    def alpha(self, t: float) -> float:
        a = 1.0 / (self.K * t**self.credibility_exponent)
        if a >= 1.0:
            raise DomainError(f"alpha_t = {a} >= 1 at t = {t}; increase K")
        return a

    def z(self, t: float) -> float:
        """Phi^{-1}(1 - alpha_t)."""
        return upper_quantile(self.alpha(t))


def _ucl_from(mean, std, z):
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    with np.errstate(invalid="ignore"):
        q = mean + std * z
    return np.where(np.isinf(std), math.copysign(math.inf, z) if z != 0 else mean, q)


def ucl_values(belief, t: float, config: UclConfig) -> np.ndarray:
    """Q_i = mu_i + sigma_i Phi^{-1}(1 - alpha_t) for every arm; +inf for infinite variance."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    return _ucl_from(belief.mean, belief.std, config.z(t))


def ucl_value(belief, arm: int, t: float, config: UclConfig) -> float:
    return float(ucl_values(belief, t, config)[arm])


def choose_deterministic(belief, t: float, config: UclConfig) -> int:
    # np.argmax returns the first maximiser, including among +inf ties
    return int(np.argmax(ucl_values(belief, t, config)))


def softmax_weights(q, t: int, temperature: str | float) -> list[float]:
    """Unnormalised Boltzmann weights with the infinite-value and zero-gap conventions.

    * any +inf values: equal weight on those arms only
    * cooling at t = 1 (log t = 0): infinite temperature, equal weights
    * zero temperature (constant 0, deterministic, or a zero minimum gap
      under cooling): all weight on the first maximiser
    """
    q = [float(v) for v in q]
    n = len(q)
    if any(v == math.inf for v in q):
        return [1.0 if v == math.inf else 0.0 for v in q]
    if n == 1:
        return [1.0]
    if temperature == "deterministic":
        temp = 0.0
    elif temperature == "cooling":
        if t <= 1:
            return [1.0] * n
        s = sorted(q)
        gap = min(s[i + 1] - s[i] for i in range(n - 1))
        temp = gap / (2.0 * math.log(t))
    else:
        temp = float(temperature)
    qmax = max(q)
    if temp == 0.0:
        first = q.index(qmax)
        return [1.0 if i == first else 0.0 for i in range(n)]
    return [math.exp((v - qmax) / temp) for v in q]


def boltzmann_probabilities(q, t: int, temperature: str | float) -> np.ndarray:
    w = np.array(softmax_weights(q, t, temperature))
    return w / w.sum()


def sample_weighted(weights, u: float) -> int:
    """First index whose running weight sum exceeds ``u * total``."""
    total = 0.0
    for w in weights:
        total += w
    target = u * total
    acc = 0.0
    last = 0
    for i, w in enumerate(weights):
        if w > 0.0:
            last = i
            acc += w
            if acc > target:
                return i
    return last


def choose_stochastic(belief, t: int, config: UclConfig, rng: np.random.Generator) -> int:
    return _stochastic_pick(belief, t, config, rng.random())


def _stochastic_pick(belief, t, config, u):
    q = ucl_values(belief, t, config)
    return sample_weighted(softmax_weights(q, t, config.temperature), u)


def choose_ucb1(belief, t: int) -> int:
    """UCB1 index m_bar + sqrt(2 log t / n); plays arm t-1 during the first sweep."""
    n = belief.n_arms
    if t <= n:
        return t - 1
    bonus = np.sqrt(2.0 * math.log(t) / belief.counts)
    return int(np.argmax(belief.emp_mean + bonus))


@dataclass(frozen=True)
class BlockSchedule:
    frame: int
    block: int
    start: int
    length: int


def block_schedule(t: int) -> BlockSchedule:
    """Frame ``k`` spans 2^(k-1) .. 2^k - 1 and is cut into blocks of length ``k``
    plus one shorter remainder block."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    k = int(t).bit_length()
    frame_start = 1 << (k - 1)
    r = (t - frame_start) // k + 1
    start = frame_start + (r - 1) * k
    return BlockSchedule(k, r, start, min(k, (1 << k) - start))


def blocks_in_frame(k: int) -> int:
    return -(-(1 << (k - 1)) // k)


class DeterministicUCL:
    def __init__(self, belief, config: UclConfig = UclConfig()):
        self.belief = belief
        self.config = config

    def select(self, t: int, u: float = 0.0) -> int:
        return choose_deterministic(self.belief, t, self.config)

    def observe(self, arm: int, reward: float) -> None:
        self.belief.update(arm, reward)


class StochasticUCL(DeterministicUCL):
    def select(self, t: int, u: float = 0.0) -> int:
        return _stochastic_pick(self.belief, t, self.config, u)


class UCB1:
    def __init__(self, belief):
        self.belief = belief

    def select(self, t: int, u: float = 0.0) -> int:
        return choose_ucb1(self.belief, t)

    def observe(self, arm: int, reward: float) -> None:
        self.belief.update(arm, reward)


class BlockUCL:
    """Commits to the argmax-UCL arm (alpha from the block start time) for a whole block."""

    def __init__(self, belief, config: UclConfig = UclConfig()):
        self.belief = belief
        self.config = config
        self.arm = -1
        self.remaining = 0

    def select(self, t: int, u: float = 0.0) -> int:
        if self.remaining == 0:
            sched = block_schedule(t)
            self.arm = choose_deterministic(self.belief, sched.start, self.config)
            self.remaining = sched.length
        self.remaining -= 1
        return self.arm

    def observe(self, arm: int, reward: float) -> None:
        self.belief.update(arm, reward)


def plan_goal_block(belief, tau: int, config: UclConfig, paths, current_arm: int, block_length: int):
    """Goal arm plus the steps that reach and then hold it.

    Returns ``(goal, steps)`` where ``steps`` lists the transient nodes of the
    shortest path from ``current_arm`` followed by ``block_length`` copies of
    the goal.
    """
    goal = choose_deterministic(belief, tau, config)
    steps = list(paths.intermediaries(current_arm, goal)) + [goal] * block_length
    return goal, steps


class GraphicalBlockUCL:
    """Block UCL on a graph: walk the shortest path to each goal, then hold it.

    Frames and blocks are counted in goal selections only; the credible level
    uses the wall-clock time at which the goal is chosen.
    """

    def __init__(self, belief, config: UclConfig, paths, start_arm: int = 0):
        self.belief = belief
        self.config = config
        self.paths = paths
        self.current = start_arm
        self.goals_done = 0
        self.pending: list[tuple[int, bool]] = []
        self.last_was_goal = False

    def select(self, t: int, u: float = 0.0) -> int:
        if not self.pending:
            sched = block_schedule(self.goals_done + 1)
            goal, _ = plan_goal_block(self.belief, t, self.config, self.paths, self.current, 0)
            hops = self.paths.intermediaries(self.current, goal)
            self.pending = [(v, False) for v in hops] + [(goal, True)] * sched.length
            self.pending.reverse()
        arm, is_goal = self.pending.pop()
        if is_goal:
            self.goals_done += 1
        self.last_was_goal = is_goal
        self.current = arm
        return arm

    def observe(self, arm: int, reward: float) -> None:
        self.belief.update(arm, reward)
