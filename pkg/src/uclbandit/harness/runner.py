"""Seeded replicate execution and Monte Carlo aggregation.

Replicate ``r`` draws from ``SeedSequence(base_seed, spawn_key=(r,))``, split
into a noise stream and a choice stream.  Both are consumed up front (one
noise value and one uniform per step), so results never depend on which code
path or how many threads ran the replicate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .. import kernels
from ..analysis.phenotype import PhenotypeResult, fit_phenotype
from ..analysis.regret import (
    RunTrace,
    cumulative_expected_regret,
    observed_regret,
    pull_counts,
    switch_counts,
    transition_cost,
)
from ..environment import Environment, NoiseModel, shortest_paths
from ..inference import make_belief
from ..normal_quantile import DomainError
from ..policies import BlockUCL, DeterministicUCL, GraphicalBlockUCL, StochasticUCL, UCB1, UclConfig
from .config import EnvSpec, ExperimentConfig

_KERNEL_CODES = {"deterministic_ucl": kernels.DETERMINISTIC, "stochastic_ucl": kernels.STOCHASTIC,
                 "ucb1": kernels.UCB1}


def replicate_streams(base_seed: int, r: int):
    """(noise_rng, choice_rng) for replicate ``r``."""
    seq = np.random.SeedSequence(base_seed, spawn_key=(r,))
    noise_seq, choice_seq = seq.spawn(2)
    return np.random.default_rng(noise_seq), np.random.default_rng(choice_seq)


def draw_inputs(noise: NoiseModel, horizon: int, base_seed: int, r: int):
    noise_rng, choice_rng = replicate_streams(base_seed, r)
    return noise.draw(noise_rng, horizon), choice_rng.random(horizon)


def make_policy(algorithm: str, belief, ucl: UclConfig, env: Environment | None = None):
    if algorithm == "deterministic_ucl":
        return DeterministicUCL(belief, ucl)
    if algorithm == "stochastic_ucl":
        return StochasticUCL(belief, ucl)
    if algorithm == "block_ucl":
        return BlockUCL(belief, ucl)
    if algorithm == "ucb1":
        return UCB1(belief)
    if algorithm == "graphical_block_ucl":
        return GraphicalBlockUCL(belief, ucl, shortest_paths(env.graph))
    raise ValueError(f"unknown algorithm {algorithm!r}")


def simulate(policy, env: Environment, noise, uniforms) -> RunTrace:
    """Run any policy object against pre-drawn noise and uniforms."""
    T = len(noise)
    arms = np.empty(T, dtype=np.int64)
    goals = np.zeros(T, dtype=bool) if isinstance(policy, GraphicalBlockUCL) else None
    means = env.means
    for t in range(1, T + 1):
        arm = policy.select(t, float(uniforms[t - 1]))
        policy.observe(arm, float(means[arm] + noise[t - 1]))
        arms[t - 1] = arm
        if goals is not None:
            goals[t - 1] = policy.last_was_goal
    return RunTrace(arms, means[arms] + noise, means, goals)


def _check_alpha(ucl: UclConfig):
    # alpha_1 = 1/K must stay below 1 for the quantile to exist
    ucl.alpha(1)


def run_replicate(config: ExperimentConfig, r: int, env: Environment | None = None,
                  use_kernels: bool = True, backend: str | None = None) -> RunTrace:
    env = env or config.environment()
    noise, uniforms = draw_inputs(env.noise, config.horizon, config.base_seed, r)
    prior = config.prior(env)
    s2 = config.agent_sigma_s2(env)
    ucl = config.ucl
    alg = config.algorithm
    if alg != "ucb1":
        _check_alpha(ucl)
    if use_kernels and prior.is_diagonal:
        args = (env.means, noise)
        common = (prior.mu0, prior.sigma0_sq, s2, ucl.K, ucl.credibility_exponent)
        if alg in _KERNEL_CODES:
            arms = kernels.run_index_policy(_KERNEL_CODES[alg], env.means, noise, uniforms, *common,
                                            temperature=ucl.temperature, backend=backend)
            return RunTrace(arms, env.means[arms] + noise, env.means)
        if alg == "block_ucl":
            arms = kernels.run_block(*args, *common, backend=backend)
            return RunTrace(arms, env.means[arms] + noise, env.means)
        if alg == "graphical_block_ucl":
            arms, goals = kernels.run_graphical(*args, *common, shortest_paths(env.graph), backend=backend)
            return RunTrace(arms, env.means[arms] + noise, env.means, goals)
    policy = make_policy(alg, make_belief(prior, s2), ucl, env)
    return simulate(policy, env, noise, uniforms)


@dataclass(frozen=True, eq=False)
class AggregateResult:
    """Per-step means and standard errors over replicates, plus per-arm counts at T."""

    t: np.ndarray
    mean_regret: np.ndarray
    stderr_regret: np.ndarray
    mean_observed: np.ndarray
    stderr_observed: np.ndarray
    mean_cost: np.ndarray | None
    stderr_cost: np.ndarray | None
    mean_pulls: np.ndarray
    mean_switches: np.ndarray
    replicates: int


def _mean_se(stack: np.ndarray):
    R = stack.shape[0]
    mean = stack.mean(axis=0)
    if R == 1:
        return mean, np.zeros_like(mean)
    return mean, stack.std(axis=0, ddof=1) / math.sqrt(R)


def _summarise(trace: RunTrace, costs):
    return (
        cumulative_expected_regret(trace),
        observed_regret(trace),
        None if costs is None else transition_cost(trace, costs),
        pull_counts(trace),
        switch_counts(trace),
    )


def run_experiment(config: ExperimentConfig, jobs: int = 1, replicate_order=None,
                   use_kernels: bool = True) -> AggregateResult:
    """Run all replicates and aggregate.

    Results are stored by replicate index before reduction, so ``jobs`` and
    ``replicate_order`` do not affect the output.
    """
    env = config.environment()
    R = config.replicates
    order = list(range(R)) if replicate_order is None else list(replicate_order)
    if sorted(order) != list(range(R)):
        raise ValueError("replicate_order must be a permutation of range(replicates)")

    def one(r):
        return r, _summarise(run_replicate(config, r, env, use_kernels), env.costs)

    slots = [None] * R
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for r, res in pool.map(one, order):
                slots[r] = res
    else:
        for r in order:
            slots[r] = one(r)[1]

    regret, observed, cost, pulls, switches = zip(*slots)
    mr, sr = _mean_se(np.stack(regret))
    mo, so = _mean_se(np.stack(observed))
    mc = sc = None
    if env.costs is not None:
        mc, sc = _mean_se(np.stack(cost))
    return AggregateResult(
        t=np.arange(1, config.horizon + 1),
        mean_regret=mr,
        stderr_regret=sr,
        mean_observed=mo,
        stderr_observed=so,
        mean_cost=mc,
        stderr_cost=sc,
        mean_pulls=np.stack(pulls).mean(axis=0),
        mean_switches=np.stack(switches).mean(axis=0),
        replicates=R,
    )


# phenotype demonstration on landscape B with the human-task noise
PHENOTYPE_HORIZON = 90


def phenotype_configs(horizon: int = PHENOTYPE_HORIZON):
    """(uncorrelated, correlated) stochastic UCL setups with constant temperature."""
    env = EnvSpec(landscape="B", shape="grid10x10", noise="uniform_integer", noise_scale=5)
    base = ExperimentConfig(horizon=horizon, algorithm="stochastic_ucl", env=env)
    uncorrelated = replace(base, mu0=30.0, sigma0_sq=1000.0, lam=0.0, ucl=UclConfig(temperature=4.0))
    correlated = replace(base, mu0=200.0, sigma0_sq=10.0, lam=4.0, ucl=UclConfig(temperature=1.0))
    return uncorrelated, correlated


@dataclass(frozen=True, eq=False)
class PhenotypeRun:
    seed: int
    setup: str
    fit: PhenotypeResult
    total_regret: float
    total_observed: float


def run_phenotype_demo(seeds: int = 100, base_seed: int = 0, horizon: int = PHENOTYPE_HORIZON):
    """Fit phenotypes to the observed regret of both setups for ``seeds`` paired seeds.

    Seed ``s`` of both setups shares the noise and choice streams.
    """
    if seeds < 1:
        raise DomainError(f"seeds must be >= 1, got {seeds}")
    out = []
    for name, cfg in zip(("uncorrelated", "correlated"), phenotype_configs(horizon)):
        cfg = replace(cfg, base_seed=base_seed)
        env = cfg.environment()
        for s in range(seeds):
            trace = run_replicate(cfg, s, env)
            obs = observed_regret(trace)
            out.append(PhenotypeRun(s, name, fit_phenotype(obs), float(cumulative_expected_regret(trace)[-1]),
                                    float(obs[-1])))
    return out
