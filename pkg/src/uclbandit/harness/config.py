"""Experiment configuration files.

Grammar: one ``section.key = value`` assignment per line; ``#`` starts a
comment; blank lines are ignored; keys may appear once.  Relative file paths
resolve against the config file's directory.  Example::

    experiment.algorithm   = block_ucl
    experiment.horizon     = 1000
    experiment.replicates  = 250
    experiment.seed        = 7
    env.landscape          = B
    env.shape              = grid10x10
    env.noise              = gaussian
    env.noise_scale        = 1
    env.costs              = euclidean
    prior.mu0              = 200
    prior.sigma0_sq        = 1e6
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..environment import (
    EnvError,
    Environment,
    NoiseModel,
    complete_graph,
    distance_costs,
    grid_graph,
    landscape,
    line_graph,
    read_edge_list,
    read_means,
)
from ..inference import PriorError, PriorSpec
from ..normal_quantile import DEFAULT_BETA
from ..policies import ALGORITHMS, SQRT_2PIE, UclConfig


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


# key -> (parser, default); None default means required or absent
_SCHEMA = {
    "experiment.algorithm": (str, "deterministic_ucl"),
    "experiment.horizon": (int, None),
    "experiment.replicates": (int, 1),
    "experiment.seed": (int, 0),
    "experiment.output": (str, None),
    "env.landscape": (str, None),
    "env.shape": (str, "grid10x10"),
    "env.means": (str, None),
    "env.means_file": (str, None),
    "env.noise": (str, "gaussian"),
    "env.noise_scale": (float, 1.0),
    "env.costs": (str, "none"),
    "env.graph": (str, "none"),
    "env.graph_file": (str, None),
    "prior.mu0": (float, 0.0),
    "prior.sigma0_sq": (float, math.inf),
    "prior.lambda": (float, 0.0),
    "ucl.K": (float, SQRT_2PIE),
    "ucl.beta": (float, DEFAULT_BETA),
    "ucl.credibility_exponent": (int, 1),
    "ucl.temperature": (str, "cooling"),
    "ucl.sigma_s2": (float, None),
}


def _parse_float(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "uninformative"):
        return math.inf
    return float(t)


@dataclass(frozen=True)
class EnvSpec:
    landscape: str | None = None
    shape: str = "grid10x10"
    means: tuple | None = None
    noise: str = "gaussian"
    noise_scale: float = 1.0
    costs: str = "none"
    graph: str = "none"
    graph_file: str | None = None

    def build(self) -> Environment:
        noise = NoiseModel(self.noise, self.noise_scale)
        if self.landscape is not None:
            env = landscape(self.landscape, self.shape, noise)
            positions = env.positions
            means = env.means
        else:
            means = np.array(self.means, dtype=float)
            positions = np.arange(1, means.size + 1, dtype=float)[:, None]
        costs = None if self.costs == "none" else distance_costs(positions, self.costs)
        graph = self._graph(means.size)
        return Environment(means=means, noise=noise, positions=positions, costs=costs, graph=graph)

    def _graph(self, n):
        if self.graph_file is not None:
            return read_edge_list(self.graph_file, n)
        if self.graph == "none":
            return None
        if self.graph == "line":
            return line_graph(n)
        if self.graph == "complete":
            return complete_graph(n)
        if self.graph == "grid":
            side = math.isqrt(n)
            if side * side != n:
                raise EnvError(f"grid graph needs a square number of arms, got {n}")
            return grid_graph(side, side)
        raise EnvError(f"unknown graph {self.graph!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    horizon: int
    algorithm: str = "deterministic_ucl"
    replicates: int = 1
    base_seed: int = 0
    env: EnvSpec = field(default_factory=EnvSpec)
    mu0: float = 0.0
    sigma0_sq: float = math.inf
    lam: float = 0.0
    ucl: UclConfig = field(default_factory=UclConfig)
    beta: float = DEFAULT_BETA
    sigma_s2: float | None = None
    output: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"experiment.algorithm: expected one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}")
        if self.horizon < 1:
            raise ConfigError(f"experiment.horizon: must be >= 1, got {self.horizon}")
        if self.replicates < 1:
            raise ConfigError(f"experiment.replicates: must be >= 1, got {self.replicates}")
        if self.base_seed < 0:
            raise ConfigError(f"experiment.seed: must be >= 0, got {self.base_seed}")
        if self.beta < DEFAULT_BETA:
            raise ConfigError(f"ucl.beta: must be >= {DEFAULT_BETA}, got {self.beta}")
        if self.sigma_s2 is not None and not self.sigma_s2 > 0:
            raise ConfigError(f"ucl.sigma_s2: must be > 0, got {self.sigma_s2}")
        if self.algorithm == "graphical_block_ucl" and self.env.graph == "none" and self.env.graph_file is None:
            raise ConfigError("env.graph: graphical_block_ucl needs a graph")
        if self.lam > 0 and self.algorithm in ("block_ucl", "graphical_block_ucl", "ucb1"):
            raise ConfigError(f"prior.lambda: correlated priors are not supported for {self.algorithm}")

    def environment(self) -> Environment:
        try:
            return self.env.build()
        except EnvError as exc:
            raise ConfigError(f"env: {exc}") from None

    def prior(self, env: Environment) -> PriorSpec:
        try:
            return PriorSpec(np.full(env.n_arms, self.mu0), self.sigma0_sq, self.lam,
                             env.positions if self.lam > 0 else None)
        except PriorError as exc:
            raise ConfigError(f"prior: {exc}") from None

    def agent_sigma_s2(self, env: Environment) -> float:
        """Sampling variance assumed by the agent; defaults to the true noise variance."""
        return env.noise.variance if self.sigma_s2 is None else self.sigma_s2

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def parse_config_text(text: str, base_dir: Path | str = ".") -> ExperimentConfig:
    base_dir = Path(base_dir)
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value

    vals = {}
    for key, (kind, default) in _SCHEMA.items():
        if key not in raw:
            vals[key] = default
            continue
        text_val = raw[key]
        try:
            vals[key] = _parse_float(text_val) if kind is float else kind(text_val)
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {text_val!r} as {kind.__name__}") from None

    if vals["experiment.horizon"] is None:
        raise ConfigError("experiment.horizon: required")

    sources = [k for k in ("env.landscape", "env.means", "env.means_file") if vals[k] is not None]
    if len(sources) != 1:
        raise ConfigError("env: give exactly one of env.landscape, env.means, env.means_file")
    means = None
    if vals["env.means"] is not None:
        try:
            means = tuple(float(v) for v in vals["env.means"].replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"env.means: not a list of numbers: {vals['env.means']!r}") from None
        if not means:
            raise ConfigError("env.means: empty")
    elif vals["env.means_file"] is not None:
        path = base_dir / vals["env.means_file"]
        if not path.is_file():
            raise ConfigError(f"env.means_file: no such file {str(path)!r}")
        try:
            means = tuple(read_means(path))
        except EnvError as exc:
            raise ConfigError(f"env.means_file: {exc}") from None
    graph_file = None
    if vals["env.graph_file"] is not None:
        graph_file = str(base_dir / vals["env.graph_file"])
        if not Path(graph_file).is_file():
            raise ConfigError(f"env.graph_file: no such file {graph_file!r}")
    if vals["env.costs"] not in ("none", "euclidean", "manhattan"):
        raise ConfigError(f"env.costs: expected none, euclidean or manhattan, got {vals['env.costs']!r}")
    land = vals["env.landscape"]
    if land is not None and land.upper() not in ("A", "B"):
        raise ConfigError(f"env.landscape: expected A or B, got {land!r}")
    if vals["env.shape"] not in ("grid10x10", "profile10"):
        raise ConfigError(f"env.shape: expected grid10x10 or profile10, got {vals['env.shape']!r}")

    try:
        env = EnvSpec(
            landscape=land,
            shape=vals["env.shape"],
            means=means,
            noise=vals["env.noise"],
            noise_scale=vals["env.noise_scale"],
            costs=vals["env.costs"],
            graph=vals["env.graph"],
            graph_file=graph_file,
        )
        NoiseModel(env.noise, env.noise_scale)
    except EnvError as exc:
        raise ConfigError(f"env.noise: {exc}") from None

    temp = vals["ucl.temperature"]
    if temp not in ("cooling", "deterministic"):
        try:
            temp = float(temp)
        except ValueError:
            raise ConfigError(f"ucl.temperature: expected cooling, deterministic or a number, got {temp!r}") from None
    try:
        ucl = UclConfig(vals["ucl.K"], vals["ucl.credibility_exponent"], temp)
    except ValueError as exc:
        raise ConfigError(f"ucl: {exc}") from None
    if not vals["prior.sigma0_sq"] > 0:
        raise ConfigError(f"prior.sigma0_sq: must be > 0, got {vals['prior.sigma0_sq']}")
    if vals["prior.lambda"] < 0:
        raise ConfigError(f"prior.lambda: must be >= 0, got {vals['prior.lambda']}")
    if vals["prior.lambda"] > 0 and math.isinf(vals["prior.sigma0_sq"]):
        raise ConfigError("prior.lambda: a correlated prior needs a finite prior.sigma0_sq")

    return ExperimentConfig(
        horizon=vals["experiment.horizon"],
        algorithm=vals["experiment.algorithm"],
        replicates=vals["experiment.replicates"],
        base_seed=vals["experiment.seed"],
        env=env,
        mu0=vals["prior.mu0"],
        sigma0_sq=vals["prior.sigma0_sq"],
        lam=vals["prior.lambda"],
        ucl=ucl,
        beta=vals["ucl.beta"],
        sigma_s2=vals["ucl.sigma_s2"],
        output=vals["experiment.output"],
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {str(path)!r}")
    return parse_config_text(path.read_text(), path.parent)
