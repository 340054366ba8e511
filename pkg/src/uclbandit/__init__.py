"""Bayesian upper credible limit bandit algorithms and experiment harness."""

from .environment import Environment, NoiseModel, landscape
from .inference import DiagonalBelief, FullBelief, PriorSpec, make_belief
from .kernels import BACKEND
from .normal_quantile import DomainError, std_normal_quantile, upper_quantile
from .policies import UclConfig

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DiagonalBelief",
    "DomainError",
    "Environment",
    "FullBelief",
    "NoiseModel",
    "PriorSpec",
    "UclConfig",
    "landscape",
    "make_belief",
    "std_normal_quantile",
    "upper_quantile",
]
