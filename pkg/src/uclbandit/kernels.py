"""Backend selection for the simulation kernels.

The compiled extension is used when importable; otherwise, or when
``UCLBANDIT_PURE_PYTHON`` is set to a non-empty value, the pure-Python twin is
used.  Both produce identical arm sequences for identical inputs.
"""

import os

import numpy as np

from . import _kernels_py

DETERMINISTIC, STOCHASTIC, UCB1 = 0, 1, 2
COOLING, CONSTANT, ARGMAX = 0, 1, 2


def _load(pure: bool):
    if pure:
        return _kernels_py, "python"
    try:
        from . import _ckernels
    except ImportError:
        return _kernels_py, "python"
    return _ckernels, "cython"


_impl, BACKEND = _load(bool(os.environ.get("UCLBANDIT_PURE_PYTHON")))


def get_backend(name: str | None = None):
    """Kernel module by name (``"cython"`` or ``"python"``); default is the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return names
    return ["cython"] + names


def temperature_code(temperature) -> tuple[int, float]:
    if temperature == "cooling":
        return COOLING, 0.0
    if temperature == "deterministic":
        return ARGMAX, 0.0
    return CONSTANT, float(temperature)


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def run_index_policy(policy, means, noise, uniforms, mu0, sigma0_sq, sigma_s2, K, exponent,
                     temperature="cooling", backend=None):
    """Arm sequence (int64, length ``len(noise)``) for an index policy."""
    impl = get_backend(backend)
    kind, value = temperature_code(temperature)
    arms = np.empty(len(noise), dtype=np.int64)
    impl.run_index_policy(int(policy), _f64(means), _f64(noise), _f64(uniforms), _f64(mu0),
                          float(sigma0_sq), float(sigma_s2), float(K), int(exponent),
                          kind, value, arms)
    return arms


def run_block(means, noise, mu0, sigma0_sq, sigma_s2, K, exponent, backend=None):
    impl = get_backend(backend)
    arms = np.empty(len(noise), dtype=np.int64)
    impl.run_block(_f64(means), _f64(noise), _f64(mu0), float(sigma0_sq), float(sigma_s2),
                   float(K), int(exponent), arms)
    return arms


def run_graphical(means, noise, mu0, sigma0_sq, sigma_s2, K, exponent, paths, start_arm=0,
                  backend=None):
    """Returns ``(arms, is_goal)``; ``paths`` is a ShortestPathTable."""
    impl = get_backend(backend)
    offsets, nodes = paths.flat()
    arms = np.empty(len(noise), dtype=np.int64)
    goal = np.empty(len(noise), dtype=np.int8)
    impl.run_graphical(_f64(means), _f64(noise), _f64(mu0), float(sigma0_sq), float(sigma_s2),
                       float(K), int(exponent), np.ascontiguousarray(offsets, dtype=np.int64),
                       np.ascontiguousarray(nodes, dtype=np.int64), int(start_arm), arms, goal)
    return arms, goal.astype(bool)
