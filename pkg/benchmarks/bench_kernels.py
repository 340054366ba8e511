"""Time the compiled and pure-Python simulation kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--horizon 10000] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from uclbandit import kernels
from uclbandit.environment import landscape, line_graph, shortest_paths
from uclbandit.policies import SQRT_2PIE


def cases(T):
    rng = np.random.default_rng(0)
    prof = landscape("B", "profile10").means
    grid = landscape("B", "grid10x10").means
    paths = shortest_paths(line_graph(10))
    noise, u = rng.normal(0, 1, T), rng.random(T)
    z10, z100 = np.zeros(10), np.full(100, 200.0)
    return {
        "deterministic (10 arms)": lambda b: kernels.run_index_policy(
            0, prof, noise, u, z10, math.inf, 1.0, SQRT_2PIE, 1, backend=b),
        "stochastic cooling (10 arms)": lambda b: kernels.run_index_policy(
            1, prof, noise, u, z10, math.inf, 1.0, SQRT_2PIE, 1, "cooling", backend=b),
        "ucb1 (10 arms)": lambda b: kernels.run_index_policy(
            2, prof, noise, u, z10, math.inf, 1.0, SQRT_2PIE, 1, backend=b),
        "block (100 arms)": lambda b: kernels.run_block(grid, noise, z100, 1e6, 1.0, SQRT_2PIE, 1, backend=b),
        "graphical line (10 arms)": lambda b: kernels.run_graphical(
            prof, noise, np.full(10, 40.0), 1e6, 1.0, SQRT_2PIE, 1, paths, backend=b),
    }


def best_time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    backends = kernels.available_backends()
    print(f"horizon {args.horizon}, best of {args.repeat}; backends: {', '.join(backends)}")
    print(f"{'kernel':30s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases(args.horizon).items():
        times = {b: best_time(lambda: fn(b), args.repeat) for b in backends}
        arms = [fn(b) for b in backends]
        arms = [a[0] if isinstance(a, tuple) else a for a in arms]
        assert all(np.array_equal(arms[0], a) for a in arms[1:]), name
        row = f"{name:30s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:11.0f}x"
        print(row)


if __name__ == "__main__":
    main()
