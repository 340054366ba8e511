"""Command line entry point: ``uclbandit <subcommand> ...``.

Exit status: 0 success, 2 configuration or input error, 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .. import analysis
from ..normal_quantile import DomainError, bound_sweep
from .config import ConfigError, load_config
from .output import read_column, write_csv
from .runner import run_experiment, run_phenotype_demo

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3
BOUND_MIN_T = 3

_DEFAULT_THEOREM = {
    "deterministic_ucl": "t2",
    "stochastic_ucl": "t3",
    "block_ucl": "t5",
    "graphical_block_ucl": "t6",
}


def _bound_grid(T):
    if T < BOUND_MIN_T:
        raise DomainError(f"bounds need a horizon of at least {BOUND_MIN_T}, got {T}")
    return np.arange(BOUND_MIN_T, T + 1, dtype=float)


def evaluate_bound(theorem, config, env, t):
    """(total, extra columns) for a theorem on grid ``t``, using the config's beta and K."""
    s2 = config.agent_sigma_s2(env)
    beta, K = config.beta, config.ucl.K
    if theorem == "lai":
        c = analysis.bound_lai_robbins(env, t, s2)
        return c, {}
    if theorem == "t2":
        return analysis.bound_theorem2(env, t, beta, K, s2), {}
    if theorem == "t3":
        return analysis.bound_theorem3(env, t, beta, K, s2), {}
    if theorem == "t5":
        b = analysis.bound_theorem5(env, t, env.costs, beta, K, s2)
        extra = {"cost_bound": b.cost} if b.cost is not None else {}
        return analysis.BoundCurve("theorem5", b.pulls.t, b.pulls.arms, b.pulls.per_arm, b.regret,
                                   b.pulls.constants), extra
    if theorem == "t6":
        return analysis.bound_theorem6(env, t, beta, K, s2), {}
    raise ValueError(theorem)


def _default_bound(config, env, T):
    """(regret bound, cost bound or None) columns; NaN where no bound applies or t < 3."""
    col = np.full(T, math.nan)
    theorem = _DEFAULT_THEOREM.get(config.algorithm)
    if config.algorithm == "stochastic_ucl" and config.ucl.temperature != "cooling":
        theorem = None
    if theorem is None or T < BOUND_MIN_T or not np.any(env.gaps > 0):
        return col, None
    curve, extra = evaluate_bound(theorem, config, env, _bound_grid(T))
    col[BOUND_MIN_T - 1:] = curve.total
    cost = extra.get("cost_bound")
    if cost is not None:
        cost = np.r_[np.full(BOUND_MIN_T - 1, math.nan), cost]
    return col, cost


def cmd_simulate(args):
    config = load_config(args.config).with_overrides(base_seed=args.seed, replicates=args.replicates)
    out = args.out or config.output
    if out is None:
        raise ConfigError("output: give --out or experiment.output")
    env = config.environment()
    res = run_experiment(config, jobs=args.jobs)
    T = config.horizon
    bound, cost_bound = _default_bound(config, env, T)
    header = ["t", "mean_regret", "stderr_regret", "mean_observed", "stderr_observed"]
    cols = [res.t, res.mean_regret, res.stderr_regret, res.mean_observed, res.stderr_observed]
    if res.mean_cost is not None:
        header += ["mean_cost", "stderr_cost"]
        cols += [res.mean_cost, res.stderr_cost]
    header.append("bound")
    cols.append(bound)
    if cost_bound is not None:
        header.append("cost_bound")
        cols.append(cost_bound)
    write_csv(out, header, zip(*cols))

    arms_out = args.arms_out or str(Path(out).with_name(Path(out).stem + "_arms.csv"))
    gaps = env.gaps
    write_csv(arms_out, ["arm", "mean", "gap", "mean_pulls", "mean_switches"],
              zip(np.arange(1, env.n_arms + 1), env.means, gaps, res.mean_pulls, res.mean_switches))
    return EXIT_OK


def cmd_bounds(args):
    config = load_config(args.config)
    env = config.environment()
    T = args.t_max or config.horizon
    t = _bound_grid(T)
    curve, extra = evaluate_bound(args.theorem, config, env, t)
    name = "asymptotic_lower_bound" if args.theorem == "lai" else "bound"
    header = ["t", name] + list(extra) + [f"n_arm{i + 1}" for i in curve.arms]
    cols = [t.astype(int), curve.total, *extra.values(), *curve.per_arm]
    write_csv(args.out, header, zip(*cols))
    return EXIT_OK


def cmd_fit(args):
    try:
        t, y = read_column(args.input, args.col)
    except FileNotFoundError:
        raise ConfigError(f"--in: no such file {args.input!r}") from None
    except KeyError as exc:
        raise ConfigError(f"--col: {exc.args[0]}") from None
    try:
        res = analysis.fit_phenotype(y, t)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    rows = [(f.model, f.a, f.b, f.ssr, f.model == res.selected) for f in res.fits.values()]
    write_csv(args.out, ["model", "a", "b", "ssr", "selected"], rows)
    return EXIT_OK


def cmd_quantile(args):
    sweep = bound_sweep(args.alpha_min, args.alpha_max, args.points, args.beta)
    write_csv(args.out, ["alpha", "lower", "exact", "upper", "sandwich_ok"],
              [(q.alpha, q.lower, q.exact, q.upper, q.sandwich_ok) for q in sweep])
    return EXIT_OK


def cmd_phenotype_demo(args):
    runs = run_phenotype_demo(args.seeds, args.seed, args.horizon)
    rows = []
    for r in runs:
        f = r.fit.fits
        rows.append((r.setup, r.seed, r.fit.selected, r.total_regret, r.total_observed,
                     f["linear"].ssr, f["power"].ssr, f["log"].ssr))
    write_csv(args.out, ["setup", "seed", "selected", "total_regret", "total_observed",
                         "ssr_linear", "ssr_power", "ssr_log"], rows)
    for setup in ("uncorrelated", "correlated"):
        picks = [r.fit.selected for r in runs if r.setup == setup]
        counts = ", ".join(f"{m}={picks.count(m)}" for m in analysis.phenotype.MODELS)
        print(f"{setup}: {counts}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uclbandit", description="Upper credible limit bandit experiments")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run replicates and write mean regret curves")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, help="override experiment.seed")
    s.add_argument("--replicates", type=int, help="override experiment.replicates")
    s.add_argument("--out", help="regret CSV (default experiment.output)")
    s.add_argument("--arms-out", help="per-arm CSV (default <out>_arms.csv)")
    s.add_argument("--jobs", type=int, default=1, help="worker threads")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="evaluate a closed-form bound for t = 3..T")
    b.add_argument("--theorem", required=True, choices=["lai", "t2", "t3", "t5", "t6"])
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--t-max", type=int, help="override the horizon")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("fit", help="fit linear, power and log regret models to a CSV column")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--col", default="mean_regret")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fit)

    q = sub.add_parser("quantile", help="tabulate the quantile sandwich bounds")
    q.add_argument("--alpha-min", type=float, required=True)
    q.add_argument("--alpha-max", type=float, required=True)
    q.add_argument("--points", type=int, required=True)
    q.add_argument("--beta", type=float, default=1.02)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_quantile)

    d = sub.add_parser("phenotype-demo", help="fit phenotypes for the two landscape-B agent setups")
    d.add_argument("--seeds", type=int, default=100)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--horizon", type=int, default=90)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_phenotype_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
