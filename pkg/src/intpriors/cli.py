"""Command-line interface: run experiments, simulation studies, and a quick
self-test of the core machinery."""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .experiments import ExperimentConfig, load_config, run_experiment, simulate_study

SEED_ENV_VAR = "INTPRIORS_SEED"


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--preset", choices=(
        "example1", "normal-mean-sign", "anova", "poisson-nb", "custom"))
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--cycles", type=int, help="update cycles T")
    parser.add_argument("--mh-steps", type=int, dest="mh_steps",
                        help="completion MH steps")
    parser.add_argument("--replicates", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--estimator", choices=("mc", "chib", "both"))
    parser.add_argument("--out", dest="output_dir", help="output directory")
    parser.add_argument("--data-file", dest="data_file")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering")
    parser.add_argument("--no-chains", action="store_true",
                        help="skip the chain CSV dump")
    parser.add_argument("--q", type=int, help="count-family size")


def _collect_overrides(args: argparse.Namespace) -> dict:
    keys = ("preset", "alpha", "cycles", "mh_steps", "replicates", "seed",
            "estimator", "output_dir", "data_file", "q",
            "study_q", "study_true_model", "study_theta", "study_n")
    overrides = {k: getattr(args, k) for k in keys
                 if getattr(args, k, None) is not None}
    if args.no_figures:
        overrides["figures"] = False
    if args.no_chains:
        overrides["write_chains"] = False
    if "seed" not in overrides and SEED_ENV_VAR in os.environ:
        overrides["seed"] = int(os.environ[SEED_ENV_VAR])
    return overrides


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = _collect_overrides(args)
    if args.config:
        return load_config(args.config, overrides)
    return ExperimentConfig(**overrides)


def _cmd_run(args) -> int:
    config = _build_config(args)
    report = run_experiment(config)
    for kind in ("mc", "chib"):
        if kind in report.summary:
            probs = report.summary[kind]["post_probs_mean"]
            shown = ", ".join(
                f"{label}={p:.4f}"
                for label, p in zip(report.model_labels, probs)
                if p > 0
            )
            print(f"{kind}: {shown}")
    print(f"runtime: {report.summary['runtime_seconds']:.1f}s")
    if config.output_dir:
        print(f"artifacts written to {config.output_dir}")
    return 0


def _cmd_study(args) -> int:
    config = _build_config(args)
    result = simulate_study(config)
    ns = sorted({row["n"] for row in result["table"]})
    models = [row["model"] for row in result["table"] if row["n"] == ns[0]]
    print(f"true model {result['true_model']}, theta = {result['theta']}")
    header = "n    " + "".join(f"{m:>8}" for m in models)
    print(header + "   (integral prior / Akaike)")
    for n in ns:
        rows = {r["model"]: r for r in result["table"] if r["n"] == n}
        ip = "".join(f"{rows[m]['integral_prior']:8.3f}" for m in models)
        aw = "".join(f"{rows[m]['akaike']:8.3f}" for m in models)
        print(f"{n:<5}{ip}")
        print(f"{'':<5}{aw}")
    if config.output_dir:
        print(f"artifacts written to {config.output_dir}")
    return 0


def _selftest_checks():
    """Fast end-to-end sanity checks; yields (name, passed) pairs."""
    from scipy.integrate import quad
    from scipy.stats import kstest

    from .chain import sample_update_cycle
    from .compactify import make_compact_copy
    from .estimators import log_bf_matrix
    from .types import Dataset, TrainingSample
    from .zoo import RestrictedExponential

    rng = np.random.default_rng(20240101)

    # permutation sampler hits only admissible permutations, roughly uniformly
    counts = {}
    for _ in range(4000):
        perm = tuple(sample_update_cycle(3, 2, rng))
        counts[perm] = counts.get(perm, 0) + 1
    admissible = {p for p in counts if p[0] != 2}
    freq_ok = (
        len(counts) == 4
        and admissible == set(counts)
        and max(abs(c / 4000 - 0.25) for c in counts.values()) < 0.05
    )
    yield "update-cycle permutations", freq_ok

    # closed-form m^N(z) against quadrature
    model = RestrictedExponential("below-1")
    ts = TrainingSample(np.array([0.7]))
    exact = model.marginal_ts(ts)
    quad_val, _ = quad(lambda t: t**-2 * math.exp(-0.7 / t), 0.0, 1.0)
    yield "marginal vs quadrature", abs(exact - quad_val) < 1e-8 * quad_val

    # truncated prior sampler against its own CDF
    copy = make_compact_copy(model, np.array([[0.3, 0.9]]))
    draws = np.array([copy.sample_prior(rng)[0] for _ in range(4000)])
    pval = kstest(draws, lambda v: np.vectorize(copy.prior_coord_cdf)(0, v)).pvalue
    yield "copy prior KS", pval > 0.001

    # antisymmetry of the log Bayes-factor matrix
    x = Dataset.from_observations(rng.exponential(0.7, size=12))
    pair = [RestrictedExponential("below-1"), RestrictedExponential("above-1")]
    draws_list = [np.full((50, 1), 0.5), np.full((50, 1), 1.5)]
    mat = log_bf_matrix(pair, draws_list, x)
    yield "log BF antisymmetry", bool(np.all(mat + mat.T == 0.0))

    # determinism of a tiny run
    from .experiments import ExperimentConfig, run_experiment

    cfg = dict(preset="example1", cycles=300, seed=7, box_draws=2000,
               output_dir=None, figures=False, write_chains=False)
    rep1 = run_experiment(ExperimentConfig(**cfg))
    rep2 = run_experiment(ExperimentConfig(**cfg))
    d1, d2 = rep1.to_dict(), rep2.to_dict()
    for d in (d1, d2):
        d.pop("timestamp")
        d["summary"].pop("runtime_seconds")
    yield "fixed-seed determinism", d1 == d2


def _cmd_selftest(_args) -> int:
    failed = 0
    for name, ok in _selftest_checks():
        print(f"{'PASS' if ok else 'FAIL'}: {name}")
        failed += 0 if ok else 1
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intpriors",
        description="Bayesian model selection with integral priors built "
                    "from cross-model Markov chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment preset")
    _add_common_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_study = sub.add_parser("study", help="repeated-simulation study")
    _add_common_flags(p_study)
    p_study.add_argument("--study-q", type=int, dest="study_q")
    p_study.add_argument("--true-model", type=int, dest="study_true_model",
                         help="1 = Poisson, r >= 2 = negative binomial")
    p_study.add_argument("--theta", type=float, dest="study_theta")
    p_study.add_argument("--n-list", dest="study_n",
                         help="comma-separated sample sizes")
    p_study.set_defaults(func=_cmd_study)

    p_test = sub.add_parser("selftest", help="quick internal consistency checks")
    p_test.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "study_n", None) is not None:
        args.study_n = tuple(int(v) for v in args.study_n.split(","))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
