"""Configuration-driven experiment runner: presets for the four case
studies, the replicate/estimation pipeline, and the simulation study."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import datasets, figures, zoo
from .chain import ModelSet, extract_iid_subsequence, run_integral_chains
from .compactify import make_compact_copy, posterior_quantile_box
from .estimators import (
    akaike_weights,
    chib_log_evidence,
    log_bf_matrix,
    posterior_model_probs,
    run_completion_mh,
)
from .report import (
    EstimateReport,
    jsonable,
    write_all_chain_csvs,
    write_all_histogram_csvs,
    write_manifest,
)
from .types import Dataset, DomainError

PRESETS = ("example1", "normal-mean-sign", "anova", "poisson-nb", "custom")
MH_BURN_FRAC = 0.1


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a run; flat on purpose so it maps 1:1
    onto the key=value config file and the CLI flags."""

    preset: str = "example1"
    alpha: float = 0.05
    cycles: int = 100_000
    mh_steps: int = 5_000
    replicates: int = 1
    seed: int = 0
    estimator: str = "mc"          # mc | chib | both
    output_dir: str | None = None
    box_draws: int = 100_000
    write_chains: bool = True
    figures: bool = True
    data_file: str | None = None
    custom_family: str | None = None
    # one-way layout parameters
    anova_k: int = 3
    anova_sizes: tuple = (10, 10, 10)
    anova_means: tuple = (0.0, 0.0, 1.5)
    anova_sds: tuple = (1.0, 1.0, 1.0)
    sd_ddof: int = 1
    # count-family parameters
    q: int = 15
    # simulation-study parameters
    study_q: int = 5
    study_true_model: int = 1      # 1 = Poisson, r >= 2 = negative binomial
    study_theta: float = 3.0
    study_n: tuple = (15, 50, 300)

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise DomainError(f"unknown preset {self.preset!r}")
        if not 0.0 < self.alpha < 0.5:
            raise DomainError("alpha must lie in (0, 0.5)")
        if self.cycles < 100:
            raise DomainError("cycles must be >= 100")
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        if self.estimator not in ("mc", "chib", "both"):
            raise DomainError(f"unknown estimator {self.estimator!r}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_BOOL_KEYS = {"write_chains", "figures"}
_INT_KEYS = {"cycles", "mh_steps", "replicates", "seed", "box_draws",
             "anova_k", "sd_ddof", "q", "study_q", "study_true_model"}
_FLOAT_KEYS = {"alpha", "study_theta"}
_TUPLE_FLOAT_KEYS = {"anova_means", "anova_sds"}
_TUPLE_INT_KEYS = {"anova_sizes", "study_n"}


def parse_config_value(key: str, raw: str):
    raw = raw.strip()
    if key in _BOOL_KEYS:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise DomainError(f"bad boolean for {key}: {raw!r}")
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _TUPLE_FLOAT_KEYS:
        return tuple(float(v) for v in raw.split(","))
    if key in _TUPLE_INT_KEYS:
        return tuple(int(v) for v in raw.split(","))
    return raw


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a flat ``key = value`` config file; ``overrides`` win over file
    values.  Lines starting with # and blank lines are ignored."""
    values: dict = {}
    known = {f.name for f in fields(ExperimentConfig)}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in known:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = parse_config_value(key, raw)
    if overrides:
        values.update(overrides)
    return ExperimentConfig(**values)


@dataclass
class PresetBundle:
    originals: list
    dataset: Dataset
    prior_probs: np.ndarray
    description: str = ""


def _read_numbers(path, dtype=float) -> np.ndarray:
    text = Path(path).read_text()
    return np.array([dtype(tok) for tok in text.split()])


def build_preset(config: ExperimentConfig) -> PresetBundle:
    preset = config.preset
    if preset == "custom":
        if config.custom_family is None:
            raise DomainError("custom preset needs custom_family")
        preset = config.custom_family
        if preset not in PRESETS or preset == "custom":
            raise DomainError(f"unknown custom_family {preset!r}")

    if preset == "example1":
        if config.data_file:
            x = Dataset.from_observations(_read_numbers(config.data_file))
        else:
            x = datasets.example1_dataset()
        originals = zoo.restricted_exponential_pair()
        priors = np.array([0.5, 0.5, 0.0, 0.0])
        return PresetBundle(originals, x, priors, "exponential mean test")

    if preset == "normal-mean-sign":
        if config.data_file:
            x = Dataset.from_observations(_read_numbers(config.data_file))
        else:
            x = datasets.normal_sign_dataset()
        originals = zoo.normal_mean_sign_triple()
        priors = np.concatenate([np.full(3, 1.0 / 3.0), np.zeros(3)])
        return PresetBundle(originals, x, priors, "normal mean-sign test")

    if preset == "anova":
        k = config.anova_k
        if not (len(config.anova_sizes) == len(config.anova_means)
                == len(config.anova_sds) == k):
            raise DomainError("anova group stats must all have length k")
        x = Dataset.from_group_stats(
            config.anova_sizes, config.anova_means, config.anova_sds,
            ddof=config.sd_ddof,
        )
        originals = zoo.anova_pair(k)
        priors = np.array([0.5, 0.5, 0.0, 0.0])
        return PresetBundle(originals, x, priors, f"one-way layout, k={k}")

    if preset == "poisson-nb":
        if config.data_file:
            x = Dataset.from_observations(_read_numbers(config.data_file, int))
        else:
            x = datasets.madison_dataset()
        originals = zoo.count_family(config.q)
        q = len(originals)
        priors = np.concatenate([np.full(q, 1.0 / q), np.zeros(q)])
        return PresetBundle(originals, x, priors,
                            f"Poisson vs negative binomial, q={config.q}")

    raise DomainError(f"unknown preset {preset!r}")


def build_model_set(originals, x: Dataset, alpha: float, prior_probs,
                    box_rng, n_draws: int = 100_000):
    """Quantile boxes and compact copies for every original model."""
    boxes = [
        posterior_quantile_box(fam, x, alpha, n_draws=n_draws, rng=box_rng)
        for fam in originals
    ]
    copies = [
        make_compact_copy(fam, box, alpha=alpha)
        for fam, box in zip(originals, boxes)
    ]
    return ModelSet(originals, copies, prior_probs), boxes


def _mc_estimates(model_set: ModelSet, chain, x: Dataset):
    q = model_set.q
    burned = [chain.draws[i][chain.burn_in:] for i in range(q)]
    log_bf = log_bf_matrix(model_set.originals, burned, x)
    log_bf_vs_ref = np.concatenate([log_bf[:, 0], np.zeros(q)])
    probs = posterior_model_probs(log_bf_vs_ref, model_set.prior_probs)
    return log_bf, probs


def _chib_estimates(model_set: ModelSet, chain, x: Dataset, mh_steps: int,
                    mh_rngs):
    q = model_set.q
    log_ev = np.empty(q)
    acc = np.empty(q)
    for i in range(q):
        _, ts_stream = extract_iid_subsequence(chain, i)
        result = run_completion_mh(
            model_set.originals[i], x, ts_stream, mh_steps, mh_rngs[i]
        )
        burn = int(MH_BURN_FRAC * len(result.ts_list))
        theta_star = np.median(result.thetas[burn:], axis=0)
        log_ev[i] = chib_log_evidence(
            model_set.originals[i], x, theta_star,
            prior_ts_list=ts_stream,
            posterior_ts_list=result.ts_list[burn:],
        )
        acc[i] = result.acceptance_rate
    log_bf = log_ev[:, None] - log_ev[None, :]
    log_bf_vs_ref = np.concatenate([log_bf[:, 0], np.zeros(q)])
    probs = posterior_model_probs(log_bf_vs_ref, model_set.prior_probs)
    return log_ev, log_bf, probs, acc


def run_experiment(config: ExperimentConfig) -> EstimateReport:
    """Build models and copies, run replicate chains, estimate, and write
    the artifact files when an output directory is configured."""
    t_start = time.perf_counter()
    bundle = build_preset(config)
    q = len(bundle.originals)

    root = np.random.SeedSequence(config.seed)
    box_ss, *rep_sss = root.spawn(1 + config.replicates)
    box_rng = np.random.default_rng(box_ss)
    model_set, boxes = build_model_set(
        bundle.originals, bundle.dataset, config.alpha, bundle.prior_probs,
        box_rng, n_draws=config.box_draws,
    )

    want_mc = config.estimator in ("mc", "both")
    want_chib = config.estimator in ("chib", "both")
    rep_records: list[dict] = []
    first_chain = None
    for r in range(config.replicates):
        streams = rep_sss[r].spawn(1 + q)
        chain_rng = np.random.default_rng(streams[0])
        chain = run_integral_chains(model_set, config.cycles, chain_rng)
        if r == 0:
            first_chain = chain
        record: dict = {"replicate": r}
        if want_mc:
            log_bf, probs = _mc_estimates(model_set, chain, bundle.dataset)
            record["mc"] = {"log_bf": log_bf, "post_probs": probs}
        if want_chib:
            mh_rngs = [np.random.default_rng(s) for s in streams[1:]]
            log_ev, log_bf, probs, acc = _chib_estimates(
                model_set, chain, bundle.dataset, config.mh_steps, mh_rngs
            )
            record["chib"] = {
                "log_evidence": log_ev,
                "log_bf": log_bf,
                "post_probs": probs,
                "acceptance_rates": acc,
            }
        rep_records.append(record)

    summary: dict = {"runtime_seconds": time.perf_counter() - t_start}
    for kind in ("mc", "chib"):
        if kind not in rep_records[0]:
            continue
        probs = np.array([rec[kind]["post_probs"] for rec in rep_records])
        log_bf = np.array([rec[kind]["log_bf"] for rec in rep_records])
        summary[kind] = {
            "post_probs_mean": probs.mean(axis=0),
            "post_probs_sd": probs.std(axis=0, ddof=0),
            "post_probs_se": probs.std(axis=0, ddof=0)
            / math.sqrt(config.replicates),
            "log_bf_mean": log_bf.mean(axis=0),
            "bf_mean": np.exp(log_bf).mean(axis=0),
        }

    report = EstimateReport(
        settings=jsonable(config.to_dict()),
        model_labels=model_set.labels(),
        family_names=[f.name for f in model_set.families],
        boxes=[b.tolist() for b in boxes],
        prior_probs=model_set.prior_probs.tolist(),
        replicates={"records": jsonable(rep_records)},
        summary=jsonable(summary),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )

    if config.output_dir is not None:
        _write_run_artifacts(config, report, first_chain, rep_records)
    return report


def _write_run_artifacts(config, report, chain, rep_records):
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    report.write(outdir / "report.json")
    write_manifest(
        outdir / "manifest.json",
        config.to_dict(),
        report.boxes,
        seeds={
            "root": config.seed,
            "layout": "spawn(1 + replicates): boxes, then one stream per "
                      "replicate; each replicate spawns chain + one "
                      "completion stream per original",
        },
        extra={"family_names": report.family_names},
    )
    if config.write_chains and chain is not None:
        write_all_chain_csvs(chain, outdir)
    hist_paths = write_all_histogram_csvs(chain, outdir) if chain else []
    if config.figures and chain is not None:
        labels = chain.model_set.labels()
        for j, label in enumerate(labels):
            draws = chain.draws[j][chain.burn_in:]
            for c in range(draws.shape[1]):
                figures.save_histogram_figure(
                    draws[:, c],
                    outdir / f"hist_{label}_coord{c + 1}.png",
                    title=f"{label} coordinate {c + 1}",
                )
        if len(rep_records) > 1 and "mc" in rep_records[0] \
                and "chib" in rep_records[0]:
            estimates = {
                kind: [rec[kind]["post_probs"][0] for rec in rep_records]
                for kind in ("mc", "chib")
            }
            figures.save_estimator_boxplot(
                estimates,
                outdir / "estimator_comparison.png",
                title="P(M1 | x) across replicates",
                ylabel="P(M1 | x)",
            )
    return hist_paths


def simulate_study(config: ExperimentConfig) -> dict:
    """Repeated-simulation comparison on the count family.

    For each sample size, ``config.replicates`` datasets are drawn from the
    true model; each is analyzed with the integral-prior pipeline and with
    Akaike weights, and the mean probabilities are tabulated.
    """
    models = zoo.count_family(config.study_q)
    q = len(models)
    if not 1 <= config.study_true_model <= q:
        raise DomainError("study_true_model out of range")
    true_model = models[config.study_true_model - 1]
    theta = np.array([config.study_theta])
    priors = np.concatenate([np.full(q, 1.0 / q), np.zeros(q)])

    root = np.random.SeedSequence(config.seed)
    table = []
    mean_ip: dict = {}
    mean_aw: dict = {}
    for n in config.study_n:
        ip_rows = np.empty((config.replicates, q))
        aw_rows = np.empty((config.replicates, q))
        for rep in range(config.replicates):
            ss = np.random.SeedSequence(
                entropy=config.seed, spawn_key=(int(n), rep)
            )
            data_rng, box_rng, chain_rng = (
                np.random.default_rng(s) for s in ss.spawn(3)
            )
            x = Dataset.from_observations(
                true_model.sample_data(theta, int(n), data_rng)
            )
            model_set, _ = build_model_set(
                models, x, config.alpha, priors, box_rng,
                n_draws=config.box_draws,
            )
            chain = run_integral_chains(model_set, config.cycles, chain_rng)
            _, probs = _mc_estimates(model_set, chain, x)
            ip_rows[rep] = probs[:q]
            aw_rows[rep] = akaike_weights(models, x)
        mean_ip[n] = ip_rows.mean(axis=0)
        mean_aw[n] = aw_rows.mean(axis=0)
        for i in range(q):
            table.append(
                {
                    "n": int(n),
                    "model": f"M{i + 1}",
                    "integral_prior": float(mean_ip[n][i]),
                    "akaike": float(mean_aw[n][i]),
                }
            )

    result = {
        "settings": jsonable(config.to_dict()),
        "true_model": f"M{config.study_true_model}",
        "theta": config.study_theta,
        "table": table,
    }
    if config.output_dir is not None:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "study_table.csv", "w", newline="") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["n", "model", "integral_prior", "akaike"]
            )
            writer.writeheader()
            writer.writerows(table)
        import json

        (outdir / "study.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n"
        )
        if config.figures:
            ns = list(config.study_n)
            figures.save_study_figure(
                ns,
                {
                    f"M{i + 1}": [mean_ip[n][i] for n in ns]
                    for i in range(q)
                },
                outdir / "study_integral_prior.png",
                title=f"integral priors, true M{config.study_true_model}",
            )
    return result
