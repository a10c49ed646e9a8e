"""Result containers and artifact writers (JSON report, manifest, chain and
histogram CSVs)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chain import ChainDraws

HIST_BINS = 100


@dataclass
class EstimateReport:
    """Aggregated estimation results for one experiment.

    ``post_probs`` entries cover all 2q models (copies carry probability
    zero); log Bayes-factor matrices are among the originals and
    antisymmetric by construction.  Per-replicate values are kept so spread
    statistics can be recomputed downstream.
    """

    settings: dict
    model_labels: list[str]
    family_names: list[str]
    boxes: list
    prior_probs: list
    replicates: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    timestamp: str | None = None

    def to_dict(self) -> dict:
        return jsonable(
            {
                "settings": self.settings,
                "model_labels": self.model_labels,
                "family_names": self.family_names,
                "boxes": self.boxes,
                "prior_probs": self.prior_probs,
                "replicates": self.replicates,
                "summary": self.summary,
                "timestamp": self.timestamp,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")


def jsonable(obj):
    """Recursively convert numpy scalars and arrays for json.dumps."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def write_manifest(path, config_dict: dict, boxes, seeds: dict,
                   extra: dict | None = None) -> None:
    """Everything needed to re-run bit-exactly: config, boxes, seed layout,
    and the quantile conventions used to build the boxes."""
    manifest = {
        "config": jsonable(config_dict),
        "boxes": jsonable(boxes),
        "seeds": jsonable(seeds),
        "quantile_method": "empirical, linear interpolation (type 7)",
    }
    if extra:
        manifest.update(jsonable(extra))
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_chain_csv(chain: ChainDraws, model_index: int, path) -> None:
    """Dump one model's chain: cycle, model index, coordinates, training
    sample (with group labels when present), indep_flag, and the literal
    copy-visited bookkeeping column."""
    fam = chain.model_set.families[model_index]
    draws = chain.draws[model_index]
    ts = chain.ts_values[model_index]
    groups = chain.ts_groups[model_index]
    header = ["cycle", "model_index"]
    header += [f"coord_{i + 1}" for i in range(fam.param_dim)]
    if ts is not None:
        header += [f"ts_{i + 1}" for i in range(ts.shape[1])]
        if groups is not None:
            header += [f"ts_group_{i + 1}" for i in range(groups.shape[1])]
    header += ["indep_flag", "copy_visited_since_last"]
    indep = chain.indep[model_index]
    visited = chain.copy_visited[model_index]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(chain.cycles):
            row = [t, model_index + 1]
            row += [repr(float(v)) for v in draws[t]]
            if ts is not None:
                row += list(ts[t])
                if groups is not None:
                    row += list(groups[t])
            row += [int(indep[t]), int(visited[t])]
            writer.writerow(row)


def write_all_chain_csvs(chain: ChainDraws, outdir, labels=None) -> list[Path]:
    outdir = Path(outdir)
    labels = labels or chain.model_set.labels()
    paths = []
    for j, label in enumerate(labels):
        path = outdir / f"chains_{label}.csv"
        write_chain_csv(chain, j, path)
        paths.append(path)
    return paths


def histogram_table(values: np.ndarray, bins: int = HIST_BINS):
    """Fixed-width histogram over the empirical range: (lo, hi, count) rows."""
    counts, edges = np.histogram(values, bins=bins)
    return edges[:-1], edges[1:], counts


def write_histogram_csv(values: np.ndarray, path, bins: int = HIST_BINS) -> None:
    lo, hi, counts = histogram_table(values, bins)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for row in zip(lo, hi, counts):
            writer.writerow([repr(float(row[0])), repr(float(row[1])),
                             int(row[2])])


def write_all_histogram_csvs(chain: ChainDraws, outdir, labels=None,
                             bins: int = HIST_BINS) -> list[Path]:
    """One histogram file per model coordinate, from post-burn-in draws."""
    outdir = Path(outdir)
    labels = labels or chain.model_set.labels()
    paths = []
    for j, label in enumerate(labels):
        draws = chain.draws[j][chain.burn_in:]
        for c in range(draws.shape[1]):
            path = outdir / f"hist_{label}_coord{c + 1}.csv"
            write_histogram_csv(draws[:, c], path, bins=bins)
            paths.append(path)
    return paths
