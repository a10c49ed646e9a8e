"""Figure rendering for the report path: histogram panels next to each
histogram CSV, the MC-vs-Chib replicate comparison, and study summaries.

matplotlib is imported lazily with the Agg backend so library use never
requires a display.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_histogram_figure(values, path, title: str = "", bins: int = 100,
                          log_scale: bool = False) -> Path:
    plt = _plt()
    values = np.asarray(values, dtype=float)
    if log_scale:
        values = np.log(values[values > 0])
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.hist(values, bins=bins, color="steelblue", edgecolor="none")
    ax.set_title(title)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_estimator_boxplot(estimates: dict, path, title: str = "",
                           ylabel: str = "") -> Path:
    """Side-by-side boxplots of replicate estimates, one box per estimator."""
    plt = _plt()
    labels = list(estimates)
    data = [np.asarray(estimates[k], dtype=float) for k in labels]
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    ax.boxplot(data, tick_labels=labels)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_study_figure(n_values, mean_probs: dict, path, title: str = "") -> Path:
    """Mean model probabilities against sample size, one line per model."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    for label, probs in mean_probs.items():
        ax.plot(n_values, probs, marker="o", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("mean probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
