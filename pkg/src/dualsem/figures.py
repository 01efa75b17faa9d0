"""File-backed matplotlib renderers for run reports.

Every report-producing command writes its figures next to the delimited
output; all renderers are pure functions of their inputs and return the
written path.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import ENTAILMENT, ScoredInstance
from .training import GridResult, MetricRecord


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def training_curves(
    metrics: Sequence[MetricRecord],
    batch_losses: Sequence[float],
    path: str | Path,
) -> Path:
    """Per-step training loss beside the dev metric used for model selection."""
    if not metrics or not batch_losses:
        raise ValueError("training curves need at least one metric and one loss value")
    fig, (ax_loss, ax_dev) = plt.subplots(1, 2, figsize=(10, 4))
    ax_loss.plot(range(1, len(batch_losses) + 1), batch_losses, linewidth=0.9)
    ax_loss.set_xlabel("step")
    ax_loss.set_ylabel("training loss")
    ax_loss.set_title("batch loss")
    steps = [record.step for record in metrics]
    ax_dev.plot(steps, [record.dev_rte_avg for record in metrics], marker="o")
    ax_dev.set_xlabel("step")
    ax_dev.set_ylabel("dev RTE average")
    ax_dev.set_ylim(0.0, 1.05)
    ax_dev.set_title("model selection metric")
    return _finish(fig, path)


def rte_score_histogram(
    scored: Sequence[ScoredInstance], gamma: float, path: str | Path
) -> Path:
    """Decision-score distributions by gold label, with the threshold marked."""
    if not scored:
        raise ValueError("score histogram needs at least one scored instance")
    entailed = [item.score for item in scored if item.gold == ENTAILMENT]
    other = [item.score for item in scored if item.gold != ENTAILMENT]
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.linspace(-1.0, 1.0, 41)
    ax.hist(entailed, bins=bins, alpha=0.6, label="entailment")
    ax.hist(other, bins=bins, alpha=0.6, label="non-entailment")
    ax.axvline(gamma, color="black", linestyle="--", label=f"gamma = {gamma:.3f}")
    ax.set_xlabel("decision score (best view cosine)")
    ax.set_ylabel("instances")
    ax.legend()
    return _finish(fig, path)


def imp_score_distributions(
    groups: Mapping[str, Sequence[float]], path: str | Path
) -> Path:
    """Implicitness-score histograms for named sentence groups."""
    if not groups or all(len(v) == 0 for v in groups.values()):
        raise ValueError("implicitness plot needs at least one nonempty group")
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.linspace(0.0, 2.0, 41)
    for label, values in groups.items():
        ax.hist(list(values), bins=bins, alpha=0.5, label=label)
    ax.set_xlabel("implicitness score")
    ax.set_ylabel("sentences")
    ax.legend()
    return _finish(fig, path)


def grid_heatmap(result: GridResult, path: str | Path) -> Path:
    """Dev accuracy per grid cell; failed cells show as blanks, best is ringed."""
    if not result.cells:
        raise ValueError("grid heatmap needs at least one cell")
    batch_sizes = sorted({cell.batch_size for cell in result.cells})
    rates = sorted({cell.learning_rate for cell in result.cells})
    matrix = np.full((len(batch_sizes), len(rates)), np.nan)
    for cell in result.cells:
        row = batch_sizes.index(cell.batch_size)
        col = rates.index(cell.learning_rate)
        if cell.dev_rte_avg is not None:
            matrix[row, col] = cell.dev_rte_avg
    fig, ax = plt.subplots(figsize=(1.6 * len(rates) + 2.5, 1.1 * len(batch_sizes) + 1.5))
    image = ax.imshow(matrix, cmap="viridis", aspect="auto", vmin=0.0, vmax=1.0)
    for row in range(len(batch_sizes)):
        for col in range(len(rates)):
            value = matrix[row, col]
            text = "failed" if np.isnan(value) else f"{100 * value:.2f}"
            ax.text(col, row, text, ha="center", va="center", color="white", fontsize=9)
    if result.best is not None:
        row = batch_sizes.index(result.best.batch_size)
        col = rates.index(result.best.learning_rate)
        ax.add_patch(
            plt.Rectangle((col - 0.5, row - 0.5), 1, 1, fill=False, edgecolor="red", linewidth=2)
        )
    ax.set_xticks(range(len(rates)), [f"{rate:g}" for rate in rates])
    ax.set_yticks(range(len(batch_sizes)), [str(size) for size in batch_sizes])
    ax.set_xlabel("learning rate")
    ax.set_ylabel("batch size")
    fig.colorbar(image, ax=ax, label="dev RTE average")
    return _finish(fig, path)


def ablation_chart(
    rows: Mapping[str, tuple[float | None, float | None]], path: str | Path
) -> Path:
    """RTE and EIS accuracy bars per loss variant; failures leave gaps."""
    if not rows:
        raise ValueError("ablation chart needs at least one variant row")
    variants = list(rows)
    positions = np.arange(len(variants))
    width = 0.38
    rte = [np.nan if rows[v][0] is None else rows[v][0] for v in variants]
    eis = [np.nan if rows[v][1] is None else rows[v][1] for v in variants]
    fig, ax = plt.subplots(figsize=(1.6 * len(variants) + 2, 4))
    ax.bar(positions - width / 2, rte, width, label="RTE average")
    ax.bar(positions + width / 2, eis, width, label="EIS accuracy")
    ax.set_xticks(positions, variants, rotation=15)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("accuracy")
    ax.legend()
    return _finish(fig, path)
