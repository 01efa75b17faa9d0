"""Contrastive training loop, best-checkpoint selection, and the hyperparameter grid.

Each optimizer step encodes every sentence of a batch under both views
(eight embedding blocks per batch), evaluates the dual contrastive loss,
and applies one AdamW update with linear warmup. The development-set
entailment average (threshold re-tuned at every evaluation) drives model
selection; the retained metric never decreases.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import torch

from .checkpoints import Checkpoint
from .data import DatasetSplit, batch_iter, to_rte_instances
from .encoders import DualEncoder, EncoderSpec
from .errors import TrainingError
from .evaluation import report_from_scores, score_rte_instances, tune_threshold
from .losses import LossVariant, dual_loss
from .tokenization import WhitespaceTokenizer

# Hyperparameter axes of the published grid; grid mode only accepts these
# batch sizes.
GRID_BATCH_SIZES = (16, 32, 64)
GRID_LEARNING_RATES = (1e-5, 3e-5, 5e-5)

# Spreads consecutive epoch seeds far apart in the shuffle-seed space.
_EPOCH_SEED_STRIDE = 1_000_003


@dataclass(frozen=True)
class TrainConfig:
    """Everything one training run depends on, serializable for manifests."""

    batch_size: int = 32
    learning_rate: float = 2e-3
    tau: float = 0.05
    variant: LossVariant = LossVariant.FULL
    epochs: int = 3
    seed: int = 0
    encoder: EncoderSpec = field(default_factory=EncoderSpec)
    eval_every: int = 0  # 0 evaluates at each epoch end
    warmup_fraction: float = 0.1

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", LossVariant.coerce(self.variant))
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.eval_every < 0:
            raise ValueError("eval_every must be nonnegative")
        if not 0.0 <= self.warmup_fraction <= 1.0:
            raise ValueError("warmup_fraction must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "tau": self.tau,
            "variant": self.variant.value,
            "epochs": self.epochs,
            "seed": self.seed,
            "encoder": self.encoder.to_dict(),
            "eval_every": self.eval_every,
            "warmup_fraction": self.warmup_fraction,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TrainConfig":
        payload = dict(payload)
        if "encoder" in payload:
            payload["encoder"] = EncoderSpec.from_dict(payload["encoder"])
        return cls(**payload)


@dataclass(frozen=True)
class MetricRecord:
    """One evaluation point: mean train loss since the last one, dev accuracy."""

    step: int
    train_loss: float
    dev_rte_avg: float


@dataclass
class TrainOutcome:
    """Best checkpoint plus the full training trace."""

    checkpoint: Checkpoint
    metrics: list[MetricRecord]
    batch_losses: list[float]
    best_gamma: float


def write_metrics(metrics: Sequence[MetricRecord], path: str | Path) -> Path:
    """One JSON record per evaluation step."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in metrics:
            fh.write(
                json.dumps(
                    {
                        "step": record.step,
                        "train_loss": record.train_loss,
                        "dev_rte_avg": record.dev_rte_avg,
                    }
                )
                + "\n"
            )
    return path


def read_metrics(path: str | Path) -> list[MetricRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            payload = json.loads(line)
            records.append(
                MetricRecord(
                    step=payload["step"],
                    train_loss=payload["train_loss"],
                    dev_rte_avg=payload["dev_rte_avg"],
                )
            )
    return records


def build_tokenizer(split: DatasetSplit) -> WhitespaceTokenizer:
    """Vocabulary over every sentence of a split; dev-only words become UNK."""
    texts: list[str] = []
    for sample in split:
        texts.append(sample.premise)
        texts.extend(sample.hypotheses().values())
    return WhitespaceTokenizer.build(texts)


def dev_rte_average(model: DualEncoder, dev_split: DatasetSplit) -> tuple[float, float]:
    """Dev entailment average with the threshold re-tuned on the same split."""
    scored = score_rte_instances(model, to_rte_instances(dev_split))
    tuned = tune_threshold([(item.score, item.gold) for item in scored])
    report = report_from_scores(scored, tuned.gamma)
    return report.average, tuned.gamma


def steps_per_epoch(n_samples: int, batch_size: int) -> int:
    return math.ceil(n_samples / batch_size)


def train(
    config: TrainConfig,
    train_split: DatasetSplit,
    dev_split: DatasetSplit,
    model: DualEncoder | None = None,
) -> TrainOutcome:
    """Run the contrastive loop and return the best-on-dev checkpoint.

    A freshly seeded toy encoder is built from the config unless ``model``
    is supplied (grid cells and external backbones reuse this hook).
    Deterministic: identical (config, data) pairs produce identical traces.
    """
    torch.manual_seed(config.seed)
    if model is None:
        model = DualEncoder.build_toy(config.encoder, build_tokenizer(train_split), seed=config.seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    epoch_steps = steps_per_epoch(len(train_split), config.batch_size)
    total_steps = config.epochs * epoch_steps
    warmup_steps = int(round(config.warmup_fraction * total_steps))
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer,
        lambda step: (step + 1) / warmup_steps if step < warmup_steps else 1.0,
    )

    metrics: list[MetricRecord] = []
    batch_losses: list[float] = []
    losses_since_eval: list[float] = []
    best_state: dict | None = None
    best_metric = -1.0
    best_gamma = 0.0
    best_step = 0
    step = 0

    def evaluate() -> None:
        nonlocal best_state, best_metric, best_gamma, best_step
        average, gamma = dev_rte_average(model, dev_split)
        mean_loss = sum(losses_since_eval) / max(1, len(losses_since_eval))
        metrics.append(MetricRecord(step=step, train_loss=mean_loss, dev_rte_avg=average))
        losses_since_eval.clear()
        if average > best_metric:
            best_metric = average
            best_gamma = gamma
            best_step = step
            best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}

    for epoch in range(config.epochs):
        epoch_seed = config.seed * _EPOCH_SEED_STRIDE + epoch
        for batch in batch_iter(train_split, config.batch_size, epoch_seed=epoch_seed):
            optimizer.zero_grad()
            try:
                embeddings = model.embed_batch(batch)
                loss = dual_loss(embeddings, config.tau, config.variant)
            except ValueError as exc:
                raise TrainingError(
                    f"invalid embeddings at step {step} on batch {batch.index} "
                    f"(sample ids {list(batch.sample_ids)}): {exc}"
                ) from exc
            if not torch.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at step {step} on batch {batch.index} "
                    f"(sample ids {list(batch.sample_ids)})"
                )
            loss.backward()
            optimizer.step()
            scheduler.step()
            step += 1
            loss_value = float(loss.detach())
            batch_losses.append(loss_value)
            losses_since_eval.append(loss_value)
            if config.eval_every and step % config.eval_every == 0:
                evaluate()
        if not config.eval_every:
            evaluate()
    if losses_since_eval:
        evaluate()

    assert best_state is not None
    model.load_state_dict(best_state)
    checkpoint = Checkpoint(
        model=model,
        config=config.to_dict(),
        step=best_step,
        dev_metric=best_metric,
    )
    return TrainOutcome(
        checkpoint=checkpoint,
        metrics=metrics,
        batch_losses=batch_losses,
        best_gamma=best_gamma,
    )


@dataclass(frozen=True)
class GridCell:
    """One (batch size, learning rate) trial; failures carry their message."""

    batch_size: int
    learning_rate: float
    dev_rte_avg: float | None
    error: str | None = None


@dataclass
class GridResult:
    """All grid cells in row-major order, with the argmax marked."""

    cells: list[GridCell]
    best: GridCell | None


def grid_search(
    batch_sizes: Sequence[int],
    learning_rates: Sequence[float],
    base_config: TrainConfig,
    train_split: DatasetSplit,
    dev_split: DatasetSplit,
) -> GridResult:
    """Train one model per grid cell; per-cell failures do not stop the sweep."""
    if not batch_sizes or not learning_rates:
        raise ValueError("grid axes must be nonempty")
    unsupported = sorted(set(batch_sizes) - set(GRID_BATCH_SIZES))
    if unsupported:
        raise ValueError(
            f"grid batch sizes {unsupported} outside the supported grid {GRID_BATCH_SIZES}"
        )
    cells: list[GridCell] = []
    for batch_size in batch_sizes:
        for learning_rate in learning_rates:
            config = replace(base_config, batch_size=batch_size, learning_rate=learning_rate)
            try:
                outcome = train(config, train_split, dev_split)
                cells.append(
                    GridCell(
                        batch_size=batch_size,
                        learning_rate=learning_rate,
                        dev_rte_avg=outcome.checkpoint.dev_metric,
                    )
                )
            except TrainingError as exc:
                cells.append(
                    GridCell(
                        batch_size=batch_size,
                        learning_rate=learning_rate,
                        dev_rte_avg=None,
                        error=str(exc),
                    )
                )
    best = None
    for cell in cells:
        if cell.dev_rte_avg is not None and (best is None or cell.dev_rte_avg > best.dev_rte_avg):
            best = cell
    return GridResult(cells=cells, best=best)
