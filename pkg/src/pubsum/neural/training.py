"""Mini-batch training loop with dev-set early stopping.

Instances are processed one at a time inside each batch (gradient
accumulation), so variable-length inputs need no padding.  A seeded fraction
of the training data is held out as the dev set; training stops once dev
loss has failed to improve for `patience` consecutive epochs and the
best-dev-loss parameters are restored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .layers import Parameter, softmax_cross_entropy
from .optim import make_optimizer


class TrainingDivergedError(RuntimeError):
    pass


class TrainableModel(Protocol):
    def parameters(self) -> list[Parameter]: ...

    def forward(self, instance, train: bool, rng: np.random.Generator) -> np.ndarray: ...

    def backward(self, grad_logits: np.ndarray) -> None: ...


@dataclass(frozen=True)
class TrainConfig:
    dropout_keep: float = 0.5
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    batch_size: int = 64
    max_epochs: int = 100
    patience: int = 5
    dev_fraction: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.batch_size < 1 or self.max_epochs < 1 or self.patience < 1:
            raise ValueError("batch_size, max_epochs and patience must be >= 1")
        if not 0 < self.dev_fraction < 1:
            raise ValueError("dev_fraction must be in (0, 1)")


@dataclass
class TrainingHistory:
    train_losses: list[float] = field(default_factory=list)
    dev_losses: list[float] = field(default_factory=list)
    best_epoch: int = -1
    stopped_early: bool = False


def _mean_loss(model: TrainableModel, instances, labels, rng: np.random.Generator) -> float:
    total = 0.0
    for inst, label in zip(instances, labels):
        logits = model.forward(inst, train=False, rng=rng)
        loss, _ = softmax_cross_entropy(logits, int(label))
        total += loss
    return total / max(len(labels), 1)


def train(
    model: TrainableModel,
    instances: Sequence,
    labels: Sequence[int],
    cfg: TrainConfig = TrainConfig(),
) -> TrainingHistory:
    """Train in place; returns the loss curves and best epoch."""
    if len(instances) != len(labels):
        raise ValueError(f"got {len(instances)} instances but {len(labels)} labels")
    if len(instances) < 2:
        raise ValueError("need at least 2 instances to hold out a dev set")
    rng = np.random.default_rng(cfg.seed)
    order = rng.permutation(len(instances))
    n_dev = max(1, int(math.floor(len(instances) * cfg.dev_fraction)))
    dev_idx, train_idx = order[:n_dev], order[n_dev:]
    dev = [instances[i] for i in dev_idx]
    dev_labels = [labels[i] for i in dev_idx]
    train_set = [instances[i] for i in train_idx]
    train_labels = [labels[i] for i in train_idx]

    params = model.parameters()
    optimizer = make_optimizer(cfg.optimizer, cfg.learning_rate)
    history = TrainingHistory()
    best_loss = math.inf
    best_values: list[np.ndarray] | None = None
    stale = 0

    for epoch in range(cfg.max_epochs):
        epoch_order = rng.permutation(len(train_set))
        epoch_loss = 0.0
        for start in range(0, len(epoch_order), cfg.batch_size):
            batch = epoch_order[start : start + cfg.batch_size]
            for p in params:
                p.zero_grad()
            for i in batch:
                logits = model.forward(train_set[i], train=True, rng=rng)
                loss, dlogits = softmax_cross_entropy(logits, int(train_labels[i]))
                if not math.isfinite(loss):
                    raise TrainingDivergedError(
                        f"non-finite loss at epoch {epoch}, instance {i}: {loss}"
                    )
                model.backward(dlogits / len(batch))
                epoch_loss += loss
            optimizer.step(params)
        history.train_losses.append(epoch_loss / max(len(train_set), 1))

        dev_loss = _mean_loss(model, dev, dev_labels, rng)
        if not math.isfinite(dev_loss):
            raise TrainingDivergedError(f"non-finite dev loss at epoch {epoch}")
        history.dev_losses.append(dev_loss)
        if dev_loss < best_loss:
            best_loss = dev_loss
            best_values = [p.value.copy() for p in params]
            history.best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                history.stopped_early = True
                break

    if best_values is not None:
        for p, value in zip(params, best_values):
            p.value[...] = value
    return history
