"""Adam training loop and evaluation for the residual classifier.

Training is deterministic given the two seeds involved: the model seed
fixes the initialization, the train-config seed fixes batch shuffling.
The learning rate steps from ``lr_start`` to ``lr_end`` at the epoch
midpoint.  Feature normalization statistics are computed on the training
set here and frozen into the returned model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataset, EmptyDataset
from ..features import NormalizationStats, apply_normalization, normalize_matrix
from .model import (Model, ModelConfig, cross_entropy, forward, init_model,
                    label_indices, loss_and_grads)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 32
    lr_start: float = 1e-3
    lr_end: float = 1e-4
    epochs: int = 40
    seed: int = 0

    def __post_init__(self):
        if not (self.lr_start >= self.lr_end > 0):
            raise ValueError("need lr_start >= lr_end > 0")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be positive")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    loss: float
    train_acc: float
    val_acc: float | None   # None when no validation set was given


class AdamState:
    """First/second moment accumulators for one weight dictionary."""

    def __init__(self, weights: dict[str, np.ndarray]):
        self.m = {k: np.zeros_like(v) for k, v in weights.items()}
        self.v = {k: np.zeros_like(v) for k, v in weights.items()}
        self.t = 0

    def step(self, weights: dict[str, np.ndarray],
             grads: dict[str, np.ndarray], lr: float) -> dict[str, np.ndarray]:
        self.t += 1
        bias1 = 1.0 - ADAM_BETA1**self.t
        bias2 = 1.0 - ADAM_BETA2**self.t
        out = {}
        for k, w in weights.items():
            g = grads[k]
            self.m[k] = ADAM_BETA1 * self.m[k] + (1 - ADAM_BETA1) * g
            self.v[k] = ADAM_BETA2 * self.v[k] + (1 - ADAM_BETA2) * g * g
            m_hat = self.m[k] / bias1
            v_hat = self.v[k] / bias2
            out[k] = w - lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        return out


def epoch_learning_rate(tc: TrainConfig, epoch: int) -> float:
    """lr_start for the first half of the epochs, lr_end afterwards."""
    midpoint = (tc.epochs + 1) // 2
    return tc.lr_start if epoch < midpoint else tc.lr_end


def train(dataset: tuple[np.ndarray, np.ndarray], mc: ModelConfig,
          tc: TrainConfig,
          val: tuple[np.ndarray, np.ndarray] | None = None
          ) -> tuple[Model, list[EpochStats]]:
    """Train a fresh model on raw (unnormalized) features.

    Args:
        dataset: (features, labels); features (n, input_len) raw values,
            labels as class names or integer indices.
        mc: architecture configuration (also fixes the init seed).
        tc: optimization configuration (also fixes the shuffle seed).
        val: optional held-out split evaluated after each epoch.

    Returns:
        The trained model (with training normalization statistics frozen
        in) and per-epoch history.

    Raises:
        DegenerateDataset: empty training set or fewer than 2 classes.
    """
    features, labels = dataset
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] == 0:
        raise DegenerateDataset("training set is empty")
    y = label_indices(labels)
    if np.unique(y).size < 2:
        raise DegenerateDataset("training set needs at least 2 classes")

    x_norm, stats = normalize_matrix(features)
    model = init_model(mc, norm_stats=stats)
    adam = AdamState(model.weights)
    rng = np.random.default_rng(tc.seed)

    if val is not None:
        val_x = apply_normalization(np.asarray(val[0], dtype=np.float64), stats)
        val_y = label_indices(val[1])

    n = x_norm.shape[0]
    history: list[EpochStats] = []
    weights = model.weights
    for epoch in range(tc.epochs):
        lr = epoch_learning_rate(tc, epoch)
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, tc.batch_size):
            idx = order[start : start + tc.batch_size]
            loss, grads = loss_and_grads(
                Model(mc, weights, stats), x_norm[idx], y[idx])
            weights = adam.step(weights, grads, lr)
            epoch_loss += loss * idx.size
        model = Model(mc, weights, stats)
        probs = forward(model, x_norm)
        train_acc = float(np.mean(probs.argmax(axis=1) == y))
        if val is not None:
            val_probs = forward(model, val_x)
            val_acc = float(np.mean(val_probs.argmax(axis=1) == val_y))
        else:
            val_acc = None
        history.append(EpochStats(epoch=epoch, loss=epoch_loss / n,
                                  train_acc=train_acc, val_acc=val_acc))
    return model, history


def predict(m: Model, features: np.ndarray) -> np.ndarray:
    """Probabilities for raw feature rows (normalization applied here)."""
    x = np.asarray(features, dtype=np.float64)
    if m.norm_stats is not None:
        x = apply_normalization(x, m.norm_stats)
    return forward(m, x)


def evaluate(m: Model, dataset: tuple[np.ndarray, np.ndarray]
             ) -> tuple[float, np.ndarray]:
    """Accuracy and confusion matrix (rows = true class) on labeled data.

    Raises:
        EmptyDataset: no rows.
    """
    features, labels = dataset
    features = np.asarray(features, dtype=np.float64)
    if features.shape[0] == 0:
        raise EmptyDataset("evaluation set is empty")
    y = label_indices(labels)
    pred = predict(m, features).argmax(axis=1)
    k = m.config.n_classes
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (y, pred), 1)
    accuracy = float(confusion.trace() / confusion.sum())
    return accuracy, confusion


def batch_loss(m: Model, features_norm: np.ndarray,
               labels: np.ndarray) -> float:
    """Cross-entropy of already-normalized rows (no gradient)."""
    return cross_entropy(forward(m, features_norm), label_indices(labels))
