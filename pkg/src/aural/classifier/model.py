"""From-scratch 1-D residual network: forward pass and analytic gradients.

Architecture (20 weight layers): a stem convolution lifting the single
input channel to ``channels``, nine residual blocks of two same-padded
kernel-3 convolutions with an identity skip, global average pooling, and
a dense output layer with softmax.  No batch normalization, no
downsampling: constant width keeps every gradient analytic and testable
against finite differences.

Activations are stored channels-last (batch, length, channels); all
computation is double precision.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ShapeMismatch
from ..features import CLASSES, NormalizationStats


@dataclass(frozen=True)
class ModelConfig:
    input_len: int = 14
    channels: int = 16
    n_residual_blocks: int = 9
    n_classes: int = 5
    kernel: int = 3
    seed: int = 0

    def __post_init__(self):
        if min(self.input_len, self.channels, self.n_residual_blocks,
               self.n_classes) < 1:
            raise ValueError("config dimensions must be positive")
        if self.kernel != 3:
            raise ValueError("only kernel size 3 is supported")

    @property
    def n_weight_layers(self) -> int:
        """Stem + two convolutions per block + dense head (20 at defaults)."""
        return 1 + 2 * self.n_residual_blocks + 1


@dataclass(frozen=True)
class Model:
    """Network weights plus the feature normalization frozen at training."""

    config: ModelConfig
    weights: dict[str, np.ndarray]
    norm_stats: NormalizationStats | None = None

    def __post_init__(self):
        for key, want in weight_shapes(self.config).items():
            if key not in self.weights:
                raise ShapeMismatch(f"missing weight tensor {key}")
            got = self.weights[key].shape
            if got != want:
                raise ShapeMismatch(f"{key}: expected shape {want}, got {got}")
        for key, arr in self.weights.items():
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{key} contains non-finite values")


def weight_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Canonical tensor names and shapes; conv kernels are (tap, in, out)."""
    c, k = config.channels, config.kernel
    shapes: dict[str, tuple[int, ...]] = {
        "stem_w": (k, 1, c), "stem_b": (c,),
    }
    for i in range(config.n_residual_blocks):
        shapes[f"block{i}_conv1_w"] = (k, c, c)
        shapes[f"block{i}_conv1_b"] = (c,)
        shapes[f"block{i}_conv2_w"] = (k, c, c)
        shapes[f"block{i}_conv2_b"] = (c,)
    shapes["dense_w"] = (c, config.n_classes)
    shapes["dense_b"] = (config.n_classes,)
    return shapes


def init_model(config: ModelConfig,
               norm_stats: NormalizationStats | None = None) -> Model:
    """Fan-in-scaled uniform initialization, deterministic from the seed.

    The second convolution of each residual block is damped by
    1/sqrt(n_residual_blocks) so the accumulated skip additions keep
    activation variance bounded without batch normalization.
    """
    rng = np.random.default_rng(config.seed)
    damp = 1.0 / np.sqrt(config.n_residual_blocks)
    weights: dict[str, np.ndarray] = {}
    for key, shape in weight_shapes(config).items():
        if key.endswith("_b"):
            weights[key] = np.zeros(shape)
        else:
            fan_in = int(np.prod(shape[:-1]))
            bound = np.sqrt(6.0 / fan_in)
            if "_conv2_" in key:
                bound *= damp
            weights[key] = rng.uniform(-bound, bound, size=shape)
    return Model(config=config, weights=weights, norm_stats=norm_stats)


# ---------------------------------------------------------------------------
# layer primitives (channels-last)
# ---------------------------------------------------------------------------

def _conv_same(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Same-padded kernel-3 convolution on (batch, length, channels)."""
    batch, length, _ = x.shape
    pad = np.zeros((batch, length + 2, x.shape[2]))
    pad[:, 1:-1, :] = x
    out = pad[:, 0:length, :] @ w[0]
    out += pad[:, 1 : length + 1, :] @ w[1]
    out += pad[:, 2 : length + 2, :] @ w[2]
    return out + b


def _conv_same_backward(x: np.ndarray, w: np.ndarray, dout: np.ndarray
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of :func:`_conv_same` w.r.t. input, kernel and bias."""
    batch, length, _ = x.shape
    pad = np.zeros((batch, length + 2, x.shape[2]))
    pad[:, 1:-1, :] = x
    dw = np.empty_like(w)
    dpad = np.zeros_like(pad)
    for tap in range(3):
        seg = pad[:, tap : tap + length, :]
        dw[tap] = np.einsum("blc,blo->co", seg, dout)
        dpad[:, tap : tap + length, :] += dout @ w[tap].T
    db = dout.sum(axis=(0, 1))
    return dpad[:, 1:-1, :], dw, db


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# forward / backward
# ---------------------------------------------------------------------------

def _forward_internal(m: Model, x: np.ndarray, want_cache: bool):
    cfg = m.config
    if x.ndim != 2 or x.shape[1] != cfg.input_len:
        raise ShapeMismatch(
            f"expected input shape (batch, {cfg.input_len}), got {x.shape}")
    w = m.weights
    act = x[:, :, None]
    cache: dict[str, np.ndarray] = {"input": act}
    z = _conv_same(act, w["stem_w"], w["stem_b"])
    act = np.maximum(z, 0.0)
    if want_cache:
        cache["stem_z"] = z
        cache["stem_out"] = act
    for i in range(cfg.n_residual_blocks):
        z1 = _conv_same(act, w[f"block{i}_conv1_w"], w[f"block{i}_conv1_b"])
        h = np.maximum(z1, 0.0)
        z2 = _conv_same(h, w[f"block{i}_conv2_w"], w[f"block{i}_conv2_b"]) + act
        out = np.maximum(z2, 0.0)
        if want_cache:
            cache[f"block{i}_in"] = act
            cache[f"block{i}_z1"] = z1
            cache[f"block{i}_h"] = h
            cache[f"block{i}_z2"] = z2
        act = out
    pooled = act.mean(axis=1)
    logits = pooled @ w["dense_w"] + w["dense_b"]
    probs = _softmax(logits)
    if want_cache:
        cache["last_act"] = act
        cache["pooled"] = pooled
    return probs, cache


def forward(m: Model, x: np.ndarray) -> np.ndarray:
    """Class probabilities for a batch of already-normalized inputs.

    Args:
        m: Model.
        x: (batch, input_len) array, normalized with ``m.norm_stats``.

    Returns:
        (batch, n_classes) probabilities, each row summing to 1.

    Raises:
        ShapeMismatch: wrong input width.
    """
    probs, _ = _forward_internal(m, np.asarray(x, dtype=np.float64), False)
    return probs


def cross_entropy(probs: np.ndarray, labels: np.ndarray,
                  eps: float = 1e-300) -> float:
    """Mean negative log-likelihood of integer labels."""
    picked = probs[np.arange(labels.size), labels]
    return float(-np.mean(np.log(np.maximum(picked, eps))))


def loss_and_grads(m: Model, x: np.ndarray, labels: np.ndarray
                   ) -> tuple[float, dict[str, np.ndarray]]:
    """Mean softmax cross-entropy and its analytic gradients.

    Backpropagates through every layer; gradient tensors mirror the
    weight tensors exactly.

    Raises:
        ShapeMismatch: wrong input width or label count.
    """
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 1 or labels.size != x.shape[0] or labels.size == 0:
        raise ShapeMismatch("labels must be a non-empty vector matching the batch")
    cfg = m.config
    w = m.weights
    probs, cache = _forward_internal(m, x, True)
    loss = cross_entropy(probs, labels)

    batch = x.shape[0]
    grads: dict[str, np.ndarray] = {}
    dlogits = probs.copy()
    dlogits[np.arange(batch), labels] -= 1.0
    dlogits /= batch

    grads["dense_w"] = cache["pooled"].T @ dlogits
    grads["dense_b"] = dlogits.sum(axis=0)
    dpooled = dlogits @ w["dense_w"].T

    length = cfg.input_len
    dact = np.repeat(dpooled[:, None, :], length, axis=1) / length
    for i in range(cfg.n_residual_blocks - 1, -1, -1):
        dz2 = dact * (cache[f"block{i}_z2"] > 0)
        dh, dw2, db2 = _conv_same_backward(
            cache[f"block{i}_h"], w[f"block{i}_conv2_w"], dz2)
        grads[f"block{i}_conv2_w"] = dw2
        grads[f"block{i}_conv2_b"] = db2
        dz1 = dh * (cache[f"block{i}_z1"] > 0)
        dx_main, dw1, db1 = _conv_same_backward(
            cache[f"block{i}_in"], w[f"block{i}_conv1_w"], dz1)
        grads[f"block{i}_conv1_w"] = dw1
        grads[f"block{i}_conv1_b"] = db1
        dact = dx_main + dz2
    dstem = dact * (cache["stem_z"] > 0)
    _, dw_stem, db_stem = _conv_same_backward(cache["input"], m.weights["stem_w"],
                                              dstem)
    grads["stem_w"] = dw_stem
    grads["stem_b"] = db_stem
    return loss, grads


def clone_with_weights(m: Model, weights: dict[str, np.ndarray]) -> Model:
    return replace(m, weights=weights)


def label_indices(labels) -> np.ndarray:
    """Map class-name labels (or pass through integers) to class indices."""
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if isinstance(lab, (int, np.integer)):
            out[i] = int(lab)
        else:
            out[i] = CLASSES.index(lab)
    return out
