"""
Minibatch SGD for logistic regression and ReLU perceptrons.

Loss is mean binary cross-entropy plus (l2 / 2) * ||W||^2 over weight
matrices (biases are not penalised). The step size decays as
lr / sqrt(epoch + 1).
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import expit

logger = logging.getLogger(__name__)

Layer = Tuple[np.ndarray, np.ndarray]


class TrainingError(RuntimeError):
    """Training diverged or could not run; `index` names the ensemble member."""

    def __init__(self, message: str, index: Optional[int] = None):
        prefix = f"model {index}: " if index is not None else ""
        super().__init__(prefix + message)
        self.index = index


def log_odds(labels: np.ndarray, clip: float = 1e-3) -> float:
    """logit of the positive rate, clipped away from 0 and 1."""
    rate = float(np.clip(np.mean(labels), clip, 1.0 - clip))
    return float(np.log(rate / (1.0 - rate)))


def init_layers(widths: List[int], rng: np.random.Generator,
                output_bias: float = 0.0) -> List[Layer]:
    """Zeros for a single linear layer, He-normal weights otherwise.

    The output bias starts at `output_bias`, normally the label log-odds.
    """
    if len(widths) == 2:
        return [(np.zeros((widths[0], widths[1])), np.full(widths[1], output_bias))]
    layers = []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        scale = np.sqrt(2.0 / fan_in)
        layers.append((rng.normal(0.0, scale, size=(fan_in, fan_out)), np.zeros(fan_out)))
    layers[-1][1][:] = output_bias
    return layers


def forward(layers: List[Layer], features: np.ndarray) -> np.ndarray:
    """Output-layer logit for every row."""
    act = features
    for W, b in layers[:-1]:
        act = np.maximum(act @ W + b, 0.0)
    W, b = layers[-1]
    return (act @ W + b)[:, 0]


def _step(layers: List[Layer], xb: np.ndarray, yb: np.ndarray, lr: float, l2: float) -> None:
    acts = [xb]
    pre = []
    for W, b in layers[:-1]:
        z = acts[-1] @ W + b
        pre.append(z)
        acts.append(np.maximum(z, 0.0))
    W_out, b_out = layers[-1]
    logit = acts[-1] @ W_out + b_out
    delta = (expit(logit[:, 0]) - yb)[:, None] / xb.shape[0]

    for i in range(len(layers) - 1, -1, -1):
        W, b = layers[i]
        grad_W = acts[i].T @ delta + l2 * W
        grad_b = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ W.T) * (pre[i - 1] > 0)
        W -= lr * grad_W
        b -= lr * grad_b


def cross_entropy(layers: List[Layer], features: np.ndarray, labels: np.ndarray) -> float:
    logits = forward(layers, features)
    # log(1 + e^z) - y z, computed stably
    return float(np.mean(np.logaddexp(0.0, logits) - labels * logits))


def fit(layers: List[Layer], features: np.ndarray, labels: np.ndarray, *, learning_rate: float,
        epochs: int, batch_size: int, l2: float, rng: np.random.Generator) -> List[Layer]:
    """Run SGD in place and return the layers."""
    n = features.shape[0]
    labels = labels.astype(float)
    for epoch in range(epochs):
        lr = learning_rate / np.sqrt(epoch + 1.0)
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            _step(layers, features[batch], labels[batch], lr, l2)
        if not all(np.all(np.isfinite(W)) and np.all(np.isfinite(b)) for W, b in layers):
            raise TrainingError(f"parameters became non-finite at epoch {epoch}")
    loss = cross_entropy(layers, features, labels)
    if not np.isfinite(loss):
        raise TrainingError("training loss is NaN")
    logger.debug(f"SGD finished: n={n}, epochs={epochs}, loss={loss:.4f}")
    return layers
