"""Two-hidden-layer perceptron trained by full-batch backpropagation.

The architecture is fixed at two hidden layers of six rectified-linear
units with a sigmoid output; weights start uniform in [-r, r] with
r = sqrt(6 / (fan_in + fan_out)) from a seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dataset import FeatureRow
from .base import (
    DivergenceError,
    Standardizer,
    TrainingConfig,
    check_dimension,
    clip_proba,
    design_matrix,
    log_loss_from_margin,
    require_both_classes,
    sigmoid,
)

DEFAULT_LEARNING_RATE = 0.01
DEFAULT_EPOCHS = 500
HIDDEN_UNITS = (6, 6)

Params = tuple[np.ndarray, ...]


def init_params(input_dim: int, seed: int) -> Params:
    """Glorot-uniform weight matrices, zero biases, in layer order."""
    rng = np.random.default_rng(seed)
    shapes = [
        (input_dim, HIDDEN_UNITS[0]),
        (HIDDEN_UNITS[0], HIDDEN_UNITS[1]),
        (HIDDEN_UNITS[1], 1),
    ]
    params: list[np.ndarray] = []
    for fan_in, fan_out in shapes:
        r = np.sqrt(6.0 / (fan_in + fan_out))
        params.append(rng.uniform(-r, r, size=(fan_in, fan_out)))
        params.append(np.zeros(fan_out))
    return tuple(params)


def _forward(params: Params, X: np.ndarray):
    W1, b1, W2, b2, W3, b3 = params
    h1 = np.maximum(X @ W1 + b1, 0.0)
    h2 = np.maximum(h1 @ W2 + b2, 0.0)
    z = (h2 @ W3 + b3).ravel()
    return h1, h2, z


def loss_and_gradients(params: Params, X: np.ndarray, y: np.ndarray):
    """Mean cross-entropy and analytic gradients for every parameter."""
    W1, b1, W2, b2, W3, b3 = params
    h1, h2, z = _forward(params, X)
    loss = log_loss_from_margin(z, y)
    dz = (sigmoid(z) - y)[:, None] / len(y)
    gW3 = h2.T @ dz
    gb3 = dz.sum(axis=0)
    d2 = (dz @ W3.T) * (h2 > 0)
    gW2 = h1.T @ d2
    gb2 = d2.sum(axis=0)
    d1 = (d2 @ W2.T) * (h1 > 0)
    gW1 = X.T @ d1
    gb1 = d1.sum(axis=0)
    return loss, (gW1, gb1, gW2, gb2, gW3, gb3)


@dataclass(frozen=True)
class MlpModel:
    layer_weights: tuple[np.ndarray, np.ndarray, np.ndarray]
    layer_biases: tuple[np.ndarray, np.ndarray, np.ndarray]
    activation: str
    standardizer: Standardizer
    feature_names: list[str]
    final_loss: float

    @property
    def kind(self) -> str:
        return "mlp"

    def _params(self) -> Params:
        W1, W2, W3 = self.layer_weights
        b1, b2, b3 = self.layer_biases
        return (W1, b1, W2, b2, W3, b3)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        check_dimension(self.layer_weights[0].shape[0], X.shape[1])
        _, _, z = _forward(self._params(), self.standardizer.transform(X))
        return clip_proba(sigmoid(z))

    def predict_proba_one(self, features: Sequence[float]) -> float:
        return float(self.predict_proba(np.asarray(features, dtype=float))[0])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "layer_weights": [W.tolist() for W in self.layer_weights],
            "layer_biases": [b.tolist() for b in self.layer_biases],
            "activation": self.activation,
            "standardizer": self.standardizer.to_dict(),
            "feature_names": list(self.feature_names),
            "final_loss": self.final_loss,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MlpModel":
        return cls(
            layer_weights=tuple(np.asarray(W, dtype=float) for W in data["layer_weights"]),
            layer_biases=tuple(np.asarray(b, dtype=float) for b in data["layer_biases"]),
            activation=data.get("activation", "relu-relu-sigmoid"),
            standardizer=Standardizer.from_dict(data["standardizer"]),
            feature_names=list(data["feature_names"]),
            final_loss=float(data.get("final_loss", float("nan"))),
        )


def train_mlp(
    rows: Sequence[FeatureRow], config: TrainingConfig | None = None
) -> MlpModel:
    config = config or TrainingConfig()
    X_raw, y, _, names = design_matrix(rows, config.sentiment_variables)
    require_both_classes(y)
    standardizer = (
        Standardizer.fit(X_raw) if config.standardize
        else Standardizer.identity(X_raw.shape[1])
    )
    X = standardizer.transform(X_raw)

    learning_rate = config.learning_rate or DEFAULT_LEARNING_RATE
    epochs = DEFAULT_EPOCHS if config.epochs is None else config.epochs
    params = list(init_params(X.shape[1], config.seed))
    loss = log_loss_from_margin(_forward(tuple(params), X)[2], y)
    # overflow inside an epoch surfaces as a non-finite loss and is
    # reported as divergence, so the element-wise warnings are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(epochs):
            loss, grads = loss_and_gradients(tuple(params), X, y)
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"network training diverged at learning rate {learning_rate}"
                )
            gradient_norm = float(np.sqrt(sum(np.sum(g**2) for g in grads)))
            if gradient_norm < config.tolerance:
                break
            for i, grad in enumerate(grads):
                params[i] = params[i] - learning_rate * grad
    W1, b1, W2, b2, W3, b3 = params
    return MlpModel(
        layer_weights=(W1, W2, W3),
        layer_biases=(b1, b2, b3),
        activation="relu-relu-sigmoid",
        standardizer=standardizer,
        feature_names=names,
        final_loss=float(loss),
    )
