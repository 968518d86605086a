"""Class-weighted logistic regression trained by full-batch gradient descent."""

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
    sample_weights,
    sigmoid,
)

DEFAULT_LEARNING_RATE = 0.1
DEFAULT_EPOCHS = 500


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    bias: float
    class_weights: dict[int, float]
    standardizer: Standardizer
    feature_names: list[str]
    final_loss: float

    @property
    def kind(self) -> str:
        return "logistic"

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        check_dimension(len(self.weights), X.shape[1])
        z = self.standardizer.transform(X) @ self.weights + self.bias
        return clip_proba(sigmoid(z))

    def predict_proba_one(self, features: Sequence[float]) -> float:
        return float(self.predict_proba(np.asarray(features, dtype=float))[0])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "class_weights": {str(y): w for y, w in self.class_weights.items()},
            "standardizer": self.standardizer.to_dict(),
            "feature_names": list(self.feature_names),
            "final_loss": self.final_loss,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LogisticModel":
        return cls(
            weights=np.asarray(data["weights"], dtype=float),
            bias=float(data["bias"]),
            class_weights={int(y): float(w) for y, w in data["class_weights"].items()},
            standardizer=Standardizer.from_dict(data["standardizer"]),
            feature_names=list(data["feature_names"]),
            final_loss=float(data.get("final_loss", float("nan"))),
        )


def loss_and_gradient(
    weights: np.ndarray,
    bias: float,
    X: np.ndarray,
    y: np.ndarray,
    row_weights: np.ndarray,
) -> tuple[float, np.ndarray, float]:
    """Weighted mean cross-entropy and its analytic gradient."""
    z = X @ weights + bias
    loss = log_loss_from_margin(z, y, row_weights)
    residual = row_weights * (sigmoid(z) - y)
    grad_w = X.T @ residual / len(y)
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b


def train_logistic(
    rows: Sequence[FeatureRow], config: TrainingConfig | None = None
) -> LogisticModel:
    """Minimize weighted cross-entropy from zero-initialized parameters.

    Bankrupt rows carry their year's class weight; the run stops at the
    epoch limit or when the gradient norm drops under the tolerance.
    """
    config = config or TrainingConfig()
    X_raw, y, years, names = design_matrix(rows, config.sentiment_variables)
    require_both_classes(y)
    standardizer = (
        Standardizer.fit(X_raw) if config.standardize
        else Standardizer.identity(X_raw.shape[1])
    )
    X = standardizer.transform(X_raw)
    row_weights = sample_weights(y, years, config.class_weights)

    learning_rate = config.learning_rate or DEFAULT_LEARNING_RATE
    epochs = DEFAULT_EPOCHS if config.epochs is None else config.epochs
    weights = np.zeros(X.shape[1])
    bias = 0.0
    loss = log_loss_from_margin(X @ weights + bias, y, row_weights)
    # overflow inside an epoch surfaces as a non-finite loss and is
    # reported as divergence, so the element-wise warnings are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(epochs):
            loss, grad_w, grad_b = loss_and_gradient(weights, bias, X, y, row_weights)
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"logistic training diverged at learning rate {learning_rate}"
                )
            gradient_norm = float(np.sqrt(np.sum(grad_w**2) + grad_b**2))
            if gradient_norm < config.tolerance:
                break
            weights -= learning_rate * grad_w
            bias -= learning_rate * grad_b
    return LogisticModel(
        weights=weights,
        bias=bias,
        class_weights=dict(config.class_weights),
        standardizer=standardizer,
        feature_names=names,
        final_loss=float(loss),
    )
