"""Shared training plumbing: configs, standardization, serialization.

All three classifiers consume feature rows through the same path: select
the configured feature columns, validate finiteness, optionally
standardize with train-set statistics that are stored on the model, and
emit probabilities clipped to the open interval (0, 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..dataset import FeatureRow, feature_names, feature_vector
from ..ratios import Status

SERIALIZATION_FORMAT = "zmine-model"
SERIALIZATION_VERSION = 1

# Probabilities are kept strictly inside (0, 1).
PROB_EPS = 1e-12

DEFAULT_CLASS_WEIGHTS = {2013: 9.78, 2014: 9.78, 2015: 20.0, 2016: 14.0}


class SingleClassError(ValueError):
    """Training data must contain both classes."""


class DivergenceError(RuntimeError):
    """Training loss became non-finite."""


class DimensionError(ValueError):
    """Feature vector width does not match the model."""


@dataclass(frozen=True)
class TrainingConfig:
    """Knobs shared by the trainers; None picks the per-model default.

    learning_rate defaults: logistic 0.1, boosted trees 0.2, neural net
    0.01. epochs doubles as the boosting stage count (default 500 for
    the gradient-descent models, 100 stages for boosting).
    """

    class_weights: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_CLASS_WEIGHTS)
    )
    learning_rate: float | None = None
    epochs: int | None = None
    seed: int = 0
    tolerance: float = 1e-8
    sentiment_variables: str = "all"
    standardize: bool = True

    def __post_init__(self) -> None:
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs is not None and self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        for year, weight in self.class_weights.items():
            if weight <= 0:
                raise ValueError(f"class weight for {year} must be positive, got {weight}")

    def to_dict(self) -> dict:
        return {
            "class_weights": {str(y): w for y, w in self.class_weights.items()},
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "sentiment_variables": self.sentiment_variables,
            "standardize": self.standardize,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainingConfig":
        return cls(
            class_weights={int(y): float(w) for y, w in data["class_weights"].items()},
            learning_rate=data.get("learning_rate"),
            epochs=data.get("epochs"),
            seed=int(data.get("seed", 0)),
            tolerance=float(data.get("tolerance", 1e-8)),
            sentiment_variables=data.get("sentiment_variables", "all"),
            standardize=bool(data.get("standardize", True)),
        )


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        # Constant columns pass through unscaled instead of dividing by 0.
        std = np.where(std > 0, std, 1.0)
        return cls(mean=mean, std=std)

    @classmethod
    def identity(cls, width: int) -> "Standardizer":
        return cls(mean=np.zeros(width), std=np.ones(width))

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Standardizer":
        return cls(mean=np.asarray(data["mean"], dtype=float),
                   std=np.asarray(data["std"], dtype=float))


def design_matrix(
    rows: Sequence[FeatureRow], sentiment_set: str = "all"
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    """Rows -> (features, labels, years, feature names); bankrupt = 1."""
    if not rows:
        raise ValueError("no training rows")
    names = feature_names(sentiment_set)
    X = np.asarray([feature_vector(row, sentiment_set) for row in rows], dtype=float)
    y = np.asarray(
        [1.0 if row.label is Status.BANKRUPT else 0.0 for row in rows], dtype=float
    )
    years = np.asarray([row.year for row in rows], dtype=int)
    if not np.isfinite(X).all():
        raise ValueError("non-finite feature values in training rows")
    return X, y, years, names


def require_both_classes(y: np.ndarray) -> None:
    if y.min() == y.max():
        label = "bankrupt" if y.min() == 1.0 else "non-bankrupt"
        raise SingleClassError(f"training rows are all {label}; need both classes")


def sample_weights(
    y: np.ndarray, years: np.ndarray, class_weights: dict[int, float]
) -> np.ndarray:
    """Per-row weights: the year's positive-class weight for bankrupt rows."""
    weights = np.ones_like(y)
    for i in range(len(y)):
        if y[i] == 1.0:
            weights[i] = class_weights.get(int(years[i]), 1.0)
    return weights


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def clip_proba(p: np.ndarray) -> np.ndarray:
    return np.clip(p, PROB_EPS, 1.0 - PROB_EPS)


def log_loss_from_margin(
    z: np.ndarray, y: np.ndarray, weights: np.ndarray | None = None
) -> float:
    """Mean binary cross-entropy, computed stably from the pre-sigmoid margin."""
    per_row = np.logaddexp(0.0, z) - y * z
    if weights is not None:
        per_row = weights * per_row
    return float(per_row.mean())


def check_dimension(expected: int, got: int) -> None:
    if expected != got:
        raise DimensionError(f"model expects {expected} features, got {got}")


def save_model(path: str | Path, model) -> None:
    document = model.to_dict()
    document["format"] = SERIALIZATION_FORMAT
    document["version"] = SERIALIZATION_VERSION
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2), encoding="utf-8")


def load_model(path: str | Path):
    from .gbm import GbmModel
    from .logistic import LogisticModel
    from .mlp import MlpModel

    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if document.get("format") != SERIALIZATION_FORMAT:
        raise ValueError(f"{path}: not a model document")
    if document.get("version") != SERIALIZATION_VERSION:
        raise ValueError(f"{path}: unsupported model version {document.get('version')}")
    kinds = {"logistic": LogisticModel, "gbm": GbmModel, "mlp": MlpModel}
    kind = document.get("kind")
    if kind not in kinds:
        raise ValueError(f"{path}: unknown model kind {kind!r}")
    return kinds[kind].from_dict(document)
