"""Bankruptcy classifiers built from first principles on numpy."""

from .base import (
    DEFAULT_CLASS_WEIGHTS,
    DimensionError,
    DivergenceError,
    SingleClassError,
    Standardizer,
    TrainingConfig,
    load_model,
    save_model,
)
from .gbm import GbmModel, TreeNode, train_gbm
from .gradcheck import numeric_gradient_check
from .logistic import LogisticModel, train_logistic
from .mlp import MlpModel, train_mlp

TRAINERS = {
    "logistic": train_logistic,
    "gbm": train_gbm,
    "mlp": train_mlp,
}


def train(kind: str, rows, config: TrainingConfig | None = None):
    try:
        trainer = TRAINERS[kind]
    except KeyError:
        raise ValueError(
            f"unknown model kind {kind!r}; expected one of {sorted(TRAINERS)}"
        ) from None
    return trainer(rows, config)


__all__ = [
    "DEFAULT_CLASS_WEIGHTS",
    "DimensionError",
    "DivergenceError",
    "GbmModel",
    "LogisticModel",
    "MlpModel",
    "SingleClassError",
    "Standardizer",
    "TrainingConfig",
    "TreeNode",
    "TRAINERS",
    "load_model",
    "numeric_gradient_check",
    "save_model",
    "train",
    "train_gbm",
    "train_logistic",
    "train_mlp",
]
