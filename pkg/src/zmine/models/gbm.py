"""Gradient boosting on log-loss with depth-limited regression trees.

Tree structure is fit by least squares on the current residuals; leaf
values take a Newton step (residual sum over curvature sum). Prediction
accumulates learning_rate x leaf value on top of the base log-odds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import math

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

DEFAULT_LEARNING_RATE = 0.2
DEFAULT_STAGES = 100
MAX_DEPTH = 3
MIN_LEAF = 1

# Newton leaf values are capped so a pure region cannot push margins
# out of floating-point range.
MAX_LEAF_VALUE = 20.0

# A split must reduce squared error by more than this to be accepted.
MIN_GAIN = 1e-12


@dataclass(frozen=True)
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        self._fill(X, np.arange(len(X)), out)
        return out

    def _fill(self, X: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
        if self.is_leaf:
            out[idx] = self.value
            return
        goes_left = X[idx, self.feature] <= self.threshold
        self.left._fill(X, idx[goes_left], out)
        self.right._fill(X, idx[~goes_left], out)

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "value" in data:
            return cls(value=float(data["value"]))
        return cls(
            feature=int(data["feature"]),
            threshold=float(data["threshold"]),
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


def _best_split(X: np.ndarray, residual: np.ndarray) -> tuple[int, float, float]:
    """Find (feature, threshold, gain) maximizing SSE reduction.

    Ties keep the first candidate in (feature, threshold) order so tree
    construction is deterministic.
    """
    n = len(residual)
    total = residual.sum()
    baseline = total**2 / n
    best = (-1, 0.0, 0.0)
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        values = X[order, j]
        prefix = np.cumsum(residual[order])
        cuts = np.arange(MIN_LEAF, n - MIN_LEAF + 1)
        if len(cuts) == 0:
            continue
        left_sum = prefix[cuts - 1]
        right_sum = total - left_sum
        gains = left_sum**2 / cuts + right_sum**2 / (n - cuts) - baseline
        # A cut between equal feature values is not realizable.
        gains[values[cuts - 1] == values[cuts]] = -np.inf
        at = int(np.argmax(gains))
        if gains[at] > best[2] + MIN_GAIN:
            cut = int(cuts[at])
            threshold = (values[cut - 1] + values[cut]) / 2.0
            best = (j, float(threshold), float(gains[at]))
    return best


def _fit_tree(
    X: np.ndarray, residual: np.ndarray, hessian: np.ndarray, depth: int
) -> TreeNode:
    if depth >= MAX_DEPTH or len(residual) < 2 * MIN_LEAF:
        return _leaf(residual, hessian)
    feature, threshold, gain = _best_split(X, residual)
    if feature < 0 or gain <= MIN_GAIN:
        return _leaf(residual, hessian)
    goes_left = X[:, feature] <= threshold
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_fit_tree(X[goes_left], residual[goes_left], hessian[goes_left], depth + 1),
        right=_fit_tree(X[~goes_left], residual[~goes_left], hessian[~goes_left], depth + 1),
    )


def _leaf(residual: np.ndarray, hessian: np.ndarray) -> TreeNode:
    value = residual.sum() / max(hessian.sum(), 1e-12)
    return TreeNode(value=float(np.clip(value, -MAX_LEAF_VALUE, MAX_LEAF_VALUE)))


@dataclass(frozen=True)
class GbmModel:
    trees: tuple[TreeNode, ...]
    learning_rate: float
    base_score: float
    standardizer: Standardizer
    feature_names: list[str]
    training_loss: tuple[float, ...]

    @property
    def kind(self) -> str:
        return "gbm"

    def decision_margin(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        check_dimension(len(self.feature_names), X.shape[1])
        Xs = self.standardizer.transform(X)
        margin = np.full(len(Xs), self.base_score)
        for tree in self.trees:
            margin += self.learning_rate * tree.predict(Xs)
        return margin

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return clip_proba(sigmoid(self.decision_margin(X)))

    def predict_proba_one(self, features: Sequence[float]) -> float:
        return float(self.predict_proba(np.asarray(features, dtype=float))[0])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "trees": [tree.to_dict() for tree in self.trees],
            "learning_rate": self.learning_rate,
            "base_score": self.base_score,
            "standardizer": self.standardizer.to_dict(),
            "feature_names": list(self.feature_names),
            "training_loss": list(self.training_loss),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbmModel":
        return cls(
            trees=tuple(TreeNode.from_dict(t) for t in data["trees"]),
            learning_rate=float(data["learning_rate"]),
            base_score=float(data["base_score"]),
            standardizer=Standardizer.from_dict(data["standardizer"]),
            feature_names=list(data["feature_names"]),
            training_loss=tuple(data.get("training_loss", [])),
        )


def train_gbm(
    rows: Sequence[FeatureRow], config: TrainingConfig | None = None
) -> GbmModel:
    """Boost from the log-odds of the training positive rate.

    The per-stage training loss is recorded on the model; it must never
    increase from one stage to the next.
    """
    config = config or TrainingConfig()
    X_raw, y, _, names = design_matrix(rows, config.sentiment_variables)
    require_both_classes(y)
    standardizer = (
        Standardizer.fit(X_raw) if config.standardize
        else Standardizer.identity(X_raw.shape[1])
    )
    X = standardizer.transform(X_raw)

    learning_rate = config.learning_rate or DEFAULT_LEARNING_RATE
    stages = DEFAULT_STAGES if config.epochs is None else config.epochs
    positive_rate = float(y.mean())
    base_score = math.log(positive_rate / (1.0 - positive_rate))
    margin = np.full(len(y), base_score)
    losses = [log_loss_from_margin(margin, y)]
    trees = []
    for _ in range(stages):
        p = sigmoid(margin)
        tree = _fit_tree(X, y - p, p * (1.0 - p), depth=0)
        margin = margin + learning_rate * tree.predict(X)
        loss = log_loss_from_margin(margin, y)
        if not np.isfinite(loss):
            raise DivergenceError(
                f"boosting diverged at learning rate {learning_rate}"
            )
        trees.append(tree)
        losses.append(loss)
    return GbmModel(
        trees=tuple(trees),
        learning_rate=learning_rate,
        base_score=base_score,
        standardizer=standardizer,
        feature_names=names,
        training_loss=tuple(losses),
    )
