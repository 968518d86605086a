"""Finite-difference verification of the analytic training gradients."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..dataset import FeatureRow
from .base import DEFAULT_CLASS_WEIGHTS, design_matrix, sample_weights
from .logistic import loss_and_gradient
from .mlp import init_params, loss_and_gradients

STEP = 1e-6


def max_relative_deviation(
    loss_fn: Callable[[np.ndarray], float],
    point: np.ndarray,
    analytic: np.ndarray,
) -> float:
    """Compare an analytic gradient against central differences at point."""
    worst = 0.0
    for i in range(len(point)):
        bumped = point.copy()
        bumped[i] = point[i] + STEP
        upper = loss_fn(bumped)
        bumped[i] = point[i] - STEP
        lower = loss_fn(bumped)
        numeric = (upper - lower) / (2.0 * STEP)
        scale = max(abs(analytic[i]) + abs(numeric), 1e-8)
        worst = max(worst, abs(analytic[i] - numeric) / scale)
    return worst


def numeric_gradient_check(
    kind: str, rows: Sequence[FeatureRow], seed: int = 0
) -> float:
    """Max relative gradient deviation at a seeded random parameter point."""
    X, y, years, _ = design_matrix(rows)
    if kind == "logistic":
        rng = np.random.default_rng(seed)
        weights = rng.uniform(-0.5, 0.5, X.shape[1])
        bias = float(rng.uniform(-0.5, 0.5))
        row_weights = sample_weights(y, years, DEFAULT_CLASS_WEIGHTS)
        _, grad_w, grad_b = loss_and_gradient(weights, bias, X, y, row_weights)
        analytic = np.concatenate([grad_w, [grad_b]])
        point = np.concatenate([weights, [bias]])

        def loss_fn(flat: np.ndarray) -> float:
            loss, _, _ = loss_and_gradient(flat[:-1], float(flat[-1]), X, y, row_weights)
            return loss

        return max_relative_deviation(loss_fn, point, analytic)

    if kind == "mlp":
        params = init_params(X.shape[1], seed)
        shapes = [p.shape for p in params]
        sizes = [p.size for p in params]
        _, grads = loss_and_gradients(params, X, y)
        analytic = np.concatenate([g.ravel() for g in grads])
        point = np.concatenate([p.ravel() for p in params])

        def loss_fn(flat: np.ndarray) -> float:
            rebuilt = []
            at = 0
            for shape, size in zip(shapes, sizes):
                rebuilt.append(flat[at:at + size].reshape(shape))
                at += size
            loss, _ = loss_and_gradients(tuple(rebuilt), X, y)
            return loss

        return max_relative_deviation(loss_fn, point, analytic)

    raise ValueError(f"unknown model kind {kind!r}; expected 'logistic' or 'mlp'")
