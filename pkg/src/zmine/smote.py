"""Synthetic minority oversampling along nearest-neighbour segments.

New points are built by picking a random minority parent, one of its k
nearest minority neighbours, and a uniform position on the line segment
between them. Everything is driven by one seeded generator, so a run is
a pure function of (data, config).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .dataset import FeatureRow
from .ratios import Status

Vector = tuple[float, ...]


class InsufficientMinorityError(ValueError):
    """Not enough minority points for the requested neighbour count."""


@dataclass(frozen=True)
class SmoteConfig:
    k: int = 4
    amount: int = 0
    seed: int = 0
    scale: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.amount < 0:
            raise ValueError(f"amount must be >= 0, got {self.amount}")


@dataclass(frozen=True)
class SyntheticPoint:
    features: Vector
    parent_index: int
    neighbour_index: int
    lam: float


def _check_dimensions(points: Sequence[Sequence[float]]) -> None:
    if not points:
        return
    width = len(points[0])
    for i, point in enumerate(points):
        if len(point) != width:
            raise ValueError(
                f"dimension mismatch: point 0 has {width} features, "
                f"point {i} has {len(point)}"
            )


def k_nearest_minority(
    points: Sequence[Sequence[float]], index: int, k: int
) -> list[int]:
    """Indices of the k nearest points to points[index], excluding itself.

    Euclidean distance; ties resolve to the lower index.
    """
    if k >= len(points):
        raise ValueError(f"k={k} requires more than {len(points)} points")
    _check_dimensions(points)
    anchor = points[index]
    ranked = sorted(
        (i for i in range(len(points)) if i != index),
        key=lambda i: (math.dist(anchor, points[i]), i),
    )
    return ranked[:k]


def _min_max_scaled(points: Sequence[Sequence[float]]) -> list[Vector]:
    width = len(points[0])
    lows = [min(p[j] for p in points) for j in range(width)]
    highs = [max(p[j] for p in points) for j in range(width)]
    spans = [hi - lo if hi > lo else 1.0 for lo, hi in zip(lows, highs)]
    return [
        tuple((p[j] - lows[j]) / spans[j] for j in range(width)) for p in points
    ]


def smote(
    minority: Sequence[Sequence[float]], config: SmoteConfig
) -> list[SyntheticPoint]:
    """Generate config.amount synthetic minority points."""
    if config.amount == 0:
        return []
    if len(minority) <= config.k:
        raise InsufficientMinorityError(
            f"SMOTE with k={config.k} needs more than {config.k} minority "
            f"points, got {len(minority)}"
        )
    _check_dimensions(minority)
    # Scaling affects only which points count as neighbours; the
    # interpolation itself stays in raw feature space.
    distance_space = _min_max_scaled(minority) if config.scale else minority
    neighbour_cache: dict[int, list[int]] = {}
    rng = random.Random(config.seed)
    points = []
    for _ in range(config.amount):
        parent = rng.randrange(len(minority))
        neighbours = neighbour_cache.get(parent)
        if neighbours is None:
            neighbours = k_nearest_minority(distance_space, parent, config.k)
            neighbour_cache[parent] = neighbours
        neighbour = neighbours[rng.randrange(config.k)]
        lam = rng.random()
        features = tuple(
            p + lam * (q - p)
            for p, q in zip(minority[parent], minority[neighbour])
        )
        points.append(SyntheticPoint(
            features=features,
            parent_index=parent,
            neighbour_index=neighbour,
            lam=lam,
        ))
    return points


def amount_for_target_fraction(
    minority_count: int, majority_count: int, target_fraction: float
) -> int:
    """Synthetic points needed to lift the minority share to the target.

    Solves (m + s) / (m + M + s) = f for s; 5/95 at f=0.5 gives 90.
    Returns 0 when the minority already meets the target.
    """
    if not 0 < target_fraction < 1:
        raise ValueError(f"target fraction must be in (0, 1), got {target_fraction}")
    f = Fraction(str(target_fraction))
    s = (f * (minority_count + majority_count) - minority_count) / (1 - f)
    return max(0, math.ceil(s))


# FeatureRow fields interpolated when rebalancing training rows.
REBALANCE_FEATURES = [
    "a", "b", "c", "d", "d_prime", "e", "z", "z_prime",
    "negative_pct", "positive_pct", "pos_to_neg",
]


def rebalance(rows: Sequence[FeatureRow], config: SmoteConfig) -> list[FeatureRow]:
    """Append synthetic bankrupt rows built from the bankrupt rows.

    All numeric columns, sentiment included, are interpolated the same
    way. amount=0 returns the input unchanged.
    """
    if config.amount == 0:
        return list(rows)
    bankrupt = [row for row in rows if row.label is Status.BANKRUPT]
    if not bankrupt or len(bankrupt) == len(rows):
        raise ValueError("rebalance needs rows of both classes")
    vectors = [
        tuple(getattr(row, name) for name in REBALANCE_FEATURES)
        for row in bankrupt
    ]
    synthetic = smote(vectors, config)
    augmented = list(rows)
    for i, point in enumerate(synthetic):
        parent = bankrupt[point.parent_index]
        values = dict(zip(REBALANCE_FEATURES, point.features))
        augmented.append(replace(
            parent,
            company_id=f"synthetic-{i}",
            label=Status.BANKRUPT,
            **values,
        ))
    return augmented


def rebalance_to_fraction(
    rows: Sequence[FeatureRow],
    target_fraction: float,
    k: int = 4,
    seed: int = 0,
    scale: bool = False,
) -> list[FeatureRow]:
    bankrupt = sum(1 for row in rows if row.label is Status.BANKRUPT)
    amount = amount_for_target_fraction(bankrupt, len(rows) - bankrupt, target_fraction)
    config = SmoteConfig(k=k, amount=amount, seed=seed, scale=scale)
    return rebalance(rows, config)
