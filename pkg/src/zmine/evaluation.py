"""Classification metrics and the per-year, per-model experiment grid.

Labeling convention, stated once and used everywhere: bankrupt is the
class of interest. The confusion matrix carries four self-describing
counts instead of TP/FP/TN/FN, and the miss rate (type_i_error) is the
fraction of truly bankrupt companies classified as non-bankrupt.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import (
    SENTIMENT_VARIABLE_SETS,
    Dataset,
    FeatureRow,
    feature_vector,
    split_train_test,
)
from .models import TrainingConfig, train
from .models.base import DEFAULT_CLASS_WEIGHTS
from .ratios import Status
from .smote import rebalance_to_fraction

DEFAULT_THRESHOLD = 0.5
SYNTHETIC_ID_PREFIX = "synthetic-"


class LeakageError(AssertionError):
    """A synthetic or training row reached a test partition."""


@dataclass(frozen=True)
class ConfusionMatrix:
    bankrupt_correct: int
    bankrupt_missed: int
    nonbankrupt_correct: int
    nonbankrupt_false_alarm: int

    def __post_init__(self) -> None:
        for name in (
            "bankrupt_correct", "bankrupt_missed",
            "nonbankrupt_correct", "nonbankrupt_false_alarm",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def total(self) -> int:
        return (self.bankrupt_correct + self.bankrupt_missed
                + self.nonbankrupt_correct + self.nonbankrupt_false_alarm)

    def to_dict(self) -> dict:
        return {
            "bankrupt_correct": self.bankrupt_correct,
            "bankrupt_missed": self.bankrupt_missed,
            "nonbankrupt_correct": self.nonbankrupt_correct,
            "nonbankrupt_false_alarm": self.nonbankrupt_false_alarm,
        }


def confusion(
    labels: Sequence[Status],
    probabilities: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
) -> ConfusionMatrix:
    """Tally predictions at the threshold; predicted bankrupt iff p > t."""
    if len(labels) != len(probabilities):
        raise ValueError(
            f"{len(labels)} labels vs {len(probabilities)} probabilities"
        )
    counts = {"bc": 0, "bm": 0, "nc": 0, "nfa": 0}
    for label, probability in zip(labels, probabilities):
        predicted_bankrupt = probability > threshold
        if label is Status.BANKRUPT:
            counts["bc" if predicted_bankrupt else "bm"] += 1
        else:
            counts["nfa" if predicted_bankrupt else "nc"] += 1
    return ConfusionMatrix(
        bankrupt_correct=counts["bc"],
        bankrupt_missed=counts["bm"],
        nonbankrupt_correct=counts["nc"],
        nonbankrupt_false_alarm=counts["nfa"],
    )


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    return (cm.bankrupt_correct + cm.nonbankrupt_correct) / cm.total


def type_i_error(cm: ConfusionMatrix) -> float:
    """Rate of truly bankrupt companies classified as non-bankrupt."""
    bankrupt_total = cm.bankrupt_correct + cm.bankrupt_missed
    if bankrupt_total == 0:
        raise ValueError("no bankrupt rows; miss rate undefined")
    return cm.bankrupt_missed / bankrupt_total


def false_alarm_rate(cm: ConfusionMatrix) -> float:
    """Rate of truly healthy companies classified as bankrupt."""
    healthy_total = cm.nonbankrupt_correct + cm.nonbankrupt_false_alarm
    if healthy_total == 0:
        raise ValueError("no non-bankrupt rows; false alarm rate undefined")
    return cm.nonbankrupt_false_alarm / healthy_total


@dataclass(frozen=True)
class ExperimentConfig:
    years: tuple[int, ...] = (2013, 2014, 2015, 2016)
    models: tuple[str, ...] = ("logistic", "gbm", "mlp")
    sentiment_sets: tuple[str, ...] = ("all",)
    train_fraction: float = 0.7
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD
    smote_k: int = 4
    smote_target_fraction: float = 0.5
    smote_scale: bool = False
    class_weights: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_CLASS_WEIGHTS)
    )
    standardize: bool = True

    def __post_init__(self) -> None:
        for name in self.sentiment_sets:
            if name not in SENTIMENT_VARIABLE_SETS:
                raise ValueError(
                    f"unknown sentiment variable set {name!r}; "
                    f"expected one of {sorted(SENTIMENT_VARIABLE_SETS)}"
                )

    def to_dict(self) -> dict:
        return {
            "years": list(self.years),
            "models": list(self.models),
            "sentiment_sets": list(self.sentiment_sets),
            "train_fraction": self.train_fraction,
            "seed": self.seed,
            "threshold": self.threshold,
            "smote_k": self.smote_k,
            "smote_target_fraction": self.smote_target_fraction,
            "smote_scale": self.smote_scale,
            "class_weights": {str(y): w for y, w in sorted(self.class_weights.items())},
            "standardize": self.standardize,
        }


@dataclass(frozen=True)
class ExperimentReport:
    grid: dict[tuple[int, str, str], dict]
    config: ExperimentConfig
    seed: int

    def cell(self, year: int, model: str, sentiment_set: str) -> dict:
        return self.grid[(year, model, sentiment_set)]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seed": self.seed,
            "grid": {
                f"{year}/{model}/{sset}": cell
                for (year, model, sset), cell in sorted(self.grid.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _cell_seed(base: int, year: int, model: str, sset: str) -> int:
    return base * 1000003 + zlib.crc32(f"{year}/{model}/{sset}".encode())


def check_no_leakage(train_rows: Sequence[FeatureRow],
                     test_rows: Sequence[FeatureRow]) -> None:
    """Assert the test partition saw neither synthetic nor training rows."""
    test_keys = {(row.company_id, row.year) for row in test_rows}
    for key in test_keys:
        if key[0].startswith(SYNTHETIC_ID_PREFIX):
            raise LeakageError(f"synthetic row {key} in test partition")
    train_keys = {(row.company_id, row.year) for row in train_rows}
    overlap = train_keys & test_keys
    if overlap:
        raise LeakageError(f"rows in both partitions: {sorted(overlap)[:5]}")


def _prepare_training(
    train_rows: list[FeatureRow], model_kind: str, config: ExperimentConfig, seed: int
) -> list[FeatureRow]:
    # Imbalance treatment by model: the tree and network models get
    # synthetic minority oversampling, the logistic model keeps its
    # class weights and trains on the raw partition.
    if model_kind == "logistic":
        return train_rows
    return rebalance_to_fraction(
        train_rows,
        config.smote_target_fraction,
        k=config.smote_k,
        seed=seed,
        scale=config.smote_scale,
    )


def evaluate_cell(
    train_rows: list[FeatureRow],
    test_rows: list[FeatureRow],
    model_kind: str,
    sentiment_set: str,
    config: ExperimentConfig,
    seed: int,
) -> dict:
    augmented = _prepare_training(train_rows, model_kind, config, seed)
    check_no_leakage(augmented, test_rows)
    training_config = TrainingConfig(
        class_weights=dict(config.class_weights),
        seed=seed,
        sentiment_variables=sentiment_set,
        standardize=config.standardize,
    )
    model = train(model_kind, augmented, training_config)
    X = np.asarray(
        [feature_vector(row, sentiment_set) for row in test_rows], dtype=float
    )
    probabilities = model.predict_proba(X)
    cm = confusion([row.label for row in test_rows], probabilities, config.threshold)
    return {
        "status": "ok",
        "accuracy": accuracy(cm),
        "type_i_error": type_i_error(cm),
        "false_alarm_rate": false_alarm_rate(cm),
        "confusion": cm.to_dict(),
        "train_rows": len(augmented),
        "synthetic_rows": len(augmented) - len(train_rows),
        "test_rows": len(test_rows),
        "leakage_checked": True,
    }


def run_experiment(dataset: Dataset, config: ExperimentConfig) -> ExperimentReport:
    """Evaluate every (year, model, sentiment set) cell of the grid.

    A cell that raises is recorded with status "failed" and the error
    text; the rest of the grid still runs.
    """
    grid: dict[tuple[int, str, str], dict] = {}
    for year in config.years:
        split_seed = config.seed * 31 + year
        try:
            train_rows, test_rows = split_train_test(
                dataset, year, config.train_fraction, split_seed
            )
        except Exception as exc:
            for model_kind in config.models:
                for sset in config.sentiment_sets:
                    grid[(year, model_kind, sset)] = {
                        "status": "failed", "error": str(exc),
                    }
            continue
        for model_kind in config.models:
            for sset in config.sentiment_sets:
                seed = _cell_seed(config.seed, year, model_kind, sset)
                try:
                    grid[(year, model_kind, sset)] = evaluate_cell(
                        train_rows, test_rows, model_kind, sset, config, seed
                    )
                except Exception as exc:
                    grid[(year, model_kind, sset)] = {
                        "status": "failed", "error": str(exc),
                    }
    return ExperimentReport(grid=grid, config=config, seed=config.seed)


def run_cross_year(
    dataset: Dataset,
    train_year: int,
    test_year: int,
    config: ExperimentConfig,
) -> ExperimentReport:
    """Train on one year's rows, test on another's (no split)."""
    train_rows = dataset.rows_for_year(train_year)
    test_rows = dataset.rows_for_year(test_year)
    if not train_rows or not test_rows:
        raise ValueError(
            f"cross-year run needs rows in both {train_year} and {test_year}"
        )
    grid: dict[tuple[int, str, str], dict] = {}
    for model_kind in config.models:
        for sset in config.sentiment_sets:
            seed = _cell_seed(config.seed, test_year, model_kind, sset)
            try:
                cell = evaluate_cell(
                    list(train_rows), list(test_rows), model_kind, sset, config, seed
                )
                cell["train_year"] = train_year
                cell["test_year"] = test_year
                grid[(test_year, model_kind, sset)] = cell
            except Exception as exc:
                grid[(test_year, model_kind, sset)] = {
                    "status": "failed", "error": str(exc),
                    "train_year": train_year, "test_year": test_year,
                }
    return ExperimentReport(grid=grid, config=config, seed=config.seed)


def render_tables(report: ExperimentReport) -> str:
    """Aligned-text tables, one per metric: rows vary model and variable
    set, columns vary year."""
    years = list(report.config.years)
    combos = [
        (model, sset)
        for model in report.config.models
        for sset in report.config.sentiment_sets
    ]
    blocks = []
    for metric, title in (
        ("accuracy", "Accuracy"),
        ("type_i_error", "Missed-bankruptcy rate"),
        ("false_alarm_rate", "False-alarm rate"),
    ):
        label_width = max(
            [len(f"{model} [{sset}]") for model, sset in combos] + [len("model")]
        )
        header = "model".ljust(label_width) + "".join(
            f"{year:>10}" for year in years
        )
        lines = [title, header, "-" * len(header)]
        for model, sset in combos:
            row = f"{model} [{sset}]".ljust(label_width)
            for year in years:
                cell = report.grid.get((year, model, sset), {})
                if cell.get("status") == "ok":
                    row += f"{cell[metric]:>10.4f}"
                else:
                    row += f"{'failed':>10}"
            lines.append(row)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
