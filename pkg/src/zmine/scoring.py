"""Company score table: model probabilities plus the flag decision.

A company is flagged when its probability strictly exceeds the
threshold (default 0.98); at exactly the threshold it is not flagged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .dataset import Dataset
from .models.base import SERIALIZATION_VERSION

DEFAULT_FLAG_THRESHOLD = 0.98


@dataclass(frozen=True)
class ScoreEntry:
    company_id: str
    year: int
    sector: str
    z: float
    z_prime: float
    positive_pct: float
    negative_pct: float
    pos_to_neg: float
    probability: float
    flagged: bool

    def to_dict(self) -> dict:
        return {
            "company_id": self.company_id,
            "year": self.year,
            "sector": self.sector,
            "z": self.z,
            "z_prime": self.z_prime,
            "positive_pct": self.positive_pct,
            "negative_pct": self.negative_pct,
            "pos_to_neg": self.pos_to_neg,
            "probability": self.probability,
            "flagged": self.flagged,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreEntry":
        return cls(
            company_id=data["company_id"],
            year=int(data["year"]),
            sector=data["sector"],
            z=float(data["z"]),
            z_prime=float(data["z_prime"]),
            positive_pct=float(data["positive_pct"]),
            negative_pct=float(data["negative_pct"]),
            pos_to_neg=float(data["pos_to_neg"]),
            probability=float(data["probability"]),
            flagged=bool(data["flagged"]),
        )


@dataclass(frozen=True)
class ScoreTable:
    entries: tuple[ScoreEntry, ...]
    model_version: str
    threshold: float = DEFAULT_FLAG_THRESHOLD

    def flagged_entries(self) -> list[ScoreEntry]:
        return [entry for entry in self.entries if entry.flagged]

    def to_dict(self) -> dict:
        return {
            "model_version": self.model_version,
            "threshold": self.threshold,
            "entries": [entry.to_dict() for entry in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreTable":
        return cls(
            entries=tuple(ScoreEntry.from_dict(e) for e in data["entries"]),
            model_version=data["model_version"],
            threshold=float(data["threshold"]),
        )


def is_flagged(probability: float, threshold: float = DEFAULT_FLAG_THRESHOLD) -> bool:
    return probability > threshold


def score_companies(
    model, dataset: Dataset, threshold: float = DEFAULT_FLAG_THRESHOLD
) -> ScoreTable:
    """Score every dataset row with the model's own feature selection."""
    entries = []
    seen: set[tuple[str, int]] = set()
    for row in dataset.rows:
        key = (row.company_id, row.year)
        if key in seen:
            raise ValueError(f"duplicate company-year {key} in dataset")
        seen.add(key)
        features = [getattr(row, name) for name in model.feature_names]
        probability = model.predict_proba_one(features)
        entries.append(ScoreEntry(
            company_id=row.company_id,
            year=row.year,
            sector=row.sector_keyword,
            z=row.z,
            z_prime=row.z_prime,
            positive_pct=row.positive_pct,
            negative_pct=row.negative_pct,
            pos_to_neg=row.pos_to_neg,
            probability=probability,
            flagged=is_flagged(probability, threshold),
        ))
    return ScoreTable(
        entries=tuple(entries),
        model_version=f"{model.kind}-v{SERIALIZATION_VERSION}",
        threshold=threshold,
    )


def write_score_table(path: str | Path, table: ScoreTable) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(table.to_dict(), indent=2), encoding="utf-8")


def read_score_table(path: str | Path) -> ScoreTable:
    return ScoreTable.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
