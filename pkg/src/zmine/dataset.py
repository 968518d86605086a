"""Sector mapping, feature assembly, imbalance stats, and train/test splits.

Financial records carry pseudonymised sector codes while news sentiment is
keyed by sector keyword, so a code-to-keyword mapping is the join key. The
sentiment triple varies only by (sector, year) and is replicated onto every
company row in that group.
"""

from __future__ import annotations

import csv
import enum
import math
import random
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .ratios import Exclusion, ScoredRecord, Status, z_original
from .sentiment import SentimentScore


class MappingError(ValueError):
    """Sector mapping cannot be constructed as requested."""


class EmptyDatasetError(ValueError):
    """The join produced no feature rows."""


class StratificationError(ValueError):
    """A split needs at least one row of each class."""


class MappingSource(str, enum.Enum):
    RANDOM = "Random"
    EXPLICIT = "Explicit"


@dataclass(frozen=True)
class SectorMapping:
    """Bijection from 4 sector codes to 4 news keywords."""

    pairs: dict[str, str]
    seed: int
    source: MappingSource

    def __post_init__(self) -> None:
        if len(self.pairs) != 4:
            raise MappingError(f"mapping needs exactly 4 pairs, got {len(self.pairs)}")
        if len(set(self.pairs.values())) != 4:
            raise MappingError("mapping must be bijective: duplicate keywords")

    def keyword(self, sector_code: str) -> str | None:
        return self.pairs.get(sector_code)


@dataclass(frozen=True)
class FeatureRow:
    """One company-year observation joined with its group sentiment."""

    company_id: str
    year: int
    a: float
    b: float
    c: float
    d: float
    d_prime: float
    e: float
    z: float
    z_prime: float
    negative_pct: float
    positive_pct: float
    pos_to_neg: float
    label: Status
    sector_code: str = ""
    sector_keyword: str = ""


# Numeric feature columns in model input order. Sentiment columns are
# appended according to the configured variable set.
FINANCIAL_FEATURES = ["a", "b", "c", "d", "d_prime", "e", "z", "z_prime"]

SENTIMENT_VARIABLE_SETS: dict[str, list[str]] = {
    "none": [],
    "negative_pct": ["negative_pct"],
    "positive_pct": ["positive_pct"],
    "pos_to_neg": ["pos_to_neg"],
    "all": ["negative_pct", "positive_pct", "pos_to_neg"],
}


def feature_names(sentiment_set: str = "all") -> list[str]:
    try:
        sentiment = SENTIMENT_VARIABLE_SETS[sentiment_set]
    except KeyError:
        raise ValueError(
            f"unknown sentiment variable set {sentiment_set!r}; "
            f"expected one of {sorted(SENTIMENT_VARIABLE_SETS)}"
        ) from None
    return FINANCIAL_FEATURES + sentiment


def feature_vector(row: FeatureRow, sentiment_set: str = "all") -> list[float]:
    return [getattr(row, name) for name in feature_names(sentiment_set)]


@dataclass(frozen=True)
class Dataset:
    rows: tuple[FeatureRow, ...]
    exclusion_count: int
    drop_warnings: dict[str, int]
    imbalance: dict[int, dict[str, float]]
    mapping: SectorMapping | None = None

    def years(self) -> list[int]:
        return sorted({row.year for row in self.rows})

    def rows_for_year(self, year: int) -> list[FeatureRow]:
        return [row for row in self.rows if row.year == year]

    def __len__(self) -> int:
        return len(self.rows)


def sector_code_frequencies(records: Iterable) -> Counter:
    return Counter(r.sector_code for r in records)


def map_sectors(
    codes: Mapping[str, int],
    keywords: Sequence[str],
    seed: int,
    explicit: Mapping[str, str] | None = None,
) -> SectorMapping:
    """Pair the 4 most frequent sector codes with news keywords.

    Frequency ties break lexicographically; the keyword order comes from
    a seeded shuffle. An explicit mapping replaces the whole procedure.
    """
    if explicit is not None:
        pairs = dict(explicit)
        if len(pairs) != 4 or len(set(pairs.values())) != 4:
            raise MappingError("explicit mapping must be a bijection of 4 pairs")
        return SectorMapping(pairs=pairs, seed=seed, source=MappingSource.EXPLICIT)

    if len(codes) < 4:
        raise MappingError(f"need at least 4 distinct sector codes, got {len(codes)}")
    if len(keywords) != 4:
        raise MappingError(f"need exactly 4 keywords, got {len(keywords)}")
    top4 = sorted(codes, key=lambda code: (-codes[code], code))[:4]
    shuffled = list(keywords)
    random.Random(seed).shuffle(shuffled)
    return SectorMapping(
        pairs=dict(zip(top4, shuffled)), seed=seed, source=MappingSource.RANDOM
    )


def build_dataset(
    scored: Sequence[ScoredRecord],
    exclusions: Sequence[Exclusion],
    mapping: SectorMapping,
    sentiment_scores: Sequence[SentimentScore],
) -> Dataset:
    """Join scored financials with group sentiment into feature rows.

    Records in unmapped sectors, records whose (sector, year) has no
    sentiment, and records whose group has a zero-negative corpus (the
    ratio is undefined there) are dropped with counted warnings, so that
    rows + exclusions + drops = input records.
    """
    by_group = {(s.sector, s.year): s for s in sentiment_scores}
    drops = {"unmapped_sector": 0, "missing_sentiment": 0, "ratio_undefined": 0}
    rows: list[FeatureRow] = []
    for item in scored:
        record, ratios = item.record, item.ratios
        keyword = mapping.keyword(record.sector_code)
        if keyword is None:
            drops["unmapped_sector"] += 1
            continue
        sentiment = by_group.get((keyword, record.year))
        if sentiment is None:
            drops["missing_sentiment"] += 1
            continue
        if sentiment.pos_to_neg is None:
            drops["ratio_undefined"] += 1
            continue
        # Private companies have no market valuation; their fourth ratio
        # is taken as zero so the public-form score stays defined.
        d = ratios.d if ratios.d is not None else 0.0
        rows.append(FeatureRow(
            company_id=record.company_id,
            year=record.year,
            a=ratios.a,
            b=ratios.b,
            c=ratios.c,
            d=d,
            d_prime=ratios.d_prime,
            e=ratios.e,
            z=item.scores.z if item.scores.z is not None
              else z_original(ratios.a, ratios.b, ratios.c, d, ratios.e),
            z_prime=item.scores.z_prime,
            negative_pct=sentiment.negative_pct,
            positive_pct=sentiment.positive_pct,
            pos_to_neg=sentiment.pos_to_neg,
            label=Status.BANKRUPT if record.status is Status.BANKRUPT
                  else Status.NON_BANKRUPT,
            sector_code=record.sector_code,
            sector_keyword=keyword,
        ))
    if not rows:
        raise EmptyDatasetError("dataset join produced no rows")
    dataset = Dataset(
        rows=tuple(rows),
        exclusion_count=len(exclusions),
        drop_warnings=drops,
        imbalance={},
        mapping=mapping,
    )
    imbalance = {year: imbalance_stats(dataset, year) for year in dataset.years()}
    return Dataset(
        rows=dataset.rows,
        exclusion_count=dataset.exclusion_count,
        drop_warnings=dataset.drop_warnings,
        imbalance=imbalance,
        mapping=mapping,
    )


def imbalance_stats(dataset: Dataset, year: int) -> dict[str, float]:
    rows = dataset.rows_for_year(year)
    if not rows:
        raise ValueError(f"no rows for year {year}")
    bankrupt = sum(1 for row in rows if row.label is Status.BANKRUPT)
    return {
        "bankrupt_pct": 100.0 * bankrupt / len(rows),
        "nonbankrupt_pct": 100.0 * (len(rows) - bankrupt) / len(rows),
    }


def split_train_test(
    dataset: Dataset | Sequence[FeatureRow],
    year: int,
    train_fraction: float,
    seed: int,
) -> tuple[list[FeatureRow], list[FeatureRow]]:
    """Stratified split: each class shuffled and cut at the same fraction.

    Train takes floor(class size x fraction) rows per class, so the
    counts are exact and reproducible for a given seed.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rows = dataset.rows_for_year(year) if isinstance(dataset, Dataset) else [
        row for row in dataset if row.year == year
    ]
    bankrupt = [row for row in rows if row.label is Status.BANKRUPT]
    healthy = [row for row in rows if row.label is not Status.BANKRUPT]
    if not bankrupt or not healthy:
        raise StratificationError(
            f"year {year}: need both classes to stratify "
            f"(bankrupt={len(bankrupt)}, non-bankrupt={len(healthy)})"
        )
    rng = random.Random(seed)
    train: list[FeatureRow] = []
    test: list[FeatureRow] = []
    for group in (bankrupt, healthy):
        shuffled = list(group)
        rng.shuffle(shuffled)
        # Exact floor at the fraction's decimal face value, immune to
        # binary float error (90 x 0.7 must cut at 63, not 62).
        cut = math.floor(Fraction(len(shuffled)) * Fraction(str(train_fraction)))
        train.extend(shuffled[:cut])
        test.extend(shuffled[cut:])
    return train, test


DATASET_CSV_COLUMNS = [
    "company_id", "year", "a", "b", "c", "d", "d_prime", "e", "z", "z_prime",
    "negative_pct", "positive_pct", "pos_to_neg", "label",
    "sector_code", "sector_keyword",
]


def write_dataset_csv(path: str | Path, dataset: Dataset) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(DATASET_CSV_COLUMNS)
        for row in dataset.rows:
            writer.writerow([
                row.company_id, row.year,
                repr(row.a), repr(row.b), repr(row.c), repr(row.d),
                repr(row.d_prime), repr(row.e), repr(row.z), repr(row.z_prime),
                repr(row.negative_pct), repr(row.positive_pct), repr(row.pos_to_neg),
                row.label.value, row.sector_code, row.sector_keyword,
            ])


def read_dataset_csv(path: str | Path) -> Dataset:
    path = Path(path)
    rows: list[FeatureRow] = []
    with path.open(newline="", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            rows.append(FeatureRow(
                company_id=record["company_id"],
                year=int(record["year"]),
                a=float(record["a"]),
                b=float(record["b"]),
                c=float(record["c"]),
                d=float(record["d"]),
                d_prime=float(record["d_prime"]),
                e=float(record["e"]),
                z=float(record["z"]),
                z_prime=float(record["z_prime"]),
                negative_pct=float(record["negative_pct"]),
                positive_pct=float(record["positive_pct"]),
                pos_to_neg=float(record["pos_to_neg"]),
                label=Status(record["label"]),
                sector_code=record.get("sector_code", ""),
                sector_keyword=record.get("sector_keyword", ""),
            ))
    if not rows:
        raise EmptyDatasetError(f"{path}: no rows")
    dataset = Dataset(
        rows=tuple(rows), exclusion_count=0, drop_warnings={}, imbalance={}
    )
    imbalance = {year: imbalance_stats(dataset, year) for year in dataset.years()}
    return Dataset(
        rows=dataset.rows, exclusion_count=0, drop_warnings={}, imbalance=imbalance
    )
