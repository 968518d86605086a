"""Altman ratios, Z / Z' scores and distress-zone classification.

Two models are supported: the original five-ratio score for publicly traded
companies and the revised score, which substitutes book value of equity for
market value, for private ones.  Records whose ratios cannot be computed
(zero denominator, non-finite result) are excluded as values rather than
raised, so batch runs can count them.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

ORIGINAL_COEFFS = (1.2, 1.4, 3.3, 0.6, 1.0)
REVISED_COEFFS = (0.717, 0.847, 3.107, 0.420, 0.998)

# zone thresholds: distress below the first value, safe above the second
ORIGINAL_THRESHOLDS = (1.8, 3.0)
REVISED_THRESHOLDS = (1.21, 2.90)

DEFAULT_YEAR_RANGE = (2004, 2017)

CSV_COLUMNS = [
    "company_id", "year", "sector_code", "is_public",
    "working_capital", "total_assets", "retained_earnings", "ebit",
    "market_value_equity", "book_value_equity", "total_liabilities",
    "sales", "status",
]


class Status(str, enum.Enum):
    BANKRUPT = "Bankrupt"
    NON_BANKRUPT = "NonBankrupt"


class Model(str, enum.Enum):
    ORIGINAL = "Original"
    REVISED = "Revised"


class Zone(str, enum.Enum):
    DISTRESS = "Distress"
    GREY = "Grey"
    SAFE = "Safe"

    @property
    def rank(self) -> int:
        return {"Distress": 0, "Grey": 1, "Safe": 2}[self.value]


class RecordError(ValueError):
    """Malformed financial record input."""


@dataclass(frozen=True)
class FinancialRecord:
    """One company-year of raw monetary fields plus the bankruptcy label."""

    company_id: str
    year: int
    sector_code: str
    is_public: bool
    working_capital: float
    total_assets: float
    retained_earnings: float
    ebit: float
    market_value_equity: float
    book_value_equity: float
    total_liabilities: float
    sales: float
    status: Status

    def __post_init__(self):
        if not self.company_id:
            raise RecordError("company_id must be non-empty")
        lo, hi = DEFAULT_YEAR_RANGE
        if not lo <= self.year <= hi:
            raise RecordError(f"year {self.year} outside {lo}-{hi}")
        for name in ("working_capital", "total_assets", "retained_earnings",
                     "ebit", "market_value_equity", "book_value_equity",
                     "total_liabilities", "sales"):
            if not math.isfinite(getattr(self, name)):
                raise RecordError(f"{name} is not finite for {self.company_id}")


@dataclass(frozen=True)
class RatioVector:
    """The dimensionless Altman inputs; D only exists for public companies."""

    a: float
    b: float
    c: float
    d: float | None
    d_prime: float
    e: float


@dataclass(frozen=True)
class Exclusion:
    """A record dropped from ratio computation, with the reason."""

    company_id: str
    year: int
    reason: str


@dataclass(frozen=True)
class ZScoreResult:
    z: float | None
    z_prime: float
    selected_model: Model
    zone: Zone


@dataclass(frozen=True)
class ScoredRecord:
    """Record bundled with its ratios and scores, ready for feature building."""

    record: FinancialRecord
    ratios: RatioVector
    scores: ZScoreResult


def z_original(a: float, b: float, c: float, d: float, e: float) -> float:
    ca, cb, cc, cd, ce = ORIGINAL_COEFFS
    return ca * a + cb * b + cc * c + cd * d + ce * e


def z_revised(a: float, b: float, c: float, d_prime: float, e: float) -> float:
    ca, cb, cc, cd, ce = REVISED_COEFFS
    return ca * a + cb * b + cc * c + cd * d_prime + ce * e


def compute_ratios(record: FinancialRecord) -> RatioVector | Exclusion:
    """Compute the five ratios, or an Exclusion when any is undefined."""
    def exclude(reason: str) -> Exclusion:
        return Exclusion(record.company_id, record.year, reason)

    if record.total_assets <= 0:
        return exclude("total_assets must be > 0")
    if record.total_liabilities <= 0:
        return exclude("total_liabilities must be > 0")

    a = record.working_capital / record.total_assets
    b = record.retained_earnings / record.total_assets
    c = record.ebit / record.total_assets
    d_prime = record.book_value_equity / record.total_liabilities
    e = record.sales / record.total_assets
    d = None
    if record.is_public:
        d = record.market_value_equity / record.total_liabilities

    values = [a, b, c, d_prime, e] + ([d] if d is not None else [])
    if not all(math.isfinite(v) for v in values):
        return exclude("non-finite ratio")
    return RatioVector(a=a, b=b, c=c, d=d, d_prime=d_prime, e=e)


def classify_zone(score: float, model: Model) -> Zone:
    """Map a score to Distress / Grey / Safe; boundary values fall in Grey."""
    if not math.isfinite(score):
        raise ValueError(f"score must be finite, got {score}")
    distress_below, safe_above = (
        ORIGINAL_THRESHOLDS if model is Model.ORIGINAL else REVISED_THRESHOLDS
    )
    if score < distress_below:
        return Zone.DISTRESS
    if score > safe_above:
        return Zone.SAFE
    return Zone.GREY


def z_scores(ratios: RatioVector, is_public: bool) -> ZScoreResult:
    """Evaluate Z (public only) and Z', select the model and classify."""
    z_prime = z_revised(ratios.a, ratios.b, ratios.c, ratios.d_prime, ratios.e)
    if is_public:
        if ratios.d is None:
            raise ValueError("public company requires the market-value ratio D")
        z = z_original(ratios.a, ratios.b, ratios.c, ratios.d, ratios.e)
        return ZScoreResult(z=z, z_prime=z_prime, selected_model=Model.ORIGINAL,
                            zone=classify_zone(z, Model.ORIGINAL))
    return ZScoreResult(z=None, z_prime=z_prime, selected_model=Model.REVISED,
                        zone=classify_zone(z_prime, Model.REVISED))


def score_record(record: FinancialRecord) -> ScoredRecord | Exclusion:
    ratios = compute_ratios(record)
    if isinstance(ratios, Exclusion):
        return ratios
    return ScoredRecord(record=record, ratios=ratios,
                        scores=z_scores(ratios, record.is_public))


_STATUS_VALUES = {"bankrupt": Status.BANKRUPT, "active": Status.NON_BANKRUPT}
_BOOL_VALUES = {"true": True, "false": False}


def read_records_csv(path: str | Path) -> list[FinancialRecord]:
    """Load financial records from the canonical CSV layout.

    Header must carry exactly the documented column names; status is
    bankrupt/active, is_public is true/false, decimal point, no thousands
    separators.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise RecordError(f"{path}: empty file, header row required")
        missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise RecordError(f"{path}: missing columns {missing}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            records.append(_parse_row(row, path, lineno))
    return records


def _parse_row(row: dict, path: Path, lineno: int) -> FinancialRecord:
    def fail(msg: str):
        raise RecordError(f"{path}:{lineno}: {msg}")

    status = _STATUS_VALUES.get(row["status"].strip().lower())
    if status is None:
        fail(f"status must be bankrupt or active, got {row['status']!r}")
    is_public = _BOOL_VALUES.get(row["is_public"].strip().lower())
    if is_public is None:
        fail(f"is_public must be true or false, got {row['is_public']!r}")
    try:
        year = int(row["year"])
    except ValueError:
        fail(f"year is not an integer: {row['year']!r}")
    monetary = {}
    for name in ("working_capital", "total_assets", "retained_earnings",
                 "ebit", "market_value_equity", "book_value_equity",
                 "total_liabilities", "sales"):
        try:
            monetary[name] = float(row[name])
        except ValueError:
            fail(f"{name} is not a number: {row[name]!r}")
    try:
        return FinancialRecord(
            company_id=row["company_id"].strip(),
            year=year,
            sector_code=row["sector_code"].strip(),
            is_public=is_public,
            status=status,
            **monetary,
        )
    except RecordError as exc:
        fail(str(exc))


def write_records_csv(path: str | Path, records: Iterable[FinancialRecord]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([
                r.company_id, r.year, r.sector_code,
                "true" if r.is_public else "false",
                repr(r.working_capital), repr(r.total_assets),
                repr(r.retained_earnings), repr(r.ebit),
                repr(r.market_value_equity), repr(r.book_value_equity),
                repr(r.total_liabilities), repr(r.sales),
                "bankrupt" if r.status is Status.BANKRUPT else "active",
            ])
