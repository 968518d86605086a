"""Read-only JSON API over the persisted pipeline artifacts.

The service loads the dataset, score table, and sentiment scores once at
startup and serves filtered views of that immutable snapshot. Filters
(sector, year, flagged, company_id) apply conjunctively on every
endpoint; a filter value outside the loaded data's domain is a 400.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from .dataset import Dataset, FeatureRow, read_dataset_csv
from .ratios import Status
from .scoring import ScoreEntry, ScoreTable, read_score_table
from .sentiment import SentimentScore, read_sentiment_csv

DATASET_FILENAME = "dataset.csv"
SCORES_FILENAME = "scores.json"
SENTIMENT_FILENAME = "sentiment.csv"


@dataclass(frozen=True)
class Artifacts:
    dataset: Dataset
    scores: ScoreTable
    sentiment: list[SentimentScore]

    def sectors(self) -> set[str]:
        return ({row.sector_keyword for row in self.dataset.rows}
                | {entry.sector for entry in self.scores.entries}
                | {s.sector for s in self.sentiment})

    def years(self) -> set[int]:
        return ({row.year for row in self.dataset.rows}
                | {entry.year for entry in self.scores.entries}
                | {s.year for s in self.sentiment})

    def company_ids(self) -> set[str]:
        return ({row.company_id for row in self.dataset.rows}
                | {entry.company_id for entry in self.scores.entries})


def load_artifacts(data_root: str | Path) -> Artifacts:
    root = Path(data_root)
    missing = [
        name for name in (DATASET_FILENAME, SCORES_FILENAME, SENTIMENT_FILENAME)
        if not (root / name).is_file()
    ]
    if missing:
        raise FileNotFoundError(
            f"missing artifact files under {root}: {', '.join(missing)}"
        )
    return Artifacts(
        dataset=read_dataset_csv(root / DATASET_FILENAME),
        scores=read_score_table(root / SCORES_FILENAME),
        sentiment=read_sentiment_csv(root / SENTIMENT_FILENAME),
    )


@dataclass(frozen=True)
class Filters:
    sector: str | None = None
    year: int | None = None
    flagged: bool | None = None
    company_id: str | None = None


def _parse_filters(artifacts: Artifacts, request: Request) -> Filters:
    params = request.query_params
    sector = params.get("sector")
    if sector is not None and sector not in artifacts.sectors():
        raise HTTPException(400, f"unknown sector {sector!r}")
    year: int | None = None
    raw_year = params.get("year")
    if raw_year is not None:
        try:
            year = int(raw_year)
        except ValueError:
            raise HTTPException(400, f"year must be an integer, got {raw_year!r}")
        if year not in artifacts.years():
            raise HTTPException(400, f"no data for year {year}")
    flagged: bool | None = None
    raw_flagged = params.get("flagged")
    if raw_flagged is not None:
        lowered = raw_flagged.lower()
        if lowered not in ("true", "false"):
            raise HTTPException(400, f"flagged must be true or false, got {raw_flagged!r}")
        flagged = lowered == "true"
    company_id = params.get("company_id")
    if company_id is not None and company_id not in artifacts.company_ids():
        raise HTTPException(400, f"unknown company_id {company_id!r}")
    return Filters(sector=sector, year=year, flagged=flagged, company_id=company_id)


def _flag_by_key(scores: ScoreTable) -> dict[tuple[str, int], ScoreEntry]:
    return {(e.company_id, e.year): e for e in scores.entries}


def _match_entry(entry: ScoreEntry, f: Filters) -> bool:
    if f.sector is not None and entry.sector != f.sector:
        return False
    if f.year is not None and entry.year != f.year:
        return False
    if f.flagged is not None and entry.flagged != f.flagged:
        return False
    if f.company_id is not None and entry.company_id != f.company_id:
        return False
    return True


def _match_row(row: FeatureRow, flag: ScoreEntry | None, f: Filters) -> bool:
    if f.sector is not None and row.sector_keyword != f.sector:
        return False
    if f.year is not None and row.year != f.year:
        return False
    if f.company_id is not None and row.company_id != f.company_id:
        return False
    if f.flagged is not None:
        if flag is None or flag.flagged != f.flagged:
            return False
    return True


def _match_sentiment(score: SentimentScore, f: Filters) -> bool:
    if f.sector is not None and score.sector != f.sector:
        return False
    if f.year is not None and score.year != f.year:
        return False
    return True


def _company_document(row: FeatureRow, flag: ScoreEntry | None) -> dict:
    return {
        "company_id": row.company_id,
        "year": row.year,
        "sector": row.sector_keyword,
        "sector_code": row.sector_code,
        "a": row.a, "b": row.b, "c": row.c, "d": row.d,
        "d_prime": row.d_prime, "e": row.e,
        "z": row.z, "z_prime": row.z_prime,
        "positive_pct": row.positive_pct,
        "negative_pct": row.negative_pct,
        "pos_to_neg": row.pos_to_neg,
        "bankrupt": row.label is Status.BANKRUPT,
        "probability": flag.probability if flag else None,
        "flagged": flag.flagged if flag else None,
    }


def create_app(artifacts: Artifacts) -> FastAPI:
    app = FastAPI(title="bankruptcy risk service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    flags_by_key = _flag_by_key(artifacts.scores)

    @app.get("/api/companies")
    def companies(request: Request):
        f = _parse_filters(artifacts, request)
        return [
            _company_document(row, flags_by_key.get((row.company_id, row.year)))
            for row in artifacts.dataset.rows
            if _match_row(row, flags_by_key.get((row.company_id, row.year)), f)
        ]

    @app.get("/api/companies/{company_id}")
    def company(company_id: str, request: Request):
        f = _parse_filters(artifacts, request)
        rows = [
            _company_document(row, flags_by_key.get((row.company_id, row.year)))
            for row in artifacts.dataset.rows
            if row.company_id == company_id
            and _match_row(row, flags_by_key.get((row.company_id, row.year)), f)
        ]
        if not rows and company_id not in artifacts.company_ids():
            raise HTTPException(404, f"unknown company_id {company_id!r}")
        return rows

    @app.get("/api/scores")
    def scores(request: Request):
        f = _parse_filters(artifacts, request)
        return [
            entry.to_dict() for entry in artifacts.scores.entries
            if _match_entry(entry, f)
        ]

    @app.get("/api/sentiment")
    def sentiment(request: Request):
        f = _parse_filters(artifacts, request)
        return [
            {
                "sector": s.sector,
                "year": s.year,
                "positive_pct": s.positive_pct,
                "negative_pct": s.negative_pct,
                "pos_to_neg": s.pos_to_neg,
                "total_terms": s.total_terms,
                "positive_count": s.positive_count,
                "negative_count": s.negative_count,
            }
            for s in artifacts.sentiment if _match_sentiment(s, f)
        ]

    @app.get("/api/flags")
    def flags(request: Request):
        f = _parse_filters(artifacts, request)
        return [
            entry.to_dict() for entry in artifacts.scores.entries
            if entry.flagged and _match_entry(entry, f)
        ]

    @app.get("/api/aggregates/bankruptcy-by-year")
    def bankruptcy_by_year(request: Request):
        f = _parse_filters(artifacts, request)
        by_year: dict[int, list[float]] = {}
        for entry in artifacts.scores.entries:
            if _match_entry(entry, f):
                by_year.setdefault(entry.year, []).append(entry.probability)
        return [
            {"year": year, "mean_probability": sum(ps) / len(ps), "companies": len(ps)}
            for year, ps in sorted(by_year.items())
        ]

    @app.get("/api/aggregates/sentiment-by-year")
    def sentiment_by_year(request: Request):
        f = _parse_filters(artifacts, request)
        by_year: dict[int, list[SentimentScore]] = {}
        for s in artifacts.sentiment:
            if _match_sentiment(s, f):
                by_year.setdefault(s.year, []).append(s)
        return [
            {
                "year": year,
                "mean_positive_pct": sum(x.positive_pct for x in group) / len(group),
                "mean_negative_pct": sum(x.negative_pct for x in group) / len(group),
                "sectors": len(group),
            }
            for year, group in sorted(by_year.items())
        ]

    @app.get("/api/aggregates/flags")
    def flag_counts(request: Request):
        f = _parse_filters(artifacts, request)
        by_group: dict[tuple[str, int], int] = {}
        for entry in artifacts.scores.entries:
            if entry.flagged and _match_entry(entry, f):
                key = (entry.sector, entry.year)
                by_group[key] = by_group.get(key, 0) + 1
        return [
            {"sector": sector, "year": year, "flagged_count": count}
            for (sector, year), count in sorted(by_group.items())
        ]

    return app


def create_app_from_root(data_root: str | Path) -> FastAPI:
    return create_app(load_artifacts(data_root))
