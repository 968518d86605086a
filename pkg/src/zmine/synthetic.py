"""Deterministic demo-world generator.

The real inputs (a proprietary financial sheet and a scraped news
archive) cannot ship, so the demo command fabricates a seeded stand-in:
four pseudonymised sectors of company financials with a few percent of
bankruptcies, plus a news corpus whose tone tracks each sector-year's
bankruptcy rate. Everything is a pure function of the seed.
"""

from __future__ import annotations

import random
from pathlib import Path

from .corpus import Article, store_article
from .ratios import FinancialRecord, Status, write_records_csv

SECTOR_CODES = ["S1", "S2", "S3", "S4"]
DEMO_YEARS = [2013, 2014, 2015, 2016]

POSITIVE_WORDS = [
    "gain", "growth", "profit", "strong", "improve", "win", "benefit",
    "advance", "reward", "succeed", "surpass", "upturn", "boost", "stable",
    "attain", "deliver", "excel", "favor", "progress", "thrive",
]
NEGATIVE_WORDS = [
    "loss", "decline", "weak", "fail", "bankrupt", "default", "drop",
    "shrink", "threat", "collapse", "downturn", "litigation", "penalty",
    "writedown", "deficit", "erode", "impair", "lawsuit", "warn", "worsen",
]
UNCERTAIN_WORDS = ["uncertain", "volatile", "risk", "doubt", "unpredictable"]
LITIGIOUS_WORDS = ["plaintiff", "tribunal", "verdict", "subpoena", "injunction"]
NEUTRAL_WORDS = [
    "market", "company", "sector", "report", "quarter", "revenue", "board",
    "analyst", "share", "price", "product", "plan", "region", "customer",
    "supply", "contract", "launch", "service", "industry", "outlook",
]

DEMO_LEXICON_ROWS = (
    [(w, "Positive") for w in POSITIVE_WORDS]
    + [(w, "Negative") for w in NEGATIVE_WORDS]
    + [(w, "Uncertainty") for w in UNCERTAIN_WORDS]
    + [(w, "Litigious") for w in LITIGIOUS_WORDS]
)


def demo_financials(
    seed: int,
    companies_per_sector_year: int = 60,
    years: list[int] | None = None,
) -> list[FinancialRecord]:
    """Fabricate company-year records; bankrupt firms get weaker books."""
    rng = random.Random(seed)
    years = years or DEMO_YEARS
    bankrupt_rate = {2013: 0.09, 2014: 0.08, 2015: 0.05, 2016: 0.07}
    records = []
    serial = 0
    for code in SECTOR_CODES:
        for year in years:
            for _ in range(companies_per_sector_year):
                serial += 1
                bankrupt = rng.random() < bankrupt_rate.get(year, 0.07)
                assets = rng.uniform(5e6, 5e8)
                if bankrupt:
                    working_capital = assets * rng.uniform(-0.3, 0.05)
                    retained = assets * rng.uniform(-0.4, 0.0)
                    ebit = assets * rng.uniform(-0.2, 0.01)
                    equity = assets * rng.uniform(0.02, 0.2)
                    liabilities = assets * rng.uniform(0.7, 1.3)
                    sales = assets * rng.uniform(0.2, 0.8)
                else:
                    working_capital = assets * rng.uniform(0.05, 0.4)
                    retained = assets * rng.uniform(0.05, 0.5)
                    ebit = assets * rng.uniform(0.02, 0.25)
                    equity = assets * rng.uniform(0.3, 1.5)
                    liabilities = assets * rng.uniform(0.2, 0.6)
                    sales = assets * rng.uniform(0.6, 1.8)
                is_public = rng.random() < 0.5
                records.append(FinancialRecord(
                    company_id=f"C{serial:05d}",
                    year=year,
                    sector_code=code,
                    is_public=is_public,
                    working_capital=round(working_capital, 2),
                    total_assets=round(assets, 2),
                    retained_earnings=round(retained, 2),
                    ebit=round(ebit, 2),
                    market_value_equity=round(equity, 2),
                    book_value_equity=round(equity * rng.uniform(0.8, 1.2), 2),
                    total_liabilities=round(liabilities, 2),
                    sales=round(sales, 2),
                    status=Status.BANKRUPT if bankrupt else Status.NON_BANKRUPT,
                ))
    return records


def _article_body(rng: random.Random, negativity: float, sentences: int) -> str:
    lines = []
    for _ in range(sentences):
        words = []
        for _ in range(rng.randint(8, 14)):
            roll = rng.random()
            if roll < negativity:
                words.append(rng.choice(NEGATIVE_WORDS))
            elif roll < negativity + 0.08:
                words.append(rng.choice(POSITIVE_WORDS))
            elif roll < negativity + 0.10:
                words.append(rng.choice(UNCERTAIN_WORDS + LITIGIOUS_WORDS))
            else:
                words.append(rng.choice(NEUTRAL_WORDS))
        lines.append(" ".join(words).capitalize() + ".")
    return "\n".join(lines)


def demo_articles(
    keywords: list[str],
    seed: int,
    articles_per_group: int = 25,
    years: list[int] | None = None,
) -> list[Article]:
    """Fabricate news where tone varies by sector-year."""
    rng = random.Random(seed + 1)
    years = years or DEMO_YEARS
    articles = []
    for keyword in keywords:
        for year in years:
            negativity = rng.uniform(0.04, 0.14)
            for i in range(articles_per_group):
                articles.append(Article(
                    sector=keyword,
                    year=year,
                    source_id=f"{keyword.lower()}-{year}-{i:03d}",
                    title=f"{keyword} {rng.choice(NEUTRAL_WORDS)} update {i}",
                    body=_article_body(rng, negativity, sentences=rng.randint(3, 6)),
                ))
    return articles


def write_demo_world(
    out_dir: str | Path,
    keywords: list[str],
    seed: int,
    companies_per_sector_year: int = 60,
    articles_per_group: int = 25,
) -> dict:
    """Write financial CSV, article tree, and lexicon under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = demo_financials(seed, companies_per_sector_year)
    write_records_csv(out_dir / "financials.csv", records)
    articles = demo_articles(keywords, seed, articles_per_group)
    articles_root = out_dir / "articles"
    for article in articles:
        store_article(articles_root, article)
    lexicon_path = out_dir / "lexicon.csv"
    lexicon_path.write_text(
        "".join(f"{word},{category}\n" for word, category in DEMO_LEXICON_ROWS),
        encoding="utf-8",
    )
    return {
        "financials": str(out_dir / "financials.csv"),
        "records": len(records),
        "articles_root": str(articles_root),
        "articles": len(articles),
        "lexicon": str(lexicon_path),
        "lexicon_entries": len(DEMO_LEXICON_ROWS),
    }
