"""Sentiment lexicon loading and corpus-level scoring.

Dictionary words pass through the same normalization chain as article text
(minus stopword removal) so corpus terms and lexicon keys line up exactly.
Two file formats are accepted: the master-dictionary style CSV (a Word
column plus one integer column per category, nonzero meaning membership)
and a headerless two-column word,category CSV.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

from .textprep import Lemmatizer, default_lemmatizer, normalize_term


class Category(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    UNCERTAINTY = "Uncertainty"
    LITIGIOUS = "Litigious"


_CATEGORY_BY_NAME = {c.value.lower(): c for c in Category}


class LexiconError(ValueError):
    """Unreadable or malformed lexicon file."""


class EmptyLexiconError(LexiconError):
    """The lexicon file produced no entries."""


class UnknownCategoryError(LexiconError):
    """A category name outside Positive/Negative/Uncertainty/Litigious."""


class EmptyCorpusError(ValueError):
    """score_corpus needs at least one term."""


@dataclass(frozen=True)
class Lexicon:
    """Normalized term -> set of sentiment categories."""

    entries: dict[str, frozenset[Category]]

    def categories(self, term: str) -> frozenset[Category]:
        return self.entries.get(term, frozenset())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SentimentScore:
    """Corpus-level sentiment variables for one (sector, year).

    pos_to_neg is computed from the raw counts, not the rounded
    percentages, and is absent when the corpus has no negative terms.
    """

    sector: str
    year: int
    positive_pct: float
    negative_pct: float
    pos_to_neg: float | None
    total_terms: int
    positive_count: int
    negative_count: int


def load_lexicon(path: str | Path, lemmatizer: Lemmatizer | None = None) -> Lexicon:
    """Load and normalize a lexicon file, merging colliding entries."""
    path = Path(path)
    lemmatizer = lemmatizer or default_lemmatizer()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc

    rows = list(csv.reader(text.splitlines()))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyLexiconError(f"{path}: no lexicon rows")

    if _looks_like_master_header(rows[0]):
        pairs = _parse_master_format(rows, path)
    else:
        pairs = _parse_simple_format(rows, path)

    entries: dict[str, set[Category]] = {}
    for word, category in pairs:
        term = normalize_term(word, lemmatizer)
        if term is None:
            continue
        entries.setdefault(term, set()).add(category)
    if not entries:
        raise EmptyLexiconError(f"{path}: no usable lexicon entries")
    return Lexicon(entries={t: frozenset(cs) for t, cs in entries.items()})


def _looks_like_master_header(header: list[str]) -> bool:
    names = {cell.strip().lower() for cell in header}
    return "word" in names and any(c.value.lower() in names for c in Category)


def _parse_master_format(rows: list[list[str]], path: Path):
    header = [cell.strip().lower() for cell in rows[0]]
    word_idx = header.index("word")
    category_cols = [
        (idx, _CATEGORY_BY_NAME[name])
        for idx, name in enumerate(header)
        if name in _CATEGORY_BY_NAME
    ]
    pairs = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) <= word_idx:
            continue
        word = row[word_idx]
        for idx, category in category_cols:
            cell = row[idx].strip() if idx < len(row) else ""
            if not cell:
                continue
            try:
                flag = float(cell)
            except ValueError:
                raise LexiconError(
                    f"{path}:{lineno}: category column must be numeric, got {cell!r}"
                )
            if flag != 0:
                pairs.append((word, category))
    return pairs


def _parse_simple_format(rows: list[list[str]], path: Path):
    pairs = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise LexiconError(
                f"{path}:{lineno}: expected word,category - got {len(row)} columns"
            )
        word, raw_category = row[0].strip(), row[1].strip()
        category = _CATEGORY_BY_NAME.get(raw_category.lower())
        if category is None:
            raise UnknownCategoryError(
                f"{path}:{lineno}: unknown category {raw_category!r}"
            )
        pairs.append((word, category))
    return pairs


def score_corpus(terms: list[str], lexicon: Lexicon, sector: str, year: int) -> SentimentScore:
    """Count Positive/Negative term occurrences (with multiplicity).

    Percentages are over all term occurrences; the positive-to-negative
    ratio is left absent when no negative terms occur.
    """
    if not terms:
        raise EmptyCorpusError(f"empty corpus for {sector} {year}")
    positive = 0
    negative = 0
    for term in terms:
        categories = lexicon.categories(term)
        if Category.POSITIVE in categories:
            positive += 1
        if Category.NEGATIVE in categories:
            negative += 1
    total = len(terms)
    return SentimentScore(
        sector=sector,
        year=year,
        positive_pct=100.0 * positive / total,
        negative_pct=100.0 * negative / total,
        pos_to_neg=(positive / negative) if negative else None,
        total_terms=total,
        positive_count=positive,
        negative_count=negative,
    )


def ratio_from_percentages(positive_pct: float, negative_pct: float) -> float:
    """Positive/negative ratio as the published tables compute it."""
    return positive_pct / negative_pct


SENTIMENT_CSV_COLUMNS = [
    "sector", "year", "positive_pct", "negative_pct", "pos_to_neg",
    "total_terms", "positive_count", "negative_count",
]


def write_sentiment_csv(path: str | Path, scores: list[SentimentScore]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SENTIMENT_CSV_COLUMNS)
        for s in scores:
            writer.writerow([
                s.sector, s.year, repr(s.positive_pct), repr(s.negative_pct),
                "" if s.pos_to_neg is None else repr(s.pos_to_neg),
                s.total_terms, s.positive_count, s.negative_count,
            ])


def read_sentiment_csv(path: str | Path) -> list[SentimentScore]:
    path = Path(path)
    scores = []
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            scores.append(SentimentScore(
                sector=row["sector"],
                year=int(row["year"]),
                positive_pct=float(row["positive_pct"]),
                negative_pct=float(row["negative_pct"]),
                pos_to_neg=float(row["pos_to_neg"]) if row["pos_to_neg"] else None,
                total_terms=int(row["total_terms"]),
                positive_count=int(row["positive_count"]),
                negative_count=int(row["negative_count"]),
            ))
    return scores
