"""News article storage, fetching, and corpus loading.

Articles live on disk as one JSON document per article under
``<root>/<sector>/<year>/<article-id>.json``. Fetchers produce articles
for a (sector, year) pair; the directory fetcher replays a local tree
and the HTTP fetcher pulls from a remote endpoint with retries and a
politeness delay.
"""

from __future__ import annotations

import json
import re
import time
import urllib.error
import urllib.request
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

DEFAULT_SECTORS = ["iGaming", "Pharmaceuticals", "Aviation", "Tourism"]
DEFAULT_YEARS = [2013, 2014, 2015, 2016]

# Share of a group's articles a line must appear in before it is
# treated as boilerplate and stripped.
BOILERPLATE_THRESHOLD = 0.9


class FetchError(RuntimeError):
    """A fetch source was unreachable or returned unusable data."""


class EmptyFetchWarning(UserWarning):
    """A fetch completed but produced zero articles."""


class CorpusError(ValueError):
    """A stored article document is malformed."""


@dataclass(frozen=True)
class Article:
    sector: str
    year: int
    source_id: str
    title: str
    body: str

    def __post_init__(self) -> None:
        if not self.source_id:
            raise CorpusError("article source_id must be non-empty")
        if not self.sector:
            raise CorpusError("article sector must be non-empty")

    def text(self) -> str:
        return f"{self.title}\n{self.body}" if self.title else self.body


@dataclass
class Corpus:
    """Articles grouped by (sector, year)."""

    groups: dict[tuple[str, int], list[Article]] = field(default_factory=dict)

    def add(self, article: Article) -> None:
        self.groups.setdefault((article.sector, article.year), []).append(article)

    def articles(self) -> list[Article]:
        return [a for group in self.groups.values() for a in group]

    def __len__(self) -> int:
        return sum(len(g) for g in self.groups.values())


class Fetcher(Protocol):
    def fetch(self, sector: str, year: int) -> list[Article]: ...


class DirectoryFetcher:
    """Replays articles from a local tree laid out like the store."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def fetch(self, sector: str, year: int) -> list[Article]:
        group_dir = self.root / sector / str(year)
        if not self.root.is_dir():
            raise FetchError(f"article root {self.root} does not exist")
        if not group_dir.is_dir():
            warnings.warn(
                f"no articles for {sector} {year}", EmptyFetchWarning, stacklevel=2
            )
            return []
        articles = []
        for path in sorted(group_dir.glob("*.json")):
            articles.append(_read_article(path, sector, year))
        if not articles:
            warnings.warn(
                f"no articles for {sector} {year}", EmptyFetchWarning, stacklevel=2
            )
        return articles


class HttpFetcher:
    """Fetches a JSON article list from a templated URL.

    The endpoint is expected to return a JSON array of objects with
    source_id/title/body keys. Transient failures are retried with a
    flat politeness delay between all requests.
    """

    def __init__(
        self,
        url_template: str,
        delay_seconds: float = 1.0,
        max_retries: int = 3,
        timeout: float = 10.0,
        sleep=time.sleep,
    ):
        self.url_template = url_template
        self.delay_seconds = delay_seconds
        self.max_retries = max_retries
        self.timeout = timeout
        self._sleep = sleep

    def fetch(self, sector: str, year: int) -> list[Article]:
        url = self.url_template.format(sector=sector, year=year)
        payload = self._get_with_retries(url)
        try:
            raw_items = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise FetchError(f"{url}: response is not valid JSON: {exc}") from exc
        if not isinstance(raw_items, list):
            raise FetchError(f"{url}: expected a JSON array of articles")
        articles = []
        for item in raw_items:
            articles.append(Article(
                sector=sector,
                year=year,
                source_id=str(item.get("source_id", "")),
                title=str(item.get("title", "")),
                body=str(item.get("body", "")),
            ))
        if not articles:
            warnings.warn(
                f"no articles for {sector} {year}", EmptyFetchWarning, stacklevel=2
            )
        return articles

    def _get_with_retries(self, url: str) -> str:
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt > 0 or self.delay_seconds > 0:
                self._sleep(self.delay_seconds)
            try:
                with urllib.request.urlopen(url, timeout=self.timeout) as response:
                    return response.read().decode("utf-8")
            except (urllib.error.URLError, OSError) as exc:
                last_error = exc
        raise FetchError(
            f"{url}: unreachable after {self.max_retries} attempts: {last_error}"
        ) from last_error


def ingest(
    fetcher: Fetcher,
    root: str | Path,
    sectors: Iterable[str] = DEFAULT_SECTORS,
    years: Iterable[int] = DEFAULT_YEARS,
) -> dict[str, int]:
    """Fetch every (sector, year) group, dedup, and store.

    Returns counts of stored and duplicate-skipped articles.
    """
    stored = 0
    duplicates = 0
    for sector in sectors:
        for year in years:
            articles = fetcher.fetch(sector, year)
            kept, skipped = _dedup_by_source_id(articles)
            for article in kept:
                store_article(root, article)
            stored += len(kept)
            duplicates += skipped
    return {"stored": stored, "duplicates": duplicates}


def _dedup_by_source_id(articles: list[Article]) -> tuple[list[Article], int]:
    seen: set[str] = set()
    kept = []
    for article in articles:
        if article.source_id in seen:
            continue
        seen.add(article.source_id)
        kept.append(article)
    return kept, len(articles) - len(kept)


_UNSAFE_FILENAME = re.compile(r"[^A-Za-z0-9._-]+")


def article_path(root: str | Path, article: Article) -> Path:
    safe_id = _UNSAFE_FILENAME.sub("_", article.source_id)
    return Path(root) / article.sector / str(article.year) / f"{safe_id}.json"


def store_article(root: str | Path, article: Article) -> Path:
    path = article_path(root, article)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "sector": article.sector,
        "year": article.year,
        "source_id": article.source_id,
        "title": article.title,
        "body": article.body,
    }
    path.write_text(json.dumps(document, ensure_ascii=False, indent=2), encoding="utf-8")
    return path


def _read_article(path: Path, sector: str, year: int) -> Article:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"{path}: unreadable article: {exc}") from exc
    for key in ("sector", "year", "source_id", "title", "body"):
        if key not in document:
            raise CorpusError(f"{path}: missing key {key!r}")
    if document["sector"] != sector or int(document["year"]) != year:
        raise CorpusError(
            f"{path}: article labeled {document['sector']}/{document['year']} "
            f"stored under {sector}/{year}"
        )
    return Article(
        sector=document["sector"],
        year=int(document["year"]),
        source_id=str(document["source_id"]),
        title=str(document["title"]),
        body=str(document["body"]),
    )


def load_corpus(
    root: str | Path,
    sectors: Iterable[str] | None = None,
    years: Iterable[int] | None = None,
    strip_boilerplate: bool = True,
) -> Corpus:
    """Load stored articles, dropping shared boilerplate lines per group."""
    root = Path(root)
    if not root.is_dir():
        raise FetchError(f"article root {root} does not exist")
    corpus = Corpus()
    sector_list = list(sectors) if sectors is not None else _discover_sectors(root)
    for sector in sector_list:
        sector_dir = root / sector
        if not sector_dir.is_dir():
            continue
        year_list = list(years) if years is not None else _discover_years(sector_dir)
        for year in year_list:
            group_dir = sector_dir / str(year)
            if not group_dir.is_dir():
                continue
            group = [
                _read_article(path, sector, year)
                for path in sorted(group_dir.glob("*.json"))
            ]
            if strip_boilerplate:
                group = strip_shared_lines(group)
            for article in group:
                corpus.add(article)
    return corpus


def _discover_sectors(root: Path) -> list[str]:
    return sorted(p.name for p in root.iterdir() if p.is_dir())


def _discover_years(sector_dir: Path) -> list[int]:
    years = []
    for p in sector_dir.iterdir():
        if p.is_dir() and p.name.isdigit():
            years.append(int(p.name))
    return sorted(years)


def strip_shared_lines(group: list[Article]) -> list[Article]:
    """Remove lines appearing byte-identical in >= 90% of a group.

    Single-article groups are left alone: with one article every line
    trivially clears the threshold and the whole body would vanish.
    """
    if len(group) < 2:
        return group
    line_presence: dict[str, int] = {}
    split_bodies = [article.body.split("\n") for article in group]
    for lines in split_bodies:
        for line in set(lines):
            line_presence[line] = line_presence.get(line, 0) + 1
    cutoff = BOILERPLATE_THRESHOLD * len(group)
    shared = {
        line for line, count in line_presence.items()
        if line.strip() and count >= cutoff
    }
    if not shared:
        return group
    stripped = []
    for article, lines in zip(group, split_bodies):
        body = "\n".join(line for line in lines if line not in shared)
        stripped.append(Article(
            sector=article.sector,
            year=article.year,
            source_id=article.source_id,
            title=article.title,
            body=body,
        ))
    return stripped
