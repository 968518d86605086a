"""Bankruptcy risk scoring from Altman ratios and news-sentiment mining.

The pipeline: ingest a news corpus, score sector-year sentiment against
a finance lexicon, compute Altman Z and Z' from company financials, join
the two into a per-company-year dataset, train class-imbalance-aware
classifiers, and expose scores plus an over-threshold flag through a CLI,
batch reports, and a read-only HTTP API.
"""

__version__ = "0.1.0"

from .ratios import (
    FinancialRecord,
    Model,
    RatioVector,
    Status,
    Zone,
    ZScoreResult,
    classify_zone,
    compute_ratios,
    score_record,
    z_original,
    z_revised,
    z_scores,
)
from .sentiment import Lexicon, SentimentScore, load_lexicon, score_corpus
from .textprep import Lemmatizer, preprocess_text, tokenize

__all__ = [
    "FinancialRecord",
    "Lemmatizer",
    "Lexicon",
    "Model",
    "RatioVector",
    "SentimentScore",
    "Status",
    "Zone",
    "ZScoreResult",
    "classify_zone",
    "compute_ratios",
    "load_lexicon",
    "preprocess_text",
    "score_corpus",
    "score_record",
    "tokenize",
    "z_original",
    "z_revised",
    "z_scores",
    "__version__",
]
