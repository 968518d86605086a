import pytest
from hypothesis import given, strategies as st

from zmine.sentiment import (
    Category,
    EmptyCorpusError,
    EmptyLexiconError,
    Lexicon,
    LexiconError,
    UnknownCategoryError,
    load_lexicon,
    ratio_from_percentages,
    read_sentiment_csv,
    score_corpus,
    write_sentiment_csv,
)

# Reference sector-year sentiment summary: (sector, year, positive %,
# negative %, positive-to-negative ratio). The ratio column must agree
# with the two percentage columns up to last-digit rounding.
SECTOR_YEAR_SENTIMENT = [
    ("Aviation", 2013, 0.92, 1.41, 0.653),
    ("Aviation", 2014, 0.83, 1.60, 0.518),
    ("Aviation", 2015, 0.82, 1.50, 0.548),
    ("Aviation", 2016, 0.97, 1.43, 0.676),
    ("iGaming", 2013, 1.19, 1.50, 0.790),
    ("iGaming", 2014, 1.21, 1.48, 0.814),
    ("iGaming", 2015, 1.21, 1.33, 0.911),
    ("iGaming", 2016, 1.17, 1.50, 0.783),
    ("Pharmaceuticals", 2013, 1.15, 1.35, 0.848),
    ("Pharmaceuticals", 2014, 1.12, 1.54, 0.730),
    ("Pharmaceuticals", 2015, 1.11, 1.26, 0.882),
    ("Pharmaceuticals", 2016, 1.12, 1.45, 0.773),
    ("Tourism", 2013, 1.14, 1.25, 0.910),
    ("Tourism", 2014, 1.12, 1.28, 0.879),
    ("Tourism", 2015, 1.11, 1.30, 0.854),
    ("Tourism", 2016, 1.03, 1.34, 0.765),
]


def lexicon(**entries):
    return Lexicon(entries={
        word: frozenset(categories) for word, categories in entries.items()
    })


def test_counting_example():
    score = score_corpus(["good", "good", "bad"],
                         lexicon(good={Category.POSITIVE}, bad={Category.NEGATIVE}),
                         "Aviation", 2013)
    assert score.positive_count == 2
    assert score.negative_count == 1
    assert score.total_terms == 3
    assert score.positive_pct == pytest.approx(66.67, abs=0.01)
    assert score.negative_pct == pytest.approx(33.33, abs=0.01)
    assert score.pos_to_neg == pytest.approx(2.0)


def test_zero_negative_leaves_ratio_absent():
    score = score_corpus(["good"], lexicon(good={Category.POSITIVE}),
                         "Aviation", 2013)
    assert score.positive_pct == 100.0
    assert score.negative_pct == 0.0
    assert score.pos_to_neg is None


def test_empty_corpus_is_an_error():
    with pytest.raises(EmptyCorpusError):
        score_corpus([], lexicon(good={Category.POSITIVE}), "Aviation", 2013)


def test_term_in_both_categories_counts_in_both():
    score = score_corpus(
        ["mixed"],
        lexicon(mixed={Category.POSITIVE, Category.NEGATIVE}),
        "Aviation", 2013,
    )
    assert score.positive_count == 1
    assert score.negative_count == 1


def test_uncounted_categories_do_not_leak():
    score = score_corpus(
        ["maybe", "sue"],
        lexicon(maybe={Category.UNCERTAINTY}, sue={Category.LITIGIOUS}),
        "Aviation", 2013,
    )
    assert score.positive_count == 0
    assert score.negative_count == 0


@pytest.mark.parametrize("sector,year,pos,neg,ratio", SECTOR_YEAR_SENTIMENT)
def test_ratio_column_consistent_with_percentages(sector, year, pos, neg, ratio):
    assert ratio_from_percentages(pos, neg) == pytest.approx(ratio, abs=0.01)


@given(st.lists(st.sampled_from(["good", "bad", "flat", "maybe"]),
                min_size=1, max_size=60))
def test_scoring_is_permutation_invariant(terms):
    lex = lexicon(good={Category.POSITIVE}, bad={Category.NEGATIVE},
                  maybe={Category.UNCERTAINTY})
    forward = score_corpus(terms, lex, "s", 2013)
    backward = score_corpus(list(reversed(terms)), lex, "s", 2013)
    assert forward == backward
    assert forward.positive_pct + forward.negative_pct <= 100.0 + 1e-9


def test_load_simple_format(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("ACHIEVES,positive\nlosses,negative\n")
    lex = load_lexicon(path)
    assert lex.categories("achieve") == frozenset({Category.POSITIVE})
    assert lex.categories("loss") == frozenset({Category.NEGATIVE})


def test_case_collision_merges(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("good,positive\nGOOD,positive\n")
    lex = load_lexicon(path)
    assert len(lex) == 1
    assert lex.categories("good") == frozenset({Category.POSITIVE})


def test_collision_unions_categories(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("Challenged,negative\nchallenges,uncertainty\n")
    lex = load_lexicon(path)
    # both inflections normalize to the same stem
    assert lex.categories("challenge") == frozenset(
        {Category.NEGATIVE, Category.UNCERTAINTY}
    )


def test_load_master_format(tmp_path):
    path = tmp_path / "master.csv"
    path.write_text(
        "Word,Negative,Positive,Uncertainty,Litigious\n"
        "ABANDON,2009,0,0,0\n"
        "ACHIEVE,0,2009,0,0\n"
        "ALMOST,0,0,2009,0\n"
        "CLAIMANT,0,0,0,2009\n"
    )
    lex = load_lexicon(path)
    assert lex.categories("abandon") == frozenset({Category.NEGATIVE})
    assert lex.categories("achieve") == frozenset({Category.POSITIVE})
    assert lex.categories("almost") == frozenset({Category.UNCERTAINTY})
    assert lex.categories("claimant") == frozenset({Category.LITIGIOUS})


def test_master_format_zero_rows_skipped(tmp_path):
    path = tmp_path / "master.csv"
    path.write_text("Word,Negative,Positive\nNEUTRAL,0,0\nGOOD,0,1\n")
    lex = load_lexicon(path)
    assert lex.categories("neutral") == frozenset()
    assert len(lex) == 1


def test_master_format_rejects_non_numeric_cell(tmp_path):
    path = tmp_path / "master.csv"
    path.write_text("Word,Negative,Positive\nGOOD,yes,1\n")
    with pytest.raises(LexiconError):
        load_lexicon(path)


def test_unknown_category(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("good,wonderful\n")
    with pytest.raises(UnknownCategoryError):
        load_lexicon(path)


def test_empty_lexicon(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("")
    with pytest.raises(EmptyLexiconError):
        load_lexicon(path)


def test_unreadable_file(tmp_path):
    with pytest.raises(LexiconError):
        load_lexicon(tmp_path / "missing.csv")


def test_wrong_column_count(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text("good,positive,extra\n")
    with pytest.raises(LexiconError):
        load_lexicon(path)


def test_uppercase_and_lowercase_files_agree(tmp_path):
    upper = tmp_path / "upper.csv"
    lower = tmp_path / "lower.csv"
    upper.write_text("GOOD,positive\nBAD,negative\n")
    lower.write_text("good,positive\nbad,negative\n")
    terms = ["good", "bad", "good"]
    a = score_corpus(terms, load_lexicon(upper), "s", 2013)
    b = score_corpus(terms, load_lexicon(lower), "s", 2013)
    assert a == b


def test_csv_round_trip(tmp_path):
    scores = [
        score_corpus(["good", "bad"], lexicon(good={Category.POSITIVE},
                                              bad={Category.NEGATIVE}), "Aviation", 2013),
        score_corpus(["good"], lexicon(good={Category.POSITIVE}), "Tourism", 2014),
    ]
    path = tmp_path / "sentiment.csv"
    write_sentiment_csv(path, scores)
    loaded = read_sentiment_csv(path)
    assert loaded == scores
    assert loaded[1].pos_to_neg is None
