import itertools

import pytest
from hypothesis import given, settings, strategies as st

from zmine.dataset import (
    Dataset,
    EmptyDatasetError,
    FeatureRow,
    FINANCIAL_FEATURES,
    MappingError,
    MappingSource,
    SectorMapping,
    SENTIMENT_VARIABLE_SETS,
    StratificationError,
    build_dataset,
    feature_names,
    feature_vector,
    imbalance_stats,
    map_sectors,
    read_dataset_csv,
    sector_code_frequencies,
    split_train_test,
    write_dataset_csv,
)
from zmine.ratios import FinancialRecord, Status, score_record
from zmine.sentiment import Category, Lexicon, score_corpus

from conftest import make_row

KEYWORDS = ["iGaming", "Pharmaceuticals", "Aviation", "Tourism"]


def financial_record(company_id, sector_code, year=2013, bankrupt=False,
                     is_public=False):
    return FinancialRecord(
        company_id=company_id, year=year, sector_code=sector_code,
        is_public=is_public, working_capital=50.0, total_assets=500.0,
        retained_earnings=100.0, ebit=25.0, market_value_equity=300.0,
        book_value_equity=200.0, total_liabilities=400.0, sales=600.0,
        status=Status.BANKRUPT if bankrupt else Status.NON_BANKRUPT,
    )


def sentiment_for(sector, year, positive=2, negative=1):
    terms = ["good"] * positive + ["bad"] * negative + ["flat"]
    lex = Lexicon(entries={"good": frozenset({Category.POSITIVE}),
                           "bad": frozenset({Category.NEGATIVE})})
    return score_corpus(terms, lex, sector, year)


def test_feature_sets():
    assert feature_names("none") == FINANCIAL_FEATURES
    assert feature_names("all") == FINANCIAL_FEATURES + [
        "negative_pct", "positive_pct", "pos_to_neg",
    ]
    assert len(feature_names("all")) == 11
    for name in SENTIMENT_VARIABLE_SETS:
        assert set(SENTIMENT_VARIABLE_SETS[name]) <= {
            "negative_pct", "positive_pct", "pos_to_neg",
        }


def test_feature_vector_matches_row():
    row = make_row(a=0.7, pos_to_neg=1.5)
    vec = feature_vector(row, "all")
    assert vec[0] == 0.7
    assert vec[-1] == 1.5
    assert len(vec) == 11


def test_feature_names_rejects_unknown_set():
    with pytest.raises(ValueError):
        feature_names("everything")


def test_map_sectors_top_four_by_frequency():
    codes = {"S1": 10, "S2": 8, "S3": 6, "S4": 4, "S5": 1}
    mapping = map_sectors(codes, KEYWORDS, seed=0)
    assert set(mapping.pairs) == {"S1", "S2", "S3", "S4"}
    assert sorted(mapping.pairs.values()) == sorted(KEYWORDS)
    assert mapping.source is MappingSource.RANDOM


def test_rare_code_never_selected():
    codes = {"S1": 10, "S2": 8, "S3": 6, "S4": 4, "S5": 1}
    for seed in range(50):
        assert "S5" not in map_sectors(codes, KEYWORDS, seed=seed).pairs


def test_map_sectors_deterministic_per_seed():
    codes = {"S1": 4, "S2": 3, "S3": 2, "S4": 1}
    assert map_sectors(codes, KEYWORDS, 7) == map_sectors(codes, KEYWORDS, 7)


def test_map_sectors_varies_with_seed():
    codes = {"S1": 4, "S2": 3, "S3": 2, "S4": 1}
    mappings = {tuple(sorted(map_sectors(codes, KEYWORDS, s).pairs.items()))
                for s in range(20)}
    assert len(mappings) > 1


def test_map_sectors_frequency_ties_break_lexicographically():
    codes = {"B": 2, "A": 2, "D": 2, "C": 2, "E": 1}
    mapping = map_sectors(codes, KEYWORDS, seed=0)
    assert set(mapping.pairs) == {"A", "B", "C", "D"}


def test_map_sectors_requires_four_codes():
    with pytest.raises(MappingError):
        map_sectors({"S1": 1, "S2": 1, "S3": 1}, KEYWORDS, 0)


def test_map_sectors_requires_four_keywords():
    with pytest.raises(MappingError):
        map_sectors({"S1": 1, "S2": 1, "S3": 1, "S4": 1}, KEYWORDS[:3], 0)


def test_explicit_mapping_wins():
    explicit = dict(zip(["S9", "S8", "S7", "S6"], KEYWORDS))
    mapping = map_sectors({"S1": 99}, KEYWORDS, 0, explicit=explicit)
    assert mapping.pairs == explicit
    assert mapping.source is MappingSource.EXPLICIT


def test_explicit_mapping_must_be_bijection():
    with pytest.raises(MappingError):
        map_sectors({}, KEYWORDS, 0,
                    explicit={"S1": "Aviation", "S2": "Aviation",
                              "S3": "Tourism", "S4": "iGaming"})


def test_sector_mapping_validates_itself():
    with pytest.raises(MappingError):
        SectorMapping(pairs={"S1": "Aviation"}, seed=0,
                      source=MappingSource.RANDOM)


def default_mapping():
    return SectorMapping(
        pairs=dict(zip(["S1", "S2", "S3", "S4"], KEYWORDS)),
        seed=0, source=MappingSource.EXPLICIT,
    )


def scored_records(records):
    scored, exclusions = [], []
    for r in records:
        result = score_record(r)
        if hasattr(result, "reason"):
            exclusions.append(result)
        else:
            scored.append(result)
    return scored, exclusions


def test_build_dataset_joins_sentiment():
    records = [financial_record("C1", "S1"), financial_record("C2", "S2")]
    scored, exclusions = scored_records(records)
    sentiments = [sentiment_for("iGaming", 2013), sentiment_for("Pharmaceuticals", 2013)]
    ds = build_dataset(scored, exclusions, default_mapping(), sentiments)
    assert len(ds) == 2
    by_id = {r.company_id: r for r in ds.rows}
    assert by_id["C1"].sector_keyword == "iGaming"
    assert by_id["C1"].positive_pct == sentiments[0].positive_pct
    assert by_id["C1"].z_prime == pytest.approx(1.80405)


def test_private_rows_use_book_value_for_original_score():
    records = [financial_record("C1", "S1", is_public=False)]
    scored, exclusions = scored_records(records)
    ds = build_dataset(scored, exclusions, default_mapping(),
                       [sentiment_for("iGaming", 2013)])
    [row] = ds.rows
    # the original-model column is still populated for the feature matrix
    assert row.z != 0.0
    assert row.d == 0.0  # no market value exists for private companies


def test_build_dataset_drops_unmapped_sector():
    records = [financial_record("C1", "S1"), financial_record("C2", "S99")]
    scored, exclusions = scored_records(records)
    ds = build_dataset(scored, exclusions, default_mapping(),
                       [sentiment_for("iGaming", 2013)])
    assert len(ds) == 1
    assert ds.drop_warnings["unmapped_sector"] == 1


def test_build_dataset_drops_missing_sentiment():
    records = [financial_record("C1", "S1"), financial_record("C2", "S2")]
    scored, exclusions = scored_records(records)
    ds = build_dataset(scored, exclusions, default_mapping(),
                       [sentiment_for("iGaming", 2013)])
    assert len(ds) == 1
    assert ds.drop_warnings["missing_sentiment"] == 1


def test_build_dataset_drops_ratio_undefined_group():
    records = [financial_record("C1", "S1"), financial_record("C2", "S2")]
    scored, exclusions = scored_records(records)
    sentiments = [sentiment_for("iGaming", 2013),
                  sentiment_for("Pharmaceuticals", 2013, positive=1, negative=0)]
    ds = build_dataset(scored, exclusions, default_mapping(), sentiments)
    assert len(ds) == 1
    assert ds.drop_warnings["ratio_undefined"] == 1


def test_rows_plus_exclusions_plus_drops_equals_input():
    records = [
        financial_record("C1", "S1"),
        financial_record("C2", "S2"),
        financial_record("C3", "S99"),
        financial_record("C4", "S1", bankrupt=True),
    ]
    records.append(FinancialRecord(
        company_id="C5", year=2013, sector_code="S1", is_public=False,
        working_capital=1.0, total_assets=0.0, retained_earnings=1.0,
        ebit=1.0, market_value_equity=1.0, book_value_equity=1.0,
        total_liabilities=1.0, sales=1.0, status=Status.NON_BANKRUPT,
    ))
    scored, exclusions = scored_records(records)
    sentiments = [sentiment_for("iGaming", 2013)]
    ds = build_dataset(scored, exclusions, default_mapping(), sentiments)
    total = len(ds) + ds.exclusion_count + sum(ds.drop_warnings.values())
    assert total == len(records)


def test_build_dataset_empty_result_is_an_error():
    records = [financial_record("C1", "S99")]
    scored, exclusions = scored_records(records)
    with pytest.raises(EmptyDatasetError):
        build_dataset(scored, exclusions, default_mapping(),
                      [sentiment_for("iGaming", 2013)])


def test_imbalance_stats():
    rows = tuple(
        make_row(company_id=f"C{i}", year=2013,
                 label=Status.BANKRUPT if i < 9 else Status.NON_BANKRUPT)
        for i in range(100)
    )
    ds = Dataset(rows=rows, exclusion_count=0, drop_warnings={}, imbalance={})
    stats = imbalance_stats(ds, 2013)
    assert stats["bankrupt_pct"] == pytest.approx(9.0)
    assert stats["nonbankrupt_pct"] == pytest.approx(91.0)


def test_imbalance_stats_unknown_year():
    ds = Dataset(rows=(make_row(),), exclusion_count=0, drop_warnings={},
                 imbalance={})
    with pytest.raises(ValueError):
        imbalance_stats(ds, 1999)


def test_build_dataset_records_per_year_imbalance():
    records = [financial_record(f"C{i}", "S1", bankrupt=(i < 2))
               for i in range(10)]
    scored, exclusions = scored_records(records)
    ds = build_dataset(scored, exclusions, default_mapping(),
                       [sentiment_for("iGaming", 2013)])
    assert ds.imbalance[2013]["bankrupt_pct"] == pytest.approx(20.0)


def make_split_rows(n=100, bankrupt=10, year=2013):
    return [
        make_row(company_id=f"C{i}", year=year,
                 label=Status.BANKRUPT if i < bankrupt else Status.NON_BANKRUPT)
        for i in range(n)
    ]


def test_split_floor_arithmetic():
    train, test = split_train_test(make_split_rows(100, 10), 2013, 0.7, seed=0)
    train_bankrupt = sum(1 for r in train if r.label is Status.BANKRUPT)
    train_healthy = len(train) - train_bankrupt
    # floor(10 * 0.7) = 7 and floor(90 * 0.7) = 63, taken per class
    assert train_bankrupt == 7
    assert train_healthy == 63
    assert len(test) == 30


def test_split_partitions_exactly():
    rows = make_split_rows(57, 9)
    train, test = split_train_test(rows, 2013, 0.7, seed=3)
    assert len(train) + len(test) == len(rows)
    ids = {r.company_id for r in rows}
    assert {r.company_id for r in train} | {r.company_id for r in test} == ids
    assert not ({r.company_id for r in train} & {r.company_id for r in test})


def test_split_deterministic():
    rows = make_split_rows()
    a = split_train_test(rows, 2013, 0.7, seed=5)
    b = split_train_test(rows, 2013, 0.7, seed=5)
    assert a == b


def test_split_seed_changes_assignment():
    rows = make_split_rows()
    a, _ = split_train_test(rows, 2013, 0.7, seed=1)
    b, _ = split_train_test(rows, 2013, 0.7, seed=2)
    assert {r.company_id for r in a} != {r.company_id for r in b}


def test_split_accepts_dataset():
    ds = Dataset(rows=tuple(make_split_rows()), exclusion_count=0,
                 drop_warnings={}, imbalance={})
    train, test = split_train_test(ds, 2013, 0.7, seed=0)
    assert len(train) + len(test) == 100


def test_split_filters_by_year():
    rows = make_split_rows(40, 4, year=2013) + make_split_rows(40, 4, year=2014)
    train, test = split_train_test(rows, 2013, 0.5, seed=0)
    assert all(r.year == 2013 for r in itertools.chain(train, test))


def test_split_single_class_fails():
    rows = [make_row(company_id=f"C{i}") for i in range(10)]
    with pytest.raises(StratificationError):
        split_train_test(rows, 2015, 0.7, seed=0)


def test_split_rejects_degenerate_fraction():
    rows = make_split_rows()
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            split_train_test(rows, 2013, bad, seed=0)


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=20, max_value=200),
    bankrupt_share=st.floats(min_value=0.05, max_value=0.5),
    fraction=st.sampled_from([0.5, 0.6, 0.7, 0.8]),
    seed=st.integers(min_value=0, max_value=10_000),
)
def test_split_class_counts_follow_floor(n, bankrupt_share, fraction, seed):
    import math
    bankrupt = max(1, int(n * bankrupt_share))
    if bankrupt >= n:
        bankrupt = n - 1
    rows = make_split_rows(n, bankrupt)
    train, _ = split_train_test(rows, 2013, fraction, seed=seed)
    train_bankrupt = sum(1 for r in train if r.label is Status.BANKRUPT)
    from fractions import Fraction
    expected_b = math.floor(Fraction(bankrupt) * Fraction(str(fraction)))
    expected_h = math.floor(Fraction(n - bankrupt) * Fraction(str(fraction)))
    assert train_bankrupt == expected_b
    assert len(train) - train_bankrupt == expected_h


def test_dataset_csv_round_trip(tmp_path):
    records = [financial_record(f"C{i}", "S1", bankrupt=(i == 0))
               for i in range(5)]
    scored, exclusions = scored_records(records)
    ds = build_dataset(scored, exclusions, default_mapping(),
                       [sentiment_for("iGaming", 2013)])
    path = tmp_path / "dataset.csv"
    write_dataset_csv(path, ds)
    loaded = read_dataset_csv(path)
    assert loaded.rows == ds.rows
    assert loaded.imbalance == ds.imbalance


def test_csv_preserves_float_precision(tmp_path):
    ds = Dataset(rows=(make_row(a=0.1 + 0.2),), exclusion_count=0,
                 drop_warnings={}, imbalance={})
    path = tmp_path / "dataset.csv"
    write_dataset_csv(path, ds)
    assert read_dataset_csv(path).rows[0].a == 0.1 + 0.2


def test_sector_code_frequencies():
    records = [financial_record("C1", "S1"), financial_record("C2", "S1"),
               financial_record("C3", "S2")]
    freq = sector_code_frequencies(records)
    assert freq == {"S1": 2, "S2": 1}
