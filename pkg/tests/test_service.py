import itertools

import pytest
from fastapi.testclient import TestClient

from zmine.dataset import Dataset, write_dataset_csv
from zmine.ratios import Status
from zmine.scoring import ScoreEntry, ScoreTable, write_score_table
from zmine.sentiment import SentimentScore, write_sentiment_csv
from zmine.service import Artifacts, create_app, create_app_from_root, load_artifacts

from conftest import make_row

SECTORS = ["iGaming", "Pharmaceuticals", "Aviation", "Tourism"]
YEARS = [2013, 2014, 2015, 2016]


def build_artifacts():
    """Nine hand-placed rows so aggregate values can be checked by hand."""
    rows = (
        make_row("C1", 2013, sector_keyword="Aviation", label=Status.BANKRUPT),
        make_row("C2", 2013, sector_keyword="Aviation"),
        make_row("C3", 2013, sector_keyword="Tourism"),
        make_row("C4", 2014, sector_keyword="Aviation"),
        make_row("C5", 2014, sector_keyword="iGaming"),
        make_row("C6", 2015, sector_keyword="Pharmaceuticals"),
        make_row("C7", 2015, sector_keyword="Aviation", label=Status.BANKRUPT),
        make_row("C8", 2016, sector_keyword="Tourism"),
        make_row("C1", 2014, sector_keyword="Aviation"),
    )
    probabilities = {
        ("C1", 2013): 0.99, ("C2", 2013): 0.10, ("C3", 2013): 0.20,
        ("C4", 2014): 0.985, ("C5", 2014): 0.30, ("C6", 2015): 0.40,
        ("C7", 2015): 0.995, ("C8", 2016): 0.98,  # exactly at threshold
        ("C1", 2014): 0.50,
    }
    entries = tuple(
        ScoreEntry(
            company_id=row.company_id, year=row.year,
            sector=row.sector_keyword, z=row.z, z_prime=row.z_prime,
            positive_pct=row.positive_pct, negative_pct=row.negative_pct,
            pos_to_neg=row.pos_to_neg,
            probability=probabilities[(row.company_id, row.year)],
            flagged=probabilities[(row.company_id, row.year)] > 0.98,
        )
        for row in rows
    )
    sentiment = [
        SentimentScore(sector=s, year=y, positive_pct=1.0 + i * 0.1,
                       negative_pct=2.0 - i * 0.1, pos_to_neg=0.5,
                       total_terms=100, positive_count=1, negative_count=2)
        for i, (s, y) in enumerate(itertools.product(SECTORS, YEARS))
    ]
    dataset = Dataset(rows=rows, exclusion_count=0, drop_warnings={},
                      imbalance={})
    scores = ScoreTable(entries=entries, model_version="logistic-v1",
                        threshold=0.98)
    return Artifacts(dataset=dataset, scores=scores, sentiment=sentiment)


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(build_artifacts()))


def test_companies_lists_every_row(client):
    rows = client.get("/api/companies").json()
    assert len(rows) == 9
    assert {r["company_id"] for r in rows} == {f"C{i}" for i in range(1, 9)}


def test_company_document_shape(client):
    [doc] = client.get("/api/companies", params={"company_id": "C6"}).json()
    assert doc["sector"] == "Pharmaceuticals"
    assert doc["year"] == 2015
    assert doc["bankrupt"] is False
    assert doc["probability"] == 0.40
    assert doc["flagged"] is False
    assert doc["z_prime"] == pytest.approx(1.80405)


def test_sector_filter(client):
    rows = client.get("/api/companies", params={"sector": "Aviation"}).json()
    assert {r["company_id"] for r in rows} == {"C1", "C2", "C4", "C7"}


def test_year_filter(client):
    rows = client.get("/api/companies", params={"year": 2013}).json()
    assert len(rows) == 3


def test_filters_conjunctive(client):
    rows = client.get("/api/companies",
                      params={"sector": "Aviation", "year": 2013}).json()
    assert {r["company_id"] for r in rows} == {"C1", "C2"}


def test_filter_order_is_irrelevant(client):
    a = client.get("/api/companies?sector=Aviation&year=2013").json()
    b = client.get("/api/companies?year=2013&sector=Aviation").json()
    assert a == b


def test_filtered_result_is_subset(client):
    everything = client.get("/api/companies").json()
    filtered = client.get("/api/companies", params={"sector": "Tourism"}).json()
    keys = {(r["company_id"], r["year"]) for r in everything}
    assert {(r["company_id"], r["year"]) for r in filtered} <= keys


def test_conjunctive_empty_is_200(client):
    response = client.get("/api/companies",
                          params={"sector": "Tourism", "year": 2015})
    assert response.status_code == 200
    assert response.json() == []


def test_unknown_sector_is_400(client):
    assert client.get("/api/companies",
                      params={"sector": "Banking"}).status_code == 400


def test_unknown_year_is_400(client):
    assert client.get("/api/companies", params={"year": 1999}).status_code == 400


def test_non_integer_year_is_400(client):
    assert client.get("/api/companies", params={"year": "soon"}).status_code == 400


def test_bad_flagged_value_is_400(client):
    assert client.get("/api/companies",
                      params={"flagged": "maybe"}).status_code == 400


def test_unknown_company_filter_is_400(client):
    assert client.get("/api/companies",
                      params={"company_id": "C99"}).status_code == 400


def test_company_path_lists_all_years(client):
    rows = client.get("/api/companies/C1").json()
    assert {r["year"] for r in rows} == {2013, 2014}


def test_company_path_with_filters(client):
    rows = client.get("/api/companies/C1", params={"year": 2013}).json()
    assert len(rows) == 1
    assert rows[0]["flagged"] is True


def test_unknown_company_path_is_404(client):
    assert client.get("/api/companies/NOPE").status_code == 404


def test_scores_endpoint_filters(client):
    entries = client.get("/api/scores", params={"year": 2015,
                                                "flagged": "true"}).json()
    assert [e["company_id"] for e in entries] == ["C7"]


def test_flags_endpoint_only_flagged(client):
    flagged = client.get("/api/flags").json()
    assert {e["company_id"] for e in flagged} == {"C1", "C4", "C7"}
    # 0.98 is not over the threshold
    assert "C8" not in {e["company_id"] for e in flagged}


def test_sentiment_full_grid(client):
    assert len(client.get("/api/sentiment").json()) == 16


def test_sentiment_sector_filter_gives_year_series(client):
    rows = client.get("/api/sentiment", params={"sector": "Aviation"}).json()
    assert len(rows) == 4
    assert sorted(r["year"] for r in rows) == YEARS


def test_bankruptcy_by_year_hand_mean(client):
    agg = client.get("/api/aggregates/bankruptcy-by-year").json()
    y2013 = next(a for a in agg if a["year"] == 2013)
    assert y2013["companies"] == 3
    assert y2013["mean_probability"] == pytest.approx((0.99 + 0.10 + 0.20) / 3)


def test_bankruptcy_by_year_respects_filters(client):
    agg = client.get("/api/aggregates/bankruptcy-by-year",
                     params={"sector": "Aviation"}).json()
    y2014 = next(a for a in agg if a["year"] == 2014)
    # C4 (0.985) and C1-2014 (0.50)
    assert y2014["mean_probability"] == pytest.approx((0.985 + 0.50) / 2)
    assert y2014["companies"] == 2


def test_sentiment_by_year_means(client):
    agg = client.get("/api/aggregates/sentiment-by-year").json()
    assert len(agg) == 4
    for bucket in agg:
        assert bucket["sectors"] == 4


def test_flag_counts_aggregate(client):
    agg = client.get("/api/aggregates/flags").json()
    total = sum(a["flagged_count"] for a in agg)
    assert total == 3
    aviation_2013 = next(a for a in agg
                         if a["sector"] == "Aviation" and a["year"] == 2013)
    assert aviation_2013["flagged_count"] == 1


def test_flag_counts_equal_flagged_company_rows(client):
    # the dashboard's counts view and its table view must agree
    agg_total = sum(a["flagged_count"]
                    for a in client.get("/api/aggregates/flags").json())
    table_rows = client.get("/api/companies", params={"flagged": "true"}).json()
    assert agg_total == len(table_rows)


def test_cors_header_present(client):
    response = client.get("/api/companies",
                          headers={"Origin": "http://localhost:5173"})
    assert response.headers["access-control-allow-origin"] == "*"


def test_artifacts_round_trip_via_files(tmp_path):
    artifacts = build_artifacts()
    write_dataset_csv(tmp_path / "dataset.csv", artifacts.dataset)
    write_score_table(tmp_path / "scores.json", artifacts.scores)
    write_sentiment_csv(tmp_path / "sentiment.csv", artifacts.sentiment)
    loaded = load_artifacts(tmp_path)
    assert loaded.dataset.rows == artifacts.dataset.rows
    assert loaded.scores.entries == artifacts.scores.entries
    assert loaded.sentiment == artifacts.sentiment

    client = TestClient(create_app_from_root(tmp_path))
    assert len(client.get("/api/companies").json()) == 9


def test_load_artifacts_names_missing_files(tmp_path):
    with pytest.raises(FileNotFoundError) as err:
        load_artifacts(tmp_path)
    assert "dataset.csv" in str(err.value)
