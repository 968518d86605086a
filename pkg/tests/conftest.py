"""Shared fixtures: synthetic feature rows and the class-separation generator.

The two-Gaussian generator and the nearest-centroid oracle live here so
both the model tests and the acceptance suite draw from the same source.
"""

import math

import numpy as np
import pytest

from zmine.dataset import FeatureRow
from zmine.ratios import Status


def make_row(company_id="C1", year=2015, label=Status.NON_BANKRUPT, **overrides):
    """FeatureRow with every numeric field defaulted to a small constant."""
    values = {
        "a": 0.1, "b": 0.2, "c": 0.05, "d": 0.5, "d_prime": 0.5, "e": 1.2,
        "z": 2.065, "z_prime": 1.80405,
        "negative_pct": 1.4, "positive_pct": 0.9, "pos_to_neg": 0.64,
        "sector_code": "S1", "sector_keyword": "Aviation",
    }
    values.update(overrides)
    return FeatureRow(company_id=company_id, year=year, label=label, **values)


def two_gaussian_rows(seed=11, n=1000, bankrupt_fraction=0.05, separation=4.0,
                      year=2015):
    """Imbalanced two-class dataset with a controlled class-mean distance.

    The informative signal lives in the first two feature columns: each
    class is a unit-variance spherical Gaussian and the bankrupt mean
    sits `separation` pooled standard deviations from the healthy mean.
    Every other numeric column is constant, so the effective geometry is
    exactly the 2-D one the separation figure describes.
    """
    rng = np.random.default_rng(seed)
    n_bankrupt = round(n * bankrupt_fraction)
    shift = separation / math.sqrt(2)
    rows = []
    for i in range(n):
        bankrupt = i < n_bankrupt
        a, b = rng.normal(0.0, 1.0, 2)
        if bankrupt:
            a += shift
            b += shift
        rows.append(FeatureRow(
            company_id=f"F{i:04d}",
            year=year,
            a=float(a), b=float(b),
            c=0.0, d=0.0, d_prime=0.0, e=0.0, z=0.0, z_prime=0.0,
            negative_pct=0.0, positive_pct=0.0, pos_to_neg=0.0,
            label=Status.BANKRUPT if bankrupt else Status.NON_BANKRUPT,
            sector_code="S1",
            sector_keyword="Aviation",
        ))
    return rows


def nearest_centroid_predictions(train_rows, test_rows, features=("a", "b")):
    """Classify test rows by the nearer training-class centroid.

    Deliberately model-free: a sanity reference the learned models must
    not fall far behind on separable data.
    """
    def vec(row):
        return np.array([getattr(row, f) for f in features])

    bankrupt = np.array([vec(r) for r in train_rows if r.label is Status.BANKRUPT])
    healthy = np.array([vec(r) for r in train_rows if r.label is Status.NON_BANKRUPT])
    c_bankrupt = bankrupt.mean(axis=0)
    c_healthy = healthy.mean(axis=0)
    predictions = []
    for row in test_rows:
        x = vec(row)
        d_b = np.linalg.norm(x - c_bankrupt)
        d_h = np.linalg.norm(x - c_healthy)
        predictions.append(Status.BANKRUPT if d_b < d_h else Status.NON_BANKRUPT)
    return predictions


def blob_rows(seed=0, n_per_class=40, year=2015, spread=8.0):
    """Two well-separated blobs; trivially learnable by every model."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(2 * n_per_class):
        bankrupt = i < n_per_class
        centre = spread if bankrupt else 0.0
        a, b = rng.normal(centre, 1.0, 2)
        rows.append(FeatureRow(
            company_id=f"B{i:03d}",
            year=year,
            a=float(a), b=float(b),
            c=0.0, d=0.0, d_prime=0.0, e=0.0, z=0.0, z_prime=0.0,
            negative_pct=0.0, positive_pct=0.0, pos_to_neg=0.0,
            label=Status.BANKRUPT if bankrupt else Status.NON_BANKRUPT,
        ))
    return rows


@pytest.fixture
def separable_rows():
    return two_gaussian_rows()
