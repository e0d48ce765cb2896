"""Tests for accuracy, ROC sweep, AUROC, and sparsity statistics."""

import numpy as np
import pytest

from projlogit.metrics import accuracy, auroc, evaluate, roc_curve, sparsity_stats
from projlogit.model import ModelParams

from conftest import (
    brute_force_roc,
    mann_whitney,
    random_dataset,
    random_scores_labels,
)


class TestAccuracy:
    def test_simple(self):
        assert accuracy([0.9, 0.2], [1, 0]) == 1.0

    def test_ties_predict_class_one(self):
        labels = np.array([1, 0, 1, 0, 1])
        assert accuracy(np.full(5, 0.5), labels, threshold=0.5) == pytest.approx(3 / 5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            accuracy([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            accuracy([0.5], [1, 0])

    def test_invariant_under_monotone_transform(self):
        scores, labels = random_scores_labels(0, 50)
        thr = 0.4
        base = accuracy(scores, labels, thr)
        assert accuracy(np.exp(scores), labels, np.exp(thr)) == base
        assert accuracy(scores**3, labels, thr**3) == base


class TestRocCurve:
    def test_perfect_ranking(self):
        pts = roc_curve([0.9, 0.8, 0.3, 0.2], [1, 1, 0, 0])
        assert pts == [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]

    def test_inverted_ranking_runs_along_bottom(self):
        pts = roc_curve([0.2, 0.9], [1, 0])
        assert pts == [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            roc_curve([0.1, 0.9], [1, 1])

    def test_curve_endpoints_and_monotonicity(self):
        for seed in range(20):
            scores, labels = random_scores_labels(seed, 40, tie_prone=bool(seed % 2))
            pts = np.asarray(roc_curve(scores, labels))
            assert tuple(pts[0]) == (0.0, 0.0)
            assert tuple(pts[-1]) == (1.0, 1.0)
            assert np.all(np.diff(pts[:, 0]) >= 0)
            assert np.all(np.diff(pts[:, 1]) >= 0)

    def test_matches_brute_force_sweep_exactly(self):
        for seed in range(50):
            scores, labels = random_scores_labels(seed, 30, tie_prone=bool(seed % 2))
            assert roc_curve(scores, labels) == brute_force_roc(scores, labels)


class TestAuroc:
    def test_perfect(self):
        assert auroc(roc_curve([0.9, 0.8, 0.2], [1, 1, 0])) == 1.0

    def test_all_tied_is_chance(self):
        assert auroc(roc_curve([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0])) == 0.5

    def test_equals_mann_whitney(self):
        for seed in range(100):
            n = int(np.random.default_rng(seed).integers(4, 200))
            scores, labels = random_scores_labels(seed, n, tie_prone=bool(seed % 3 == 0))
            a = auroc(roc_curve(scores, labels))
            assert abs(a - mann_whitney(scores, labels)) <= 1e-12

    def test_score_reversal_complements(self):
        for seed in range(20):
            scores, labels = random_scores_labels(200 + seed, 60, tie_prone=True)
            a = auroc(roc_curve(scores, labels))
            b = auroc(roc_curve(-scores, labels))
            assert abs((a + b) - 1.0) <= 1e-12


class TestSparsityStats:
    def test_hand_case(self):
        assert sparsity_stats(np.array([0.0, 2.0, -3.0]), 0.0) == (5.0, 2)

    def test_zero_vector(self):
        assert sparsity_stats(np.zeros(4)) == (0.0, 0)

    def test_eps_threshold(self):
        l1, nnz = sparsity_stats(np.array([1e-8, -0.5, 2e-7]), 1e-6)
        assert nnz == 1
        assert l1 == pytest.approx(0.5 + 1e-8 + 2e-7, rel=1e-15)

    def test_negative_eps_rejected(self):
        with pytest.raises(ValueError):
            sparsity_stats(np.zeros(2), -1e-9)


class TestEvaluate:
    def test_zero_model_scores_at_chance(self):
        ds = random_dataset(5, n=40, d=6)
        report = evaluate(ds, ModelParams.zeros(6))
        assert report.accuracy == pytest.approx(ds.class_prevalence)
        assert report.auroc == 0.5
        assert report.l1_norm == 0.0 and report.nnz == 0

    def test_report_round_trips_to_dict(self):
        ds = random_dataset(6, n=30, d=5)
        rng = np.random.default_rng(0)
        report = evaluate(ds, ModelParams(rng.standard_normal(5), 0.1), eps=1e-9)
        doc = report.to_dict()
        assert doc["accuracy"] == report.accuracy
        assert doc["roc_points"][0] == [0.0, 0.0]
        assert doc["roc_points"][-1] == [1.0, 1.0]
