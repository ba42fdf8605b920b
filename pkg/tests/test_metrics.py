import numpy as np
import pytest

from vgnae import metrics
from vgnae.errors import InputError
from vgnae.graph import Graph

from conftest import random_graph


def auc_pairwise_oracle(scores, labels):
    """O(n^2) Mann-Whitney probability with half credit for ties."""
    pos = scores[labels.astype(bool)]
    neg = scores[~labels.astype(bool)]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def ap_sweep_oracle(scores, labels):
    """Naive precision-recall sweep, ties broken by original index."""
    order = sorted(range(len(scores)), key=lambda k: (-scores[k], k))
    n_pos = int(labels.sum())
    tp = 0
    ap = 0.0
    for rank, k in enumerate(order, start=1):
        if labels[k]:
            tp += 1
            ap += tp / rank
    return ap / n_pos


class TestRocAuc:
    def test_perfect_separation(self):
        assert metrics.roc_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_inverted_labels(self):
        assert metrics.roc_auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0

    def test_all_ties(self):
        assert metrics.roc_auc([0.5] * 6, [1, 0, 1, 0, 1, 0]) == 0.5

    def test_single_class_raises(self):
        with pytest.raises(InputError):
            metrics.roc_auc([0.1, 0.2], [1, 1])

    def test_matches_pairwise_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(10, 200))
            scores = np.round(rng.random(n), 2)  # rounding forces ties
            labels = rng.random(n) < 0.4
            if labels.all() or not labels.any():
                continue
            assert metrics.roc_auc(scores, labels) == pytest.approx(
                auc_pairwise_oracle(scores, labels), abs=1e-12)

    def test_permutation_invariant(self, rng):
        scores = rng.random(50)
        labels = rng.random(50) < 0.5
        labels[0], labels[1] = True, False
        perm = rng.permutation(50)
        assert metrics.roc_auc(scores, labels) == pytest.approx(
            metrics.roc_auc(scores[perm], labels[perm]), abs=1e-12)


class TestAveragePrecision:
    def test_perfect_ranking(self):
        assert metrics.average_precision([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_single_positive_ranked_last(self):
        n = 10
        scores = np.linspace(1.0, 0.1, n)
        labels = np.zeros(n, dtype=bool)
        labels[-1] = True
        assert metrics.average_precision(scores, labels) == pytest.approx(1.0 / n)

    def test_no_positive_raises(self):
        with pytest.raises(InputError):
            metrics.average_precision([0.3, 0.2], [0, 0])

    def test_matches_sweep_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(10, 150))
            scores = np.round(rng.random(n), 2)
            labels = rng.random(n) < 0.4
            if not labels.any():
                continue
            assert metrics.average_precision(scores, labels) == pytest.approx(
                ap_sweep_oracle(scores, labels), abs=1e-12)


class TestStratifiedReport:
    def test_all_connected_gives_absent_isolated(self, rng):
        scores = rng.random(20)
        labels = np.concatenate([np.ones(10, bool), np.zeros(10, bool)])
        report = metrics.stratified_report(scores, labels, np.zeros(20, bool))
        assert report.auc_isolated is None
        assert report.auc_connected == pytest.approx(
            metrics.roc_auc(scores, labels))

    def test_strata_equal_per_half_recomputation(self, rng):
        scores = rng.random(40)
        labels = np.tile([True, False], 20)
        mask = np.concatenate([np.ones(20, bool), np.zeros(20, bool)])
        report = metrics.stratified_report(scores, labels, mask)
        assert report.auc_isolated == pytest.approx(
            metrics.roc_auc(scores[:20], labels[:20]))
        assert report.auc_connected == pytest.approx(
            metrics.roc_auc(scores[20:], labels[20:]))

    def test_counts_sum_to_total(self, rng):
        scores = rng.random(33)
        labels = rng.random(33) < 0.5
        labels[:2] = [True, False]
        mask = rng.random(33) < 0.3
        report = metrics.stratified_report(scores, labels, mask)
        assert report.n_isolated + report.n_connected == 33


class TestNormByDegree:
    def test_counts_sum_to_n(self, rng):
        g = random_graph(rng, 25, p=0.3)
        z = rng.standard_normal((25, 8))
        table = metrics.norm_by_degree(z, g)
        assert sum(row[1] for row in table.rows) == 25

    def test_all_equal_embeddings_same_mean(self, rng):
        g = random_graph(rng, 15, p=0.3)
        z = np.tile(rng.standard_normal(4), (15, 1))
        table = metrics.norm_by_degree(z, g)
        norm = float(np.linalg.norm(z[0]))
        for row in table.rows:
            if row[1] > 0:
                assert row[2] == pytest.approx(norm, abs=1e-12)

    def test_overflow_bucket(self):
        # star graph: hub degree 12 goes to the overflow bucket
        edges = np.array([(0, i) for i in range(1, 13)])
        g = Graph(np.ones((13, 2)), edges)
        table = metrics.norm_by_degree(np.ones((13, 2)), g, max_degree=10)
        overflow = table.bucket("11+")
        assert overflow[1] == 1

    def test_row_count_mismatch(self, rng):
        g = random_graph(rng, 10, p=0.3)
        with pytest.raises(InputError):
            metrics.norm_by_degree(np.ones((9, 2)), g)
