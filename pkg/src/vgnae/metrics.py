"""Rank-based AUC/AP, stratified reporting, and embedding-norm diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import InputError
from .graph import Graph


def roc_auc(scores, labels) -> float:
    """Mann-Whitney AUC: P(score+ > score-) + half credit for ties."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise InputError("roc_auc needs both a positive and a negative example")
    ranks = rankdata(scores, method="average")
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def average_precision(scores, labels) -> float:
    """AP over the descending-score sweep; ties broken by original index."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise InputError("average_precision needs at least one positive")
    order = np.lexsort((np.arange(scores.size), -scores))
    hits = labels[order]
    tp = np.cumsum(hits)
    precision = tp / np.arange(1, scores.size + 1)
    return float(precision[hits].sum() / n_pos)


@dataclass
class MetricsReport:
    auc: float
    ap: float
    auc_isolated: float | None
    auc_connected: float | None
    n_isolated: int
    n_connected: int

    def to_lines(self) -> list[str]:
        lines = [
            f"auc = {self.auc!r}",
            f"ap = {self.ap!r}",
            f"auc_isolated = {'none' if self.auc_isolated is None else repr(self.auc_isolated)}",
            f"auc_connected = {'none' if self.auc_connected is None else repr(self.auc_connected)}",
            f"n_isolated = {self.n_isolated}",
            f"n_connected = {self.n_connected}",
        ]
        return lines


def stratified_report(scores, labels, isolated_mask) -> MetricsReport:
    """Overall AUC/AP plus AUC per stratum (isolated vs connected edges).

    A stratum with only one class present reports None rather than a
    fabricated number.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    isolated_mask = np.asarray(isolated_mask).astype(bool)
    if isolated_mask.shape != scores.shape:
        raise InputError("strata mask must cover every score")

    def safe_auc(mask):
        sub_labels = labels[mask]
        if sub_labels.size == 0 or sub_labels.all() or not sub_labels.any():
            return None
        return roc_auc(scores[mask], sub_labels)

    return MetricsReport(
        auc=roc_auc(scores, labels),
        ap=average_precision(scores, labels),
        auc_isolated=safe_auc(isolated_mask),
        auc_connected=safe_auc(~isolated_mask),
        n_isolated=int(isolated_mask.sum()),
        n_connected=int((~isolated_mask).sum()),
    )


@dataclass
class NormDegreeTable:
    """Embedding-norm statistics bucketed by training-graph degree."""

    max_degree: int
    rows: list[tuple[str, int, float, float, float]] = field(default_factory=list)

    def to_lines(self) -> list[str]:
        lines = [f"max_degree_bucket = {self.max_degree}"]
        for label, count, mean, lo, hi in self.rows:
            lines.append(
                f"degree[{label}] = count {count} mean {mean!r} min {lo!r} max {hi!r}"
            )
        return lines

    def bucket(self, label: str):
        for row in self.rows:
            if row[0] == label:
                return row
        return None


def norm_by_degree(z: np.ndarray, graph: Graph, max_degree: int = 10) -> NormDegreeTable:
    """Bucket node embedding norms by degree 0..max_degree with an overflow bucket."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] != graph.num_nodes:
        raise InputError("embedding row count must equal node count")
    norms = np.linalg.norm(z, axis=1)
    degrees = graph.degrees
    table = NormDegreeTable(max_degree=max_degree)
    for d in range(max_degree + 1):
        mask = degrees == d
        if mask.any():
            vals = norms[mask]
            table.rows.append(
                (str(d), int(mask.sum()), float(vals.mean()),
                 float(vals.min()), float(vals.max()))
            )
        else:
            table.rows.append((str(d), 0, 0.0, 0.0, 0.0))
    overflow = degrees > max_degree
    if overflow.any():
        vals = norms[overflow]
        table.rows.append(
            (f"{max_degree + 1}+", int(overflow.sum()), float(vals.mean()),
             float(vals.min()), float(vals.max()))
        )
    else:
        table.rows.append((f"{max_degree + 1}+", 0, 0.0, 0.0, 0.0))
    return table
