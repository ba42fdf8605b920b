"""Deterministic edge splitting and negative sampling for link prediction.

Positive edges are partitioned into train/val/test; val and test each get
an equal number of sampled non-edges. Everything is a pure function of
(graph, ratios, seed) so experiments replay exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import Graph

MODE_RATIO_1TO3 = "ratio-1to3"
MODE_FIXED_60_10_30 = "fixed-60-10-30"


@dataclass
class EdgeSplit:
    train_pos: np.ndarray
    val_pos: np.ndarray
    test_pos: np.ndarray
    val_neg: np.ndarray
    test_neg: np.ndarray
    seed: int
    train_ratio: float
    mode: str


def _canon_set(edges: np.ndarray) -> set[tuple[int, int]]:
    return {(min(int(u), int(v)), max(int(u), int(v))) for u, v in edges}


def sample_negative_edges(graph: Graph, count: int, rng: np.random.Generator,
                          exclude: set[tuple[int, int]] | None = None) -> np.ndarray:
    """Uniformly sample `count` distinct non-edges (no self-loops).

    Rejection sampling against a hash set of canonical (min, max) pairs.
    """
    n = graph.num_nodes
    existing = _canon_set(graph.edges)
    forbidden = existing if not exclude else existing | set(exclude)
    capacity = n * (n - 1) // 2 - len(existing)
    if count > capacity:
        raise InputError(
            f"cannot sample {count} negative edges; only {capacity} non-edges exist"
        )

    chosen: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    while len(chosen) < count:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        pair = (u, v) if u < v else (v, u)
        if pair in forbidden or pair in seen:
            continue
        seen.add(pair)
        chosen.append(pair)
    return np.asarray(chosen, dtype=np.int64).reshape(-1, 2)


def split_edges(graph: Graph, train_ratio: float, seed: int,
                mode: str = MODE_RATIO_1TO3) -> EdgeSplit:
    """Shuffle edges with a seeded generator and partition them.

    ratio-1to3: first floor(train_ratio * |E|) edges train; the remainder
    goes 1:3 to validation and test. fixed-60-10-30: 60/10/30 regardless
    of train_ratio.
    """
    if mode not in (MODE_RATIO_1TO3, MODE_FIXED_60_10_30):
        raise InputError(f"unknown split mode {mode!r}")
    if not 0.0 < train_ratio < 1.0:
        raise InputError("train_ratio must be in (0, 1)")
    num_edges = graph.num_edges
    rng = np.random.default_rng(seed)
    perm = rng.permutation(num_edges)
    shuffled = graph.edges[perm]

    if mode == MODE_FIXED_60_10_30:
        n_train = int(np.floor(0.6 * num_edges))
        n_val = int(np.floor(0.1 * num_edges))
    else:
        n_train = int(np.floor(train_ratio * num_edges))
        rest = num_edges - n_train
        n_val = rest // 4
    if n_train == 0:
        raise InputError("training edge set is empty; increase train_ratio or |E|")

    train_pos = shuffled[:n_train]
    val_pos = shuffled[n_train : n_train + n_val]
    test_pos = shuffled[n_train + n_val :]

    val_neg = sample_negative_edges(graph, len(val_pos), rng)
    test_neg = sample_negative_edges(graph, len(test_pos), rng,
                                     exclude=_canon_set(val_neg))
    return EdgeSplit(train_pos, val_pos, test_pos, val_neg, test_neg,
                     seed=seed, train_ratio=train_ratio, mode=mode)


def classify_test_nodes(split: EdgeSplit, num_nodes: int) -> np.ndarray:
    """Boolean mask over nodes: True where the node has no training edge."""
    isolated = np.ones(num_nodes, dtype=bool)
    if split.train_pos.size:
        isolated[split.train_pos.ravel()] = False
    return isolated


def edge_strata(edges: np.ndarray, isolated_nodes: np.ndarray) -> np.ndarray:
    """Boolean mask over edges: True where at least one endpoint is isolated."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size == 0:
        return np.zeros(0, dtype=bool)
    return isolated_nodes[edges[:, 0]] | isolated_nodes[edges[:, 1]]


# ---------------------------------------------------------------------------
# manifest serialization

_SECTIONS = ("train_pos", "val_pos", "test_pos", "val_neg", "test_neg")


def write_manifest(split: EdgeSplit, path) -> None:
    with open(path, "w") as f:
        f.write(f"# seed: {split.seed}\n")
        f.write(f"# train_ratio: {split.train_ratio!r}\n")
        f.write(f"# mode: {split.mode}\n")
        for name in _SECTIONS:
            edges = getattr(split, name)
            f.write(f"[{name}]\n")
            for u, v in edges:
                f.write(f"{u} {v}\n")


def read_manifest(path) -> EdgeSplit:
    seed, train_ratio, mode = 0, 0.0, MODE_RATIO_1TO3
    sections: dict[str, list[tuple[int, int]]] = {name: [] for name in _SECTIONS}
    current: str | None = None
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("# seed:"):
                seed = int(line.split(":", 1)[1])
            elif line.startswith("# train_ratio:"):
                train_ratio = float(line.split(":", 1)[1])
            elif line.startswith("# mode:"):
                mode = line.split(":", 1)[1].strip()
            elif line.startswith("[") and line.endswith("]"):
                current = line[1:-1]
                if current not in sections:
                    raise InputError(f"unknown manifest section {current!r}")
            else:
                if current is None:
                    raise InputError("manifest edge line outside any section")
                u, v = line.split()
                sections[current].append((int(u), int(v)))

    def arr(name):
        return np.asarray(sections[name], dtype=np.int64).reshape(-1, 2)

    return EdgeSplit(arr("train_pos"), arr("val_pos"), arr("test_pos"),
                     arr("val_neg"), arr("test_neg"),
                     seed=seed, train_ratio=train_ratio, mode=mode)
