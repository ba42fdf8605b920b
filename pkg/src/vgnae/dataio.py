"""Neutral on-disk dataset bundle: meta.txt / features.txt / edges.txt.

meta.txt      4 lines: name / num_nodes / num_features / num_edges
features.txt  n lines of m space-separated reals
edges.txt     num_edges lines "u v" with 0 <= u < v < n
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import LoadError
from .graph import Graph


def load_dataset(path) -> Graph:
    """Load and validate a bundle directory into a Graph."""
    root = Path(path)
    meta_path = root / "meta.txt"
    features_path = root / "features.txt"
    edges_path = root / "edges.txt"
    for p in (meta_path, features_path, edges_path):
        if not p.is_file():
            raise LoadError(p, None, "missing bundle file")

    meta_lines = meta_path.read_text().splitlines()
    if len(meta_lines) < 4:
        raise LoadError(meta_path, len(meta_lines), "meta.txt needs 4 lines")
    try:
        n = int(meta_lines[1])
        m = int(meta_lines[2])
        num_edges = int(meta_lines[3])
    except ValueError as exc:
        raise LoadError(meta_path, 2, f"bad count in meta.txt: {exc}") from exc

    features = np.zeros((n, m), dtype=np.float64)
    with open(features_path) as f:
        row = 0
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            if row >= n:
                raise LoadError(features_path, lineno, f"more than {n} feature rows")
            parts = line.split()
            if len(parts) != m:
                raise LoadError(
                    features_path, lineno, f"expected {m} values, got {len(parts)}"
                )
            try:
                features[row] = [float(p) for p in parts]
            except ValueError as exc:
                raise LoadError(features_path, lineno, f"bad real: {exc}") from exc
            row += 1
    if row != n:
        raise LoadError(features_path, row, f"expected {n} feature rows, got {row}")

    edges = []
    seen: set[tuple[int, int]] = set()
    with open(edges_path) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise LoadError(edges_path, lineno, "expected 'u v'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise LoadError(edges_path, lineno, f"bad endpoint: {exc}") from exc
            if u == v:
                raise LoadError(edges_path, lineno, f"self-loop {u}")
            if not (0 <= u < v < n):
                raise LoadError(edges_path, lineno,
                                f"endpoints must satisfy 0 <= u < v < {n}")
            if (u, v) in seen:
                raise LoadError(edges_path, lineno, f"duplicate edge {u} {v}")
            seen.add((u, v))
            edges.append((u, v))
    if len(edges) != num_edges:
        raise LoadError(edges_path, len(edges) + 1,
                        f"meta.txt declares {num_edges} edges, file has {len(edges)}")

    return Graph(features, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def write_dataset(graph: Graph, path, name: str) -> None:
    """Write a Graph as a bundle; load_dataset(write_dataset(g)) == g."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    (root / "meta.txt").write_text(
        f"{name}\n{graph.num_nodes}\n{graph.num_features}\n{graph.num_edges}\n"
    )
    with open(root / "features.txt", "w") as f:
        for row in graph.features:
            f.write(" ".join(repr(float(x)) for x in row) + "\n")
    with open(root / "edges.txt", "w") as f:
        for u, v in graph.edges:
            f.write(f"{u} {v}\n")
