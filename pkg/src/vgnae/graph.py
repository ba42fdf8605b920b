"""Graph representation and the symmetric normalized adjacency.

A graph is an undirected, unweighted edge set plus a dense node-feature
matrix. Adjacency is kept in CSR form with sorted column indices so that
iteration order (and therefore floating-point summation order) is fixed.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import InputError


class Graph:
    """Undirected graph with dense node features.

    Stored self-loops and duplicate edges are rejected; self-loops only
    ever enter through the normalized adjacency's A + I term.
    """

    def __init__(self, features: np.ndarray, edges: np.ndarray):
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise InputError("features must be a 2-D matrix")
        n = features.shape[0]

        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise InputError("edge endpoint out of range [0, n)")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise InputError("self-loops are not allowed")
        # canonicalize to u < v and check for duplicates
        canon = np.sort(edges, axis=1)
        uniq = np.unique(canon, axis=0) if canon.size else canon
        if uniq.shape[0] != canon.shape[0]:
            raise InputError("duplicate edges are not allowed")

        self.features = features
        self.edges = uniq  # (E, 2) with u < v, lexicographically sorted

        # symmetric CSR structure
        if uniq.size:
            rows = np.concatenate([uniq[:, 0], uniq[:, 1]])
            cols = np.concatenate([uniq[:, 1], uniq[:, 0]])
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
        adj = sp.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(n, n), dtype=np.float64
        )
        adj.sort_indices()
        self.adjacency = adj
        self.indptr = adj.indptr
        self.indices = adj.indices

    @property
    def num_nodes(self) -> int:
        return self.features.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        """Degree of every node in the original graph (no self-loop)."""
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        if not 0 <= v < self.num_nodes:
            raise InputError(f"node id {v} out of range [0, {self.num_nodes})")
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        if not 0 <= v < self.num_nodes:
            raise InputError(f"node id {v} out of range [0, {self.num_nodes})")
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u < v else (v, u)
        return bool(np.any(self.indices[self.indptr[a] : self.indptr[a + 1]] == b))

    def with_edges(self, edges: np.ndarray) -> "Graph":
        """Same nodes and features, different edge set (e.g. training edges only)."""
        return Graph(self.features, edges)


class NormalizedAdjacency:
    """Sparse D̃^{-1/2} (A + I) D̃^{-1/2} with degrees of the source graph.

    Diagonal entry i is 1/(d_i + 1); entry (i, j) for an edge is
    1/(sqrt(d_i + 1) * sqrt(d_j + 1)). Read-only after construction.
    """

    def __init__(self, matrix: sp.csr_matrix, degrees: np.ndarray):
        self.matrix = matrix
        self.degrees = degrees

    @property
    def num_nodes(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_normalized_adjacency(graph: Graph) -> NormalizedAdjacency:
    """Precompute the normalized propagation matrix for a graph.

    Built once per training graph and shared across epochs.
    """
    n = graph.num_nodes
    deg = graph.degrees.astype(np.float64)
    inv_sqrt = 1.0 / np.sqrt(deg + 1.0)

    a_tilde = graph.adjacency + sp.identity(n, format="csr", dtype=np.float64)
    norm = a_tilde.multiply(inv_sqrt[:, None]).multiply(inv_sqrt[None, :]).tocsr()
    norm.sort_indices()
    return NormalizedAdjacency(norm, graph.degrees.copy())


def spmm(adj: NormalizedAdjacency, dense: np.ndarray) -> np.ndarray:
    """Sparse-dense product adj @ dense with a fixed per-row summation order."""
    dense = np.asarray(dense, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != adj.num_nodes:
        raise InputError(
            f"dense operand must be ({adj.num_nodes}, f), got {dense.shape}"
        )
    return adj.matrix @ dense
