"""The two encoders: a standard two-layer GCN and the normalized single-layer GNCN."""

from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .autodiff import Parameter, Tensor
from .errors import InputError
from .graph import NormalizedAdjacency


class GcnEncoder:
    """Two-layer graph convolution: adj @ act(adj @ (X W1)) @ W2."""

    def __init__(self, in_dim: int, hidden_dim: int, out_dim: int,
                 rng: np.random.Generator, activation: str = "relu"):
        if activation not in ("relu", "linear"):
            raise InputError(f"unknown activation {activation!r}")
        self.w1 = ad.glorot_init(in_dim, hidden_dim, rng)
        self.w2 = ad.glorot_init(hidden_dim, out_dim, rng)
        self.activation = activation

    def parameters(self) -> list[Parameter]:
        return [self.w1, self.w2]

    def forward(self, x: Tensor, adj: NormalizedAdjacency) -> Tensor:
        h = ad.spmm(adj, ad.matmul(x, self.w1))
        if self.activation == "relu":
            h = ad.relu(h)
        return ad.spmm(adj, ad.matmul(h, self.w2))


class GncnEncoder:
    """Single normalized convolution: s * adj @ unit_rows(X W).

    Rows of X W are rescaled to norm s before propagation, so a node with
    no training neighbors keeps an embedding of norm exactly s instead of
    collapsing toward zero.
    """

    def __init__(self, in_dim: int, out_dim: int, scale: float,
                 rng: np.random.Generator):
        if scale <= 0:
            raise InputError("scaling constant must be positive")
        self.w = ad.glorot_init(in_dim, out_dim, rng)
        self.scale = scale

    def parameters(self) -> list[Parameter]:
        return [self.w]

    def forward(self, x: Tensor, adj: NormalizedAdjacency) -> Tensor:
        normalized = ad.row_l2_normalize(ad.matmul(x, self.w), self.scale)
        return ad.spmm(adj, normalized)
