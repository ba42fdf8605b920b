"""Minimal reverse-mode differentiation over dense float64 matrices.

Just enough tape machinery for the four autoencoder models: matmul,
sparse propagation, row L2 normalization, a few elementwise functions,
and reductions. Backward visits each tape node exactly once in reverse
topological order. A tape is confined to one thread.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateRowError, InputError, StateError
from .graph import NormalizedAdjacency

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class Tensor:
    def __init__(self, value, parents=(), backward=None):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = None
        self._parents = tuple(parents)
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.value)
        self.grad += g

    def backward(self) -> None:
        """Seed d(self)/d(self) = 1 and propagate through the tape."""
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                stack.append((p, False))

        self.grad = np.ones_like(self.value)
        for node in reversed(topo):
            if node._backward is not None:
                node._backward(node.grad)

    def zero_grad(self) -> None:
        self.grad = None

    # convenience operators used in model code
    def __add__(self, other: "Tensor") -> "Tensor":
        return add(self, other)

    def __mul__(self, other: "Tensor") -> "Tensor":
        return mul(self, other)


class Parameter(Tensor):
    """Trainable tensor with Adam moment buffers."""

    def __init__(self, value):
        super().__init__(value)
        self.adam_m = np.zeros_like(self.value)
        self.adam_v = np.zeros_like(self.value)
        self.step_count = 0


def constant(value) -> Tensor:
    return Tensor(value)


def glorot_init(rows: int, cols: int, rng: np.random.Generator) -> Parameter:
    if rows <= 0 or cols <= 0:
        raise InputError("glorot_init needs positive dimensions")
    limit = np.sqrt(6.0 / (rows + cols))
    return Parameter(rng.uniform(-limit, limit, size=(rows, cols)))


# ---------------------------------------------------------------------------
# ops


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.value.ndim != 2 or b.value.ndim != 2 or a.value.shape[1] != b.value.shape[0]:
        raise InputError(f"matmul shape mismatch: {a.value.shape} @ {b.value.shape}")
    out_value = a.value @ b.value

    def backward(g):
        a.accumulate_grad(g @ b.value.T)
        b.accumulate_grad(a.value.T @ g)

    return Tensor(out_value, (a, b), backward)


def spmm(adj: NormalizedAdjacency, x: Tensor) -> Tensor:
    """Propagate through the (constant, symmetric) normalized adjacency."""
    if x.value.ndim != 2 or x.value.shape[0] != adj.num_nodes:
        raise InputError(f"spmm operand must be ({adj.num_nodes}, f), got {x.value.shape}")
    out_value = adj.matrix @ x.value

    def backward(g):
        # adj is symmetric, so adj.T @ g == adj @ g
        x.accumulate_grad(adj.matrix @ g)

    return Tensor(out_value, (x,), backward)


def row_l2_normalize(h: Tensor, scale: float) -> Tensor:
    """Rescale each row to L2 norm `scale`.

    Rows with numerically zero norm are a hard error: silently emitting
    zeros would reintroduce the very norm collapse this layer prevents.
    """
    norms = np.linalg.norm(h.value, axis=1)
    bad = np.flatnonzero(norms < 1e-12)
    if bad.size:
        raise DegenerateRowError(int(bad[0]), float(norms[bad[0]]))
    unit = h.value / norms[:, None]
    out_value = scale * unit

    def backward(g):
        # per-row Jacobian: (scale/||h||) (I - u u^T)
        proj = np.sum(g * unit, axis=1, keepdims=True)
        h.accumulate_grad((scale / norms[:, None]) * (g - proj * unit))

    return Tensor(out_value, (h,), backward)


def sigmoid(x: Tensor) -> Tensor:
    v = x.value
    out_value = np.where(v >= 0, 1.0 / (1.0 + np.exp(-np.abs(v))),
                         np.exp(-np.abs(v)) / (1.0 + np.exp(-np.abs(v))))

    def backward(g):
        x.accumulate_grad(g * out_value * (1.0 - out_value))

    return Tensor(out_value, (x,), backward)


def relu(x: Tensor) -> Tensor:
    out_value = np.maximum(x.value, 0.0)

    def backward(g):
        x.accumulate_grad(g * (x.value > 0.0))

    return Tensor(out_value, (x,), backward)


def exp(x: Tensor) -> Tensor:
    out_value = np.exp(x.value)

    def backward(g):
        x.accumulate_grad(g * out_value)

    return Tensor(out_value, (x,), backward)


def softplus(x: Tensor) -> Tensor:
    """log(1 + e^x), the stable form of -log sigmoid(-x)."""
    v = x.value
    out_value = np.maximum(v, 0.0) + np.log1p(np.exp(-np.abs(v)))

    def backward(g):
        s = np.where(v >= 0, 1.0 / (1.0 + np.exp(-np.abs(v))),
                     np.exp(-np.abs(v)) / (1.0 + np.exp(-np.abs(v))))
        x.accumulate_grad(g * s)

    return Tensor(out_value, (x,), backward)


def square(x: Tensor) -> Tensor:
    def backward(g):
        x.accumulate_grad(g * 2.0 * x.value)

    return Tensor(x.value**2, (x,), backward)


def clip(x: Tensor, lo: float, hi: float) -> Tensor:
    out_value = np.clip(x.value, lo, hi)

    def backward(g):
        x.accumulate_grad(g * ((x.value > lo) & (x.value < hi)))

    return Tensor(out_value, (x,), backward)


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.value.shape != b.value.shape:
        raise InputError(f"add shape mismatch: {a.value.shape} vs {b.value.shape}")

    def backward(g):
        a.accumulate_grad(g)
        b.accumulate_grad(g)

    return Tensor(a.value + b.value, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    if a.value.shape != b.value.shape:
        raise InputError(f"mul shape mismatch: {a.value.shape} vs {b.value.shape}")

    def backward(g):
        a.accumulate_grad(g * b.value)
        b.accumulate_grad(g * a.value)

    return Tensor(a.value * b.value, (a, b), backward)


def scale(x: Tensor, c: float) -> Tensor:
    def backward(g):
        x.accumulate_grad(g * c)

    return Tensor(x.value * c, (x,), backward)


def neg(x: Tensor) -> Tensor:
    return scale(x, -1.0)


def sum_all(x: Tensor) -> Tensor:
    def backward(g):
        x.accumulate_grad(np.full_like(x.value, float(g)))

    return Tensor(x.value.sum(), (x,), backward)


def mean_all(x: Tensor) -> Tensor:
    n = x.value.size

    def backward(g):
        x.accumulate_grad(np.full_like(x.value, float(g) / n))

    return Tensor(x.value.mean(), (x,), backward)


def pair_inner(z: Tensor, pairs: np.ndarray) -> Tensor:
    """Inner products <z_i, z_j> for an array of (i, j) pairs; output shape (k,)."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    n = z.value.shape[0]
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise InputError("pair endpoint out of range [0, n)")
    i, j = pairs[:, 0], pairs[:, 1]
    out_value = np.sum(z.value[i] * z.value[j], axis=1)

    def backward(g):
        acc = np.zeros_like(z.value)
        np.add.at(acc, i, g[:, None] * z.value[j])
        np.add.at(acc, j, g[:, None] * z.value[i])
        z.accumulate_grad(acc)

    return Tensor(out_value, (z,), backward)


# ---------------------------------------------------------------------------
# optimizer


def adam_step(params, lr: float) -> None:
    """One Adam update over `params`; gradients are consumed and cleared."""
    for p in params:
        if p.grad is None:
            raise StateError("adam_step called on a parameter with no gradient")
    for p in params:
        p.step_count += 1
        g = p.grad
        p.adam_m = ADAM_BETA1 * p.adam_m + (1.0 - ADAM_BETA1) * g
        p.adam_v = ADAM_BETA2 * p.adam_v + (1.0 - ADAM_BETA2) * g * g
        m_hat = p.adam_m / (1.0 - ADAM_BETA1**p.step_count)
        v_hat = p.adam_v / (1.0 - ADAM_BETA2**p.step_count)
        p.value -= lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        p.grad = None
