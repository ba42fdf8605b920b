import numpy as np
import pytest

from vgnae.graph import Graph


def random_graph(rng, n, m=5, p=0.3):
    """Erdos-Renyi graph with dense random features (no zero rows)."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    features = rng.standard_normal((n, m)) + 0.1
    return Graph(features, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def community_graph(rng, n_comm=4, per_comm=30, num_features=16,
                    p_in=0.25, p_out=0.01, noise=0.2):
    """Block-structured graph whose features carry the community signal.

    Used for training-behavior tests: link prediction on it is learnable
    from features alone, so isolated nodes remain predictable.
    """
    n = n_comm * per_comm
    labels = np.repeat(np.arange(n_comm), per_comm)
    block = num_features // n_comm
    features = noise * rng.standard_normal((n, num_features))
    for i in range(n):
        lo = labels[i] * block
        features[i, lo : lo + block] += 1.0
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.append((i, j))
    return Graph(features, np.asarray(edges, dtype=np.int64))


def bow_graph(rng, n_comm=5, per_comm=60, vocab=120, words_per_node=12,
              common_frac=0.85, p_in=0.06, p_out=0.002):
    """Sparse community graph with weak bag-of-words features.

    Structure carries most of the link signal and features only a little,
    the regime where isolated test nodes are genuinely hard. Used for the
    isolated-node behavior tests.
    """
    n = n_comm * per_comm
    labels = np.repeat(np.arange(n_comm), per_comm)
    block = vocab // (n_comm + 1)  # last block: words shared by everyone
    features = np.zeros((n, vocab))
    for i in range(n):
        lo = labels[i] * block
        n_own = max(1, int(words_per_node * (1 - common_frac)))
        own = rng.choice(np.arange(lo, lo + block), size=n_own, replace=False)
        shared = rng.choice(np.arange(n_comm * block, vocab),
                            size=words_per_node - n_own, replace=True)
        features[i, own] = 1.0
        features[i, shared] = 1.0
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.append((i, j))
    return Graph(features, np.asarray(edges, dtype=np.int64))


def fd_grad(f, x, h=1e-5):
    """Central finite differences of scalar-valued f() w.r.t. buffer x (in place)."""
    grad = np.zeros_like(x)
    flat, gflat = x.ravel(), grad.ravel()
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + h
        fp = f()
        flat[k] = orig - h
        fm = f()
        flat[k] = orig
        gflat[k] = (fp - fm) / (2.0 * h)
    return grad


def rel_error(a, b):
    a, b = np.asarray(a), np.asarray(b)
    denom = np.abs(a).max() + np.abs(b).max() + 1e-12
    return np.abs(a - b).max() / denom


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
