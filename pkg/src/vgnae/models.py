"""The four link-prediction models (gae, vgae, gnae, vgnae) and their training loop.

All models share the inner-product decoder score(i, j) = sigmoid(<z_i, z_j>).
The variational variants sample Z = mu + sigma * eps during training and
evaluate with Z = mu. Training minimizes the reconstruction loss on positive
edges plus freshly sampled negatives each epoch, plus a node-averaged KL term
for variational kinds, with early stopping on validation AUC.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

import numpy as np

from . import autodiff as ad
from .autodiff import Parameter, Tensor
from .datasplit import EdgeSplit, sample_negative_edges
from .encoders import GcnEncoder, GncnEncoder
from .errors import DivergenceError, InputError
from .graph import Graph, NormalizedAdjacency, build_normalized_adjacency

MODEL_KINDS = ("gae", "vgae", "gnae", "vgnae")

LOG_SIGMA_CLAMP = 10.0  # |log sigma| bound before exponentiation


@dataclass
class ModelConfig:
    model: str = "gnae"
    dim: int = 64
    hidden: int = 128
    scale: float = 1.8
    lr: float = 0.005
    max_epochs: int = 300
    patience: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise InputError(f"unknown model kind {self.model!r}")
        if self.dim <= 0 or self.hidden <= 0:
            raise InputError("embedding dimensions must be positive")
        if self.scale <= 0:
            raise InputError("scaling constant must be positive")
        if self.patience > self.max_epochs:
            raise InputError("early-stop window must not exceed max_epochs")


@dataclass
class VariationalState:
    mu: Tensor
    log_sigma: Tensor
    z_sample: Tensor
    epsilon: np.ndarray


def reparameterize(mu: Tensor, log_sigma: Tensor,
                   rng: np.random.Generator) -> VariationalState:
    """z = mu + exp(log_sigma) * eps; gradient flows to mu and log_sigma only."""
    if mu.value.shape != log_sigma.value.shape:
        raise InputError("mu and log_sigma must have the same shape")
    clamped = ad.clip(log_sigma, -LOG_SIGMA_CLAMP, LOG_SIGMA_CLAMP)
    epsilon = rng.standard_normal(mu.value.shape)
    noise = ad.mul(ad.exp(clamped), ad.constant(epsilon))
    return VariationalState(mu=mu, log_sigma=log_sigma,
                            z_sample=ad.add(mu, noise), epsilon=epsilon)


def decode_logits(z: Tensor, pairs: np.ndarray) -> Tensor:
    return ad.pair_inner(z, pairs)


def decode_pairs(z: Tensor, pairs: np.ndarray) -> np.ndarray:
    """Edge scores sigmoid(<z_i, z_j>) in (0, 1); symmetric in (i, j)."""
    return ad.sigmoid(decode_logits(z, pairs)).value


def reconstruction_loss(z: Tensor, pos: np.ndarray, neg: np.ndarray) -> Tensor:
    """mean -log score over positives + mean -log(1 - score) over negatives.

    Computed on logits via softplus so near-0/near-1 scores cannot overflow.
    """
    pos = np.asarray(pos, dtype=np.int64).reshape(-1, 2)
    neg = np.asarray(neg, dtype=np.int64).reshape(-1, 2)
    if pos.shape[0] == 0:
        raise InputError("reconstruction loss needs at least one positive edge")
    pos_term = ad.mean_all(ad.softplus(ad.neg(decode_logits(z, pos))))
    if neg.shape[0] == 0:
        return pos_term
    neg_term = ad.mean_all(ad.softplus(decode_logits(z, neg)))
    return ad.add(pos_term, neg_term)


def kl_divergence(mu: Tensor, log_sigma: Tensor) -> Tensor:
    """Node-averaged KL(N(mu, diag sigma^2) || N(0, I)).

    Per entry: -1/2 (1 + 2 log sigma - mu^2 - sigma^2), summed and divided
    by the number of nodes.
    """
    if mu.value.shape != log_sigma.value.shape:
        raise InputError("mu and log_sigma must have the same shape")
    n = mu.value.shape[0]
    two_ls = ad.scale(log_sigma, 2.0)
    inner = ad.add(ad.add(ad.square(mu), ad.exp(two_ls)), ad.neg(two_ls))
    # inner = mu^2 + sigma^2 - 2 log sigma; KL = (sum(inner) - size) / (2n)
    total = ad.sum_all(inner)
    return ad.scale(ad.add(total, ad.constant(-float(mu.value.size))), 0.5 / n)


class LinkPredictionModel:
    """One of gae/vgae/gnae/vgnae, assembled from the two encoder kinds."""

    def __init__(self, config: ModelConfig, num_features: int,
                 rng: np.random.Generator):
        self.config = config
        kind = config.model
        if kind == "gae":
            self.encoder = GcnEncoder(num_features, config.hidden, config.dim, rng)
            self.sigma_encoder = None
        elif kind == "gnae":
            self.encoder = GncnEncoder(num_features, config.dim, config.scale, rng)
            self.sigma_encoder = None
        elif kind == "vgae":
            self.encoder = GcnEncoder(num_features, config.hidden, config.dim, rng)
            self.sigma_encoder = GcnEncoder(num_features, config.hidden,
                                            config.dim, rng)
        else:  # vgnae
            self.encoder = GncnEncoder(num_features, config.dim, config.scale, rng)
            self.sigma_encoder = GcnEncoder(num_features, config.hidden,
                                            config.dim, rng)

    @property
    def kind(self) -> str:
        return self.config.model

    @property
    def is_variational(self) -> bool:
        return self.sigma_encoder is not None

    def parameters(self) -> list[Parameter]:
        params = list(self.encoder.parameters())
        if self.sigma_encoder is not None:
            params += self.sigma_encoder.parameters()
        return params

    def forward(self, x: Tensor, adj: NormalizedAdjacency,
                rng: np.random.Generator | None = None,
                training: bool = False) -> tuple[Tensor, VariationalState | None]:
        """Return (Z, variational state). Evaluation uses Z = mu (no sampling)."""
        mu = self.encoder.forward(x, adj)
        if not self.is_variational:
            return mu, None
        log_sigma = self.sigma_encoder.forward(x, adj)
        if not training:
            return mu, None
        if rng is None:
            raise InputError("training forward of a variational model needs an rng")
        state = reparameterize(mu, log_sigma, rng)
        return state.z_sample, state


@dataclass
class TrainHistory:
    losses: list[float] = field(default_factory=list)
    val_aucs: list[float] = field(default_factory=list)
    best_epoch: int = -1
    best_val_auc: float = -np.inf


def train(model: LinkPredictionModel, graph: Graph, split: EdgeSplit,
          config: ModelConfig) -> TrainHistory:
    """Fit `model` on the training edges of `split`; restores best-validation weights.

    Each epoch samples fresh training negatives (as many as training
    positives), takes one Adam step on the full-batch loss, and scores the
    fixed validation set with Z = mu. Stops after `patience` epochs without
    a validation AUC improvement.
    """
    from .metrics import roc_auc  # local import to avoid a cycle

    train_graph = graph.with_edges(split.train_pos)
    adj = build_normalized_adjacency(train_graph)
    x = ad.constant(graph.features)
    rng = np.random.default_rng(config.seed)

    val_pairs = np.concatenate([split.val_pos, split.val_neg])
    val_labels = np.concatenate(
        [np.ones(len(split.val_pos), dtype=bool),
         np.zeros(len(split.val_neg), dtype=bool)]
    )

    history = TrainHistory()
    best_values: list[np.ndarray] | None = None

    for epoch in range(config.max_epochs):
        neg = sample_negative_edges(graph, len(split.train_pos), rng)
        z, state = model.forward(x, adj, rng=rng, training=True)
        loss = reconstruction_loss(z, split.train_pos, neg)
        if state is not None:
            loss = ad.add(loss, kl_divergence(state.mu, state.log_sigma))
        loss_value = float(loss.value)
        if not np.isfinite(loss_value):
            raise DivergenceError(epoch, loss_value)
        loss.backward()
        ad.adam_step(model.parameters(), config.lr)

        z_eval, _ = model.forward(x, adj, training=False)
        val_auc = roc_auc(decode_pairs(z_eval, val_pairs), val_labels)
        history.losses.append(loss_value)
        history.val_aucs.append(val_auc)

        if val_auc > history.best_val_auc:
            history.best_val_auc = val_auc
            history.best_epoch = epoch
            best_values = [p.value.copy() for p in model.parameters()]
        elif epoch - history.best_epoch >= config.patience:
            break

    if best_values is not None:
        for p, v in zip(model.parameters(), best_values):
            p.value[...] = v
    return history


def evaluate(model: LinkPredictionModel, graph: Graph, split: EdgeSplit,
             adj: NormalizedAdjacency | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Score test positives and negatives with Z = mu; returns (scores, labels, pairs)."""
    if adj is None:
        adj = build_normalized_adjacency(graph.with_edges(split.train_pos))
    z, _ = model.forward(ad.constant(graph.features), adj, training=False)
    pairs = np.concatenate([split.test_pos, split.test_neg])
    labels = np.concatenate(
        [np.ones(len(split.test_pos), dtype=bool),
         np.zeros(len(split.test_neg), dtype=bool)]
    )
    return decode_pairs(z, pairs), labels, pairs


# ---------------------------------------------------------------------------
# checkpoint format: magic, kind, dims, scale, then float64 weight blocks
# in parameter declaration order.

_MAGIC = b"LPCKPT01"


def save_checkpoint(model: LinkPredictionModel, num_features: int, path) -> None:
    cfg = model.config
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<8sqqqd", cfg.model.encode().ljust(8, b"\0"),
                            num_features, cfg.hidden, cfg.dim, cfg.scale))
        for p in model.parameters():
            f.write(np.ascontiguousarray(p.value).tobytes())


def load_checkpoint(path, config: ModelConfig | None = None) -> tuple[LinkPredictionModel, int]:
    """Rebuild a model from a checkpoint; returns (model, num_features)."""
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != _MAGIC:
            raise InputError(f"not a checkpoint file: bad magic {magic!r}")
        kind_raw, num_features, hidden, dim, scale = struct.unpack(
            "<8sqqqd", f.read(struct.calcsize("<8sqqqd"))
        )
        kind = kind_raw.rstrip(b"\0").decode()
        base = config if config is not None else ModelConfig()
        cfg = replace(base, model=kind, hidden=int(hidden), dim=int(dim),
                      scale=float(scale))
        model = LinkPredictionModel(cfg, int(num_features),
                                    np.random.default_rng(0))
        for p in model.parameters():
            buf = f.read(p.value.size * 8)
            if len(buf) != p.value.size * 8:
                raise InputError("checkpoint truncated")
            p.value[...] = np.frombuffer(buf, dtype=np.float64).reshape(p.value.shape)
    return model, int(num_features)
