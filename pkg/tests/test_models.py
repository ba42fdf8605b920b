import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm as normal_dist

import vgnae.autodiff as ad
from vgnae import models
from vgnae.datasplit import EdgeSplit, MODE_RATIO_1TO3, split_edges
from vgnae.errors import InputError
from vgnae.graph import Graph, build_normalized_adjacency
from vgnae.models import (LinkPredictionModel, ModelConfig, decode_pairs,
                          kl_divergence, load_checkpoint, reconstruction_loss,
                          reparameterize, save_checkpoint, train)

from conftest import community_graph, random_graph


def small_config(kind, **overrides):
    base = dict(model=kind, dim=8, hidden=12, max_epochs=30, patience=10, seed=0)
    base.update(overrides)
    return ModelConfig(**base)


class TestDecodePairs:
    def test_zero_embedding_gives_half(self):
        z = ad.constant(np.zeros((3, 4)))
        scores = decode_pairs(z, np.array([[0, 1]]))
        assert scores[0] == 0.5

    def test_orthogonal_gives_half(self):
        z = ad.constant(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert decode_pairs(z, np.array([[0, 1]]))[0] == 0.5

    def test_log3_inner_product_gives_three_quarters(self):
        z = ad.constant(np.array([[np.log(3.0)], [1.0]]))
        assert decode_pairs(z, np.array([[0, 1]]))[0] == pytest.approx(0.75)

    def test_symmetric_in_pair_order(self, rng):
        z = ad.constant(rng.standard_normal((6, 4)))
        ij = decode_pairs(z, np.array([[1, 4], [0, 5]]))
        ji = decode_pairs(z, np.array([[4, 1], [5, 0]]))
        assert np.array_equal(ij, ji)

    def test_out_of_range_endpoint(self):
        with pytest.raises(InputError):
            decode_pairs(ad.constant(np.zeros((3, 2))), np.array([[0, 3]]))


class TestReconstructionLoss:
    def test_confident_scores_give_near_zero_loss(self):
        z = ad.constant(np.array([[10.0, 0.0], [10.0, 0.0], [-10.0, 10.0]]))
        # pos pair (0,1) has inner 100; neg pair (0,2) has inner -100
        loss = reconstruction_loss(z, np.array([[0, 1]]), np.array([[0, 2]]))
        assert float(loss.value) < 1e-8

    def test_all_half_scores_give_two_log_two(self):
        z = ad.constant(np.zeros((4, 3)))
        loss = reconstruction_loss(z, np.array([[0, 1], [1, 2]]),
                                   np.array([[0, 2], [0, 3]]))
        assert float(loss.value) == pytest.approx(2.0 * np.log(2.0), abs=1e-12)

    def test_matches_scalar_per_edge_oracle(self, rng):
        z_val = rng.standard_normal((6, 4))
        pos = np.array([[0, 1], [1, 2], [3, 4]])
        neg = np.array([[0, 5], [2, 4], [1, 5]])
        loss = reconstruction_loss(ad.constant(z_val), pos, neg)

        def sig(x):
            return 1.0 / (1.0 + np.exp(-x))

        expected = np.mean([-np.log(sig(z_val[i] @ z_val[j])) for i, j in pos])
        expected += np.mean([-np.log(1 - sig(z_val[i] @ z_val[j])) for i, j in neg])
        assert float(loss.value) == pytest.approx(expected, abs=1e-12)

    def test_empty_positives_raises(self):
        with pytest.raises(InputError):
            reconstruction_loss(ad.constant(np.zeros((3, 2))),
                                np.zeros((0, 2)), np.array([[0, 1]]))

    def test_differentiable(self, rng):
        z = ad.Tensor(rng.standard_normal((5, 3)))
        loss = reconstruction_loss(z, np.array([[0, 1]]), np.array([[2, 3]]))
        loss.backward()
        assert z.grad is not None and np.isfinite(z.grad).all()


class TestKlDivergence:
    def test_standard_normal_is_zero(self):
        kl = kl_divergence(ad.constant(np.zeros((3, 4))),
                           ad.constant(np.zeros((3, 4))))
        assert float(kl.value) == 0.0

    def test_single_entry_mu_one(self):
        # one node, one dim, mu=1, log_sigma=0 contributes 1/2
        kl = kl_divergence(ad.constant([[1.0]]), ad.constant([[0.0]]))
        assert float(kl.value) == pytest.approx(0.5, abs=1e-15)

    def test_matches_quadrature_oracle(self, rng):
        mu = rng.standard_normal((4, 3))
        ls = 0.5 * rng.standard_normal((4, 3))
        kl = kl_divergence(ad.constant(mu), ad.constant(ls))

        def entry_kl(m, s):
            q = normal_dist(loc=m, scale=s)
            p = normal_dist(loc=0.0, scale=1.0)
            val, _ = quad(lambda x: q.pdf(x) * (q.logpdf(x) - p.logpdf(x)),
                          m - 12 * s, m + 12 * s, limit=200)
            return val

        expected = sum(entry_kl(m, np.exp(s))
                       for m, s in zip(mu.ravel(), ls.ravel())) / 4
        assert float(kl.value) == pytest.approx(expected, rel=1e-8)

    def test_nonnegative(self, rng):
        for _ in range(10):
            kl = kl_divergence(ad.constant(rng.standard_normal((3, 3))),
                               ad.constant(rng.standard_normal((3, 3))))
            assert float(kl.value) >= 0.0


class TestReparameterize:
    def test_tiny_sigma_collapses_to_mu(self, rng):
        mu = ad.constant(rng.standard_normal((5, 4)))
        state = reparameterize(mu, ad.constant(np.full((5, 4), -30.0)),
                               np.random.default_rng(0))
        assert np.abs(state.z_sample.value - mu.value).max() < 1e-3

    def test_fixed_seed_same_noise(self, rng):
        mu = ad.constant(rng.standard_normal((5, 4)))
        ls = ad.constant(np.zeros((5, 4)))
        a = reparameterize(mu, ls, np.random.default_rng(3))
        b = reparameterize(mu, ls, np.random.default_rng(3))
        assert np.array_equal(a.epsilon, b.epsilon)
        assert np.array_equal(a.z_sample.value, b.z_sample.value)

    def test_sample_mean_near_mu(self):
        mu_val = np.array([[0.7, -1.2]])
        ls_val = np.array([[0.1, -0.3]])
        rng = np.random.default_rng(9)
        draws = np.stack([
            reparameterize(ad.constant(mu_val), ad.constant(ls_val), rng)
            .z_sample.value
            for _ in range(10_000)
        ])
        sigma = np.exp(ls_val)
        tol = 3.0 * sigma / np.sqrt(10_000)
        assert (np.abs(draws.mean(axis=0) - mu_val) < tol).all()

    def test_gradient_flows_to_mu_and_log_sigma_only(self, rng):
        mu = ad.Tensor(rng.standard_normal((3, 2)))
        ls = ad.Tensor(rng.standard_normal((3, 2)) * 0.1)
        state = reparameterize(mu, ls, np.random.default_rng(1))
        ad.sum_all(state.z_sample).backward()
        assert np.allclose(mu.grad, np.ones((3, 2)))
        expected_ls_grad = np.exp(ls.value) * state.epsilon
        assert np.allclose(ls.grad, expected_ls_grad)


class TestForward:
    def test_gnae_all_isolated_rows_have_norm_s(self, rng):
        g = Graph(rng.standard_normal((6, 4)) + 0.1, np.zeros((0, 2), np.int64))
        cfg = small_config("gnae", scale=1.8)
        model = LinkPredictionModel(cfg, 4, rng)
        z, state = model.forward(ad.constant(g.features),
                                 build_normalized_adjacency(g))
        assert state is None
        norms = np.linalg.norm(z.value, axis=1)
        assert np.abs(norms - 1.8).max() < 1e-9

    def test_vgnae_eval_uses_mu_from_normalized_encoder(self, rng):
        g = random_graph(rng, 8)
        cfg = small_config("vgnae")
        model = LinkPredictionModel(cfg, 5, np.random.default_rng(0))
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        z, state = model.forward(x, adj, training=False)
        assert state is None
        mu = model.encoder.forward(x, adj)
        assert np.array_equal(z.value, mu.value)

    def test_vgnae_training_sample_with_tiny_sigma_is_mu(self, rng):
        g = random_graph(rng, 8)
        model = LinkPredictionModel(small_config("vgnae"), 5,
                                    np.random.default_rng(0))
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        mu = model.encoder.forward(x, adj)
        state = reparameterize(mu, ad.constant(np.full(mu.value.shape, -30.0)),
                               np.random.default_rng(1))
        assert np.abs(state.z_sample.value - mu.value).max() < 1e-3

    def test_gae_equals_encoder_composition(self, rng):
        g = random_graph(rng, 5)
        model = LinkPredictionModel(small_config("gae"), 5,
                                    np.random.default_rng(2))
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        z, _ = model.forward(x, adj)
        direct = model.encoder.forward(x, adj)
        assert np.array_equal(z.value, direct.value)

    def test_variational_training_forward_requires_rng(self, rng):
        g = random_graph(rng, 6)
        model = LinkPredictionModel(small_config("vgae"), 5,
                                    np.random.default_rng(0))
        with pytest.raises(InputError):
            model.forward(ad.constant(g.features),
                          build_normalized_adjacency(g), training=True)


def toy_split():
    return EdgeSplit(
        train_pos=np.array([[0, 1], [1, 2]]),
        val_pos=np.array([[2, 3]]),
        test_pos=np.array([[0, 3]]),
        val_neg=np.array([[0, 2]]),
        test_neg=np.array([[1, 3]]),
        seed=0, train_ratio=0.5, mode=MODE_RATIO_1TO3,
    )


class TestTrain:
    def test_loss_decreases_on_toy_graph(self, rng):
        g = Graph(rng.standard_normal((4, 3)) + 0.2,
                  np.array([[0, 1], [1, 2], [2, 3], [0, 3]]))
        cfg = small_config("gae", max_epochs=20, patience=20)
        model = LinkPredictionModel(cfg, 3, np.random.default_rng(0))
        history = train(model, g, toy_split(), cfg)
        assert history.losses[-1] < history.losses[0]

    @pytest.mark.parametrize("kind", ["gae", "vgae", "gnae", "vgnae"])
    def test_same_seed_identical_history(self, kind, rng):
        g = community_graph(rng, n_comm=2, per_comm=10, num_features=8)
        split = split_edges(g, 0.7, seed=5)
        cfg = small_config(kind, max_epochs=8, patience=8, seed=3)
        runs = []
        for _ in range(2):
            model = LinkPredictionModel(cfg, g.num_features,
                                        np.random.default_rng(cfg.seed))
            runs.append(train(model, g, split, cfg))
        assert runs[0].losses == runs[1].losses
        assert runs[0].val_aucs == runs[1].val_aucs

    def test_best_epoch_is_argmax_val_auc(self, rng):
        g = community_graph(rng, n_comm=2, per_comm=12, num_features=8)
        split = split_edges(g, 0.6, seed=1)
        cfg = small_config("gnae", max_epochs=25, patience=25)
        model = LinkPredictionModel(cfg, g.num_features,
                                    np.random.default_rng(0))
        history = train(model, g, split, cfg)
        assert history.best_epoch == int(np.argmax(history.val_aucs))
        assert history.best_val_auc == max(history.val_aucs)

    def test_early_stopping_window(self, rng):
        g = community_graph(rng, n_comm=2, per_comm=12, num_features=8)
        split = split_edges(g, 0.6, seed=1)
        cfg = small_config("gae", max_epochs=60, patience=5)
        model = LinkPredictionModel(cfg, g.num_features,
                                    np.random.default_rng(0))
        history = train(model, g, split, cfg)
        ran = len(history.losses)
        assert ran <= cfg.max_epochs
        if ran < cfg.max_epochs:
            assert ran - 1 - history.best_epoch >= cfg.patience

    def test_elbo_is_reconstruction_plus_kl(self, rng):
        g = random_graph(rng, 10)
        model = LinkPredictionModel(small_config("vgnae"), 5,
                                    np.random.default_rng(0))
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        z, state = model.forward(x, adj, rng=np.random.default_rng(1),
                                 training=True)
        pos = g.edges[:4]
        neg = np.array([[0, 9], [1, 8]])
        recon = reconstruction_loss(z, pos, neg)
        kl = kl_divergence(state.mu, state.log_sigma)
        total = ad.add(recon, kl)
        assert float(total.value) == float(recon.value) + float(kl.value)


class TestScaleMonotonicity:
    def test_decoder_scores_move_monotonically_with_scale(self, rng):
        g = random_graph(rng, 8)
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        pairs = np.array([[0, 1], [2, 5], [3, 7]])
        scores = []
        for s in (0.5, 1.0, 2.0):
            model = LinkPredictionModel(small_config("gnae", scale=s), 5,
                                        np.random.default_rng(7))
            z, _ = model.forward(x, adj)
            scores.append(decode_pairs(z, pairs))
        # embeddings scale linearly in s, so each |logit| grows with s^2 and
        # every score moves away from 1/2 in a fixed direction
        for a, b in zip(scores[:-1], scores[1:]):
            assert (np.sign(a - 0.5) == np.sign(b - 0.5)).all()
            assert (np.abs(b - 0.5) >= np.abs(a - 0.5)).all()


class TestCheckpoint:
    @pytest.mark.parametrize("kind", ["gae", "vgae", "gnae", "vgnae"])
    def test_roundtrip_preserves_forward(self, kind, tmp_path, rng):
        g = random_graph(rng, 9)
        cfg = small_config(kind)
        model = LinkPredictionModel(cfg, g.num_features,
                                    np.random.default_rng(4))
        path = tmp_path / "model.ckpt"
        save_checkpoint(model, g.num_features, path)
        loaded, nf = load_checkpoint(path)
        assert nf == g.num_features
        assert loaded.kind == kind
        adj = build_normalized_adjacency(g)
        x = ad.constant(g.features)
        z_a, _ = model.forward(x, adj)
        z_b, _ = loaded.forward(x, adj)
        assert np.array_equal(z_a.value, z_b.value)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.ckpt"
        path.write_bytes(b"NOTACKPT" + b"\0" * 64)
        with pytest.raises(InputError, match="magic"):
            load_checkpoint(path)
