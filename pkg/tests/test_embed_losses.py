import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from looklab.embed import (
    DimensionMismatchError,
    TripletLossConfig,
    embedding_norm_loss,
    sq_euclidean,
    total_loss,
    total_loss_grad,
    triplet_margin_loss,
)


class TestSqEuclidean:
    def test_identical_vectors(self):
        assert sq_euclidean([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_three_four_five(self):
        assert sq_euclidean([0.0, 0.0], [3.0, 4.0]) == 25.0

    def test_matches_componentwise_sum(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=5)
        y = rng.normal(size=5)
        brute = sum((xi - yi) ** 2 for xi, yi in zip(x, y))
        assert sq_euclidean(x, y) == pytest.approx(brute, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            sq_euclidean([1.0], [1.0, 2.0])


class TestTripletMarginLoss:
    def test_clamped_to_zero(self):
        # m + 0 - 1 = -0.8 -> 0
        assert triplet_margin_loss([0, 0], [0, 0], [1, 0], m=0.2) == 0.0

    def test_equal_distances_leave_margin(self):
        assert triplet_margin_loss([0, 0], [1, 0], [1, 0], m=0.2) == pytest.approx(0.2)

    def test_direct_substitution(self):
        # d2(a,p)=0.5, d2(a,n)=0.4 -> 0.2 + 0.5 - 0.4 = 0.3
        a = np.zeros(1)
        p = np.array([np.sqrt(0.5)])
        n = np.array([np.sqrt(0.4)])
        assert triplet_margin_loss(a, p, n, m=0.2) == pytest.approx(0.3, abs=1e-12)

    def test_invalid_margin(self):
        with pytest.raises(ValueError):
            triplet_margin_loss([0.0], [0.0], [1.0], m=0.0)

    vec = arrays(np.float64, 4, elements=st.floats(-3, 3))

    @given(vec, vec, vec, vec)
    @settings(max_examples=100)
    def test_translation_invariance(self, a, p, n, shift):
        base = triplet_margin_loss(a, p, n, m=0.2)
        shifted = triplet_margin_loss(a + shift, p + shift, n + shift, m=0.2)
        assert shifted == pytest.approx(base, abs=1e-9)


class TestEmbeddingNormLoss:
    def test_zero_vectors(self):
        z = np.zeros(4)
        assert embedding_norm_loss(z, z, z) == 0.0

    def test_d2_unit_vectors(self):
        v = np.array([1.0, 0.0])
        assert embedding_norm_loss(v, v, v) == pytest.approx(0.5)

    def test_d3_all_ones(self):
        v = np.ones(3)
        assert embedding_norm_loss(v, v, v) == pytest.approx(1.0)

    def test_tau_is_inverse_3d(self):
        assert TripletLossConfig.tau(2048) == pytest.approx(1.0 / 6144)

    vec = arrays(np.float64, 4, elements=st.floats(-3, 3))

    @given(vec, vec, vec, vec)
    @settings(max_examples=60)
    def test_not_translation_invariant(self, a, p, n, shift):
        # the norm term anchors the embedding scale, so shifting moves it
        if np.allclose(shift, 0):
            return
        base = embedding_norm_loss(a, p, n)
        shifted = embedding_norm_loss(a + shift, p + shift, n + shift)
        delta = abs(shifted - base)
        cross = abs(2 * (a + p + n) @ shift + 3 * shift @ shift) / (3 * len(a))
        assert delta == pytest.approx(cross, abs=1e-9)


class TestTotalLoss:
    def test_composition_arithmetic(self):
        # triplet part 0.2, embedding part 0.5, alpha 5e-5
        a = np.zeros(2)
        p = np.zeros(2)
        n = np.zeros(2)
        # rig vectors: a=p=0, n 0 -> triplet = m = 0.2, norm part 0
        cfg = TripletLossConfig(margin=0.2, alpha=5e-5)
        assert total_loss(a, p, n, cfg) == pytest.approx(0.2, abs=1e-15)

    def test_known_parts_compose(self):
        cfg = TripletLossConfig(margin=0.2, alpha=5e-5)
        # choose vectors with triplet=0.2 and embedd=0.5: a=p=n=(1,0), d=2
        v = np.array([1.0, 0.0])
        assert triplet_margin_loss(v, v, v, cfg.margin) == pytest.approx(0.2)
        assert embedding_norm_loss(v, v, v) == pytest.approx(0.5)
        assert total_loss(v, v, v, cfg) == pytest.approx(0.200025, abs=1e-12)

    def test_alpha_zero_limit(self):
        # alpha must be > 0 per config; verify the limit via tiny alpha
        cfg = TripletLossConfig(margin=0.2, alpha=1e-300)
        rng = np.random.default_rng(5)
        a, p, n = rng.normal(size=(3, 6))
        assert total_loss(a, p, n, cfg) == pytest.approx(
            triplet_margin_loss(a, p, n, 0.2), abs=1e-12)

    vec = arrays(np.float64, 6, elements=st.floats(-2, 2))

    @given(vec, vec, vec)
    @settings(max_examples=100)
    def test_total_dominates_norm_term(self, a, p, n):
        cfg = TripletLossConfig()
        assert total_loss(a, p, n, cfg) >= cfg.alpha * embedding_norm_loss(a, p, n) - 1e-15
        assert cfg.alpha * embedding_norm_loss(a, p, n) >= 0.0


class TestTotalLossGradient:
    @staticmethod
    def _fd_grad(f, x, h=1e-6):
        g = np.zeros_like(x)
        for i in range(x.size):
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            g[i] = (f(xp) - f(xm)) / (2 * h)
        return g

    def test_matches_central_differences(self):
        cfg = TripletLossConfig()
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 25:
            a, p, n = rng.normal(size=(3, 8))
            hinge_arg = cfg.margin + sq_euclidean(a, p) - sq_euclidean(a, n)
            if abs(hinge_arg) < 1e-3:
                continue  # stay away from the kink
            checked += 1
            ga, gp, gn = total_loss_grad(a, p, n, cfg)
            fa = self._fd_grad(lambda v: total_loss(v, p, n, cfg), a)
            fp = self._fd_grad(lambda v: total_loss(a, v, n, cfg), p)
            fn = self._fd_grad(lambda v: total_loss(a, p, v, cfg), n)
            for analytic, fd in ((ga, fa), (gp, fp), (gn, fn)):
                denom = max(np.linalg.norm(fd), 1e-8)
                assert np.linalg.norm(analytic - fd) / denom < 1e-4

    def test_inactive_hinge_gradient_is_norm_only(self):
        cfg = TripletLossConfig()
        a = np.zeros(4)
        p = np.zeros(4)
        n = np.full(4, 10.0)
        ga, gp, gn = total_loss_grad(a, p, n, cfg)
        two_at = 2 * cfg.alpha / (3 * 4)
        assert np.allclose(ga, 0.0)
        assert np.allclose(gp, 0.0)
        assert np.allclose(gn, two_at * n)
