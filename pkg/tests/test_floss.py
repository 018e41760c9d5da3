import numpy as np
import pytest
from helpers import (
    block_mean_pool,
    fd_gradient,
    rel_gradient_error,
    sample_smooth_pair,
)

from freqloss.errors import BadConfigError, ShapeMismatchError
from freqloss.floss import (
    LossConfig,
    loss_gradient,
    masked_loss,
    multi_scale_loss,
    single_scale_loss,
)
from freqloss.spectral import naive_dct2, naive_dft2

VARIANTS = ("dct", "fft")


class TestSingleScale:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_identical_images_zero(self, variant, rng):
        img = rng.random((4, 6, 3))
        assert single_scale_loss(img, img, variant) == [0.0, 0.0, 0.0]

    def test_dct_constant_pair_hand_value(self):
        # Only the DC coefficient differs: |2.0 - 0| / 4 = 0.5.
        a = np.ones((2, 2, 1))
        b = np.zeros((2, 2, 1))
        value = single_scale_loss(a, b, "dct")[0]
        assert value == pytest.approx(0.5, abs=1e-12)
        oracle = float(np.mean(np.abs(naive_dct2(a[:, :, 0]) - naive_dct2(b[:, :, 0]))))
        assert value == pytest.approx(oracle, abs=1e-12)

    def test_fft_constant_pair_hand_value(self):
        a = np.ones((2, 2, 1))
        b = np.zeros((2, 2, 1))
        value = single_scale_loss(a, b, "fft")[0]
        assert value == pytest.approx(1.0, abs=1e-12)
        oracle = float(np.mean(np.abs(naive_dft2(a[:, :, 0]) - naive_dft2(b[:, :, 0]))))
        assert value == pytest.approx(oracle, abs=1e-12)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            single_scale_loss(rng.random((4, 4, 1)), rng.random((4, 6, 1)), "dct")

    def test_bad_variant(self, rng):
        with pytest.raises(BadConfigError):
            single_scale_loss(rng.random((4, 4, 1)), rng.random((4, 4, 1)), "dst")


def composed_three_scale_oracle(a, b, variant):
    """Hand-composed multi-scale loss from naive transforms and direct pooling."""
    naive = naive_dct2 if variant == "dct" else naive_dft2
    total = 0.0
    for c in range(a.shape[2]):
        p1, p2 = a[:, :, c], b[:, :, c]
        per_channel = 0.0
        for _ in range(3):
            per_channel_level = float(np.mean(np.abs(naive(p1) - naive(p2))))
            per_channel += per_channel_level
            if min(p1.shape) >= 2:
                p1, p2 = block_mean_pool(p1), block_mean_pool(p2)
        total += per_channel
    return total / a.shape[2]


class TestMultiScale:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_matches_hand_composed_oracle(self, variant, rng):
        a = rng.random((8, 8, 3))
        b = rng.random((8, 8, 3))
        config = LossConfig(variant=variant, scales=3, lam=1.0, include_l1=False)
        report = multi_scale_loss(a, b, config)
        assert report.freq_term == pytest.approx(
            composed_three_scale_oracle(a, b, variant), abs=1e-9
        )

    def test_scales_one_reduces_to_single_scale(self, rng):
        a = rng.random((6, 6, 3))
        b = rng.random((6, 6, 3))
        config = LossConfig(variant="dct", scales=1, lam=1.0, include_l1=True)
        report = multi_scale_loss(a, b, config)
        freq = float(np.mean(single_scale_loss(a, b, "dct")))
        l1 = float(np.mean(np.abs(a - b)))
        assert report.freq_term == pytest.approx(freq, abs=1e-12)
        assert report.total == pytest.approx(l1 + freq, abs=1e-12)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_identical_images_total_zero(self, variant, rng):
        img = rng.random((8, 8, 3))
        report = multi_scale_loss(img, img, LossConfig(variant=variant))
        assert report.total == 0.0

    def test_report_internal_consistency(self, rng):
        for variant in VARIANTS:
            a = rng.random((8, 8, 3))
            b = rng.random((8, 8, 3))
            config = LossConfig(variant=variant, scales=3, lam=0.7)
            report = multi_scale_loss(a, b, config)
            assert report.total == pytest.approx(
                report.l1_term + config.lam * report.freq_term, abs=1e-12
            )
            recomposed = sum(sum(v) / len(v) for _, v in report.per_scale)
            assert report.freq_term == pytest.approx(recomposed, abs=1e-12)
            assert [k for k, _ in report.per_scale] == [1, 2, 4]

    def test_bad_config_rejected(self, rng):
        a = rng.random((4, 4, 1))
        with pytest.raises(BadConfigError):
            multi_scale_loss(a, a, LossConfig(scales=0))
        with pytest.raises(BadConfigError):
            multi_scale_loss(a, a, LossConfig(lam=-1.0))
        with pytest.raises(BadConfigError):
            multi_scale_loss(a, a, LossConfig(variant="wavelet"))


class TestLossAxioms:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_axioms_on_seeded_pairs(self, variant, rng):
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        for _ in range(30):
            a = rng.random((8, 8, 3))
            b = rng.random((8, 8, 3))
            fwd = multi_scale_loss(a, b, config)
            bwd = multi_scale_loss(b, a, config)
            assert fwd.total >= 0.0
            assert fwd.total == bwd.total  # |.| is symmetric, exactly
            s = float(rng.uniform(-2.0, 2.0))
            scaled = multi_scale_loss(s * a, s * b, config)
            assert scaled.total == pytest.approx(abs(s) * fwd.total, abs=1e-12)
            shift = float(rng.uniform(-0.5, 0.5))
            shifted = multi_scale_loss(a + shift, b + shift, config)
            assert shifted.total == pytest.approx(fwd.total, abs=1e-12)

    def test_identity_of_indiscernibles_dct(self, rng):
        config = LossConfig(variant="dct", scales=3, lam=1.0)
        a = rng.random((8, 8, 1))
        assert multi_scale_loss(a, a, config).total == 0.0
        b = a.copy()
        b[3, 5, 0] += 1e-6
        assert multi_scale_loss(a, b, config).total > 0.0


class TestGradient:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_zero_at_identical_inputs(self, variant, rng):
        img = rng.random((8, 8, 3))
        grad = loss_gradient(img, img, LossConfig(variant=variant))
        assert np.all(grad == 0.0)

    @pytest.mark.parametrize("variant", VARIANTS)
    @pytest.mark.parametrize("channels", [1, 3])
    def test_finite_differences(self, variant, channels, rng):
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        for _ in range(3):
            a, b = sample_smooth_pair(rng, 8, 8, channels, config)
            analytic = loss_gradient(a, b, config)
            fd = fd_gradient(a, b, config)
            assert rel_gradient_error(analytic, fd) < 1e-5

    def test_lambda_linearity(self, rng):
        a = rng.random((8, 8, 3))
        b = rng.random((8, 8, 3))
        g0 = loss_gradient(a, b, LossConfig(lam=0.0))
        g1 = loss_gradient(a, b, LossConfig(lam=1.0))
        g2 = loss_gradient(a, b, LossConfig(lam=2.0))
        assert np.max(np.abs(g2 - (2.0 * g1 - g0))) < 1e-12

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_descent_direction(self, variant, rng):
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        a, b = sample_smooth_pair(rng, 8, 8, 3, config)
        grad = loss_gradient(a, b, config)
        assert np.linalg.norm(grad) > 1e-8
        before = multi_scale_loss(a, b, config).total
        after = multi_scale_loss(a - 1e-7 * grad, b, config).total
        assert after < before

    def test_gradient_all_finite(self, rng):
        a = rng.random((16, 16, 3))
        b = rng.random((16, 16, 3))
        for variant in VARIANTS:
            grad = loss_gradient(a, b, LossConfig(variant=variant))
            assert grad.shape == a.shape
            assert np.all(np.isfinite(grad))


class TestMaskedLoss:
    def _reports_close(self, left, right, tol=1e-12):
        assert left.total == pytest.approx(right.total, abs=tol)
        assert left.l1_term == pytest.approx(right.l1_term, abs=tol)
        assert left.freq_term == pytest.approx(right.freq_term, abs=tol)
        for (k1, c1), (k2, c2) in zip(left.per_scale, right.per_scale):
            assert k1 == k2
            assert c1 == pytest.approx(c2, abs=tol)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_all_ones_mask_equals_plain_loss(self, variant, rng):
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        a = rng.random((8, 8, 3))
        b = rng.random((8, 8, 3))
        mask = np.ones((8, 8))
        self._reports_close(masked_loss(a, b, mask, config), multi_scale_loss(a, b, config))

    def test_all_zeros_mask_equals_plain_loss(self, rng):
        config = LossConfig(variant="dct", scales=2, lam=1.0)
        a = rng.random((8, 8, 1))
        b = rng.random((8, 8, 1))
        mask = np.zeros((8, 8))
        self._reports_close(masked_loss(a, b, mask, config), multi_scale_loss(a, b, config))

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_checkerboard_composition(self, variant, rng):
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        a = rng.random((8, 8, 3))
        b = rng.random((8, 8, 3))
        mask = np.indices((8, 8)).sum(axis=0) % 2
        mask = mask.astype(np.float64)[:, :, np.newaxis]
        got = masked_loss(a, b, mask, config)
        expected = (
            multi_scale_loss(mask * a, mask * b, config)
            + multi_scale_loss((1 - mask) * a, (1 - mask) * b, config)
        )
        self._reports_close(got, expected)

    def test_soft_mask_accepted(self, rng):
        config = LossConfig(variant="dct", scales=2)
        a = rng.random((4, 4, 3))
        b = rng.random((4, 4, 3))
        mask = rng.random((4, 4))
        report = masked_loss(a, b, mask, config)
        assert np.isfinite(report.total)

    def test_bad_mask_values(self, rng):
        a = rng.random((4, 4, 1))
        with pytest.raises(BadConfigError):
            masked_loss(a, a, np.full((4, 4), 1.5), LossConfig(scales=1))

    def test_mask_shape_mismatch(self, rng):
        a = rng.random((4, 4, 1))
        with pytest.raises(ShapeMismatchError):
            masked_loss(a, a, np.ones((4, 6)), LossConfig(scales=1))
