"""Image-quality metric tests with closed-form oracles.

PSNR oracles come straight from the definition (uniform squared error e
gives -10*log10(e)); the constant-image SSIM oracle is derived by hand in
test_constant_images_closed_form.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from froxel.metrics import QualityReport, evaluate, psnr, ssim


def checker(h=32, w=32):
    jj, ii = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    plane = ((ii // 4 + jj // 4) % 2).astype(np.float64)
    return np.stack([plane, plane, plane], axis=2) * 0.5 + 0.25


class TestPsnr:
    def test_uniform_squared_error_worked_example(self):
        # Every sample off by 0.1: MSE = 0.01, PSNR = 10*log10(100) = 20 dB.
        ref = np.full((16, 16, 3), 0.5)
        test = np.full((16, 16, 3), 0.6)
        assert psnr(ref, test) == pytest.approx(20.0, abs=1e-9)

    def test_identical_images_are_infinite(self):
        img = checker()
        assert psnr(img, img) == math.inf

    def test_symmetry(self):
        rng = np.random.default_rng(111)
        a, b = rng.random((16, 16, 3)), rng.random((16, 16, 3))
        assert psnr(a, b) == pytest.approx(psnr(b, a), rel=1e-12)

    def test_grayscale_input(self):
        ref = np.full((16, 16), 0.5)
        test = np.full((16, 16), 0.75)
        assert psnr(ref, test) == pytest.approx(-10.0 * math.log10(0.0625), rel=1e-12)

    def test_worst_case_zero_db(self):
        assert psnr(np.zeros((8, 8, 3)), np.ones((8, 8, 3))) == pytest.approx(0.0, abs=1e-12)

    def test_more_noise_means_lower_psnr(self):
        rng = np.random.default_rng(113)
        ref = np.full((32, 32, 3), 0.5)
        small = np.clip(ref + rng.normal(0, 0.02, ref.shape), 0, 1)
        large = np.clip(ref + rng.normal(0, 0.1, ref.shape), 0, 1)
        assert psnr(ref, small) > psnr(ref, large)


class TestSsim:
    def test_identical_images_exactly_one(self):
        img = checker()
        assert ssim(img, img) == 1.0  # bitwise, by construction

    def test_constant_images_closed_form(self):
        # Constant 0 vs constant 1: all variances and the covariance vanish,
        # mu_x=0, mu_y=1, so SSIM = (C1 * C2) / ((1 + C1) * C2) = C1/(1+C1).
        zero = np.zeros((16, 16, 3))
        one = np.ones((16, 16, 3))
        expected = 1e-4 / (1.0 + 1e-4)
        assert ssim(zero, one) == pytest.approx(expected, rel=1e-9)
        assert ssim(zero, one) == pytest.approx(1.0e-4, rel=2e-4)

    def test_symmetry(self):
        rng = np.random.default_rng(115)
        a, b = rng.random((24, 24, 3)), rng.random((24, 24, 3))
        assert ssim(a, b) == pytest.approx(ssim(b, a), rel=1e-9)

    def test_structural_break_scores_below_noise(self):
        rng = np.random.default_rng(117)
        ref = checker()
        noisy = np.clip(ref + rng.normal(0, 0.02, ref.shape), 0, 1)
        inverted = 1.0 - ref
        assert ssim(ref, noisy) > 0.8
        assert ssim(ref, inverted) < ssim(ref, noisy)

    def test_luma_weighting(self):
        # A blue-channel change moves luma 0.114 times as far as the same
        # red+green+blue change, so its SSIM penalty is milder.
        ref = checker()
        blue_shift = ref.copy()
        blue_shift[:, :, 2] = np.clip(blue_shift[:, :, 2] + 0.3, 0, 1)
        all_shift = np.clip(ref + 0.3, 0, 1)
        assert ssim(ref, blue_shift) > ssim(ref, all_shift)

    def test_minimum_size_is_window_size(self):
        ok = np.zeros((11, 11, 3))
        assert ssim(ok, ok) == 1.0
        small = np.zeros((10, 11, 3))
        with pytest.raises(ValueError, match="11x11"):
            ssim(small, small)

    def test_range_bounded(self):
        rng = np.random.default_rng(119)
        for _ in range(10):
            a, b = rng.random((16, 16, 3)), rng.random((16, 16, 3))
            assert -1.0 <= ssim(a, b) <= 1.0


class TestValidation:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shapes differ"):
            psnr(np.zeros((8, 8, 3)), np.zeros((8, 9, 3)))

    def test_bad_channel_count(self):
        with pytest.raises(ValueError, match="3 channels"):
            psnr(np.zeros((8, 8, 4)), np.zeros((8, 8, 4)))

    def test_bad_rank(self):
        with pytest.raises(ValueError, match="2-D"):
            psnr(np.zeros(12), np.zeros(12))

    @pytest.mark.parametrize("value", [-0.1, 1.1, float("nan")])
    def test_out_of_range_values(self, value):
        bad = np.full((8, 8, 3), 0.5)
        bad[0, 0, 0] = value
        with pytest.raises(ValueError, match="\\[0, 1\\]"):
            psnr(np.full((8, 8, 3), 0.5), bad)
        with pytest.raises(ValueError, match="reference"):
            psnr(bad, np.full((8, 8, 3), 0.5))


class TestEvaluate:
    def test_bundles_both_metrics(self):
        rng = np.random.default_rng(121)
        ref = checker()
        test = np.clip(ref + rng.normal(0, 0.05, ref.shape), 0, 1)
        report = evaluate(ref, test)
        assert isinstance(report, QualityReport)
        assert report.psnr_db == pytest.approx(psnr(ref, test), rel=1e-12)
        assert report.ssim == pytest.approx(ssim(ref, test), rel=1e-12)

    def test_identity_report(self):
        img = checker()
        report = evaluate(img, img)
        assert report.psnr_db == math.inf
        assert report.ssim == 1.0
