import math

import numpy as np
import pytest

from edgeforge import GrayImage, WorkerConfig, build_gaussian_kernel, gaussian_blur

from oracles import blur_ref

CFG = WorkerConfig(workers=1, band_granularity=1)


class TestBuildGaussianKernel:
    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
    def test_symmetric_unit_sum(self, sigma):
        k = build_gaussian_kernel(sigma)
        assert np.array_equal(k.weights, k.weights[::-1])
        assert abs(k.weights.sum() - 1.0) < 1e-12
        assert k.weights.argmax() == k.radius

    def test_sigma_one_shape(self):
        k = build_gaussian_kernel(1.0)
        assert k.radius == 3
        # before normalization: exp(0) at center, exp(-1/2) at offset 1
        ratio = k.weights[k.radius + 1] / k.weights[k.radius]
        assert ratio == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_tiny_sigma_is_near_delta(self):
        k = build_gaussian_kernel(0.1)
        assert k.radius == 1
        assert k.weights[1] > 0.999

    @pytest.mark.parametrize("sigma", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_sigma(self, sigma):
        with pytest.raises(ValueError):
            build_gaussian_kernel(sigma)


class TestGaussianBlur:
    @pytest.mark.parametrize("sigma", [0.5, 1.4, 3.0])
    def test_preserves_constant_images(self, sigma):
        img = GrayImage.from_array(np.full((9, 7), 77.0))
        out = gaussian_blur(img, build_gaussian_kernel(sigma), CFG)
        assert np.allclose(out.pixels, 77.0, rtol=0, atol=1e-9)

    def test_single_pixel_unchanged(self):
        img = GrayImage.from_array(np.array([[42.5]]))
        out = gaussian_blur(img, build_gaussian_kernel(2.0), CFG)
        assert out.pixels[0, 0] == pytest.approx(42.5, abs=1e-9)

    def test_impulse_row_matches_reference_convolution(self):
        img = GrayImage.from_array(np.array([[0.0, 0.0, 100.0, 0.0, 0.0]]))
        kernel = build_gaussian_kernel(1.0)
        out = gaussian_blur(img, kernel, CFG)
        expected = blur_ref(img.pixels.tolist(), kernel.weights.tolist())
        assert np.allclose(out.pixels, expected, rtol=0, atol=1e-9)
        assert out.pixels[0, 2] == pytest.approx(100.0 * kernel.weights[kernel.radius], abs=1e-9)

    @pytest.mark.parametrize("seed", range(8))
    def test_separable_equals_direct_2d(self, seed):
        rng = np.random.default_rng(seed)
        h, w = rng.integers(1, 17, size=2)
        img = GrayImage.from_array(rng.random((h, w)) * 255)
        kernel = build_gaussian_kernel(float(rng.uniform(0.3, 1.5)))
        out = gaussian_blur(img, kernel, CFG)
        expected = blur_ref(img.pixels.tolist(), kernel.weights.tolist())
        assert np.allclose(out.pixels, expected, rtol=0, atol=1e-9)

    def test_worker_count_invariance_bit_identical(self):
        rng = np.random.default_rng(3)
        img = GrayImage.from_array(rng.random((50, 40)) * 255)
        kernel = build_gaussian_kernel(1.4)
        baseline = gaussian_blur(img, kernel, WorkerConfig(workers=1, band_granularity=1))
        for workers in (2, 4, 8):
            out = gaussian_blur(img, kernel, WorkerConfig(workers=workers, band_granularity=1))
            assert np.array_equal(out.pixels, baseline.pixels)

    @pytest.mark.parametrize("scale", [0.5, 2.0])
    def test_linearity(self, scale):
        rng = np.random.default_rng(11)
        img = rng.random((12, 12)) * 100
        kernel = build_gaussian_kernel(1.0)
        blurred = gaussian_blur(GrayImage.from_array(img), kernel, CFG).pixels
        scaled = gaussian_blur(GrayImage.from_array(scale * img), kernel, CFG).pixels
        assert np.allclose(scaled, scale * blurred, rtol=1e-9, atol=0)
