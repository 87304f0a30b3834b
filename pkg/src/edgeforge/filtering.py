"""Gaussian noise filtering: separable two-pass convolution over row bands."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import WorkerConfig, parallel_band_map
from .image import GrayImage


@dataclass(frozen=True)
class GaussianKernel:
    sigma: float
    radius: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (2 * self.radius + 1,):
            raise ValueError(f"expected {2 * self.radius + 1} weights, got {w.shape}")
        if not np.allclose(w, w[::-1], rtol=0, atol=0):
            raise ValueError("kernel weights must be symmetric")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"kernel weights must sum to 1, got {w.sum()!r}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


def build_gaussian_kernel(sigma: float) -> GaussianKernel:
    """Sampled Gaussian with radius ceil(3*sigma), normalized to unit sum."""
    if not (math.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be positive and finite, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(x * x) / (2.0 * sigma * sigma))
    w /= w.sum()
    return GaussianKernel(sigma=sigma, radius=radius, weights=w)


def _correlate_rows(src: np.ndarray, weights: np.ndarray, start: int, end: int) -> np.ndarray:
    """Horizontal pass over rows [start, end) with replicate borders.

    Taps accumulate left to right so per-pixel sums do not depend on how
    rows were banded.
    """
    radius = (len(weights) - 1) // 2
    width = src.shape[1]
    padded = np.pad(src[start:end], ((0, 0), (radius, radius)), mode="edge")
    out = weights[0] * padded[:, 0:width]
    for i in range(1, len(weights)):
        out += weights[i] * padded[:, i : i + width]
    return out


def _correlate_cols(padded: np.ndarray, weights: np.ndarray, start: int, end: int) -> np.ndarray:
    """Vertical pass producing output rows [start, end) from a row-padded source."""
    for i, w in enumerate(weights):
        block = w * padded[start + i : end + i, :]
        out = block if i == 0 else out + block
    return out


def gaussian_blur(
    img: GrayImage,
    kernel: GaussianKernel,
    cfg: WorkerConfig,
    band_times: list[list[int]] | None = None,
) -> GrayImage:
    """Separable Gaussian blur, bit-identical across worker counts."""
    weights = kernel.weights
    horizontal = np.vstack(
        parallel_band_map(
            img.height,
            cfg,
            lambda s, e: _correlate_rows(img.pixels, weights, s, e),
            band_times=band_times,
        )
    )
    padded = np.pad(horizontal, ((kernel.radius, kernel.radius), (0, 0)), mode="edge")
    vertical = np.vstack(
        parallel_band_map(
            img.height,
            cfg,
            lambda s, e: _correlate_cols(padded, weights, s, e),
            band_times=band_times,
        )
    )
    return GrayImage.from_array(vertical)
