"""Sobel gradient field (Gx, Gy, magnitude, quantized direction) and the
5-point Laplacian comparison operator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import WorkerConfig, parallel_band_map
from .image import GrayImage

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)

ORIENTATIONS = (0, 45, 90, 135)


@dataclass(frozen=True)
class GradientField:
    width: int
    height: int
    gx: np.ndarray = field(repr=False)
    gy: np.ndarray = field(repr=False)
    magnitude: np.ndarray = field(repr=False)
    orientation: np.ndarray = field(repr=False)  # int degrees in {0, 45, 90, 135}

    def __post_init__(self):
        shape = (self.height, self.width)
        for name in ("gx", "gy", "magnitude", "orientation"):
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            arr.flags.writeable = False


def quantize_orientation_array(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Fold atan2(gy, gx) into [0, 180) and snap to the nearest of 0/45/90/135.

    Ties at 22.5 + k*45 degrees round toward the larger bin; (0, 0) maps to 0.
    """
    deg = np.degrees(np.arctan2(gy, gx)) % 180.0
    bins = (np.floor((deg + 22.5) / 45.0).astype(np.int64)) % 4
    return (bins * 45).astype(np.int64)


def quantize_orientation(gx: float, gy: float) -> int:
    return int(quantize_orientation_array(np.float64(gx), np.float64(gy)))


def _stencil_band(
    padded: np.ndarray, mask: np.ndarray, start: int, end: int, col_major: bool = False
) -> np.ndarray:
    """Correlate a 3x3 mask over output rows [start, end); padded has a 1-pixel
    replicate margin.

    Taps accumulate in a fixed order so sums are reproducible; gy uses the
    column-major order (the transpose of gx's) so that transposing the image
    swaps gx and gy bit-exactly.
    """
    width = padded.shape[1] - 2
    out = np.zeros((end - start, width), dtype=np.float64)
    offsets = [(dy, dx) for dx in range(3) for dy in range(3)] if col_major else [
        (dy, dx) for dy in range(3) for dx in range(3)
    ]
    for dy, dx in offsets:
        coeff = mask[dy, dx]
        if coeff != 0.0:
            out += coeff * padded[start + dy : end + dy, dx : dx + width]
    return out


def sobel(
    img: GrayImage, cfg: WorkerConfig, band_times: list[list[int]] | None = None
) -> GradientField:
    """Canonical 3x3 Sobel with replicate borders; Euclidean magnitude."""
    padded = np.pad(img.pixels, 1, mode="edge")

    def band(start: int, end: int):
        gx = _stencil_band(padded, SOBEL_X, start, end)
        gy = _stencil_band(padded, SOBEL_Y, start, end, col_major=True)
        mag = np.sqrt(gx * gx + gy * gy)
        ori = quantize_orientation_array(gx, gy)
        return gx, gy, mag, ori

    parts = parallel_band_map(img.height, cfg, band, band_times=band_times)
    gx, gy, mag, ori = (np.vstack([p[i] for p in parts]) for i in range(4))
    return GradientField(
        width=img.width, height=img.height, gx=gx, gy=gy, magnitude=mag, orientation=ori
    )


LAPLACIAN_MASK = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=np.float64)


def laplacian(
    img: GrayImage, cfg: WorkerConfig, band_times: list[list[int]] | None = None
) -> GrayImage:
    """Discrete 5-point Laplacian with replicate borders."""
    padded = np.pad(img.pixels, 1, mode="edge")
    bands = parallel_band_map(
        img.height,
        cfg,
        lambda s, e: _stencil_band(padded, LAPLACIAN_MASK, s, e),
        band_times=band_times,
    )
    return GrayImage.from_array(np.vstack(bands))
