"""Non-maximum suppression along the quantized gradient direction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import WorkerConfig, parallel_band_map
from .gradient import GradientField


@dataclass(frozen=True)
class ThinnedField:
    width: int
    height: int
    magnitude: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.magnitude.shape != (self.height, self.width):
            raise ValueError(
                f"magnitude has shape {self.magnitude.shape}, expected {(self.height, self.width)}"
            )
        self.magnitude.flags.writeable = False


# offsets (dy, dx) of the two neighbors along each quantized direction
_NEIGHBORS = {
    0: ((0, -1), (0, 1)),  # left / right
    45: ((-1, 1), (1, -1)),  # up-right / down-left
    90: ((-1, 0), (1, 0)),  # up / down
    135: ((-1, -1), (1, 1)),  # up-left / down-right
}


def non_max_suppress(
    grad: GradientField, cfg: WorkerConfig, band_times: list[list[int]] | None = None
) -> ThinnedField:
    """Keep pixels >= both neighbors along their direction (ties survive),
    replicate borders; suppressed pixels become 0."""
    padded = np.pad(grad.magnitude, 1, mode="edge")
    width = grad.width

    def band(start: int, end: int) -> np.ndarray:
        center = grad.magnitude[start:end]
        ori = grad.orientation[start:end]
        keep = np.zeros(center.shape, dtype=bool)
        for angle, ((dy1, dx1), (dy2, dx2)) in _NEIGHBORS.items():
            n1 = padded[start + 1 + dy1 : end + 1 + dy1, 1 + dx1 : 1 + dx1 + width]
            n2 = padded[start + 1 + dy2 : end + 1 + dy2, 1 + dx2 : 1 + dx2 + width]
            keep |= (ori == angle) & (center >= n1) & (center >= n2)
        return np.where(keep, center, 0.0)

    bands = parallel_band_map(grad.height, cfg, band, band_times=band_times)
    return ThinnedField(width=grad.width, height=grad.height, magnitude=np.vstack(bands))
