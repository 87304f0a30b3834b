"""Numeric evaluators for the three 1-D filter design criteria (detection
SNR, localization, minimal response) and the asymmetric Amdahl speedup
model, plus a parallel-fraction fitter for measured timings.

All integrals use the composite trapezoid rule on the filter's uniform
sample grid; derivatives use central finite differences (one-sided at the
ends), so filters stay purely sample-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


def _as_samples(samples, what: str) -> np.ndarray:
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 3 or arr.size % 2 == 0:
        raise ValueError(f"{what} needs an odd number of samples >= 3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite samples")
    return arr


@dataclass(frozen=True)
class Filter1D:
    """Impulse response sampled uniformly on [-support, support]."""

    support: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.support) and self.support > 0):
            raise ValueError(f"support must be positive and finite, got {self.support}")
        object.__setattr__(self, "samples", _as_samples(self.samples, "Filter1D"))

    @property
    def spacing(self) -> float:
        return 2.0 * self.support / (len(self.samples) - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.support, self.support, len(self.samples))


@dataclass(frozen=True)
class EdgeModel:
    amplitude: float  # step-edge height
    noise_sigma: float

    def __post_init__(self):
        for name in ("amplitude", "noise_sigma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class LocalizationDensity:
    """Displacement density Pr(y) sampled uniformly on [-support, support]."""

    support: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = _as_samples(self.samples, "LocalizationDensity")
        if samples.min() < 0:
            raise ValueError("density samples must be non-negative")
        dy = 2.0 * self.support / (len(samples) - 1)
        total = np.trapezoid(samples, dx=dy)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"density must integrate to 1 (trapezoid), got {total}")
        object.__setattr__(self, "samples", samples)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.support, self.support, len(self.samples))


def default_perf(r: float) -> float:
    """Sequential performance of a core built from r base-core resources."""
    return math.sqrt(r)


@dataclass(frozen=True)
class SpeedupModel:
    f: float  # parallel fraction
    n: int  # total base-core-equivalent resources
    r: int = 1  # resources fused into the sequential-boost core
    perf: Callable[[float], float] = default_perf

    def __post_init__(self):
        if not 0 <= self.f <= 1:
            raise ValueError(f"parallel fraction must be in [0, 1], got {self.f}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")


def snr_criterion(filt: Filter1D, model: EdgeModel) -> float:
    """Detection SNR: A |int_{-T}^{0} f| / (sigma sqrt(int_{-T}^{T} f^2))."""
    f = filt.samples
    dx = filt.spacing
    half = len(f) // 2 + 1  # samples at x <= 0
    numerator = abs(np.trapezoid(f[:half], dx=dx))
    energy = np.trapezoid(f * f, dx=dx)
    if energy <= 0:
        raise ValueError("filter energy integral is zero")
    return model.amplitude * numerator / (model.noise_sigma * math.sqrt(energy))


def localization_criterion(density: LocalizationDensity) -> float:
    """Localization: 1 / sqrt(int y^2 Pr(y) dy)."""
    y = density.grid
    variance = np.trapezoid(y * y * density.samples, dx=density.grid[1] - density.grid[0])
    if variance <= 0:
        raise ValueError("second-moment integral is zero")
    return 1.0 / math.sqrt(variance)


def minimal_response_criterion(filt: Filter1D) -> float:
    """Spurious-maxima spacing: 2*pi*sqrt(int f'^2 / int f''^2)."""
    f = filt.samples
    if len(f) < 5:
        raise ValueError(f"need >= 5 samples for second differences, got {len(f)}")
    dx = filt.spacing
    f1 = np.gradient(f, dx)
    f2 = np.empty_like(f)
    f2[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (dx * dx)
    f2[0] = (f[2] - 2.0 * f[1] + f[0]) / (dx * dx)
    f2[-1] = (f[-1] - 2.0 * f[-2] + f[-3]) / (dx * dx)
    num = np.trapezoid(f1 * f1, dx=dx)
    den = np.trapezoid(f2 * f2, dx=dx)
    # an affine filter leaves only rounding noise in f''; treat it as zero
    if den <= 1e-12 * max(num, np.finfo(np.float64).tiny):
        raise ValueError("second-derivative energy is zero (affine filter)")
    return 2.0 * math.pi * math.sqrt(num / den)


def asymmetric_speedup(model: SpeedupModel) -> float:
    """Amdahl speedup on an asymmetric chip: r resources boost the serial part."""
    p = model.perf(model.r)
    return 1.0 / ((1.0 - model.f) / p + model.f / (p + model.n - model.r))


def _amdahl_speedup(f: float, workers: float) -> float:
    return 1.0 / ((1.0 - f) + f / workers)


def fit_parallel_fraction(timings: Sequence[tuple[int, float]]) -> float:
    """Least-squares fit of measured speedups to Amdahl's law over f in [0, 1].

    timings are (workers, wall_time) pairs; multiple measurements per
    worker count are averaged. Minimization by golden-section search to 1e-6.
    """
    by_workers: dict[int, list[float]] = {}
    for workers, wall in timings:
        if wall <= 0:
            raise ValueError(f"non-positive wall time {wall} for workers={workers}")
        by_workers.setdefault(int(workers), []).append(float(wall))
    if len(by_workers) < 2 or 1 not in by_workers:
        raise ValueError("need >= 2 distinct worker counts including workers=1")
    mean = {w: sum(ts) / len(ts) for w, ts in by_workers.items()}
    speedups = [(w, mean[1] / t) for w, t in sorted(mean.items())]

    def loss(f: float) -> float:
        return sum((s - _amdahl_speedup(f, w)) ** 2 for w, s in speedups)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, 1.0
    a = hi - invphi * (hi - lo)
    b = lo + invphi * (hi - lo)
    fa, fb = loss(a), loss(b)
    while hi - lo > 1e-6:
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - invphi * (hi - lo)
            fa = loss(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + invphi * (hi - lo)
            fb = loss(b)
    return (lo + hi) / 2.0
