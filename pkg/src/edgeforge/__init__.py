"""Deterministic data-parallel Canny edge detection, filter-design
criteria evaluators, and a multicore scalability benchmark."""

from .bench import (
    BenchReport,
    PipelineConfig,
    PipelineResult,
    auto_thresholds,
    edges_to_image,
    run_benchmark,
    run_pipeline,
)
from .criteria import (
    EdgeModel,
    Filter1D,
    LocalizationDensity,
    SpeedupModel,
    asymmetric_speedup,
    fit_parallel_fraction,
    localization_criterion,
    minimal_response_criterion,
    snr_criterion,
)
from .engine import StageTiming, WorkerConfig, parallel_band_map, parallel_row_map, plan_bands
from .filtering import GaussianKernel, build_gaussian_kernel, gaussian_blur
from .gradient import GradientField, laplacian, quantize_orientation, sobel
from .hysteresis import (
    EdgeMap,
    Thresholds,
    double_threshold,
    trace_edges,
    trace_edges_parallel,
)
from .image import GrayImage, PgmFormatError, load_pgm, sample_pixel_clamped, save_pgm
from .nms import ThinnedField, non_max_suppress

__all__ = [
    "BenchReport",
    "EdgeMap",
    "EdgeModel",
    "Filter1D",
    "GaussianKernel",
    "GradientField",
    "GrayImage",
    "LocalizationDensity",
    "PgmFormatError",
    "PipelineConfig",
    "PipelineResult",
    "SpeedupModel",
    "StageTiming",
    "ThinnedField",
    "Thresholds",
    "WorkerConfig",
    "asymmetric_speedup",
    "auto_thresholds",
    "build_gaussian_kernel",
    "double_threshold",
    "edges_to_image",
    "fit_parallel_fraction",
    "gaussian_blur",
    "laplacian",
    "load_pgm",
    "localization_criterion",
    "minimal_response_criterion",
    "non_max_suppress",
    "parallel_band_map",
    "parallel_row_map",
    "plan_bands",
    "quantize_orientation",
    "run_benchmark",
    "run_pipeline",
    "sample_pixel_clamped",
    "save_pgm",
    "snr_criterion",
    "sobel",
    "trace_edges",
    "trace_edges_parallel",
]
