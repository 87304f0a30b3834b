"""Pipeline orchestration and the scalability benchmark harness."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .criteria import SpeedupModel, asymmetric_speedup, fit_parallel_fraction
from .engine import StageTiming, WorkerConfig
from .filtering import build_gaussian_kernel, gaussian_blur
from .gradient import GradientField, laplacian, sobel
from .hysteresis import EdgeMap, Thresholds, double_threshold, trace_edges, trace_edges_parallel
from .image import GrayImage
from .nms import ThinnedField, non_max_suppress

AUTO_HIGH_RATIO = 0.2  # high = ratio * max thinned magnitude
AUTO_LOW_RATIO = 0.4  # low = ratio * high

WORKER_HARD_CAP = 64


@dataclass
class PipelineConfig:
    sigma: float = 1.4
    thresholds: Thresholds | None = None  # None = auto ratios from the thinned field
    workers: WorkerConfig = field(default_factory=WorkerConfig)
    hysteresis_mode: str = "serial"  # serial | parallel
    operator: str = "canny"  # canny | laplacian

    def __post_init__(self):
        if self.hysteresis_mode not in ("serial", "parallel"):
            raise ValueError(f"unknown hysteresis mode {self.hysteresis_mode!r}")
        if self.operator not in ("canny", "laplacian"):
            raise ValueError(f"unknown operator {self.operator!r}")


@dataclass
class PipelineResult:
    edges: EdgeMap | None = None
    response: GrayImage | None = None  # laplacian operator output
    blurred: GrayImage | None = None
    grad: GradientField | None = None
    thinned: ThinnedField | None = None
    thresholds: Thresholds | None = None


def auto_thresholds(thin: ThinnedField) -> Thresholds:
    peak = float(thin.magnitude.max())
    if peak == 0.0:
        # all-zero thinned field: any positive threshold labels nothing,
        # so auto mode yields an empty edge map rather than an error
        return Thresholds(low=1.0, high=1.0)
    high = AUTO_HIGH_RATIO * peak
    return Thresholds(low=AUTO_LOW_RATIO * high, high=high)


def run_pipeline(
    img: GrayImage,
    cfg: PipelineConfig,
    timings: list[StageTiming] | None = None,
    band_times: dict[str, list[list[int]]] | None = None,
    keep_intermediates: bool = False,
) -> PipelineResult:
    """Run blur -> sobel -> nms -> threshold -> trace (or blur -> laplacian).

    Output is bit-identical across runs and worker counts for fixed
    inputs and config.
    """
    clock = time.perf_counter_ns
    wcfg = cfg.workers

    def record(stage: str, t0: int, rows: int):
        if timings is not None:
            timings.append(
                StageTiming(stage_name=stage, workers=wcfg.workers, wall_ns=clock() - t0, rows_processed=rows)
            )

    def times_for(stage: str):
        if band_times is None:
            return None
        return band_times.setdefault(stage, [])

    result = PipelineResult()
    kernel = build_gaussian_kernel(cfg.sigma)

    t0 = clock()
    blurred = gaussian_blur(img, kernel, wcfg, band_times=times_for("gaussian"))
    record("gaussian", t0, img.height)

    if cfg.operator == "laplacian":
        t0 = clock()
        result.response = laplacian(blurred, wcfg, band_times=times_for("laplacian"))
        record("laplacian", t0, img.height)
        if keep_intermediates:
            result.blurred = blurred
        return result

    t0 = clock()
    grad = sobel(blurred, wcfg, band_times=times_for("sobel"))
    record("sobel", t0, img.height)

    t0 = clock()
    thinned = non_max_suppress(grad, wcfg, band_times=times_for("nms"))
    record("nms", t0, img.height)

    t0 = clock()
    thresholds = cfg.thresholds if cfg.thresholds is not None else auto_thresholds(thinned)
    labeled = double_threshold(thinned, thresholds)
    record("threshold", t0, img.height)

    t0 = clock()
    if cfg.hysteresis_mode == "parallel":
        edges = trace_edges_parallel(labeled, wcfg)
    else:
        edges = trace_edges(labeled)
    record("hysteresis", t0, img.height)

    result.edges = edges
    result.thresholds = thresholds
    if keep_intermediates:
        result.blurred, result.grad, result.thinned = blurred, grad, thinned
    return result


def edges_to_image(edges: EdgeMap) -> GrayImage:
    """Binary edge map as a 0/255 image."""
    if edges.final is None:
        raise ValueError("edge map has not been traced")
    return GrayImage.from_array(np.where(edges.final, 255.0, 0.0))


def rescale_for_view(arr: np.ndarray) -> GrayImage:
    """Linear rescale of |values| to [0, 255] for dumping intermediates."""
    mag = np.abs(np.asarray(arr, dtype=np.float64))
    peak = mag.max()
    return GrayImage.from_array(mag * (255.0 / peak) if peak > 0 else mag)


@dataclass
class BenchReport:
    image_name: str
    config: dict
    records: list[StageTiming]
    speedups: dict[str, dict[int, float]]
    fitted_parallel_fraction: float
    asymmetric_predictions: dict[int, float]
    evenness: dict[str, dict[int, float]]

    def to_json_dict(self) -> dict:
        return {
            "image": self.image_name,
            "config": self.config,
            "records": [
                {
                    "stage": r.stage_name,
                    "workers": r.workers,
                    "repetition": r.repetition,
                    "wall_ns": r.wall_ns,
                    "rows_processed": r.rows_processed,
                }
                for r in self.records
            ],
            "speedups": {s: {str(w): v for w, v in by_w.items()} for s, by_w in self.speedups.items()},
            "fitted_parallel_fraction": None
            if math.isnan(self.fitted_parallel_fraction)
            else self.fitted_parallel_fraction,
            "asymmetric_predictions": {str(n): v for n, v in self.asymmetric_predictions.items()},
            "evenness": {s: {str(w): v for w, v in by_w.items()} for s, by_w in self.evenness.items()},
        }

    def to_csv(self) -> str:
        lines = ["stage,workers,repetition,wall_ns"]
        for r in self.records:
            lines.append(f"{r.stage_name},{r.workers},{r.repetition},{r.wall_ns}")
        for stage, by_w in self.speedups.items():
            for w, v in by_w.items():
                lines.append(f"speedup:{stage},{w},-1,{v:.6f}")
        lines.append(f"fitted_parallel_fraction,0,-1,{self.fitted_parallel_fraction:.6f}")
        for n, v in self.asymmetric_predictions.items():
            lines.append(f"asymmetric_prediction,{n},-1,{v:.6f}")
        return "\n".join(lines) + "\n"


def derive_report(
    image_name: str,
    config: dict,
    records: list[StageTiming],
    evenness: dict[str, dict[int, float]] | None = None,
) -> BenchReport:
    """Compute speedups, the fitted parallel fraction, and model predictions
    from raw per-stage timing records."""
    by_stage: dict[str, dict[int, list[int]]] = {}
    for r in records:
        by_stage.setdefault(r.stage_name, {}).setdefault(r.workers, []).append(r.wall_ns)

    speedups: dict[str, dict[int, float]] = {}
    for stage, by_w in by_stage.items():
        medians = {w: statistics.median(ts) for w, ts in by_w.items()}
        base = medians.get(1)
        if base is None:
            continue
        speedups[stage] = {w: base / m for w, m in sorted(medians.items())}

    totals = by_stage.get("total", {})
    if len(totals) >= 2:
        fitted = fit_parallel_fraction([(w, statistics.median(ts)) for w, ts in totals.items()])
        predictions = {n: asymmetric_speedup(SpeedupModel(f=fitted, n=n, r=1)) for n in sorted(totals)}
    else:
        # a single worker count carries no scaling information
        fitted = float("nan")
        predictions = {}
    return BenchReport(
        image_name=image_name,
        config=config,
        records=records,
        speedups=speedups,
        fitted_parallel_fraction=fitted,
        asymmetric_predictions=predictions,
        evenness=evenness or {},
    )


def _evenness_ratio(dispatches: list[list[int]]) -> float:
    """Median over dispatches of max/min band wall time (multi-band only)."""
    ratios = [max(d) / max(min(d), 1) for d in dispatches if len(d) > 1]
    return statistics.median(ratios) if ratios else 1.0


def run_benchmark(
    img: GrayImage,
    worker_counts: list[int],
    repetitions: int,
    cfg: PipelineConfig,
    image_name: str = "<memory>",
) -> BenchReport:
    """Time each stage per worker count (median of repetitions, warm-up
    discarded) and fit the whole-pipeline parallel fraction."""
    if repetitions < 3:
        raise ValueError(f"repetitions must be >= 3, got {repetitions}")
    if 1 not in worker_counts:
        raise ValueError("worker_counts must include 1")
    for w in worker_counts:
        if not 1 <= w <= WORKER_HARD_CAP:
            raise ValueError(f"worker count {w} outside 1..{WORKER_HARD_CAP}")

    clock = time.perf_counter_ns
    records: list[StageTiming] = []
    evenness: dict[str, dict[int, float]] = {}
    for w in sorted(set(worker_counts)):
        run_cfg = PipelineConfig(
            sigma=cfg.sigma,
            thresholds=cfg.thresholds,
            workers=WorkerConfig(workers=w, band_granularity=cfg.workers.band_granularity),
            hysteresis_mode=cfg.hysteresis_mode,
            operator=cfg.operator,
        )
        run_pipeline(img, run_cfg)  # warm-up, discarded
        band_times: dict[str, list[list[int]]] = {}
        for rep in range(repetitions):
            stage_timings: list[StageTiming] = []
            t0 = clock()
            run_pipeline(img, run_cfg, timings=stage_timings, band_times=band_times)
            total = clock() - t0
            for st in stage_timings:
                st.repetition = rep
                records.append(st)
            records.append(
                StageTiming(
                    stage_name="total", workers=w, wall_ns=total, rows_processed=img.height, repetition=rep
                )
            )
        for stage, dispatches in band_times.items():
            evenness.setdefault(stage, {})[w] = _evenness_ratio(dispatches)

    config = {
        "sigma": cfg.sigma,
        "thresholds": None
        if cfg.thresholds is None
        else {"low": cfg.thresholds.low, "high": cfg.thresholds.high},
        "hysteresis_mode": cfg.hysteresis_mode,
        "operator": cfg.operator,
        "worker_counts": sorted(set(worker_counts)),
        "repetitions": repetitions,
        "band_granularity": cfg.workers.band_granularity,
    }
    return derive_report(image_name, config, records, evenness)
