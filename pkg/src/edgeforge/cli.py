"""Command-line interface: detect, bench, criteria, speedup-model."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bench import (
    PipelineConfig,
    edges_to_image,
    rescale_for_view,
    run_benchmark,
    run_pipeline,
)
from .criteria import (
    EdgeModel,
    Filter1D,
    LocalizationDensity,
    SpeedupModel,
    asymmetric_speedup,
    localization_criterion,
    minimal_response_criterion,
    snr_criterion,
)
from .engine import DEFAULT_WORKERS, WorkerConfig
from .hysteresis import Thresholds
from .image import GrayImage, load_pgm, save_pgm

WORKERS_ENV = "EDGEFORGE_WORKERS"


def _default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"error: {WORKERS_ENV}={env!r} is not an integer")
    return DEFAULT_WORKERS


def _load_image(path: str) -> GrayImage:
    return load_pgm(Path(path).read_bytes())


def _read_samples(path: str) -> np.ndarray:
    return np.array(Path(path).read_text().split(), dtype=np.float64)


def _add_pipeline_flags(p: argparse.ArgumentParser):
    p.add_argument("--sigma", type=float, default=1.4, help="Gaussian sigma (default 1.4)")
    p.add_argument("--workers", type=int, default=None, help=f"worker count (default: {WORKERS_ENV} or CPU count)")
    p.add_argument("--granularity", type=int, default=16, help="minimum rows per band")
    p.add_argument("--low", type=float, default=None, help="absolute low threshold")
    p.add_argument("--high", type=float, default=None, help="absolute high threshold")
    p.add_argument("--auto-threshold", action="store_true", help="ratio-based thresholds from the thinned field (default when --low/--high absent)")
    p.add_argument("--hysteresis", choices=["serial", "parallel"], default="serial")
    p.add_argument("--operator", choices=["canny", "laplacian"], default="canny")


def _pipeline_config(args) -> PipelineConfig:
    if (args.low is None) != (args.high is None):
        raise SystemExit("error: --low and --high must be given together")
    if args.low is not None and args.auto_threshold:
        raise SystemExit("error: --auto-threshold conflicts with --low/--high")
    thresholds = None if args.low is None else Thresholds(low=args.low, high=args.high)
    workers = args.workers if args.workers is not None else _default_workers()
    return PipelineConfig(
        sigma=args.sigma,
        thresholds=thresholds,
        workers=WorkerConfig(workers=workers, band_granularity=args.granularity),
        hysteresis_mode=args.hysteresis,
        operator=args.operator,
    )


def _cmd_detect(args) -> int:
    cfg = _pipeline_config(args)
    img = _load_image(args.infile)
    result = run_pipeline(img, cfg, keep_intermediates=bool(args.dump_stages))
    if cfg.operator == "laplacian":
        out = rescale_for_view(result.response.pixels)
    else:
        out = edges_to_image(result.edges)
    Path(args.outfile).write_bytes(save_pgm(out))
    if args.dump_stages:
        prefix = args.dump_stages
        Path(f"{prefix}-blur.pgm").write_bytes(save_pgm(result.blurred))
        if cfg.operator == "canny":
            Path(f"{prefix}-magnitude.pgm").write_bytes(
                save_pgm(rescale_for_view(result.grad.magnitude))
            )
            Path(f"{prefix}-nms.pgm").write_bytes(
                save_pgm(rescale_for_view(result.thinned.magnitude))
            )
    return 0


def _cmd_bench(args) -> int:
    cfg = _pipeline_config(args)
    img = _load_image(args.infile)
    worker_counts = [int(tok) for tok in args.worker_counts.split(",")]
    report = run_benchmark(img, worker_counts, args.reps, cfg, image_name=args.infile)
    text = report.to_csv() if args.format == "csv" else json.dumps(report.to_json_dict(), indent=2)
    if args.outfile:
        Path(args.outfile).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def _cmd_criteria(args) -> int:
    samples = _read_samples(args.filter_file)
    filt = Filter1D(support=args.support, samples=samples)
    model = EdgeModel(amplitude=args.amplitude, noise_sigma=args.noise_sigma)
    print(f"snr {snr_criterion(filt, model):.6g}")
    if args.density_file:
        density = LocalizationDensity(
            support=args.density_support if args.density_support else args.support,
            samples=_read_samples(args.density_file),
        )
    else:
        # fall back to |f| normalized to unit trapezoid mass as the displacement density
        mass = np.trapezoid(np.abs(filt.samples), dx=filt.spacing)
        if mass <= 0:
            raise SystemExit("error: cannot derive a density from an identically zero filter")
        density = LocalizationDensity(support=args.support, samples=np.abs(filt.samples) / mass)
    print(f"localization {localization_criterion(density):.6g}")
    print(f"minimal_response {minimal_response_criterion(filt):.6g}")
    return 0


_PERF_MAPS = {"sqrt": lambda r: r**0.5, "linear": float, "unit": lambda r: 1.0}


def _cmd_speedup_model(args) -> int:
    perf = _PERF_MAPS[args.perf]
    if args.r is not None:
        value = asymmetric_speedup(SpeedupModel(f=args.f, n=args.n, r=args.r, perf=perf))
        print(f"{value:.6g}")
    else:
        print("r,speedup")
        for r in range(1, args.n + 1):
            value = asymmetric_speedup(SpeedupModel(f=args.f, n=args.n, r=r, perf=perf))
            print(f"{r},{value:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgeforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run the edge-detection pipeline on a PGM image")
    p.add_argument("--in", dest="infile", required=True, help="input PGM (P5 or P2)")
    p.add_argument("--out", dest="outfile", required=True, help="output PGM path")
    _add_pipeline_flags(p)
    p.add_argument("--dump-stages", metavar="PREFIX", default=None, help="also write blur/magnitude/nms PGMs (viewing rescale only)")
    p.set_defaults(fn=_cmd_detect)

    p = sub.add_parser("bench", help="per-stage scalability benchmark")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--workers-list", dest="worker_counts", default="1,2,4", help="comma-separated worker counts (must include 1)")
    p.add_argument("--reps", type=int, default=5, help="repetitions per worker count (median taken)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", dest="outfile", default=None, help="report path (default stdout)")
    _add_pipeline_flags(p)
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("criteria", help="evaluate the filter-design criteria for sampled 1-D filters")
    p.add_argument("--filter-file", required=True, help="whitespace-separated samples on [-T, T]")
    p.add_argument("--support", type=float, required=True, help="half-width T of the filter support")
    p.add_argument("--amplitude", type=float, default=1.0, help="step-edge height A")
    p.add_argument("--noise-sigma", type=float, default=1.0, help="noise amplitude")
    p.add_argument("--density-file", default=None, help="displacement density samples for the localization criterion")
    p.add_argument("--density-support", type=float, default=None)
    p.set_defaults(fn=_cmd_criteria)

    p = sub.add_parser("speedup-model", help="evaluate the asymmetric Amdahl speedup model")
    p.add_argument("--f", type=float, required=True, help="parallel fraction in [0, 1]")
    p.add_argument("--n", type=int, required=True, help="base-core-equivalent resources")
    p.add_argument("--r", type=int, default=None, help="resources of the boost core (omit for a full r-sweep table)")
    p.add_argument("--perf", choices=sorted(_PERF_MAPS), default="sqrt", help="sequential performance model perf(r)")
    p.set_defaults(fn=_cmd_speedup_model)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except FileNotFoundError as err:
        print(f"error: no such file: {err.filename}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
