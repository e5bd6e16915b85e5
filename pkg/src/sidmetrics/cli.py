"""Command-line surface: cloud inspection, distances, ranking, synthetic presets.

Exit codes: 0 success, 2 usage/input error, 3 numeric/degenerate error,
4 I/O error.
"""

from __future__ import annotations

import functools
import math
import os
import re
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__
from .baselines import fid as fid_op
from .baselines import kid as kid_op
from .baselines import sharpness as sharpness_op
from .cloud import read_cloud, write_cloud
from .errors import (
    DataError,
    DegenerateTargetError,
    EmptyCloudError,
    EmptyRangeError,
    EmptyRankingError,
    FormatError,
    InsufficientSamplesError,
    KernelOverflowError,
    NumericError,
    ShapeError,
    UnknownNameError,
    UnsupportedModeError,
)
from .kernel import KernelSpec
from .ranking import (
    rank_single,
    rank_vote,
    ranking_to_csv,
    ranking_to_dict,
    read_metric_table,
)
from .report import RunReport
from .scenarios import PRESET_NAMES, scenario
from .sid import SweepConfig, csid, sid_sweep
from .stats import compute_stats
from .subspace import min_sin_theta

EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_INPUT_ERRORS = (
    FormatError,
    DataError,
    EmptyCloudError,
    ShapeError,
    InsufficientSamplesError,
    UnsupportedModeError,
    UnknownNameError,
    EmptyRankingError,
    EmptyRangeError,
    ValueError,
)
_NUMERIC_ERRORS = (NumericError, DegenerateTargetError, KernelOverflowError)

_GRAY_SHAPE = re.compile(r"gray:(\d+)x(\d+)")


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handles_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _NUMERIC_ERRORS as exc:
            _fail(EXIT_NUMERIC, str(exc))
        except _INPUT_ERRORS as exc:
            _fail(EXIT_INPUT, str(exc))
        except OSError as exc:
            _fail(EXIT_IO, str(exc))

    return wrapper


def _finish(report: RunReport, started: float, report_path: str | None) -> None:
    report.wall_time_ms = int((time.monotonic() - started) * 1000)
    if report_path:
        report.write(report_path)


def _kernel_for(dim: int, exponent: int | None, order_m: int | None, kernel_dim: int | None,
                kappa: float, floor: float) -> KernelSpec:
    if kernel_dim is not None and kernel_dim != dim:
        raise ShapeError(f"--n {kernel_dim} does not match the cloud dimension {dim}")
    if exponent is not None:
        return KernelSpec.from_exponent(exponent, dim, kappa=kappa, radius_floor=floor)
    if order_m is None:
        order_m = dim // 2
    return KernelSpec.from_order(order_m, dim, kappa=kappa, radius_floor=floor)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Distances, sweeps and friendly-neighbor rankings for embedding clouds."""


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--header", is_flag=True, help="Skip one CSV header line.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def info(path: str, header: bool, report_path: str | None) -> None:
    """Label, sample count, dimension and spread of a cloud file."""
    started = time.monotonic()
    cloud = read_cloud(path, skip_header=header)
    mean_norm = float(np.linalg.norm(cloud.data.mean(axis=0)))
    sigma_q = compute_stats(cloud).sigma_q if cloud.count >= 2 else None
    report = RunReport(command="info", parameters={"header": header})
    report.add_input(path, cloud)
    report.results = {
        "label": cloud.label,
        "count": cloud.count,
        "dim": cloud.dim,
        "mean_norm": mean_norm,
        "sigma_q": sigma_q,
    }
    click.echo(f"label:     {cloud.label}")
    click.echo(f"count:     {cloud.count}")
    click.echo(f"dim:       {cloud.dim}")
    click.echo(f"mean_norm: {mean_norm:.6g}")
    click.echo(f"sigma_q:   {sigma_q if sigma_q is None else format(sigma_q, '.6g')}")
    _finish(report, started, report_path)


@main.command()
@click.option("--source", "source_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-p", "--exponent", type=int, default=None, help="Kernel exponent; wins over --m.")
@click.option("--m", "order_m", type=int, default=None, help="Kernel order.")
@click.option("--n", "kernel_dim", type=int, default=None, help="Kernel dimension (must match clouds).")
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--floor", type=float, default=1e-12, show_default=True, help="Radius floor.")
@click.option("--start", type=float, default=1.0, show_default=True, help="First multiplier.")
@click.option("--stop", type=float, default=100.0, show_default=True, help="Last multiplier.")
@click.option("--step", type=float, default=0.5, show_default=True, help="Multiplier step.")
@click.option("--test-points", type=int, default=128, show_default=True)
@click.option("--batch-size", type=int, default=100, show_default=True)
@click.option("--max-samples", type=int, default=5000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=None, help="Worker cap (default: CPU count).")
@click.option("--header", is_flag=True, help="Skip one CSV header line in cloud inputs.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="sid_curve.csv",
              show_default=True, help="Curve CSV destination.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def sid(source_path, target_path, exponent, order_m, kernel_dim, kappa, floor, start, stop,
        step, test_points, batch_size, max_samples, seed, threads, header, out_path, report_path):
    """Signed-distance sweep of SOURCE from TARGET; writes the curve CSV."""
    started = time.monotonic()
    source = read_cloud(source_path, skip_header=header)
    target = read_cloud(target_path, skip_header=header)
    kernel = _kernel_for(target.dim, exponent, order_m, kernel_dim, kappa, floor)
    config = SweepConfig(
        multiplier_start=start,
        multiplier_stop=stop,
        multiplier_step=step,
        test_points_per_r=test_points,
        batch_size=batch_size,
        max_samples_per_cloud=max_samples,
        seed=seed,
    )
    workers = threads if threads is not None else (os.cpu_count() or 1)
    curve = sid_sweep(source, target, kernel, config, threads=max(1, workers))
    curve.write_csv(out_path)
    total = csid(curve)
    report = RunReport(command="sid")
    report.add_input(source_path, source)
    report.add_input(target_path, target)
    report.parameters = {
        "exponent_p": kernel.exponent_p,
        "order_m": kernel.order_m,
        "branch": kernel.branch.value,
        "kappa": kernel.kappa,
        "radius_floor": kernel.radius_floor,
        "multiplier_start": config.multiplier_start,
        "multiplier_stop": config.multiplier_stop,
        "multiplier_step": config.multiplier_step,
        "test_points_per_r": config.test_points_per_r,
        "batch_size": config.batch_size,
        "max_samples_per_cloud": config.max_samples_per_cloud,
        "seed": config.seed,
    }
    report.results = {"csid": total.value, "curve_csv": str(out_path),
                      "entries": len(curve.entries)}
    click.echo(f"csid: {total.value!r}")
    click.echo(f"curve: {out_path} ({len(curve.entries)} entries)")
    _finish(report, started, report_path)


def _run_two_cloud(name, op, result_fn, path_a, path_b, seed, header, report_path):
    started = time.monotonic()
    a = read_cloud(path_a, skip_header=header)
    b = read_cloud(path_b, skip_header=header)
    out = op(a, b, seed=seed)
    report = RunReport(command=name, parameters={"seed": seed})
    report.add_input(path_a, a)
    report.add_input(path_b, b)
    report.results = result_fn(out)
    for key, value in report.results.items():
        click.echo(f"{key}: {value!r}")
    _finish(report, started, report_path)


@main.command()
@click.argument("path_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("path_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the subsampling shuffle.")
@click.option("--header", is_flag=True, help="Skip one CSV header line in cloud inputs.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def fid(path_a, path_b, seed, header, report_path):
    """Frechet distance between Gaussians fitted to two clouds."""
    _run_two_cloud(
        "fid",
        fid_op,
        lambda r: {
            "fid": r.value,
            "mean_term": r.mean_term,
            "trace_term": r.trace_term,
            "samples_used": list(r.samples_used),
        },
        path_a, path_b, seed, header, report_path,
    )


@main.command()
@click.argument("path_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("path_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the subsampling shuffle.")
@click.option("--header", is_flag=True, help="Skip one CSV header line in cloud inputs.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def kid(path_a, path_b, seed, header, report_path):
    """Unbiased squared MMD (third-order polynomial kernel) between two clouds."""
    _run_two_cloud(
        "kid",
        kid_op,
        lambda r: {
            "kid": r.value,
            "block_count": r.block_count,
            "samples_used": list(r.samples_used),
        },
        path_a, path_b, seed, header, report_path,
    )


@main.command()
@click.argument("path_p", type=click.Path(exists=True, dir_okay=False))
@click.argument("path_q", type=click.Path(exists=True, dir_okay=False))
@click.option("--header", is_flag=True, help="Skip one CSV header line in cloud inputs.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def sintheta(path_p, path_q, header, report_path):
    """Eigen-subspace perturbation score of two clouds (gaps from the second)."""
    started = time.monotonic()
    p = read_cloud(path_p, skip_header=header)
    q = read_cloud(path_q, skip_header=header)
    result = min_sin_theta(p, q)
    report = RunReport(command="sintheta", parameters={"fixed_r": result.fixed_r})
    report.add_input(path_p, p)
    report.add_input(path_q, q)
    report.results = {
        "min_sin_theta": result.min_value,
        "per_s": [{"s": s, "bound": b if math.isfinite(b) else "inf"} for s, b in result.per_s],
    }
    click.echo(f"min_sin_theta: {result.min_value!r}")
    _finish(report, started, report_path)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--shape", default=None, help="Image shape HxW when the label lacks it.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def sharpness(path, shape, report_path):
    """Edge-map variance of grayscale images stored one-per-row in a cloud file."""
    started = time.monotonic()
    cloud = read_cloud(path)
    if shape:
        try:
            h, w = (int(t) for t in shape.lower().split("x"))
        except ValueError:
            raise FormatError(f"--shape must look like 32x32, got {shape!r}", field="shape")
    else:
        match = _GRAY_SHAPE.search(cloud.label)
        if not match:
            raise FormatError(
                "cloud label does not encode a gray:HxW shape; pass --shape", field="shape"
            )
        h, w = int(match.group(1)), int(match.group(2))
    if h * w != cloud.dim:
        raise ShapeError(f"shape {h}x{w} does not match row length {cloud.dim}")
    images = [row.reshape(h, w) for row in cloud.data]
    value = sharpness_op(images)
    report = RunReport(command="sharpness", parameters={"shape": f"{h}x{w}"})
    report.add_input(path, cloud)
    report.results = {"sharpness": value, "images": len(images)}
    click.echo(f"sharpness: {value!r}")
    _finish(report, started, report_path)


@main.command()
@click.option("--table", "table_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--target", required=True)
@click.option("--metric", default=None, help="Rank by one metric.")
@click.option("--vote", default=None, help="Comma-separated metrics for a Borda vote.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Ranking CSV destination.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def rank(table_path, target, metric, vote, out_path, report_path):
    """Friendly-neighbor ranking for TARGET from a metric-table CSV."""
    started = time.monotonic()
    if (metric is None) == (vote is None):
        raise UnknownNameError("pass exactly one of --metric or --vote")
    table = read_metric_table(table_path)
    if metric is not None:
        result = rank_single(table, target, metric)
    else:
        metrics = [m.strip() for m in vote.split(",") if m.strip()]
        result = rank_vote(table, target, metrics)
    csv_text = ranking_to_csv(result)
    if out_path:
        Path(out_path).write_text(csv_text)
    click.echo(csv_text, nl=False)
    report = RunReport(
        command="rank",
        parameters={"table": str(table_path), "target": target,
                    "metric": metric, "vote": vote},
        results=ranking_to_dict(result),
    )
    _finish(report, started, report_path)


@main.command()
@click.option("--preset", required=True, type=click.Choice(PRESET_NAMES))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=500, show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@handles_errors
def synth(preset, seed, count, out_dir, report_path):
    """Materialize a synthetic preset as a source/target pair of EMB1 files."""
    started = time.monotonic()
    source, target, tag = scenario(preset, seed, count)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    source_path = out / f"{preset}_source.emb"
    target_path = out / f"{preset}_target.emb"
    write_cloud(source, source_path)
    write_cloud(target, target_path)
    report = RunReport(
        command="synth",
        parameters={"preset": preset, "seed": seed, "count": count},
        results={
            "source": str(source_path),
            "target": str(target_path),
            "expectation": tag,
        },
    )
    report.add_input(str(source_path), source)
    report.add_input(str(target_path), target)
    click.echo(f"wrote {source_path}")
    click.echo(f"wrote {target_path}")
    click.echo(f"expectation: {tag}")
    _finish(report, started, report_path)


if __name__ == "__main__":
    main()
