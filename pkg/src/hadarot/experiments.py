"""Deterministic experiment pipelines behind the command-line front end.

Every pipeline is a pure function of its configuration: work is split into
per-(dimension, input) units, each unit owns a dedicated RNG stream derived
from the master seed, and partial results are merged in submission order.
Running with one worker or many therefore produces byte-identical reports.

Report files carry a small comment header (version, master seed, config
hash) so any output can be traced back to the exact configuration that
produced it.  Wall-clock timestamps are deliberately omitted: two runs of
the same configuration must agree byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import analytic, metrics, rotor
from ._version import VERSION
from .errors import ConfigError, ExperimentAssertionError
from .hadamard import Dimension, fwht_in_place, hadamard_matrix
from .streams import Layer, Stream, mix64

MARGINAL_DIMS = (16, 32, 64, 128, 256, 512, 1024)
LOWER_BOUND_DIMS = tuple(2**m for m in range(3, 19))
E1_DIMS = (4096, 32768)
BENCH_DIMS = tuple(2**m for m in range(10, 21))

# Landmark assertions carried by the lower-bound table: (d, t, value, tol).
LOWER_BOUND_LANDMARKS = (
    (256, 0.11, 0.3346, 5e-4),
    (32768, 0.02, 0.6026, 5e-4),
)
MAX_LANDMARK_D = 2**18
MAX_LANDMARK_VALUE = 0.6358
MAX_LANDMARK_TOL = 0.02


def adaptive_samples(d: int) -> int:
    """Default per-input Monte Carlo schedule: min(1e5, max(1e4, 50 d))."""
    return min(100_000, max(10_000, 50 * d))


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated knobs shared by the experiment commands.

    ``n_samples=None`` selects the adaptive schedule.  ``out=None`` writes
    the report to stdout.  ``workers`` only changes wall time, never bytes.
    """

    dims: tuple[int, ...]
    n_inputs: int = 200
    n_samples: int | None = None
    master_seed: int = 0
    t_grid_size: int = 2000
    out: str | None = None
    fmt: str = "csv"
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.dims:
            raise ConfigError("at least one dimension is required")
        for d in self.dims:
            if d < 1 or d & (d - 1):
                raise ConfigError(f"dimensions must be powers of two, got {d}")
        if self.n_inputs < 1:
            raise ConfigError(f"n_inputs must be >= 1, got {self.n_inputs}")
        if self.n_samples is not None and self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")
        if self.t_grid_size < 2:
            raise ConfigError(f"t_grid_size must be >= 2, got {self.t_grid_size}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def samples_for(self, d: int) -> int:
        return self.n_samples if self.n_samples is not None else adaptive_samples(d)


def config_hash(command: str, config: ExperimentConfig) -> str:
    """Digest of everything that can change report content.

    ``out`` and ``workers`` are excluded on purpose: the destination path
    and the degree of parallelism must not influence bytes.
    """
    payload = {
        "command": command,
        "dims": list(config.dims),
        "n_inputs": config.n_inputs,
        "n_samples": config.n_samples,
        "master_seed": config.master_seed,
        "t_grid_size": config.t_grid_size,
        "format": config.fmt,
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _run_units(fn: Callable, units: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(unit) for unit in units]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, units))


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_report(
    header: Sequence[str],
    rows: Sequence[dict],
    metadata: dict,
    fmt: str,
) -> str:
    """Serialize rows either as commented CSV or as a JSON document."""
    if fmt == "json":
        doc = {"metadata": metadata, "rows": list(rows)}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"# {key}: {_fmt(metadata[key])}" for key in sorted(metadata)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(row[col]) for col in header))
    return "\n".join(lines) + "\n"


def write_report(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


def _base_metadata(command: str, config: ExperimentConfig) -> dict:
    return {
        "version": VERSION,
        "command": command,
        "master_seed": config.master_seed,
        "config_hash": config_hash(command, config),
    }


# ---------------------------------------------------------------------------
# marginal KS trend


MARGINAL_HEADER = (
    "d",
    "ks_mean",
    "ks_se",
    "ci_low",
    "ci_high",
    "n_inputs",
    "n_samples",
    "c_pos_bound",
    "theory_curve",
)


def _marginal_unit(config: ExperimentConfig, d: int, index: int) -> float:
    stream = Stream(config.master_seed, mix64(d, index))
    u = rotor.sample_uniform_sphere(Dimension(d), stream.generator(Layer.GAUSS))
    return metrics.marginal_ks_experiment(u, 0, config.samples_for(d), stream)


def run_marginal(config: ExperimentConfig) -> str:
    """Mean one-coordinate KS distance versus dimension, over random inputs.

    Each (dimension, input) pair is one work unit with its own stream; the
    theory curve c * d^(-1/5) is pinned to the smallest dimension's mean.
    """
    units = [(d, i) for d in config.dims for i in range(config.n_inputs)]
    t0 = time.perf_counter()
    values = _run_units(lambda unit: _marginal_unit(config, *unit), units, config.workers)
    _progress(
        f"marginal: {len(units)} units across dims {list(config.dims)} "
        f"in {time.perf_counter() - t0:.1f}s"
    )
    rows = []
    means = {}
    for pos, d in enumerate(config.dims):
        vals = np.array(values[pos * config.n_inputs : (pos + 1) * config.n_inputs])
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
        means[d] = mean
        rows.append(
            {
                "d": d,
                "ks_mean": mean,
                "ks_se": se,
                "ci_low": mean - 1.96 * se,
                "ci_high": mean + 1.96 * se,
                "n_inputs": config.n_inputs,
                "n_samples": config.samples_for(d),
                "c_pos_bound": analytic.positive_bound(d),
            }
        )
    d_min = min(config.dims)
    c_scale = means[d_min] * d_min**0.2
    for row in rows:
        row["theory_curve"] = c_scale * row["d"] ** -0.2
    metadata = _base_metadata("experiment-marginal", config)
    metadata["c_scale"] = c_scale
    if config.n_inputs == 1:
        metadata["se_degenerate"] = "true"
    return render_report(MARGINAL_HEADER, rows, metadata, config.fmt)


# ---------------------------------------------------------------------------
# explicit lower-bound table


LOWER_BOUND_HEADER = ("d", "t", "bound")


def run_lower_bound(config: ExperimentConfig) -> tuple[str, list[str]]:
    """Tabulate the explicit transport lower bound over a (d, t) grid.

    Returns the rendered report and a list of failed landmark assertions
    (empty on success); the caller decides when to raise so the report can
    be written first.
    """
    rows = []
    max_rows = {}
    for d in config.dims:
        if d < 4:
            raise ConfigError(f"the lower-bound table needs d >= 4, got {d}")
        ts = analytic.default_t_grid(d, config.t_grid_size)
        for t_val, tol_target in ((0.11, 256), (0.02, 32768)):
            if d == tol_target and not np.any(np.isclose(ts, t_val, atol=1e-12)):
                ts = np.unique(np.append(ts, t_val))
        values = analytic.lower_bound_curve(d, ts)
        arg = int(np.argmax(values))
        max_rows[d] = (float(ts[arg]), float(values[arg]))
        rows.extend(
            {"d": d, "t": float(t), "bound": float(v)} for t, v in zip(ts, values)
        )
    failures = []
    for d, t_val, target, tol in LOWER_BOUND_LANDMARKS:
        if d not in config.dims:
            continue
        got = analytic.wasserstein_lower_bound(analytic.BoundParams(d, t_val))
        if abs(got - target) > tol:
            failures.append(
                f"lower bound at d={d}, t={t_val}: {got!r} is not within {tol} of {target}"
            )
    if MAX_LANDMARK_D in config.dims:
        got = max_rows[MAX_LANDMARK_D][1]
        if abs(got - MAX_LANDMARK_VALUE) > MAX_LANDMARK_TOL:
            failures.append(
                f"max over t at d={MAX_LANDMARK_D}: {got!r} is not within "
                f"{MAX_LANDMARK_TOL} of {MAX_LANDMARK_VALUE}"
            )
    metadata = _base_metadata("experiment-lower-bound", config)
    for d in config.dims:
        t_star, value = max_rows[d]
        metadata[f"max_over_t_d{d}"] = f"t={t_star!r} bound={value!r}"
    return render_report(LOWER_BOUND_HEADER, rows, metadata, config.fmt), failures


# ---------------------------------------------------------------------------
# e1 Wasserstein sandwich


E1_HEADER = ("d", "estimate", "se", "lower_max_t", "upper_closed_form")
_E1_TAG = 0xE1
SANDWICH_MIN_D = 8
SANDWICH_SE_FACTOR = 4.0


def _e1_unit(config: ExperimentConfig, d: int) -> dict:
    n = config.n_samples if config.n_samples is not None else 100_000
    stream = Stream(config.master_seed, mix64(d, _E1_TAG))
    estimate, se = metrics.e1_wasserstein_mc(Dimension(d), n, stream)
    if d >= 4:
        _, lower = analytic.max_lower_bound_over_t(d, config.t_grid_size)
    else:
        lower = 0.0  # the admissible t-interval is empty below d=4
    return {
        "d": d,
        "estimate": estimate,
        "se": se,
        "lower_max_t": lower,
        "upper_closed_form": analytic.wasserstein_upper_bound_e1(d),
    }


def run_e1(config: ExperimentConfig) -> tuple[str, list[str]]:
    """Monte Carlo distance to the hypercube versus its two analytic bounds.

    The sandwich assertion applies from d=8 upward; smaller dimensions are
    reported without it.
    """
    if min(config.dims) < 2:
        raise ConfigError("the e1 experiment needs d >= 2")
    t0 = time.perf_counter()
    rows = _run_units(lambda d: _e1_unit(config, d), config.dims, config.workers)
    _progress(f"e1: dims {list(config.dims)} in {time.perf_counter() - t0:.1f}s")
    failures = []
    for row in rows:
        if row["d"] < SANDWICH_MIN_D:
            continue
        allow = SANDWICH_SE_FACTOR * row["se"]
        if not (row["lower_max_t"] - allow <= row["estimate"] <= row["upper_closed_form"] + allow):
            failures.append(
                f"sandwich failed at d={row['d']}: lower={row['lower_max_t']!r} "
                f"estimate={row['estimate']!r} upper={row['upper_closed_form']!r} "
                f"allowance={allow!r}"
            )
    metadata = _base_metadata("experiment-e1", config)
    metadata["n_samples"] = config.n_samples if config.n_samples is not None else 100_000
    return render_report(E1_HEADER, rows, metadata, config.fmt), failures


# ---------------------------------------------------------------------------
# FWHT benchmark


BENCH_HEADER = ("d", "median_seconds", "reps")
NAIVE_BENCH_D = 4096
MIN_SPEEDUP = 10.0
EXPONENT_RANGE = (0.9, 1.4)


def _median_transform_time(d: int, reps: int) -> float:
    dim = Dimension(d)
    gen = np.random.default_rng(2024)
    base = gen.standard_normal(d)
    buf = np.empty(d)
    for _ in range(2):  # warm the JIT and the cache
        np.copyto(buf, base)
        fwht_in_place(buf, dim)
    times = []
    for _ in range(reps):
        np.copyto(buf, base)
        start = time.perf_counter()
        fwht_in_place(buf, dim)
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def run_bench(dims: Sequence[int], reps: int, master_seed: int = 0) -> tuple[str, list[str]]:
    """Median FWHT wall time per dimension, with scaling and speedup checks.

    Unlike the experiment commands this report contains measured times and
    is not expected to be byte-stable across runs.
    """
    if reps < 1:
        raise ConfigError(f"reps must be >= 1, got {reps}")
    if not dims:
        raise ConfigError("at least one dimension is required")
    for d in dims:
        if d < 2 or d & (d - 1):
            raise ConfigError(f"dimensions must be powers of two >= 2, got {d}")
    rows = []
    for d in dims:
        med = _median_transform_time(d, reps)
        rows.append({"d": d, "median_seconds": med, "reps": reps})
        _progress(f"bench: d={d} median {med * 1e6:.1f} us")
    failures = []
    metadata = {"version": VERSION, "command": "bench-fwht", "master_seed": master_seed}
    if len(dims) >= 3:
        logs_d = np.log([row["d"] for row in rows])
        logs_t = np.log([row["median_seconds"] for row in rows])
        exponent = float(np.polyfit(logs_d, logs_t, 1)[0])
        metadata["scaling_exponent"] = exponent
        lo, hi = EXPONENT_RANGE
        if not lo <= exponent <= hi:
            failures.append(
                f"scaling exponent {exponent!r} outside [{lo}, {hi}]"
            )
    if NAIVE_BENCH_D in dims:
        dim = Dimension(NAIVE_BENCH_D)
        matrix = hadamard_matrix(dim).astype(np.float64)
        x = np.random.default_rng(2024).standard_normal(NAIVE_BENCH_D)
        naive_times = []
        for _ in range(3):
            start = time.perf_counter()
            matrix @ x
            naive_times.append(time.perf_counter() - start)
        naive = float(np.median(naive_times))
        fast = next(r["median_seconds"] for r in rows if r["d"] == NAIVE_BENCH_D)
        speedup = naive / fast
        metadata["naive_seconds_4096"] = naive
        metadata["speedup_4096"] = speedup
        if speedup < MIN_SPEEDUP:
            failures.append(
                f"fwht speedup over naive multiply at d={NAIVE_BENCH_D} is "
                f"{speedup!r}, below {MIN_SPEEDUP}"
            )
    return render_report(BENCH_HEADER, rows, metadata, "csv"), failures


def raise_failures(failures: Iterable[str]) -> None:
    failures = list(failures)
    if failures:
        raise ExperimentAssertionError("; ".join(failures))
