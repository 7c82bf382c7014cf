"""Empirical distribution machinery.

One-sample Kolmogorov-Smirnov statistics against analytic CDFs, streaming
moment estimators for the two-block transform, and the exact-coupling
Wasserstein estimator for the first-basis-vector input (where the distance
to the rotated law equals the mean distance to the nearest scaled-hypercube
vertex, so plain Monte Carlo of a closed form suffices).

Moment accumulation is single-pass Welford with an exact associative merge,
so partial summaries combined in chunk order give bit-identical results no
matter how many workers produced them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import analytic, rotor
from .errors import ContractViolationError
from .hadamard import Dimension
from .rotor import UnitVector
from .streams import Stream


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Sorted samples with right-continuous evaluation F(t) = #{x <= t}/n."""

    sorted_samples: np.ndarray
    n: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalCdf":
        arr = np.asarray(samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ContractViolationError("need a nonempty 1-D sample array")
        if not np.all(np.isfinite(arr)):
            raise ContractViolationError("samples must be finite")
        return cls(np.sort(arr), int(arr.size))

    def evaluate(self, t) -> np.ndarray | float:
        idx = np.searchsorted(self.sorted_samples, t, side="right")
        return idx / self.n


class RunningMoments:
    """Streaming count/mean/M2 accumulator with exact pairwise merge.

    Works for scalars (feed 1-D batches) or per-coordinate vectors (feed
    2-D batches; axis 0 is the sample axis).
    """

    def __init__(self) -> None:
        self.count = 0
        self.mean: np.ndarray | float = 0.0
        self.m2: np.ndarray | float = 0.0

    def add_batch(self, batch: np.ndarray) -> None:
        b = np.asarray(batch, dtype=np.float64)
        n = b.shape[0]
        if n == 0:
            return
        mean_b = b.mean(axis=0)
        m2_b = ((b - mean_b) ** 2).sum(axis=0)
        self._merge_raw(n, mean_b, m2_b)

    def merge(self, other: "RunningMoments") -> None:
        self._merge_raw(other.count, other.mean, other.m2)

    def _merge_raw(self, n_b: int, mean_b, m2_b) -> None:
        if n_b == 0:
            return
        if self.count == 0:
            self.count = n_b
            self.mean = mean_b
            self.m2 = m2_b
            return
        n_a = self.count
        total = n_a + n_b
        delta = mean_b - self.mean
        self.mean = self.mean + delta * (n_b / total)
        self.m2 = self.m2 + m2_b + delta * delta * (n_a * n_b / total)
        self.count = total

    def variance(self):
        if self.count < 2:
            raise ContractViolationError("variance needs at least two samples")
        return self.m2 / (self.count - 1)

    def standard_error(self):
        return np.sqrt(self.variance() / self.count)


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Per-coordinate first and second moments of a transform's output.

    ``second_moments`` holds E[T_k^2] estimates (not central variances);
    ``cross_moments`` holds (k, r, estimate, se) rows for the requested
    off-diagonal pairs.
    """

    mean: np.ndarray
    mean_se: np.ndarray
    second_moments: np.ndarray
    second_moment_se: np.ndarray
    cross_moments: tuple[tuple[int, int, float, float], ...]
    n: int


def ks_statistic_vs_cdf(samples: EmpiricalCdf, cdf: Callable) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic against a CDF.

    ``max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`` over the sorted
    sample; ``cdf`` must accept a float64 array.
    """
    x = samples.sorted_samples
    n = samples.n
    f = np.asarray(cdf(x), dtype=np.float64)
    if f.shape != x.shape:
        raise ContractViolationError("cdf must evaluate pointwise on the sample array")
    steps = np.arange(1, n + 1) / n
    d_plus = float(np.max(steps - f))
    d_minus = float(np.max(f - (steps - 1.0 / n)))
    return max(d_plus, d_minus)


def marginal_ks_experiment(u: UnitVector, k: int, n_samples: int, stream: Stream) -> float:
    """KS distance between sampled coordinate k of the two-block transform
    of u and the exact one-coordinate law of a uniform sphere point."""
    if n_samples < 1:
        raise ContractViolationError("need at least one sample")
    d = u.dim.d
    values = np.empty(n_samples)
    pos = 0
    for chunk in rotor.iter_two_block_coordinate(u, k, n_samples, stream):
        values[pos : pos + chunk.shape[0]] = chunk
        pos += chunk.shape[0]
    ecdf = EmpiricalCdf.from_samples(values)
    return ks_statistic_vs_cdf(ecdf, lambda t: analytic.sphere_coordinate_cdf(t, d))


def e1_wasserstein_mc(dim: Dimension, n_samples: int, stream: Stream) -> tuple[float, float]:
    """Monte Carlo mean (and SE) of the distance from a uniform sphere point
    to the scaled hypercube: sqrt(2 - 2 ||X||_1 / sqrt d).

    By the exact coupling identity this is the 1-Wasserstein distance
    between the uniform law and the two-block transform of e1.
    """
    if n_samples < 2:
        raise ContractViolationError("need at least two samples for a standard error")
    acc = RunningMoments()
    for ratio in rotor.iter_sphere_l1_ratio(dim, n_samples, stream):
        acc.add_batch(np.sqrt(np.clip(2.0 - 2.0 * ratio, 0.0, None)))
    return float(acc.mean), float(acc.standard_error())


def transform_moment_summary(
    u: UnitVector,
    n_samples: int,
    stream: Stream,
    cross_pairs: Sequence[tuple[int, int]] = (),
) -> MomentSummary:
    """Streaming estimates of E[T(u)], E[T(u)_k^2], and selected cross moments."""
    if n_samples < 2:
        raise ContractViolationError("need at least two samples")
    d = u.dim.d
    pairs = [(int(k), int(r)) for k, r in cross_pairs]
    for k, r in pairs:
        if not (0 <= k < d and 0 <= r < d):
            raise ContractViolationError(f"cross pair ({k}, {r}) out of range for d={d}")
    acc_mean = RunningMoments()
    acc_sq = RunningMoments()
    acc_cross = RunningMoments()
    ks = np.array([k for k, _ in pairs], dtype=np.intp)
    rs = np.array([r for _, r in pairs], dtype=np.intp)
    for rows in rotor.iter_two_block_rows(u, n_samples, stream):
        acc_mean.add_batch(rows)
        acc_sq.add_batch(rows * rows)
        if pairs:
            acc_cross.add_batch(rows[:, ks] * rows[:, rs])
    cross: list[tuple[int, int, float, float]] = []
    if pairs:
        c_mean = np.atleast_1d(acc_cross.mean)
        c_se = np.atleast_1d(acc_cross.standard_error())
        cross = [
            (k, r, float(c_mean[i]), float(c_se[i])) for i, (k, r) in enumerate(pairs)
        ]
    return MomentSummary(
        mean=np.asarray(acc_mean.mean),
        mean_se=np.asarray(acc_mean.standard_error()),
        second_moments=np.asarray(acc_sq.mean),
        second_moment_se=np.asarray(acc_sq.standard_error()),
        cross_moments=tuple(cross),
        n=n_samples,
    )


class BFourthMoment(NamedTuple):
    estimate: float
    exact: float
    se: float
    n: int


def b_coefficient_fourth_moment(u: UnitVector, n_samples: int, stream: Stream) -> BFourthMoment:
    """Monte Carlo estimate of E[sum_j b_j^4] for b = (1/sqrt d) H D2 u,
    next to its closed form (3 - 2 sum_l u_l^4) / d."""
    if n_samples < 2:
        raise ContractViolationError("need at least two samples")
    d = u.dim.d
    acc = RunningMoments()
    for chunk in rotor.iter_b_fourth_moments(u, n_samples, stream):
        acc.add_batch(chunk)
    exact = (3.0 - 2.0 * float(np.sum(u.coords**4))) / d
    return BFourthMoment(float(acc.mean), exact, float(acc.standard_error()), n_samples)
