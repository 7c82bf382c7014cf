"""Numerical verifiers for the inequality toolbox behind the rotation analysis.

Each verifier evaluates one inequality on deterministic grids and/or on
randomized instances drawn from an explicit stream.  It reports the number
of instances checked, the number of violations, and the minimum slack
(bound minus observed value, so negative slack means a violation).

Deterministic checks tolerate only floating-point dust (``1e-12``);
Monte Carlo checks use additive allowances (``k * SE`` or ``2 / sqrt(n)``)
that can be widened or tightened with ``allowance_scale``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import metrics, rotor
from .analytic import (
    CONSTANTS,
    chi_centered_second_moment,
    log_gamma,
    normal_cdf,
    sphere_coordinate_abs_mean,
    sphere_coordinate_cdf,
)
from .errors import ConfigError
from .hadamard import Dimension
from .streams import Layer, Stream, mix64

DETERMINISTIC_SLACK = 1e-12

# Fixed tag mixed into every per-verifier stream index, so each verifier
# sees the same substream no matter which subset of the suite runs.
_SUITE_TAG = 0x5EED_CAB1E


@dataclass(frozen=True)
class VerifierReport:
    """Outcome of one verifier: counts, worst margin, and diagnostics."""

    verifier: str
    instances: int
    violations: int
    min_slack: float
    passed: bool
    details: Mapping[str, object] = field(default_factory=dict)

    def to_json_row(self) -> dict:
        return {
            "verifier": self.verifier,
            "instances": int(self.instances),
            "violations": int(self.violations),
            "min_slack": float(self.min_slack),
            "pass": bool(self.passed),
            "details": dict(self.details),
        }


def _grid_hash(*arrays: np.ndarray) -> str:
    digest = hashlib.sha256()
    for arr in arrays:
        digest.update(np.ascontiguousarray(arr).tobytes())
    return digest.hexdigest()[:16]


def _report(name: str, slacks: Sequence[float], details: dict) -> VerifierReport:
    arr = np.asarray(slacks, dtype=np.float64)
    violations = int(np.count_nonzero(arr < 0.0))
    return VerifierReport(
        verifier=name,
        instances=int(arr.size),
        violations=violations,
        min_slack=float(arr.min()),
        passed=violations == 0,
        details=details,
    )


def verify_product_difference(
    stream: Stream,
    trials: int = 10_000,
    max_d: int = 16,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """|prod(a) - prod(b)| <= gamma^(d-1) * sum |a_j - b_j| for |entries| <= gamma."""
    del allowance_scale  # purely deterministic check
    gen = stream.generator(Layer.GAUSS)
    slacks = []
    per_d = max(1, trials // max_d)
    for gamma in (0.5, 1.0, 2.0):
        for d in range(1, max_d + 1):
            a = gen.uniform(-gamma, gamma, size=(per_d, d))
            b = gen.uniform(-gamma, gamma, size=(per_d, d))
            lhs = np.abs(np.prod(a, axis=1) - np.prod(b, axis=1))
            rhs = gamma ** (d - 1) * np.abs(a - b).sum(axis=1)
            slacks.extend(rhs - lhs + DETERMINISTIC_SLACK)
            # a = b forces the left side to vanish.
            lhs_eq = np.abs(np.prod(a, axis=1) - np.prod(a, axis=1))
            slacks.extend(DETERMINISTIC_SLACK - lhs_eq)
    return _report(
        "product_difference",
        slacks,
        {
            "gammas": [0.5, 1.0, 2.0],
            "max_d": max_d,
            "pairs_per_cell": per_d,
        },
    )


def verify_cos_exp(
    n_points: int = 1_000_000,
    lo: float = -20.0,
    hi: float = 20.0,
) -> VerifierReport:
    """|cos(x) - exp(-x^2/2)| <= x^4 / 6 on a dense deterministic grid."""
    x = np.linspace(lo, hi, n_points)
    lhs = np.abs(np.cos(x) - np.exp(-0.5 * x * x))
    slack = x**4 / 6.0 - lhs + DETERMINISTIC_SLACK
    tight = int(np.argmin(slack))
    return _report(
        "cos_exp",
        slack,
        {
            "grid_hash": _grid_hash(x),
            "tightest_x": float(x[tight]),
            "tightest_gap": float(slack[tight] - DETERMINISTIC_SLACK),
        },
    )


def verify_lipschitz_l1(
    stream: Stream,
    trials: int = 10_000,
    d: int = 128,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """x -> ||x||_1 / sqrt(d) is 1-Lipschitz in the Euclidean norm."""
    del allowance_scale
    gen = stream.generator(Layer.GAUSS)
    x = gen.standard_normal((trials, d))
    y = gen.standard_normal((trials, d))
    root_d = math.sqrt(d)
    lhs = np.abs(
        np.abs(x).sum(axis=1) / root_d - np.abs(y).sum(axis=1) / root_d
    )
    rhs = np.linalg.norm(x - y, axis=1)
    slack = rhs - lhs + DETERMINISTIC_SLACK
    return _report("lipschitz_l1", slack, {"d": d, "trials": trials})


def _sphere_rows(gen: np.random.Generator, n: int, d: int) -> np.ndarray:
    rows = gen.standard_normal((n, d))
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if not np.all(norms > 0.0):
        raise ArithmeticError("degenerate Gaussian draw")
    return rows / norms


def verify_distance_to_set_lipschitz(
    stream: Stream,
    trials: int = 10_000,
    d: int = 64,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """Distance to the hypercube vertex set is 1-Lipschitz (checked on the sphere)."""
    del allowance_scale
    gen = stream.generator(Layer.GAUSS)
    x = _sphere_rows(gen, trials, d)
    y = _sphere_rows(gen, trials, d)
    root_d = math.sqrt(d)

    def dist(rows: np.ndarray) -> np.ndarray:
        # Closed form for unit vectors: nearest vertex keeps the signs.
        return np.sqrt(np.clip(2.0 - 2.0 * np.abs(rows).sum(axis=1) / root_d, 0.0, None))

    slack = np.linalg.norm(x - y, axis=1) - np.abs(dist(x) - dist(y)) + DETERMINISTIC_SLACK
    slacks = list(slack)

    # Pairs where one point is itself a vertex: the distance function vanishes
    # there, so the check reduces to dist(y) <= ||x - y||.
    verts = np.sign(y[:100])
    verts[verts == 0.0] = 1.0
    verts /= root_d
    slacks.extend(
        np.linalg.norm(verts - y[:100], axis=1) - dist(y[:100]) + DETERMINISTIC_SLACK
    )

    # Spot-check the vectorized closed form against the scalar helper.
    for row in x[:10]:
        a = rotor.hypercube_distance(rotor.UnitVector(row))
        b = float(dist(row[None, :])[0])
        slacks.append(DETERMINISTIC_SLACK - abs(a - b))
    return _report(
        "distance_to_set_lipschitz",
        slacks,
        {"d": d, "trials": trials, "vertex_pairs": 100},
    )


def verify_spherical_concentration(
    stream: Stream,
    d: int = 1024,
    t_grid: np.ndarray | None = None,
    n_samples: int = 1_000_000,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """P(h(X) - E h(X) > t) <= exp(-(d-1) t^2 / 2) for h(x) = ||x||_1 / sqrt(d)."""
    dim = Dimension(d)
    if t_grid is None:
        t_grid = np.array([0.01, 0.02, 0.05, 0.10, 0.15])
    t_grid = np.asarray(t_grid, dtype=np.float64)
    mean_exact = math.sqrt(d) * sphere_coordinate_abs_mean(d)
    counts = np.zeros(t_grid.size, dtype=np.int64)
    total = 0
    for chunk in rotor.iter_sphere_l1_ratio(dim, n_samples, stream):
        total += chunk.size
        excess = chunk - mean_exact
        for i, t in enumerate(t_grid):
            counts[i] += int(np.count_nonzero(excess > t))
    p_hat = counts / total
    bound = np.exp(-(d - 1) * t_grid**2 / 2.0)
    se = np.sqrt(p_hat * (1.0 - p_hat) / total)
    slack = bound + 3.0 * se * allowance_scale - p_hat
    table = [
        {"t": float(t), "empirical": float(p), "bound": float(b)}
        for t, p, b in zip(t_grid, p_hat, bound)
    ]
    return _report(
        "spherical_concentration",
        slack,
        {
            "d": d,
            "n_samples": total,
            "mean_exact": mean_exact,
            "grid_hash": _grid_hash(t_grid),
            "table": table,
        },
    )


def _collect(chunks, n: int) -> np.ndarray:
    out = np.empty(n, dtype=np.float64)
    pos = 0
    for chunk in chunks:
        out[pos : pos + chunk.size] = chunk
        pos += chunk.size
    if pos != n:
        raise AssertionError("stream yielded a wrong sample count")
    return out


def verify_sphere_gauss_ks(
    stream: Stream,
    dims: Sequence[int] = (4, 64, 1024),
    n_samples: int = 100_000,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """KS distance between a sphere coordinate and N(0, 1/d) is <= C3 * d^(-1/4).

    Each dimension is checked twice: a Monte Carlo estimate against the
    Gaussian CDF (with a 2/sqrt(n) allowance) and a fully deterministic
    sup-difference of the two CDFs on a dense grid (no allowance).
    """
    slacks = []
    per_d = []
    for d in dims:
        dim = Dimension(d)
        bound = CONSTANTS.c3 * d**-0.25
        coords = _collect(
            rotor.iter_sphere_coordinate(dim, n_samples, stream.child(d)), n_samples
        )
        ecdf = metrics.EmpiricalCdf.from_samples(coords)
        ks_mc = metrics.ks_statistic_vs_cdf(ecdf, lambda t: normal_cdf(t, sd=d**-0.5))
        slacks.append(bound + (2.0 / math.sqrt(n_samples)) * allowance_scale - ks_mc)

        grid = np.unique(
            np.concatenate(
                [np.linspace(-1.0, 1.0, 200_001), np.linspace(-40.0, 40.0, 8_001) / math.sqrt(d)]
            )
        )
        gap = np.abs(sphere_coordinate_cdf(grid, d) - normal_cdf(grid, sd=d**-0.5))
        arg = int(np.argmax(gap))
        sup = float(gap[arg])
        slacks.append(bound - sup)
        per_d.append(
            {
                "d": d,
                "ks_monte_carlo": float(ks_mc),
                "sup_deterministic": sup,
                "sup_argmax_t": float(grid[arg]),
                "bound": float(bound),
                "grid_hash": _grid_hash(grid),
            }
        )
    return _report(
        "sphere_gauss_ks",
        slacks,
        {"n_samples": n_samples, "per_dimension": per_d},
    )


def verify_gautschi_and_chi(
    n_x: int = 400,
    max_log2_d: int = 20,
) -> VerifierReport:
    """Gamma-ratio bounds x^(1-s) < G(x+1)/G(x+s) < (x+1)^(1-s); chi moment <= 2."""
    x = np.logspace(-3.0, 4.0, n_x)
    s_values = np.arange(1, 10) / 10.0
    slacks = []
    tightest = None
    for s in s_values:
        ratio = np.array([math.exp(log_gamma(xi + 1.0) - log_gamma(xi + s)) for xi in x])
        lower = x ** (1.0 - s)
        upper = (x + 1.0) ** (1.0 - s)
        lo_slack = ratio - lower
        hi_slack = upper - ratio
        slacks.extend(lo_slack)
        slacks.extend(hi_slack)
        worst = min(lo_slack.min(), hi_slack.min())
        if tightest is None or worst < tightest[0]:
            tightest = (float(worst), float(s))
    chi_values = {}
    for m in range(max_log2_d + 1):
        d = 2**m
        v = chi_centered_second_moment(d)
        slacks.append(v)  # must be positive
        slacks.append(2.0 - v + DETERMINISTIC_SLACK)  # and at most 2
        chi_values[d] = v
    return _report(
        "gautschi_and_chi",
        slacks,
        {
            "grid_hash": _grid_hash(x, s_values),
            "tightest_gamma_slack": tightest[0],
            "tightest_s": tightest[1],
            "chi_centered_at_1": chi_values[1],
            "chi_centered_at_largest": chi_values[2**max_log2_d],
        },
    )


def _canonical_inputs(dim: Dimension, gen: np.random.Generator):
    return (
        ("e1", rotor.UnitVector.basis(dim)),
        ("diagonal", rotor.UnitVector.diagonal(dim)),
        ("random", rotor.sample_uniform_sphere(dim, gen)),
    )


def verify_gauss_bridge_ks(
    stream: Stream,
    dims: Sequence[int] = (16, 1024),
    n_samples: int = 100_000,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """KS of [T(u)]_0 against N(0, 1/d) is <= C_G * d^(-1/5) for canonical inputs."""
    slacks = []
    rows = []
    jobs = [(d, n_samples) for d in dims]
    jobs.append((2, 1_000))  # degenerate small-d smoke run
    for d, n in jobs:
        dim = Dimension(d)
        bound = CONSTANTS.c_g * d**-0.2
        gen = stream.child(d, 0xF).generator(Layer.GAUSS)
        for name, u in _canonical_inputs(dim, gen):
            coords = _collect(
                rotor.iter_two_block_coordinate(u, 0, n, stream.child(d, hash_name(name))),
                n,
            )
            ecdf = metrics.EmpiricalCdf.from_samples(coords)
            ks = metrics.ks_statistic_vs_cdf(ecdf, lambda t: normal_cdf(t, sd=d**-0.5))
            slacks.append(bound + (2.0 / math.sqrt(n)) * allowance_scale - ks)
            rows.append({"d": d, "u": name, "ks": float(ks), "bound": float(bound)})
    return _report(
        "gauss_bridge_ks",
        slacks,
        {"n_samples": n_samples, "per_case": rows},
    )


def hash_name(name: str) -> int:
    """Stable 64-bit tag for a label, for stream derivation."""
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")


def verify_transform_moments(
    stream: Stream,
    d: int = 64,
    n_samples: int = 200_000,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """Mean/covariance of T(u): zero mean, variance 1/d, uncorrelated coordinates."""
    dim = Dimension(d)
    gen = stream.child(0xA0).generator(Layer.GAUSS)
    pair_gen = stream.child(0xA1).generator(Layer.GAUSS)
    ks = pair_gen.integers(0, d, size=10)
    rs = (ks + 1 + pair_gen.integers(0, d - 1, size=10)) % d
    cross_pairs = tuple((int(k), int(r)) for k, r in zip(ks, rs))
    slacks = []
    rows = []
    for name, u in _canonical_inputs(dim, gen):
        summary = metrics.transform_moment_summary(
            u, n_samples, stream.child(hash_name(name)), cross_pairs=cross_pairs
        )
        mean_allow = 4.0 / math.sqrt(n_samples)
        slacks.extend(mean_allow - np.abs(summary.mean))
        second_dev = np.abs(summary.second_moments - 1.0 / d)
        slacks.extend(5.0 * summary.second_moment_se * allowance_scale - second_dev)
        worst_cross = 0.0
        for _, _, value, se in summary.cross_moments:
            slacks.append(5.0 * se * allowance_scale - abs(value))
            worst_cross = max(worst_cross, abs(value) / se if se > 0 else 0.0)
        rows.append(
            {
                "u": name,
                "max_abs_mean": float(np.abs(summary.mean).max()),
                "max_second_dev": float(second_dev.max()),
                "worst_cross_z": worst_cross,
            }
        )
    return _report(
        "transform_moments",
        slacks,
        {"d": d, "n_samples": n_samples, "cross_pairs": [list(p) for p in cross_pairs], "per_input": rows},
    )


def verify_b_fourth_moment(
    stream: Stream,
    d: int = 32,
    n_samples: int = 100_000,
    allowance_scale: float = 1.0,
) -> VerifierReport:
    """E sum_j b_j^4 = (3 - 2 sum_j u_j^4) / d, which never exceeds 3/d."""
    dim = Dimension(d)
    gen = stream.child(0xB0).generator(Layer.GAUSS)
    slacks = []
    rows = []
    for name, u in _canonical_inputs(dim, gen):
        res = metrics.b_coefficient_fourth_moment(u, n_samples, stream.child(hash_name(name)))
        slacks.append(3.0 / d - res.exact + 1e-15)  # deterministic ceiling
        slacks.append(res.exact - 1.0 / d + 1e-15)  # and floor
        dev = abs(res.estimate - res.exact)
        allow = 5.0 * res.se * allowance_scale if res.se > 0 else 1e-12
        slacks.append(allow - dev)
        rows.append(
            {
                "u": name,
                "estimate": float(res.estimate),
                "exact": float(res.exact),
                "se": float(res.se),
            }
        )
    return _report(
        "b_fourth_moment",
        slacks,
        {"d": d, "n_samples": n_samples, "per_input": rows},
    )


# Registry order is part of the report contract: fixed indices feed the
# per-verifier stream derivation, so running a subset cannot change numbers.
_REGISTRY: tuple[tuple[str, Callable[..., VerifierReport], bool], ...] = (
    ("product_difference", verify_product_difference, True),
    ("cos_exp", verify_cos_exp, False),
    ("lipschitz_l1", verify_lipschitz_l1, True),
    ("distance_to_set_lipschitz", verify_distance_to_set_lipschitz, True),
    ("spherical_concentration", verify_spherical_concentration, True),
    ("sphere_gauss_ks", verify_sphere_gauss_ks, True),
    ("gautschi_and_chi", verify_gautschi_and_chi, False),
    ("gauss_bridge_ks", verify_gauss_bridge_ks, True),
    ("transform_moments", verify_transform_moments, True),
    ("b_fourth_moment", verify_b_fourth_moment, True),
)

VERIFIER_NAMES = tuple(name for name, _, _ in _REGISTRY)


def run_all(
    master_seed: int = 0,
    allowance_scale: float = 1.0,
    only: str | None = None,
) -> list[VerifierReport]:
    """Run the verifier suite (or one verifier) and return the reports."""
    if not math.isfinite(allowance_scale) or allowance_scale <= 0.0:
        raise ConfigError(f"allowance_scale must be positive, got {allowance_scale!r}")
    wanted = None if only is None else only.replace("-", "_")
    if wanted is not None and wanted not in VERIFIER_NAMES:
        raise ConfigError(
            f"unknown verifier {only!r}; choose from {', '.join(VERIFIER_NAMES)}"
        )
    reports = []
    for index, (name, func, takes_stream) in enumerate(_REGISTRY):
        if wanted is not None and name != wanted:
            continue
        if takes_stream:
            stream = Stream(master_seed, mix64(_SUITE_TAG, index))
            reports.append(func(stream, allowance_scale=allowance_scale))
        else:
            reports.append(func())
    return reports


def suite_passed(reports: Sequence[VerifierReport]) -> bool:
    return all(r.passed for r in reports)
