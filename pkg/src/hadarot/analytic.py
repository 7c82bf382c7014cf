"""Closed-form quantities: special functions, the exact one-coordinate
spherical CDF, chi moments, and the deterministic Wasserstein bound
functionals with their constants.

Special functions are implemented here rather than imported, so the whole
analytic layer is self-contained float64 arithmetic:

* ``log_gamma``: Stirling-de Moivre series with Bernoulli correction terms,
  shifted upward for small arguments.
* ``regularized_incomplete_beta``: modified Lentz continued fraction with
  the usual symmetry switch.

Both carry numba scalar cores so the empirical layer can evaluate CDFs on
large sample arrays without Python-loop overhead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import AdmissibilityError, ContractViolationError
from .hadamard import Dimension

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# B_{2n} / (2n (2n-1)) for n = 1..8: the asymptotic series coefficients of
# log Gamma in descending powers x^{-1}, x^{-3}, ...
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_THRESHOLD = 10.0

_BETA_ITMAX = 800
_BETA_EPS = 3.0e-16
_BETA_FPMIN = 1.0e-300


@numba.njit(cache=True)
def _lgamma_core(x: float) -> float:
    # Shift x upward until the asymptotic series is accurate, dividing out
    # the skipped factors: ln G(x) = ln G(x+k) - sum ln(x+i).
    shift = 0.0
    while x < _STIRLING_THRESHOLD:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    term = inv
    for c in _STIRLING_COEFFS:
        series += c * term
        term *= inv2
    return (x - 0.5) * math.log(x) - x + HALF_LOG_TWO_PI + series - shift


@numba.njit(cache=True)
def _betacf(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for I_x(a, b).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_FPMIN:
        d = _BETA_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_ITMAX + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    return math.nan


@numba.njit(cache=True)
def _betainc_core(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = math.exp(
        a * math.log(x)
        + b * math.log1p(-x)
        + _lgamma_core(a + b)
        - _lgamma_core(a)
        - _lgamma_core(b)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


@numba.njit(cache=True)
def _sphere_cdf_core(t: float, d: int) -> float:
    if t <= -1.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    tail = _betainc_core(0.5, (d - 1) / 2.0, t * t)
    if t >= 0.0:
        return 0.5 * (1.0 + tail)
    return 0.5 * (1.0 - tail)


@numba.njit(cache=True)
def sphere_cdf_many(ts, d, out):
    """Vectorized sphere_coordinate_cdf over a float64 array."""
    for i in range(ts.shape[0]):
        out[i] = _sphere_cdf_core(ts[i], d)


@numba.njit(cache=True)
def normal_cdf_many(ts, sd, out):
    """Vectorized CDF of a centered Gaussian with standard deviation sd."""
    inv = 1.0 / (sd * math.sqrt(2.0))
    for i in range(ts.shape[0]):
        out[i] = 0.5 * math.erfc(-ts[i] * inv)


def _as_d(dim: Dimension | int) -> int:
    d = dim.d if isinstance(dim, Dimension) else int(dim)
    return d


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0.

    Stirling series with an upward shift below x=10; absolute error is at
    the float64 rounding level of the result over the tested range.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ContractViolationError(f"log_gamma requires x > 0, got {x!r}")
    return _lgamma_core(x)


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b)."""
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function.

    Continued fraction (modified Lentz) with the symmetry switch at
    x > (a+1)/(a+b+2); absolute error well under 1e-10 on the tested
    parameter ranges.
    """
    a = float(a)
    b = float(b)
    x = float(x)
    if a <= 0.0 or b <= 0.0:
        raise ContractViolationError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ContractViolationError(f"x must lie in [0, 1], got {x}")
    value = _betainc_core(a, b, x)
    if math.isnan(value):
        raise ArithmeticError(
            f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
        )
    return value


def sphere_coordinate_cdf(t, dim: Dimension | int):
    """CDF of one coordinate of a uniform point on the unit sphere in R^d.

    The squared coordinate is Beta(1/2, (d-1)/2) distributed, so
    F(t) = (1 + sign(t) I_{t^2}(1/2, (d-1)/2)) / 2.  Accepts a scalar or a
    float64 array of evaluation points; d may be any integer >= 2.
    """
    d = _as_d(dim)
    if d < 2:
        raise ContractViolationError(f"coordinate CDF needs d >= 2, got {d}")
    if isinstance(t, np.ndarray):
        ts = np.ascontiguousarray(t, dtype=np.float64)
        out = np.empty_like(ts)
        sphere_cdf_many(ts, d, out)
        return out
    return _sphere_cdf_core(float(t), d)


def normal_cdf(t, sd: float = 1.0):
    """CDF of a centered Gaussian with standard deviation ``sd``."""
    if isinstance(t, np.ndarray):
        ts = np.ascontiguousarray(t, dtype=np.float64)
        out = np.empty_like(ts)
        normal_cdf_many(ts, float(sd), out)
        return out
    return 0.5 * math.erfc(-float(t) / (float(sd) * math.sqrt(2.0)))


def sphere_coordinate_abs_mean(dim: Dimension | int) -> float:
    """E|S_1| for a uniform sphere point: Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2))."""
    d = _as_d(dim)
    if d < 2:
        raise ContractViolationError(f"needs d >= 2, got {d}")
    return math.exp(log_gamma(d / 2.0) - log_gamma((d + 1) / 2.0)) / math.sqrt(math.pi)


def m_d(dim: Dimension | int) -> float:
    """The admissibility threshold sqrt(2/pi) * sqrt(d/(d-1))."""
    d = _as_d(dim)
    if d < 2:
        raise ContractViolationError(f"m_d needs d >= 2, got {d}")
    return math.sqrt(2.0 / math.pi) * math.sqrt(d / (d - 1.0))


@dataclass(frozen=True)
class BoundParams:
    """Admissible (d, t) pair for the lower-bound functional: 0 <= t <= 1 - m_d."""

    d: int
    t: float

    def __post_init__(self) -> None:
        d = _as_d(self.d)
        object.__setattr__(self, "d", d)
        t = float(self.t)
        object.__setattr__(self, "t", t)
        limit = 1.0 - m_d(d)
        if not 0.0 <= t <= limit:
            raise AdmissibilityError(
                f"t={t} outside the admissible range [0, {limit:.6f}] at d={d}"
            )


def wasserstein_lower_bound(p: BoundParams) -> float:
    """sqrt(2 (1 - m_d - t)) * (1 - exp(-(d-1) t^2 / 2)).

    The second factor goes through expm1 so small t does not cancel.
    """
    gap = 1.0 - m_d(p.d) - p.t
    return math.sqrt(2.0 * gap) * (-math.expm1(-(p.d - 1) * p.t * p.t / 2.0))


def default_t_grid(dim: Dimension | int, grid_size: int = 2000) -> np.ndarray:
    """Admissible t values: a uniform grid on [0, 1 - m_d] plus the
    concentration-scaled points alpha/sqrt(d-1) for alpha = 1..40."""
    d = _as_d(dim)
    if grid_size < 2:
        raise ContractViolationError(f"grid_size must be >= 2, got {grid_size}")
    limit = 1.0 - m_d(d)
    if limit <= 0.0:
        raise AdmissibilityError(f"no admissible t at d={d}: 1 - m_d = {limit!r}")
    uniform = np.linspace(0.0, limit, grid_size)
    alphas = np.arange(1, 41, dtype=np.float64) / math.sqrt(d - 1.0)
    extra = alphas[alphas <= limit]
    return np.unique(np.concatenate([uniform, extra]))


def lower_bound_curve(dim: Dimension | int, ts: np.ndarray) -> np.ndarray:
    """Vectorized ``wasserstein_lower_bound`` over admissible t values."""
    d = _as_d(dim)
    ts = np.asarray(ts, dtype=np.float64)
    gap = 1.0 - m_d(d) - ts
    if np.any(ts < 0.0) or np.any(gap < -1e-12):
        raise AdmissibilityError("t values must lie in [0, 1 - m_d]")
    np.clip(gap, 0.0, None, out=gap)
    return np.sqrt(2.0 * gap) * (-np.expm1(-(d - 1) * ts * ts / 2.0))


def max_lower_bound_over_t(dim: Dimension | int, grid_size: int = 2000) -> tuple[float, float]:
    """Maximize the lower-bound functional over the default t grid.

    Returns ``(t_star, value)``.
    """
    d = _as_d(dim)
    ts = default_t_grid(d, grid_size)
    values = lower_bound_curve(d, ts)
    i = int(np.argmax(values))
    return float(ts[i]), float(values[i])


def wasserstein_upper_bound_e1(dim: Dimension | int) -> float:
    """sqrt(2 - 2 sqrt(d) E|S_1|), the closed-form upper bound for the
    first-basis-vector coupling; always below sqrt(2 (1 - sqrt(2/pi)))."""
    d = _as_d(dim)
    radicand = 2.0 - 2.0 * math.sqrt(d) * sphere_coordinate_abs_mean(d)
    return math.sqrt(max(radicand, 0.0))


def positive_bound(dim: Dimension | int) -> float:
    """The marginal Kolmogorov bound C_pos * d**(-1/5)."""
    d = _as_d(dim)
    if d < 1:
        raise ContractViolationError(f"positive_bound needs d >= 1, got {d}")
    return CONSTANTS.c_pos * d ** (-0.2)


def chi_mean(d: int) -> float:
    """Mean of a chi random variable with d degrees of freedom."""
    d = _as_d(d)
    if d < 1:
        raise ContractViolationError(f"chi_mean needs d >= 1, got {d}")
    return math.sqrt(2.0) * math.exp(log_gamma((d + 1) / 2.0) - log_gamma(d / 2.0))


def chi_centered_second_moment(d: int) -> float:
    """E[(X - sqrt(d))^2] = 2d - 2 sqrt(d) E[X] for X chi with d dof; in (0, 2]."""
    d = _as_d(d)
    return 2.0 * d - 2.0 * math.sqrt(d) * chi_mean(d)


@dataclass(frozen=True)
class BoundConstants:
    """The constants appearing in the bound statements.

    c_g is the Gaussian-bridge constant 5 * 3**(4/5) / pi**(7/5), c3 the
    sphere-to-Gaussian constant sqrt(2) / pi**(1/4), and c_pos their sum,
    governing the d**(-1/5) marginal Kolmogorov bound.  w1_asymptote is
    sqrt(2 (1 - sqrt(2/pi))), the limiting Wasserstein gap.
    """

    c_g: float = field(default=5.0 * 3.0 ** 0.8 / math.pi ** 1.4)
    c3: float = field(default=math.sqrt(2.0) / math.pi ** 0.25)
    w1_asymptote: float = field(default=math.sqrt(2.0 * (1.0 - math.sqrt(2.0 / math.pi))))
    c_pos: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c_pos", self.c_g + self.c3)


CONSTANTS = BoundConstants()
