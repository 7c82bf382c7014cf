import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from hadarot import analytic
from hadarot.analytic import CONSTANTS, BoundParams
from hadarot.errors import AdmissibilityError
from hadarot.hadamard import Dimension

# High-precision reference values, computed once with mpmath at 40
# significant digits and frozen here as decimal literals.
LOG_GAMMA_HALF = 0.57236494292470009
LOG_GAMMA_100 = 359.1342053695754
BETAINC_2_3_AT_04 = 0.5248  # exact: 6x^2 - 8x^3 + 3x^4 at x = 0.4
ABS_MEAN_2 = 0.63661977236758134  # 2/pi
ABS_MEAN_256 = 0.04991650772160573
ONE_MINUS_M_256 = 0.20055249046950366
ONE_MINUS_M_32768 = 0.20210326416626008
LB_256_011 = 0.33458190950578718
LB_32768_002 = 0.60263512104154065
MAX_LB_256 = (0.1182848355495471, 0.33749055999600563)
MAX_LB_2_18 = (0.007077525870141474, 0.6236786627275339)
UPPER_E1_2 = 0.44650573085436189
UPPER_E1_4096 = 0.63571493407434491
UPPER_E1_32768 = 0.63578196230753397
UPPER_E1_2_20 = 0.6357912376977347
POS_BOUND_16 = 2.0027253250653946
POS_BOUND_1E10 = 0.034869473197261852
CHI_MEAN_1 = 0.79788456080286536  # sqrt(2/pi)
CHI_MEAN_2 = 1.2533141373155003  # sqrt(pi/2)
CHI_MEAN_4 = 1.8799712059732504
CHI_CENTERED_1 = 0.40423087839426929
CHI_CENTERED_2_20 = 0.49999994039528417
C_G = 2.4246953876989883
C_3 = 1.0622519320271969
C_POS = 3.4869473197261852
W1_ASYMPTOTE = 0.63579153690047596


def test_log_gamma_exact_points():
    assert analytic.log_gamma(1.0) == 0.0
    assert analytic.log_gamma(2.0) == pytest.approx(0.0, abs=1e-14)
    assert analytic.log_gamma(0.5) == pytest.approx(LOG_GAMMA_HALF, abs=1e-14)
    assert analytic.log_gamma(10.0) == pytest.approx(math.log(362880.0), abs=1e-12)
    assert analytic.log_gamma(100.0) == pytest.approx(LOG_GAMMA_100, rel=1e-14)


def test_log_gamma_matches_lgamma_on_moderate_arguments():
    for x in np.linspace(0.05, 40.0, 400):
        assert analytic.log_gamma(float(x)) == pytest.approx(math.lgamma(x), abs=1e-12)


def test_log_gamma_matches_lgamma_at_large_arguments():
    for x in np.logspace(1, 6, 200):
        assert analytic.log_gamma(float(x)) == pytest.approx(math.lgamma(x), rel=5e-14)


def test_log_beta_matches_scipy():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = rng.uniform(0.1, 50.0, size=2)
        assert analytic.log_beta(a, b) == pytest.approx(
            float(scipy.special.betaln(a, b)), rel=1e-12, abs=1e-12
        )


def test_incomplete_beta_boundaries_and_polynomial_case():
    assert analytic.regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert analytic.regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    assert analytic.regularized_incomplete_beta(2.0, 3.0, 0.4) == pytest.approx(
        BETAINC_2_3_AT_04, abs=1e-13
    )


def test_incomplete_beta_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = rng.uniform(0.2, 30.0, size=2)
        x = rng.uniform(0.0, 1.0)
        lhs = analytic.regularized_incomplete_beta(a, b, x)
        rhs = 1.0 - analytic.regularized_incomplete_beta(b, a, 1.0 - x)
        assert lhs == pytest.approx(rhs, abs=1e-13)


def test_incomplete_beta_matches_scipy_grid():
    for a in (0.5, 1.0, 2.0, 3.5, 17.0, 64.5):
        for b in (0.5, 1.0, 2.0, 3.5, 17.0, 64.5):
            for x in np.linspace(0.01, 0.99, 17):
                ours = analytic.regularized_incomplete_beta(a, b, float(x))
                ref = float(scipy.special.betainc(a, b, x))
                assert ours == pytest.approx(ref, abs=5e-13)


def test_incomplete_beta_matches_quadrature():
    a, b, x = 0.5, 1.5, 0.25
    integral, err = scipy.integrate.quad(
        lambda u: u ** (a - 1) * (1 - u) ** (b - 1), 0.0, x
    )
    assert err < 1e-8  # the u^(-1/2) endpoint makes quad's estimate conservative
    ref = integral / math.exp(analytic.log_beta(a, b))
    assert analytic.regularized_incomplete_beta(a, b, x) == pytest.approx(ref, abs=1e-9)


def test_sphere_cdf_is_linear_at_d3():
    # at d = 3 the coordinate of a uniform sphere point is uniform on [-1, 1]
    assert analytic.sphere_coordinate_cdf(0.3, 3) == pytest.approx(0.65, abs=1e-14)
    for t in (-0.9, -0.2, 0.0, 0.4, 1.0):
        assert analytic.sphere_coordinate_cdf(t, 3) == pytest.approx((1 + t) / 2, abs=1e-13)


def test_sphere_cdf_is_arcsine_at_d2():
    for t in np.linspace(-0.999, 0.999, 101):
        ref = 0.5 + math.asin(float(t)) / math.pi
        assert analytic.sphere_coordinate_cdf(float(t), 2) == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("d", [2, 3, 4, 8, 64, 1024])
def test_sphere_cdf_shape(d):
    ts = np.linspace(-1.0, 1.0, 10_001)
    f = analytic.sphere_coordinate_cdf(ts, d)
    assert f[0] == 0.0 and f[-1] == 1.0
    assert analytic.sphere_coordinate_cdf(0.0, d) == pytest.approx(0.5, abs=1e-12)
    assert np.all(np.diff(f) >= 0.0)
    flipped = analytic.sphere_coordinate_cdf(-ts, d)
    np.testing.assert_allclose(f + flipped, 1.0, rtol=0, atol=1e-10)
    assert analytic.sphere_coordinate_cdf(-1.5, d) == 0.0
    assert analytic.sphere_coordinate_cdf(1.5, d) == 1.0


@pytest.mark.parametrize("d", [4, 17, 64])
def test_sphere_cdf_matches_quadrature(d):
    norm, _ = scipy.integrate.quad(lambda s: (1 - s * s) ** ((d - 3) / 2), -1.0, 1.0)
    for t in (-0.7, -0.15, 0.2, 0.55):
        part, err = scipy.integrate.quad(lambda s: (1 - s * s) ** ((d - 3) / 2), -1.0, t)
        assert err < 1e-8
        assert analytic.sphere_coordinate_cdf(t, d) == pytest.approx(part / norm, abs=1e-9)


def test_normal_cdf_matches_scipy():
    ts = np.linspace(-8.0, 8.0, 201)
    np.testing.assert_allclose(
        analytic.normal_cdf(ts), scipy.stats.norm.cdf(ts), rtol=0, atol=1e-14
    )
    np.testing.assert_allclose(
        analytic.normal_cdf(ts, sd=2.5), scipy.stats.norm.cdf(ts, scale=2.5), rtol=0, atol=1e-14
    )


def test_abs_mean_values():
    assert analytic.sphere_coordinate_abs_mean(2) == pytest.approx(ABS_MEAN_2, rel=1e-14)
    assert analytic.sphere_coordinate_abs_mean(3) == pytest.approx(0.5, abs=1e-14)
    assert analytic.sphere_coordinate_abs_mean(256) == pytest.approx(ABS_MEAN_256, rel=1e-14)
    # Dimension objects and plain ints are interchangeable
    assert analytic.sphere_coordinate_abs_mean(Dimension(256)) == analytic.sphere_coordinate_abs_mean(256)


def test_abs_mean_obeys_the_gaussian_comparison():
    for m in range(1, 17):
        d = 2**m
        cap = math.sqrt(2.0 / (math.pi * d)) * math.sqrt(d / (d - 1.0))
        assert analytic.sphere_coordinate_abs_mean(d) <= cap + 1e-15
    # the two sides agree to first order as d grows
    d = 2**16
    cap = math.sqrt(2.0 / (math.pi * d)) * math.sqrt(d / (d - 1.0))
    assert analytic.sphere_coordinate_abs_mean(d) / cap == pytest.approx(1.0, abs=1e-4)


def test_m_d_landmarks_and_monotonicity():
    assert 1.0 - analytic.m_d(256) == pytest.approx(ONE_MINUS_M_256, abs=1e-15)
    assert 1.0 - analytic.m_d(32768) == pytest.approx(ONE_MINUS_M_32768, abs=1e-15)
    assert analytic.m_d(2) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-14)
    assert analytic.m_d(2) > 1.0  # no admissible threshold exists at d = 2
    values = [analytic.m_d(2**m) for m in range(1, 21)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-6)


def test_bound_params_admissibility():
    with pytest.raises(AdmissibilityError):
        BoundParams(2, 0.0)
    with pytest.raises(AdmissibilityError):
        BoundParams(4, 0.1)  # above 1 - m_4 ~ 0.0786
    with pytest.raises(AdmissibilityError):
        BoundParams(256, -0.01)
    assert analytic.wasserstein_lower_bound(BoundParams(4, 0.05)) > 0.0


def test_lower_bound_landmarks():
    assert analytic.wasserstein_lower_bound(BoundParams(256, 0.11)) == pytest.approx(
        LB_256_011, abs=1e-12
    )
    assert analytic.wasserstein_lower_bound(BoundParams(32768, 0.02)) == pytest.approx(
        LB_32768_002, abs=1e-12
    )
    assert analytic.wasserstein_lower_bound(BoundParams(256, 0.0)) == 0.0


def test_lower_bound_is_monotone_in_d_at_fixed_t():
    values = [analytic.wasserstein_lower_bound(BoundParams(d, 0.02)) for d in (1024, 4096, 32768)]
    assert values[0] < values[1] < values[2]


def test_lower_bound_curve_matches_scalar_form():
    ts = analytic.default_t_grid(256, 64)
    curve = analytic.lower_bound_curve(256, ts)
    for t, v in zip(ts, curve):
        assert v == pytest.approx(
            analytic.wasserstein_lower_bound(BoundParams(256, float(t))), abs=1e-15
        )
    with pytest.raises(AdmissibilityError):
        analytic.lower_bound_curve(256, np.array([-0.01]))
    with pytest.raises(AdmissibilityError):
        analytic.lower_bound_curve(256, np.array([0.5]))


def test_default_t_grid_contents():
    grid = analytic.default_t_grid(256, 50)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(1.0 - analytic.m_d(256), abs=1e-15)
    assert np.all(np.diff(grid) > 0.0)
    limit = 1.0 - analytic.m_d(256)
    alphas = np.array([a / math.sqrt(255.0) for a in range(1, 41)])
    for t in alphas[alphas <= limit]:
        assert t in grid
    with pytest.raises(AdmissibilityError):
        analytic.default_t_grid(2)


def test_max_lower_bound_frozen_values():
    t, v = analytic.max_lower_bound_over_t(256)
    assert (t, v) == pytest.approx(MAX_LB_256, abs=1e-12)
    t, v = analytic.max_lower_bound_over_t(2**18)
    assert (t, v) == pytest.approx(MAX_LB_2_18, abs=1e-12)


def test_upper_bound_e1_frozen_values_and_limit():
    assert analytic.wasserstein_upper_bound_e1(2) == pytest.approx(UPPER_E1_2, rel=1e-13)
    assert analytic.wasserstein_upper_bound_e1(4096) == pytest.approx(UPPER_E1_4096, rel=1e-13)
    # differences of large log-gamma values carry a few units of float64
    # noise, so the big-d landmarks get a correspondingly wider tolerance
    assert analytic.wasserstein_upper_bound_e1(32768) == pytest.approx(UPPER_E1_32768, rel=1e-9)
    assert analytic.wasserstein_upper_bound_e1(2**20) == pytest.approx(UPPER_E1_2_20, rel=1e-8)
    values = [analytic.wasserstein_upper_bound_e1(2**m) for m in range(1, 21)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(v <= W1_ASYMPTOTE for v in values)
    assert W1_ASYMPTOTE - values[-1] < 3.05e-7


def test_lower_bound_stays_below_upper_bound():
    for m in range(8, 19):
        d = 2**m
        _, lower = analytic.max_lower_bound_over_t(d)
        assert lower <= analytic.wasserstein_upper_bound_e1(d) + 1e-9


def test_positive_bound_values():
    assert analytic.positive_bound(1) == pytest.approx(C_POS, rel=1e-14)
    assert analytic.positive_bound(16) == pytest.approx(POS_BOUND_16, rel=1e-12)
    assert analytic.positive_bound(10**10) == pytest.approx(POS_BOUND_1E10, rel=1e-12)


def test_chi_mean_values_and_centered_moment():
    assert analytic.chi_mean(1) == pytest.approx(CHI_MEAN_1, rel=1e-14)
    assert analytic.chi_mean(2) == pytest.approx(CHI_MEAN_2, rel=1e-14)
    assert analytic.chi_mean(4) == pytest.approx(CHI_MEAN_4, rel=1e-14)
    # independent check of E[(||G|| - sqrt(d))^2] against direct quadrature
    for d in (1, 2, 5):
        normalizer = 2.0 ** (d / 2.0 - 1.0) * math.gamma(d / 2.0)
        integral, _ = scipy.integrate.quad(
            lambda r: (r - math.sqrt(d)) ** 2 * r ** (d - 1) * math.exp(-r * r / 2.0),
            0.0,
            60.0,
        )
        assert analytic.chi_centered_second_moment(d) == pytest.approx(
            integral / normalizer, abs=1e-8
        )


def test_chi_centered_second_moment_range():
    assert analytic.chi_centered_second_moment(1) == pytest.approx(CHI_CENTERED_1, rel=1e-12)
    # at huge d the value comes from a catastrophic cancellation, so only
    # its limit behavior is checked: E[(chi_d - sqrt(d))^2] -> 1/2
    assert analytic.chi_centered_second_moment(2**20) == pytest.approx(
        CHI_CENTERED_2_20, abs=1e-2
    )
    for m in range(0, 21):
        value = analytic.chi_centered_second_moment(2**m)
        assert 0.0 < value <= 2.0


def test_constants_match_their_defining_formulas():
    assert CONSTANTS.c_g == pytest.approx(5.0 * 3.0**0.8 / math.pi**1.4, rel=1e-15)
    assert CONSTANTS.c_g == pytest.approx(C_G, rel=1e-15)
    assert CONSTANTS.c3 == pytest.approx(math.sqrt(2.0) / math.pi**0.25, rel=1e-15)
    assert CONSTANTS.c3 == pytest.approx(C_3, rel=1e-15)
    assert CONSTANTS.c_pos == CONSTANTS.c_g + CONSTANTS.c3
    assert CONSTANTS.c_pos == pytest.approx(C_POS, rel=1e-15)
    assert CONSTANTS.w1_asymptote == pytest.approx(
        math.sqrt(2.0 * (1.0 - math.sqrt(2.0 / math.pi))), rel=1e-15
    )
    assert CONSTANTS.w1_asymptote == pytest.approx(W1_ASYMPTOTE, rel=1e-15)


@given(
    st.floats(min_value=-3.0, max_value=4.0),
    st.floats(min_value=0.05, max_value=0.95),
)
@settings(max_examples=300)
def test_gamma_ratio_interpolation_property(log10_x, s):
    # x^(1-s) <= Gamma(x+1)/Gamma(x+s) <= (x+1)^(1-s), checked in log space
    x = 10.0**log10_x
    mid = analytic.log_gamma(x + 1.0) - analytic.log_gamma(x + s)
    assert (1.0 - s) * math.log(x) <= mid + 1e-12
    assert mid <= (1.0 - s) * math.log(x + 1.0) + 1e-12
