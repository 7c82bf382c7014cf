"""Structured random rotations built from two sign-randomized Hadamard blocks.

The package provides the fast Walsh-Hadamard kernel, the two-block rotation
and its samplers, closed-form transport bounds with the special functions
they need, streaming Monte Carlo metrics, an inequality verifier suite, and
a deterministic experiment CLI.
"""

from . import experiments, lemma_suite
from ._version import VERSION as __version__
from .analytic import (
    CONSTANTS,
    BoundConstants,
    BoundParams,
    chi_centered_second_moment,
    chi_mean,
    default_t_grid,
    log_gamma,
    lower_bound_curve,
    m_d,
    max_lower_bound_over_t,
    normal_cdf,
    positive_bound,
    regularized_incomplete_beta,
    sphere_coordinate_abs_mean,
    sphere_coordinate_cdf,
    wasserstein_lower_bound,
    wasserstein_upper_bound_e1,
)
from .errors import (
    AdmissibilityError,
    ConfigError,
    ContractViolationError,
    ExperimentAssertionError,
    OracleTooLargeError,
)
from .hadamard import (
    Dimension,
    SignVector,
    apply_sign_diagonal,
    fwht_in_place,
    hadamard_matrix,
    naive_hadamard_multiply,
)
from .metrics import (
    EmpiricalCdf,
    MomentSummary,
    RunningMoments,
    b_coefficient_fourth_moment,
    e1_wasserstein_mc,
    ks_statistic_vs_cdf,
    marginal_ks_experiment,
    transform_moment_summary,
)
from .rotor import (
    HypercubeVertex,
    RotationSeed,
    UnitVector,
    hypercube_distance,
    nearest_hypercube_vertex,
    one_block_transform,
    sample_hypercube,
    sample_uniform_sphere,
    two_block_transform,
)
from .streams import Layer, Stream, mix64, substream

__all__ = [
    "__version__",
    "experiments",
    "lemma_suite",
    "CONSTANTS",
    "BoundConstants",
    "BoundParams",
    "chi_centered_second_moment",
    "chi_mean",
    "default_t_grid",
    "log_gamma",
    "lower_bound_curve",
    "m_d",
    "max_lower_bound_over_t",
    "normal_cdf",
    "positive_bound",
    "regularized_incomplete_beta",
    "sphere_coordinate_abs_mean",
    "sphere_coordinate_cdf",
    "wasserstein_lower_bound",
    "wasserstein_upper_bound_e1",
    "AdmissibilityError",
    "ConfigError",
    "ContractViolationError",
    "ExperimentAssertionError",
    "OracleTooLargeError",
    "Dimension",
    "SignVector",
    "apply_sign_diagonal",
    "fwht_in_place",
    "hadamard_matrix",
    "naive_hadamard_multiply",
    "EmpiricalCdf",
    "MomentSummary",
    "RunningMoments",
    "b_coefficient_fourth_moment",
    "e1_wasserstein_mc",
    "ks_statistic_vs_cdf",
    "marginal_ks_experiment",
    "transform_moment_summary",
    "HypercubeVertex",
    "RotationSeed",
    "UnitVector",
    "hypercube_distance",
    "nearest_hypercube_vertex",
    "one_block_transform",
    "sample_hypercube",
    "sample_uniform_sphere",
    "two_block_transform",
    "Layer",
    "Stream",
    "mix64",
    "substream",
]
