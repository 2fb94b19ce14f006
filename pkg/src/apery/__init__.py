"""Exact Apery numbers and polynomials, their saddle-point asymptotics,
and the limit distribution of their zeros."""

from .asymptotics import (
    BranchCutDomainError,
    cohen_approx,
    leading_term,
    oscillatory_approx,
    phase_shift,
    predicted_zero,
    theta_from_x,
    x_from_theta,
)
from .exact import (
    ConsistencyError,
    PrecisionExhaustedError,
    apery_number_sum,
    apery_poly,
    apery_sequence_rec,
    apery_sequence_sum,
    eval_certified,
    eval_exact,
    transformed_poly,
)
from .measures import (
    equilibrium_residual,
    mu_cdf,
    mu_density,
    nu_cdf,
    nu_density,
    potential_mu,
    potential_nu,
    weight_w,
)
from .saddle import (
    apery_saddle_problem,
    direct_integral,
    negative_axis_estimate,
    saddle_estimate,
    verify_modulus_max,
)
from .zeros import count_zeros, isolate_zeros, ks_distance

__version__ = "0.1.0"

__all__ = [
    "BranchCutDomainError",
    "ConsistencyError",
    "PrecisionExhaustedError",
    "apery_number_sum",
    "apery_poly",
    "apery_saddle_problem",
    "apery_sequence_rec",
    "apery_sequence_sum",
    "cohen_approx",
    "count_zeros",
    "direct_integral",
    "equilibrium_residual",
    "eval_certified",
    "eval_exact",
    "isolate_zeros",
    "ks_distance",
    "leading_term",
    "mu_cdf",
    "mu_density",
    "negative_axis_estimate",
    "nu_cdf",
    "nu_density",
    "oscillatory_approx",
    "phase_shift",
    "potential_mu",
    "potential_nu",
    "predicted_zero",
    "saddle_estimate",
    "theta_from_x",
    "transformed_poly",
    "verify_modulus_max",
    "weight_w",
    "x_from_theta",
    "__version__",
]
