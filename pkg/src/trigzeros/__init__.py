"""Expected real zeros of random trigonometric and cosine polynomials.

Analytic (Kac-Rice quadrature, closed forms, asymptotic constants) and
empirical (Monte Carlo zero counting) machinery for Gaussian coefficient
models with independent or ell-periodic coefficients.
"""

__version__ = "0.1.0"

from .models import (
    CoefficientModel,
    PeriodDecomposition,
    PolySample,
    decompose_degree,
    mix64,
    sample_coefficients,
    splitmix64,
    validate_model,
)
from .trigpoly import (
    AlgebraicFactorization,
    ReducedSample,
    dirichlet_ratio,
    dirichlet_ratio_deriv,
    evaluate,
    evaluate_derivative,
    evaluate_on_grid,
    factorize_algebraic,
    grid_nodes,
    reduce_periodic,
    trig_sum_cos,
    trig_sum_sin,
    u_ell,
)
from .zeros import (
    ZeroCountReport,
    count_zeros,
    deterministic_zero_set,
    refine_root,
)
from .kacrice import (
    AbcTriple,
    KacRiceResult,
    QuadConfig,
    abc_closed,
    abc_direct,
    abc_leading_order,
    abc_reduced,
    expected_zeros_exact_r0,
    expected_zeros_quadrature,
    limit_integrand_fpm,
    limit_integrand_g,
)
from .constants import (
    compute_C,
    compute_I_alpha,
    compute_J,
    compute_K,
    monte_carlo_C,
    monte_carlo_K,
    poisson_average,
    theoretical_mean,
)
from .harness import (
    DegreeRow,
    ExperimentConfig,
    ExperimentReport,
    load_config_file,
    parse_config_text,
    report_to_csv,
    report_to_json,
    run_experiment,
)
from .acceptance import CriterionResult, run_all
