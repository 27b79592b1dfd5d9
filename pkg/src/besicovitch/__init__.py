"""Minimal Besicovitch arrangements over F_d and self-dual normal basis complexity."""

from .arrangement import (
    Arrangement,
    Line,
    MultiplicityGrid,
    all_but_simple_count,
    build_pv_arrangement,
    complexity,
    multiplicity_grid,
    sample_random_arrangement,
)
from .expectation import (
    ExpectationReport,
    estimator_c_hat,
    expected_constrained,
    expected_random,
    prob_simple_axis,
    prob_simple_offaxis,
)
from .field import FermatPoly, PrimeField, cube_roots_of_unity, eval_p, fermat_poly
from .stats import (
    ResidualSeries,
    StatReport,
    histogram,
    mann_whitney_scatter,
    ols_slope_test,
    residual_series,
    shapiro_wilk,
)
from .symmetry import (
    GammaElement,
    OrbitPartition,
    PrimeClass,
    apply_gamma,
    classify_prime,
    gamma_elements,
    orbit_partition,
    verify_propositions,
)

__version__ = "0.1.0"
