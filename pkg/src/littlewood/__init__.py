"""Littlewood completions of Jacobi-symbol character polynomials.

Exact L4 norms and merit factors by several independent routes, plus the
desk-scale experiment harness that sweeps (n, rotation, completion) grids.
"""

from .numbers import (
    AdmissibilityError,
    FactoredModulus,
    factor_odd_squarefree,
    gauss_sum_jacobi,
    is_prime,
    jacobi,
    mobius,
    ramanujan_sum,
)
from .sequences import (
    Rotation,
    TernarySequence,
    character_polynomial,
    complete,
    completion_all_ones,
    completion_constant,
    completion_jacobi_product,
    completion_random,
    completion_support,
    completion_two_prime,
    enumerate_completions,
    read_sequence,
    rotate,
    write_sequence,
)
from .norms import (
    AutocorrelationProfile,
    DecompositionReport,
    IdentityFailure,
    MeritReport,
    ZeroDenominatorError,
    allones_spike_check,
    asymptotic_f,
    autocorrelation,
    build_merit_report,
    character_sum_check,
    exp_sum_identity_check,
    hj_decomposition,
    interpolation_bound_check,
    l4_fourth_power_dft,
    l4_fourth_power_exact,
    merit_factor,
    proposition4_gap,
    spectral_values_J,
    values_at_roots,
)
from .exhaustive import ExhaustiveSummary, merit_from_l4, scan_all_completions

__version__ = "0.1.0"
