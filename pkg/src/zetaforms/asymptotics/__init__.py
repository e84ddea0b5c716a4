"""Exponential decay of the linear forms: the phase function, the critical
polynomial and its roots, kappa, saddle points, and numerical contour checks."""

from .integrals import (
    QuadratureError,
    contour_I,
    edge_J,
    laplace_prediction,
    rescaling_prefactor,
    rescaled_sum,
    saddle_asymptotic_check,
    saddle_integral,
    vertical_J,
)
from .phase import PhaseFunction, VbPolynomial, cot_b, vb_polynomial
from .polynomial import CriticalPolynomial, RootFindingError, critical_polynomial, critical_roots, find_roots
from .saddle import (
    AsymptoticsReport,
    RootSelectionError,
    SaddleError,
    UncertifiedWarning,
    analyze,
    check_condition19,
    coeff_bound_sharp,
    coeff_bound_simple,
    closeness_bound,
    imaginary_axis_roots,
    kappa,
    kappa_at,
    mu0,
    mu1,
    select_eta,
    select_mu,
    solve_saddle,
)
