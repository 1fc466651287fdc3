"""Exact p-adic arithmetic with certified contraction-mapping solvers.

The package provides fixed-precision elements of Q_p (plus sup-normed
vectors and truncated null sequences over it), contractive rational map
families on exactly decidable domains, and solvers whose outputs carry
valuation-based convergence certificates: recurrence iterations, coupled
triple systems, and backward sweeps on finite rooted trees.
"""

from .algebra import (AlgebraElement, DomainSpec, as_element, is_cauchy_gap,
                      norm, product_difference_bound, shift, valuation_floor)
from .contraction import (ContractionReport, ContractiveMap, constant_map,
                          identity_map, verify_contraction)
from .maps import (LinearFractionalParams, MobiusPairParams,
                   RationalPolyParams, SeqMapParams, km2009_params,
                   km_inner_family, make_linear_fractional, make_mobius,
                   make_rational_poly, make_seq_map, shifted_product_map,
                   triple_product_spec)
from .number import (DEFAULT_DIGITS, INF, CertificateError, DomainError,
                     IterationLimitError, PadicError, PadicNumber,
                     PrecisionError, ord_p)
from .recurrence import (ConvergenceCertificate, CoupledSpec, RecurrenceSpec,
                         coupled_residuals, fixed_point_residual,
                         power_equation_spec, solve_coupled, solve_power_fixed_point,
                         solve_recurrence, step)
from .sampling import sample_args, sample_element
from .series import SeriesBudget, in_Ep, padic_exp, padic_log
from .tree import (GapReport, TreeProblem, TreeShape, TreeSolution,
                   backward_sweep, constant_boundary, invariant_solution,
                   random_boundary, uniqueness_gap)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "CertificateError", "ContractionReport",
    "ContractiveMap", "ConvergenceCertificate", "CoupledSpec",
    "DEFAULT_DIGITS", "DomainError", "DomainSpec", "GapReport", "INF",
    "IterationLimitError", "LinearFractionalParams", "MobiusPairParams",
    "PadicError", "PadicNumber", "PrecisionError", "RationalPolyParams",
    "RecurrenceSpec", "SeqMapParams", "SeriesBudget", "TreeProblem",
    "TreeShape", "TreeSolution", "as_element", "backward_sweep",
    "constant_boundary", "constant_map", "coupled_residuals",
    "fixed_point_residual", "identity_map", "in_Ep", "invariant_solution",
    "is_cauchy_gap", "km2009_params", "km_inner_family",
    "make_linear_fractional", "make_mobius", "make_rational_poly",
    "make_seq_map", "norm", "ord_p", "padic_exp", "padic_log",
    "power_equation_spec", "product_difference_bound", "random_boundary",
    "sample_args", "sample_element", "shift", "shifted_product_map",
    "solve_coupled", "solve_power_fixed_point", "solve_recurrence", "step",
    "triple_product_spec", "uniqueness_gap", "valuation_floor",
    "verify_contraction",
]
