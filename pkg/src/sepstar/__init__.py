"""Exact total symbols and star products with separation of variables
on pseudo-Kaehler coordinate charts."""

__version__ = "0.1.0"

from .bidiff import BidiffTable, bidiff_coefficients
from .engine import star, total_symbol_closed, total_symbol_recursive
from .jet import INF, Jet, jet_arith, jet_invert
from .kaehler import ChartData, Potential, chart_build, derivative_tensors, inverse_metric
from .operators import d_op, euler_inverse, exp_d, gamma_op, neumann_resolve, q_op
from .scalar import I, ONE, ZERO, Scalar, scalar_arith
from .symbols import (
    Symbol,
    SymbolSeries,
    apply_operator,
    check_E_membership,
    compose,
    filtration_degree,
    restrict_fiber_zero,
    series_compose,
)
from .verify import (
    verify_associativity,
    verify_lemmas,
    verify_structure,
    verify_symbol_conditions,
)

__all__ = [
    "BidiffTable", "ChartData", "I", "INF", "Jet", "ONE", "Potential", "Scalar", "Symbol",
    "SymbolSeries", "ZERO", "apply_operator", "bidiff_coefficients", "chart_build",
    "check_E_membership", "compose", "d_op", "derivative_tensors", "euler_inverse", "exp_d",
    "filtration_degree", "gamma_op", "inverse_metric", "jet_arith", "jet_invert",
    "neumann_resolve", "q_op", "restrict_fiber_zero", "scalar_arith", "series_compose", "star",
    "total_symbol_closed", "total_symbol_recursive", "verify_associativity", "verify_lemmas",
    "verify_structure", "verify_symbol_conditions",
]
