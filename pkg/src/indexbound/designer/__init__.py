"""Conception de fonctions normalisantes par programmation linéaire.

    build_constraints → lp_feasible → minimize_sigma → verify_profile
"""

from ..report import universal_constant
from .constraints import ConstraintSystem, DesignParams, build_constraints
from .feasibility import FeasibilityResult, lp_feasible, solve_feasibility
from .search import (
    SigmaSearchResult,
    VerificationReport,
    design_report,
    minimize_sigma,
    search_sigma,
    verify_profile,
)
from .simplex import SimplexResult, solve_standard_form

__all__ = [
    "ConstraintSystem",
    "DesignParams",
    "FeasibilityResult",
    "SigmaSearchResult",
    "SimplexResult",
    "VerificationReport",
    "build_constraints",
    "design_report",
    "lp_feasible",
    "minimize_sigma",
    "search_sigma",
    "solve_feasibility",
    "solve_standard_form",
    "universal_constant",
    "verify_profile",
]
