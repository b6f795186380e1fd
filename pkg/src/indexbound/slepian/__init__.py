"""Problème de concentration de Slepian : quadrature, Nyström, méthode 1."""

from .concentration import (
    DEFAULT_QUAD_ORDER,
    ConcentrationSpectrum,
    concentration_matrix,
    concentration_norm,
    slepian_constant,
    solve_sigma_for_norm,
)
from .quadrature import QuadratureRule, cached_rule, gauss_legendre

__all__ = [
    "DEFAULT_QUAD_ORDER",
    "ConcentrationSpectrum",
    "QuadratureRule",
    "cached_rule",
    "concentration_matrix",
    "concentration_norm",
    "gauss_legendre",
    "slepian_constant",
    "solve_sigma_for_norm",
]
