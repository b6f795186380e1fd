"""Règle de Gauss-Legendre sur [-1, 1].

Nœuds = racines de P_N trouvées par Newton à partir de l'approximation
d'Abramowitz-Stegun 22.16.6 (type Tchebychev) ; P_N et P_{N-1} par la
récurrence de Bonnet, P′_N via (1 − x²)·P′_N = N·(P_{N-1} − x·P_N).
Poids w_i = 2 / ((1 − x_i²)·P′_N(x_i)²).
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import DomainError, IterationError

logger = logging.getLogger("indexbound.slepian.quadrature")

FloatArray = npt.NDArray[np.float64]

MAX_ORDER = 2000
_NEWTON_TOL = 1e-15
_NEWTON_MAXIT = 100


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nœuds strictement croissants, symétriques en 0 ; Σ poids = 2."""

    order: int
    nodes: FloatArray
    weights: FloatArray

    def integrate(self, values: FloatArray) -> float:
        """Σ w_i·f(x_i) pour des valeurs déjà échantillonnées aux nœuds."""
        return float(np.dot(self.weights, values))


def _legendre_pair(order: int, x: FloatArray) -> tuple[FloatArray, FloatArray]:
    """(P_{N-1}(x), P_N(x)) par récurrence."""
    p_prev = np.ones_like(x)
    p_cur = x.copy()
    for k in range(1, order):
        p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
    return p_prev, p_cur


def _legendre_derivative(order: int, x: FloatArray) -> FloatArray:
    p_prev, p_cur = _legendre_pair(order, x)
    return order * (p_prev - x * p_cur) / (1.0 - x * x)


def gauss_legendre(order: int) -> QuadratureRule:
    if not (1 <= order <= MAX_ORDER):
        raise DomainError(f"order doit être dans [1, {MAX_ORDER}], reçu {order}")

    i = np.arange(1, order + 1)
    a = (4 * i - 1) / (4 * order + 2) * math.pi
    x = np.cos(a + 1.0 / (8.0 * order * order * np.tan(a)))

    for it in range(_NEWTON_MAXIT):
        _, p_cur = _legendre_pair(order, x)
        dx = p_cur / _legendre_derivative(order, x)
        x = x - dx
        if float(np.max(np.abs(dx))) < _NEWTON_TOL:
            break
    else:
        raise IterationError(f"Newton Gauss-Legendre non convergé (order={order})")

    dp = _legendre_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    # Ordre croissant, symétrie imposée exactement.
    idx = np.argsort(x)
    x, w = x[idx], w[idx]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    logger.debug("Gauss-Legendre order=%d : %d itérations de Newton", order, it + 1)
    return QuadratureRule(order=order, nodes=x, weights=w)


@functools.lru_cache(maxsize=16)
def cached_rule(order: int) -> QuadratureRule:
    """Règle mémoïsée (thread-safe), tableaux en lecture seule."""
    rule = gauss_legendre(order)
    rule.nodes.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule
