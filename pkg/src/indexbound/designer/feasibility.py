"""Faisabilité d'un `ConstraintSystem` par programmation linéaire.

Problème primal (marge maximale) :

    max t   s.c.   A_ub·z + w·t ≤ b_ub,   A_eq·z = b_eq,   t ≤ 1,   z libre

Il est résolu par son dual, en forme standard :

    min b_ubᵀy + s + b_eqᵀ(μ⁺ − μ⁻)
    s.c. A_ubᵀy + A_eqᵀ(μ⁺ − μ⁻) = 0,   wᵀy + s = 1,   y, s, μ± ≥ 0

Le dual n'a qu'une ligne par inconnue primale (2n + 3) contre des
dizaines de milliers pour le primal ; z est relu sur les multiplicateurs
de la base optimale. Dual infaisable ou non borné ⇒ primal infaisable
(le primal est borné par t ≤ 1).

Le système est déclaré faisable si la marge re-calculée sur z (et non
celle du solveur) atteint `system.margin`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..specfun import CosineProfile
from .constraints import ConstraintSystem
from .simplex import DEFAULT_MAX_PIVOTS, solve_standard_form

logger = logging.getLogger("indexbound.designer.feasibility")

# Tolérance de relecture sur les lignes d'égalité et de poids nul.
RESIDUAL_TOL = 1e-9


@dataclass
class FeasibilityResult:
    feasible: bool
    profile: CosineProfile | None = None
    min_slack: float | None = None
    lp_value: float | None = None
    pivots: dict[str, int] = field(default_factory=dict)


def _dual_problem(system: ConstraintSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    nvars = system.num_vars
    rows = system.a_ub.shape[0]
    neq = system.a_eq.shape[0]

    cols_y = np.vstack([system.a_ub.T, system.slack_weights[None, :]])
    col_t = np.zeros((nvars + 1, 1))
    col_t[-1, 0] = 1.0
    cols_mu = np.vstack([system.a_eq.T, np.zeros((1, neq))])
    a = np.hstack([cols_y, col_t, cols_mu, -cols_mu])
    c = np.concatenate([system.b_ub, [1.0], system.b_eq, -system.b_eq])
    b = np.zeros(nvars + 1)
    b[-1] = 1.0
    logger.debug("Dual : %d lignes × %d colonnes (primal : %d lignes)", a.shape[0], a.shape[1], rows + neq)
    return a, b, c


def solve_feasibility(system: ConstraintSystem, max_pivots: int = DEFAULT_MAX_PIVOTS) -> FeasibilityResult:
    """Résout le problème de marge maximale et relit la solution primale."""
    a, b, c = _dual_problem(system)
    result = solve_standard_form(a, b, c, max_pivots=max_pivots)
    if not result.optimal or result.duals is None:
        logger.debug("Système infaisable (dual %s)", result.status)
        return FeasibilityResult(feasible=False, pivots=result.pivots)

    # Les multiplicateurs du dual sont les inconnues primales (z, t).
    z = result.duals[:-1]
    lp_value = float(result.duals[-1])

    slack = system.b_ub - system.a_ub @ z
    weighted = system.slack_weights > 0
    min_slack = float(np.min(slack[weighted] / system.slack_weights[weighted])) if weighted.any() else 1.0
    free_rows_ok = bool(np.all(slack[~weighted] >= -RESIDUAL_TOL))
    eq_residual = float(np.max(np.abs(system.a_eq @ z - system.b_eq), initial=0.0))

    feasible = min_slack >= system.margin - 1e-12 and free_rows_ok and eq_residual <= RESIDUAL_TOL
    if not feasible and lp_value >= system.margin:
        logger.warning(
            "Relecture primale incohérente : t* = %.3e, marge relue = %.3e, résidu = %.3e",
            lp_value,
            min_slack,
            eq_residual,
        )
    profile = CosineProfile.from_sequence(z[: system.num_coeffs]) if feasible else None
    logger.debug("t* = %.6e, marge relue = %.6e, faisable = %s", lp_value, min_slack, feasible)
    return FeasibilityResult(
        feasible=feasible,
        profile=profile,
        min_slack=min_slack,
        lp_value=lp_value,
        pivots=result.pivots,
    )


def lp_feasible(system: ConstraintSystem) -> CosineProfile | None:
    """Profil satisfaisant toutes les contraintes avec la marge requise, ou None."""
    return solve_feasibility(system).profile
