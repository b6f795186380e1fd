"""Hiérarchie d'exceptions d'IndexBound.

Une seule racine (`IndexBoundError`) pour que la CLI puisse mapper
n'importe quel échec numérique vers un code de sortie, sans attraper
les vrais bugs (TypeError, etc.).

Convention :
  - une infaisabilité LP n'est PAS une exception : `lp_feasible`
    retourne `None` ;
  - `InputError` (fichier illisible, config invalide) → exit 2 ;
  - tout le reste → exit 1.
"""

from __future__ import annotations


class IndexBoundError(Exception):
    """Erreur générique du pipeline."""


class DimensionError(IndexBoundError):
    """Matrice non carrée ou tailles incompatibles."""


class ContractError(IndexBoundError):
    """Précondition violée (ex. entrée censée être idempotente)."""


class SpectralGapError(IndexBoundError):
    """Défaut ‖e² − e‖ ≥ 1/4 : le spectre peut toucher Re = 1/2."""


class GapTooSmallError(SpectralGapError):
    """Valeur propre à moins de 1e-10 de la droite Re = 1/2."""


class DefectiveMatrixError(IndexBoundError):
    """Matrice non diagonalisable (vecteurs propres mal conditionnés)."""


class InfeasibleThresholdError(IndexBoundError):
    """Aucun θ < 1 ne satisfait le seuil de déviation demandé."""


class IterationError(IndexBoundError):
    """Méthode itérative non convergée dans le budget d'itérations."""


class DomainError(IndexBoundError):
    """Argument hors domaine (ou échec d'expansion d'un intervalle de bissection)."""


class SolverError(IndexBoundError):
    """Le simplexe a atteint son plafond d'itérations (distinct d'infaisable)."""


class InputError(IndexBoundError):
    """Entrée utilisateur invalide : fichier de profil illisible, config incohérente."""
