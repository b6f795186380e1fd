"""Constructions matricielles exactes des lemmes d'indice.

Tout ce que la chaîne « β → seuil → θ » consomme vit ici :

  - l'idempotent d'indice général p(U, V) = W·diag(1, 0)·W⁻¹ et sa
    spécialisation scalaire P_a (U = V = a), exacte pour tout a ;
  - la norme d'opérateur (forme close en 2×2, valeur propre dominante
    de MᵀM au-delà) et le balayage sup_a ‖P_a‖ = β ;
  - le seuil de déviation 1/(4(2β+2)) et le θ associé ;
  - la construction différence E(p₁, p₂) et sa similitude explicite ;
  - la rétraction d'un quasi-idempotent sur un idempotent (projection
    spectrale sur Re > 1/2).

Fonctions pures, sans état partagé : appelables depuis plusieurs threads.

Note sur P_a − E₁₁ : le coin haut-gauche vaut a²(2−a²) − 1 = −(1−a²)².
On calcule la différence par soustraction directe ; θ ≈ 0.96978 est
re-dérivé, pas recopié d'une matrice imprimée.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from .errors import (
    ContractError,
    DefectiveMatrixError,
    DimensionError,
    DomainError,
    GapTooSmallError,
    InfeasibleThresholdError,
    SpectralGapError,
)

logger = logging.getLogger("indexbound.matgap")

FloatMatrix = npt.NDArray[np.float64]

MAX_DIM = 64
IDEMPOTENT_TOL = 1e-10
# Distance minimale d'une valeur propre à la droite Re = 1/2.
SPECTRAL_GAP_TOL = 1e-10
# Au-delà, la base propre est jugée défective.
EIGVEC_COND_MAX = 1e10
# Défaut maximal ‖e² − e‖ admis par la projection de Riesz.
RIESZ_DEFECT_BOUND = 0.25


@dataclass(frozen=True)
class NormSweepResult:
    """Résultat du balayage sup_{a∈[-1,1]} ‖P_a‖."""

    argmax_a: float
    beta: float
    grid_step: float

    def to_dict(self) -> dict[str, Any]:
        return {"argmax_a": self.argmax_a, "beta": self.beta, "grid_step": self.grid_step}


# --------------------------------------------------------------------- #
# Helpers
# --------------------------------------------------------------------- #


def _as_square(m: Any, *, name: str = "M") -> FloatMatrix:
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} doit être carrée, reçu shape={arr.shape}")
    if arr.shape[0] > MAX_DIM:
        raise DimensionError(f"{name} : taille {arr.shape[0]} > {MAX_DIM} non supportée")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contient des valeurs non finies")
    return arr


def _norm_2x2(p, q, r, s):
    """Plus grande valeur singulière de [[p, q], [r, s]], vectorisée.

    σ_max² = (S + √(S² − 4·det²)) / 2 avec S = ‖M‖_F².
    """
    frob2 = p * p + q * q + r * r + s * s
    det = p * s - q * r
    disc = np.sqrt(np.maximum(frob2 * frob2 - 4.0 * det * det, 0.0))
    return np.sqrt(0.5 * (frob2 + disc))


def _bott_entries(a):
    a2 = a * a
    one_minus = 1.0 - a2
    return (
        a2 * (2.0 - a2),
        (2.0 - a2) * one_minus * a,
        a * one_minus,
        one_minus * one_minus,
    )


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Maximise une fonction unimodale sur [lo, hi] (section dorée)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def idempotency_defect(m: Any) -> float:
    """‖M² − M‖ en norme d'opérateur."""
    arr = _as_square(m)
    return operator_norm(arr @ arr - arr)


def _require_idempotent(m: FloatMatrix, name: str) -> None:
    defect = idempotency_defect(m)
    if defect > IDEMPOTENT_TOL:
        raise ContractError(f"{name} n'est pas idempotente (‖{name}² − {name}‖ = {defect:.3e})")


# --------------------------------------------------------------------- #
# Idempotent d'indice
# --------------------------------------------------------------------- #


def index_idempotent(u: Any, v: Any) -> FloatMatrix:
    """Idempotent d'indice [[UV(2−UV), (2−UV)(1−UV)U], [V(1−UV), (1−VU)²]].

    Idempotent pour tout couple (U, V) : c'est W·diag(1, 0)·W⁻¹ avec W
    donnée par `index_similarity`.
    """
    um = _as_square(u, name="U")
    vm = _as_square(v, name="V")
    if um.shape != vm.shape:
        raise DimensionError(f"U et V de tailles différentes : {um.shape} vs {vm.shape}")
    eye = np.eye(um.shape[0])
    uv = um @ vm
    vu = vm @ um
    return np.block(
        [
            [uv @ (2.0 * eye - uv), (2.0 * eye - uv) @ (eye - uv) @ um],
            [vm @ (eye - uv), (eye - vu) @ (eye - vu)],
        ]
    )


def index_similarity(u: Any, v: Any) -> tuple[FloatMatrix, FloatMatrix]:
    """Retourne (W, W⁻¹) avec W = [[1,U],[0,1]]·[[1,0],[−V,1]]·[[1,U],[0,1]]·[[0,−1],[1,0]].

    L'inverse est écrit en forme close (produit des inverses élémentaires),
    sans inversion numérique.
    """
    um = _as_square(u, name="U")
    vm = _as_square(v, name="V")
    if um.shape != vm.shape:
        raise DimensionError(f"U et V de tailles différentes : {um.shape} vs {vm.shape}")
    n = um.shape[0]
    eye = np.eye(n)
    zero = np.zeros((n, n))
    a = np.block([[eye, um], [zero, eye]])
    b = np.block([[eye, zero], [-vm, eye]])
    j = np.block([[zero, -eye], [eye, zero]])
    a_inv = np.block([[eye, -um], [zero, eye]])
    b_inv = np.block([[eye, zero], [vm, eye]])
    j_inv = np.block([[zero, eye], [-eye, zero]])
    return a @ b @ a @ j, j_inv @ a_inv @ b_inv @ a_inv


def bott_idempotent(a: float) -> FloatMatrix:
    """P_a : spécialisation scalaire U = V = a de l'idempotent d'indice."""
    if not math.isfinite(a):
        raise DomainError(f"a doit être fini, reçu {a}")
    p, q, r, s = _bott_entries(float(a))
    return np.array([[p, q], [r, s]], dtype=np.float64)


def bott_norm(a: Any) -> Any:
    """‖P_a‖ vectorisé (forme close 2×2)."""
    p, q, r, s = _bott_entries(np.asarray(a, dtype=np.float64))
    return _norm_2x2(p, q, r, s)


def deviation_norm(a: Any) -> Any:
    """‖P_a − E₁₁‖ vectorisé, par soustraction directe de E₁₁."""
    p, q, r, s = _bott_entries(np.asarray(a, dtype=np.float64))
    return _norm_2x2(p - 1.0, q, r, s)


# --------------------------------------------------------------------- #
# Normes
# --------------------------------------------------------------------- #


def operator_norm(m: Any) -> float:
    """Plus grande valeur singulière de M.

    Forme close pour 2×2 ; sinon √λ_max(MᵀM) (eigvalsh, symétrique).
    """
    arr = _as_square(m)
    if arr.shape[0] == 0:
        return 0.0
    if arr.shape == (2, 2):
        return float(_norm_2x2(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1]))
    gram = arr.T @ arr
    top = float(np.linalg.eigvalsh(gram)[-1])
    return math.sqrt(max(top, 0.0))


def sup_bott_norm(grid_step: float = 1e-4) -> NormSweepResult:
    """β = sup_{a∈[-1,1]} ‖P_a‖ : grille uniforme puis section dorée.

    ‖P_a‖ est pair en a et présente un seul maximum intérieur par
    demi-intervalle ; le raffinement se fait sur [a* − h, a* + h].
    """
    if not (0.0 < grid_step <= 0.01):
        raise DomainError(f"grid_step doit être dans (0, 0.01], reçu {grid_step}")
    count = math.ceil(2.0 / grid_step) + 1
    grid = np.linspace(-1.0, 1.0, count)
    norms = bott_norm(grid)
    i = int(np.argmax(norms))
    h = grid[1] - grid[0]
    lo, hi = max(-1.0, grid[i] - h), min(1.0, grid[i] + h)
    a_star = _golden_max(lambda x: float(bott_norm(x)), lo, hi)
    beta = float(bott_norm(a_star))
    if beta < norms[i]:
        a_star, beta = float(grid[i]), float(norms[i])
    logger.debug("sup ‖P_a‖ = %.10f en a = %.8f (grille %d points)", beta, a_star, count)
    return NormSweepResult(argmax_a=float(a_star), beta=beta, grid_step=grid_step)


def deviation_threshold(beta: float) -> float:
    """Seuil du lemme de quasi-idempotence : ‖p − e‖ < 1/(4·(2β+2))."""
    if beta < 0 or not math.isfinite(beta):
        raise DomainError(f"beta doit être ≥ 0, reçu {beta}")
    return 1.0 / (4.0 * (2.0 * beta + 2.0))


def theta_for_threshold(threshold: float, grid_step: float = 1e-5) -> float:
    """Plus petit θ ∈ [0, 1] tel que ‖P_a − E₁₁‖ ≤ threshold pour θ ≤ |a| ≤ 1.

    Balayage descendant depuis a = 1 (où la déviation est nulle) jusqu'à
    la première violation, puis bissection entre ce point et le précédent.
    La déviation est paire en a : seul [0, 1] est parcouru.
    """
    if not threshold > 0 or not math.isfinite(threshold):
        raise DomainError(f"threshold doit être > 0, reçu {threshold}")
    if not (0.0 < grid_step <= 1e-4):
        raise DomainError(f"grid_step doit être dans (0, 1e-4], reçu {grid_step}")

    count = math.ceil(1.0 / grid_step) + 1
    grid = np.clip(1.0 - grid_step * np.arange(count), 0.0, 1.0)
    dev = deviation_norm(grid)
    violations = np.flatnonzero(dev > threshold)
    if violations.size == 0:
        return 0.0

    i = int(violations[0])
    lo, hi = float(grid[i]), float(grid[i - 1])  # dev(lo) > seuil ≥ dev(hi)
    for _ in range(200):
        if hi - lo <= 1e-15:
            break
        mid = 0.5 * (lo + hi)
        if deviation_norm(mid) > threshold:
            lo = mid
        else:
            hi = mid
    if hi >= 1.0 - 1e-15:
        raise InfeasibleThresholdError(f"Aucun θ < 1 pour le seuil {threshold:.3e}")
    logger.debug("θ = %.8f pour le seuil %.8f", hi, threshold)
    return hi


# --------------------------------------------------------------------- #
# Construction différence
# --------------------------------------------------------------------- #


def trivial_idempotent(n: int) -> FloatMatrix:
    """E₀ : bloc identité n×n en haut à gauche d'une matrice 4n×4n."""
    e0 = np.zeros((4 * n, 4 * n))
    e0[:n, :n] = np.eye(n)
    return e0


def difference_similarity(p2: Any) -> tuple[FloatMatrix, FloatMatrix]:
    """(U, U⁻¹) explicites de la construction différence, pour un idempotent p₂."""
    q = _as_square(p2, name="p2")
    n = q.shape[0]
    eye = np.eye(n)
    zero = np.zeros((n, n))
    comp = eye - q
    u = np.block(
        [
            [q, zero, comp, zero],
            [comp, zero, zero, q],
            [zero, zero, q, comp],
            [zero, eye, zero, zero],
        ]
    )
    u_inv = np.block(
        [
            [q, comp, zero, zero],
            [zero, zero, zero, eye],
            [comp, zero, q, zero],
            [zero, q, comp, zero],
        ]
    )
    return u, u_inv


def difference_idempotent(p1: Any, p2: Any) -> FloatMatrix:
    """E(p₁, p₂), idempotent 4n×4n représentant [p₁] − [p₂] (à E₀ près).

    Égale U⁻¹·diag(p₁, 1 − p₂, 0, 0)·U avec (U, U⁻¹) de
    `difference_similarity(p₂)`.
    """
    a = _as_square(p1, name="p1")
    b = _as_square(p2, name="p2")
    if a.shape != b.shape:
        raise DimensionError(f"p1 et p2 de tailles différentes : {a.shape} vs {b.shape}")
    if 4 * a.shape[0] > MAX_DIM:
        raise DimensionError(f"E(p1, p2) serait {4 * a.shape[0]}×{4 * a.shape[0]} > {MAX_DIM}")
    _require_idempotent(a, "p1")
    _require_idempotent(b, "p2")

    n = a.shape[0]
    eye = np.eye(n)
    zero = np.zeros((n, n))
    d = a - b
    comp = eye - b
    return np.block(
        [
            [eye + b @ d @ b, zero, b @ a @ d, zero],
            [zero, zero, zero, zero],
            [d @ a @ b, zero, comp @ d @ comp, zero],
            [zero, zero, zero, zero],
        ]
    )


# --------------------------------------------------------------------- #
# Quasi-idempotents
# --------------------------------------------------------------------- #


def riesz_idempotent(e: Any) -> FloatMatrix:
    """Projection spectrale de e sur ses valeurs propres de partie réelle > 1/2.

    Remplace l'intégrale de contour par une diagonalisation : équivalent
    pour les matrices diagonalisables, les entrées défectives sont
    rejetées. Exige ‖e² − e‖ < 1/4, ce qui écarte le spectre de Re = 1/2.
    """
    m = _as_square(e, name="e")
    defect = operator_norm(m @ m - m)
    if defect >= RIESZ_DEFECT_BOUND:
        raise SpectralGapError(f"‖e² − e‖ = {defect:.4f} ≥ 1/4")

    vals, vecs = np.linalg.eig(m)
    gap = np.abs(vals.real - 0.5)
    if gap.size and float(gap.min()) < SPECTRAL_GAP_TOL:
        raise GapTooSmallError(f"valeur propre à {float(gap.min()):.2e} de Re = 1/2")
    cond = np.linalg.cond(vecs)
    if not math.isfinite(cond) or cond > EIGVEC_COND_MAX:
        raise DefectiveMatrixError(f"base propre mal conditionnée (cond = {cond:.2e})")

    keep = (vals.real > 0.5).astype(np.complex128)
    proj = (vecs * keep) @ np.linalg.inv(vecs)
    return np.ascontiguousarray(proj.real)


def quasi_idempotent_path(p: Any, e: Any, num: int = 101) -> list[float]:
    """Défauts ‖e_s² − e_s‖ le long de e_s = s·p + (1−s)·e, s ∈ [0, 1].

    Le chemin doit rester dans le domaine de la projection de Riesz
    (défaut < 1/4) : c'est ce qui relie p et la rétraction de e par un
    chemin continu d'idempotents.
    """
    pm = _as_square(p, name="p")
    em = _as_square(e, name="e")
    if pm.shape != em.shape:
        raise DimensionError(f"p et e de tailles différentes : {pm.shape} vs {em.shape}")
    if num < 2:
        raise DomainError(f"num doit être ≥ 2, reçu {num}")
    _require_idempotent(pm, "p")

    defects: list[float] = []
    for s in np.linspace(0.0, 1.0, num):
        es = s * pm + (1.0 - s) * em
        defects.append(operator_norm(es @ es - es))
    worst = max(defects)
    if worst >= RIESZ_DEFECT_BOUND:
        raise SpectralGapError(f"le chemin sort du domaine : défaut max {worst:.4f} ≥ 1/4")
    return defects
