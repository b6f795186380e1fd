"""Opérateur de concentration T_σ et méthode 1 (σ tel que ‖T_σ‖ = θ).

T_σ agit sur L²([-1, 1]) avec le noyau K(x, y) = sin(σ(x+y)) / (π(x+y)),
prolongé par σ/π sur x + y = 0. Sa plus grande valeur propre est la
fraction d'énergie maximale qu'une fonction à spectre dans [-1, 1] peut
concentrer dans [-σ, σ].

Discrétisation de Nyström : B_ij = √w_i·K(x_i, x_j)·√w_j, symétrique. La
valeur propre dominante est obtenue par itération de sous-espace
restreinte aux vecteurs pairs (Rayleigh-Ritz) ; `numpy.linalg.eigh` sur
la matrice pleine ne sert que d'oracle dans les tests.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .. import matgap
from ..errors import DomainError, IterationError
from ..report import ConstantReport
from .quadrature import QuadratureRule, cached_rule

logger = logging.getLogger("indexbound.slepian")

FloatArray = npt.NDArray[np.float64]

DEFAULT_QUAD_ORDER = 200
MIN_QUAD_ORDER = 50
POWER_TOL = 1e-12
POWER_MAXIT = 10_000
BLOCK_EXTRA = 4
SIGMA_BRACKET = (0.1, 4.0)
SIGMA_CAP = 64.0
SIGMA_FLOOR = 1e-8
DEFAULT_SIGMA_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ConcentrationSpectrum:
    """Paire propre dominante de T_σ discrétisé.

    `eigenvector` : valeurs φ(x_i) aux nœuds, Σ w_i φ(x_i)² = 1, signe
    choisi pour que Σ w_i φ(x_i) > 0.
    """

    sigma: float
    top_eigenvalue: float
    eigenvector: FloatArray
    quad_order: int
    iterations: int


def concentration_matrix(sigma: float, rule: QuadratureRule) -> FloatArray:
    """Matrice de Nyström symétrisée B = √W·K·√W."""
    if not sigma > 0 or not math.isfinite(sigma):
        raise DomainError(f"sigma doit être > 0, reçu {sigma}")
    x = np.asarray(rule.nodes)
    s = np.add.outer(x, x)
    # sin(σs)/(πs) = (σ/π)·sinc(σs/π), égal à σ/π en s = 0.
    kernel = (sigma / math.pi) * np.sinc(sigma * s / math.pi)
    sw = np.sqrt(rule.weights)
    b = sw[:, None] * kernel * sw[None, :]
    return 0.5 * (b + b.T)


def _even_block_iteration(b: FloatArray, start: FloatArray) -> tuple[float, FloatArray, int]:
    """Itération de sous-espace sur la partie paire de `b` (bloc `start`), extraction de Rayleigh-Ritz.

    Les nœuds étant symétriques, v ↦ v[::-1] est la réflexion x ↦ −x ;
    elle commute avec `b` et chaque itéré est projeté sur les vecteurs pairs.
    """
    v = start
    lam = math.inf
    for it in range(1, POWER_MAXIT + 1):
        q, _ = np.linalg.qr(0.5 * (v + v[::-1]))
        w = b @ q
        h = q.T @ w
        vals, vecs = np.linalg.eigh(0.5 * (h + h.T))
        lam_new = float(vals[-1])
        if not math.isfinite(lam_new):
            raise IterationError("Quotient de Rayleigh non fini")
        if abs(lam_new - lam) < POWER_TOL:
            return lam_new, q @ vecs[:, -1], it
        lam = lam_new
        v = w
    raise IterationError(f"Itération de sous-espace non convergée en {POWER_MAXIT} itérations")


def concentration_norm(sigma: float, quad_order: int = DEFAULT_QUAD_ORDER) -> ConcentrationSpectrum:
    """‖T_σ‖ par Nyström + itération de sous-espace paire.

    Sur les fonctions paires T_σ coïncide avec l'opérateur sinc positif
    (valeurs propres λ₀ > λ₂ > … ≥ 0), sur les impaires avec son opposé ;
    ‖T_σ‖ = λ₀. Quand σ grandit, environ σ/π valeurs propres paires sont
    proches de 1 : le bloc compte ⌈σ/π⌉ + BLOCK_EXTRA vecteurs, départ
    cos(jπx)·√w.
    """
    if quad_order < MIN_QUAD_ORDER:
        raise DomainError(f"quad_order doit être ≥ {MIN_QUAD_ORDER}, reçu {quad_order}")
    rule = cached_rule(quad_order)
    b = concentration_matrix(sigma, rule)
    sw = np.sqrt(rule.weights)
    width = min(quad_order // 2, math.ceil(sigma / math.pi) + BLOCK_EXTRA)
    x = np.asarray(rule.nodes)
    start = sw[:, None] * np.cos(math.pi * np.outer(x, np.arange(width)))
    lam, y, iterations = _even_block_iteration(b, start)
    phi = y / sw
    if float(rule.weights @ phi) < 0:
        phi = -phi
    logger.debug("‖T_σ‖(σ=%.8f, N=%d) = %.14f en %d itérations", sigma, quad_order, lam, iterations)
    return ConcentrationSpectrum(
        sigma=float(sigma),
        top_eigenvalue=lam,
        eigenvector=phi,
        quad_order=quad_order,
        iterations=iterations,
    )


def _norm_at(sigma: float, quad_order: int) -> float:
    return concentration_norm(sigma, quad_order).top_eigenvalue


def solve_sigma_for_norm(
    theta: float,
    quad_order: int = DEFAULT_QUAD_ORDER,
    tol: float = DEFAULT_SIGMA_TOL,
) -> float:
    """σ tel que ‖T_σ‖ = θ, par bissection (‖T_σ‖ strictement croissante).

    Crochet initial [0.1, 4] ; la borne haute est doublée jusqu'à
    ‖T_σ‖ > θ (plafond σ = 64), la borne basse divisée par deux si
    θ est en dessous de ‖T_0.1‖.
    """
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta doit être dans (0, 1), reçu {theta}")
    if not tol > 0:
        raise DomainError(f"tol doit être > 0, reçu {tol}")

    lo, hi = SIGMA_BRACKET
    while _norm_at(hi, quad_order) <= theta:
        hi *= 2.0
        if hi > SIGMA_CAP:
            raise DomainError(f"‖T_σ‖ reste ≤ θ = {theta} jusqu'à σ = {SIGMA_CAP}")
    while _norm_at(lo, quad_order) > theta:
        lo *= 0.5
        if lo < SIGMA_FLOOR:
            raise DomainError(f"‖T_σ‖ > θ = {theta} dès σ = {SIGMA_FLOOR}")

    steps = 0
    mid = 0.5 * (lo + hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        value = _norm_at(mid, quad_order)
        steps += 1
        if abs(value - theta) < tol:
            break
        if value > theta:
            hi = mid
        else:
            lo = mid
    else:
        mid = 0.5 * (lo + hi)
    logger.debug("σ(θ=%.8f) = %.10f après %d pas de bissection", theta, mid, steps)
    return mid


def slepian_constant(
    beta_grid_step: float = 1e-4,
    quad_order: int = DEFAULT_QUAD_ORDER,
    *,
    theta_grid_step: float = 1e-5,
    sigma_tol: float = DEFAULT_SIGMA_TOL,
) -> ConstantReport:
    """Chaîne complète β → seuil → θ → σ → C = 30σ."""
    started = time.perf_counter()
    sweep = matgap.sup_bott_norm(beta_grid_step)
    threshold = matgap.deviation_threshold(sweep.beta)
    theta = matgap.theta_for_threshold(threshold, theta_grid_step)
    sigma = solve_sigma_for_norm(theta, quad_order, sigma_tol)
    spectrum = concentration_norm(sigma, quad_order)
    elapsed = time.perf_counter() - started

    report = ConstantReport.build(
        "slepian",
        sigma,
        inputs={
            "beta_grid": beta_grid_step,
            "theta_grid": theta_grid_step,
            "quad_order": quad_order,
            "sigma_tol": sigma_tol,
        },
        beta=sweep.beta,
        threshold=threshold,
        theta=theta,
        diagnostics={
            "argmax_a": sweep.argmax_a,
            "norm_at_sigma": spectrum.top_eigenvalue,
            "block_iterations": spectrum.iterations,
            "runtime_s": round(elapsed, 4),
        },
    )
    logger.info("Méthode Slepian : θ = %.6f, σ = %.6f, C = %.4f (%.2fs)", theta, sigma, report.C, elapsed)
    return report
