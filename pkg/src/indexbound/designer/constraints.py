"""Paramètres de conception et assemblage du système d'inégalités linéaires.

Inconnues z = (a_0..a_n, u_0..u_n) ; u_k ≥ |a_k| ne sert qu'à la ligne de
queue. Familles de lignes (A·z ≤ b, poids de marge entre crochets) :

  band_lower  −χ_f(x_j) ≤ −(1 − ε₁)          x_j ≥ σ          [1]
  band_upper   χ_f(x_j) ≤ 1 + ε₂              x_j ≥ σ          [1]
  cap_upper    χ_f(x_j) ≤ amp                 0 < x_j < σ      [1]
  cap_lower   −χ_f(x_j) ≤ amp                 0 < x_j < σ      [1]
  tail_abs    ±a_k − u_k ≤ 0                                   [0]
  tail         Σ c_k(x_max)·u_k ≤ min(ε₁, ε₂)                  [1]

plus l'égalité Σ a_k = 1 (f(0) = 1). χ_f étant impaire, les contraintes
en x ≤ −σ sont redondantes et ne sont pas émises.

Lecture de la bande : 1 − ε₁ < χ_f(x) < 1 + ε₂ (voir docs/band_and_tail.md).
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np
import numpy.typing as npt

from ..errors import ContractError
from ..specfun import basis_matrix, tail_coefficients

logger = logging.getLogger("indexbound.designer.constraints")

FloatArray = npt.NDArray[np.float64]

# Borne haute du crochet de bissection sur σ ; for_modes garantit
# x_max ≥ SIGMA_UPPER + π·n + X_MARGIN, au-delà du seuil π·n/2 de la queue.
SIGMA_UPPER = 3.0
X_MARGIN = 1.0


@dataclass(frozen=True)
class DesignParams:
    n: int = 5
    eps_lo: float = 0.03022
    eps_hi: float = 0.02928
    amp_bound: float = 1.2
    sigma: float | None = None
    grid_step: float = 0.005
    x_max: float = 60.0
    lp_margin: float = 1e-5

    @classmethod
    def for_modes(cls, n: int, **overrides: Any) -> DesignParams:
        """Paramètres pour n modes, x_max étendu à ≥ σ_max + π·n + marge."""
        params = cls(n=n, **overrides)
        needed = SIGMA_UPPER + math.pi * n + X_MARGIN
        if params.x_max < needed:
            logger.debug("x_max %.1f → %.1f pour n = %d", params.x_max, math.ceil(needed), n)
            params = replace(params, x_max=float(math.ceil(needed)))
        return params

    @classmethod
    def published(cls, n: int = 5, sigma: float | None = None) -> DesignParams:
        """Bande (0.96978, 1.02928), plafond 1.2, grille 0.005 sur [0, 60]."""
        return cls.for_modes(n, sigma=sigma)

    def with_sigma(self, sigma: float) -> DesignParams:
        return replace(self, sigma=sigma)

    def validate(self, *, require_sigma: bool = False) -> None:
        if self.n < 0:
            raise ContractError(f"n doit être ≥ 0, reçu {self.n}")
        if not (self.eps_lo > 0 and self.eps_hi > 0):
            raise ContractError("eps_lo et eps_hi doivent être > 0")
        if self.amp_bound < 1.0 + self.eps_hi:
            raise ContractError(f"amp_bound = {self.amp_bound} < 1 + eps_hi = {1.0 + self.eps_hi}")
        if not (0.0 < self.grid_step <= 0.01):
            raise ContractError(f"grid_step doit être dans (0, 0.01], reçu {self.grid_step}")
        if self.lp_margin < 0:
            raise ContractError(f"lp_margin doit être ≥ 0, reçu {self.lp_margin}")
        if self.sigma is None:
            if require_sigma:
                raise ContractError("sigma requis pour assembler les contraintes")
            return
        if not self.sigma > 0:
            raise ContractError(f"sigma doit être > 0, reçu {self.sigma}")
        floor = max(self.sigma, 0.5 * math.pi * self.n)
        if not self.x_max > floor:
            raise ContractError(f"x_max = {self.x_max} doit dépasser max(σ, π·n/2) = {floor:.4f}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(eq=False)
class ConstraintSystem:
    """A_ub·z ≤ b_ub, A_eq·z = b_eq ; les `num_coeffs` premières inconnues forment le profil.

    `slack_weights[i]` > 0 : la ligne i participe à la marge maximisée par
    le solveur ; 0 : ligne de pure faisabilité.
    """

    num_coeffs: int
    a_ub: FloatArray
    b_ub: FloatArray
    slack_weights: FloatArray
    a_eq: FloatArray
    b_eq: FloatArray
    families: dict[str, tuple[int, int]] = field(default_factory=dict)
    margin: float = 0.0
    sigma: float | None = None

    def __post_init__(self) -> None:
        self.a_ub = np.atleast_2d(np.asarray(self.a_ub, dtype=np.float64))
        self.b_ub = np.atleast_1d(np.asarray(self.b_ub, dtype=np.float64))
        self.slack_weights = np.atleast_1d(np.asarray(self.slack_weights, dtype=np.float64))
        self.a_eq = np.atleast_2d(np.asarray(self.a_eq, dtype=np.float64))
        self.b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=np.float64))
        rows, nvars = self.a_ub.shape
        if self.b_ub.shape != (rows,) or self.slack_weights.shape != (rows,):
            raise ContractError("b_ub et slack_weights doivent avoir une entrée par ligne")
        if self.a_eq.shape[1] != nvars or self.b_eq.shape != (self.a_eq.shape[0],):
            raise ContractError("Lignes d'égalité incompatibles avec les inconnues")
        if not (0 < self.num_coeffs <= nvars):
            raise ContractError(f"num_coeffs = {self.num_coeffs} hors de [1, {nvars}]")
        if np.any(self.slack_weights < 0):
            raise ContractError("Poids de marge négatifs")
        for arr in (self.a_ub, self.b_ub, self.a_eq, self.b_eq):
            if not np.all(np.isfinite(arr)):
                raise ContractError("Coefficients de contraintes non finis")

    @property
    def num_vars(self) -> int:
        return int(self.a_ub.shape[1])

    @property
    def num_rows(self) -> int:
        return int(self.a_ub.shape[0] + self.a_eq.shape[0])

    def family_size(self, name: str) -> int:
        start, stop = self.families.get(name, (0, 0))
        return stop - start


@functools.lru_cache(maxsize=8)
def _grid_basis(n: int, grid_step: float, x_max: float) -> tuple[FloatArray, FloatArray]:
    """Grille x_j = j·h ∈ (0, x_max) et Φ[j, k] = φ_k(x_j), partagées entre sondes σ."""
    count = math.ceil(x_max / grid_step)
    grid = grid_step * np.arange(1, count + 1)
    grid = grid[grid < x_max]
    phi = basis_matrix(n, grid)
    grid.setflags(write=False)
    phi.setflags(write=False)
    logger.debug("Base φ_k assemblée : %d points × %d modes", grid.size, n + 1)
    return grid, phi


def build_constraints(params: DesignParams) -> ConstraintSystem:
    params.validate(require_sigma=True)
    assert params.sigma is not None
    n, sigma = params.n, params.sigma
    m = n + 1

    grid, phi = _grid_basis(n, params.grid_step, params.x_max)
    cap = phi[grid < sigma]
    band = np.vstack([basis_matrix(n, [sigma]), phi[grid > sigma]])
    zeros_band = np.zeros((band.shape[0], m))
    zeros_cap = np.zeros((cap.shape[0], m))
    eye = np.eye(m)

    tail_c = tail_coefficients(n, params.x_max)
    tail_rhs = min(params.eps_lo, params.eps_hi)

    blocks = [
        ("band_lower", np.hstack([-band, zeros_band]), np.full(band.shape[0], -(1.0 - params.eps_lo)), 1.0),
        ("band_upper", np.hstack([band, zeros_band]), np.full(band.shape[0], 1.0 + params.eps_hi), 1.0),
        ("cap_upper", np.hstack([cap, zeros_cap]), np.full(cap.shape[0], params.amp_bound), 1.0),
        ("cap_lower", np.hstack([-cap, zeros_cap]), np.full(cap.shape[0], params.amp_bound), 1.0),
        ("tail_abs", np.vstack([np.hstack([eye, -eye]), np.hstack([-eye, -eye])]), np.zeros(2 * m), 0.0),
        ("tail", np.concatenate([np.zeros(m), tail_c])[None, :], np.array([tail_rhs]), 1.0),
    ]

    families: dict[str, tuple[int, int]] = {}
    start = 0
    for name, rows, _, _ in blocks:
        families[name] = (start, start + rows.shape[0])
        start += rows.shape[0]

    system = ConstraintSystem(
        num_coeffs=m,
        a_ub=np.vstack([rows for _, rows, _, _ in blocks]),
        b_ub=np.concatenate([rhs for _, _, rhs, _ in blocks]),
        slack_weights=np.concatenate([np.full(rows.shape[0], w) for _, rows, _, w in blocks]),
        a_eq=np.concatenate([np.ones(m), np.zeros(m)])[None, :],
        b_eq=np.array([1.0]),
        families=families,
        margin=params.lp_margin,
        sigma=sigma,
    )
    logger.debug(
        "Contraintes σ=%.6f, n=%d : %d bande, %d plafond, %d lignes au total",
        sigma,
        n,
        band.shape[0],
        cap.shape[0],
        system.num_rows,
    )
    return system
