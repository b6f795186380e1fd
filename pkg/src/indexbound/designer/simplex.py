"""Simplexe dense en deux phases, forme standard.

    min cᵀx   s.c.   A·x = b,  x ≥ 0

Phase 1 : une variable artificielle par ligne, minimisation de leur
somme. Les artificielles restées en base à niveau nul sont chassées par
un pivot dégénéré ; une ligne sans pivot possible est redondante et
retirée. Phase 2 : tableau reconstruit depuis les données d'origine.

Règle d'entrée : Dantzig (coût réduit le plus négatif). Après
`DEGENERATE_SWITCH` pivots consécutifs sans baisse relative de
l'objectif supérieure à `STALL_TOL`, on passe à la règle de Bland (plus
petit indice) jusqu'à la prochaine baisse franche.

Règle de sortie lexicographique : chaque tableau transporte le bloc
B⁻¹·B₀ (B₀ base de départ de la phase). Les égalités du test du ratio
sont départagées colonne par colonne sur ce bloc, ce qui exclut tout
cyclage quelle que soit la règle d'entrée ; le plus petit indice de base
tranche les égalités restantes. Mêmes données, mêmes pivots.

Le tableau est ré-inversé depuis (A, b, c) tous les `REINVERT_EVERY`
pivots pour borner l'accumulation d'erreurs d'arrondi.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError, SolverError

logger = logging.getLogger("indexbound.designer.simplex")

FloatArray = npt.NDArray[np.float64]

PIVOT_TOL = 1e-9
COST_TOL = 1e-10
FEAS_TOL = 1e-9
# Égalité relative dans le test du ratio et sur les clés lexicographiques.
TIE_TOL = 1e-12
STALL_TOL = 1e-13
DEGENERATE_SWITCH = 50
REINVERT_EVERY = 100
DEFAULT_MAX_PIVOTS = 50_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class SimplexResult:
    status: str
    x: FloatArray | None = None
    objective: float | None = None
    duals: FloatArray | None = None
    basis: list[int] = field(default_factory=list)
    redundant_rows: list[int] = field(default_factory=list)
    pivots: dict[str, int] = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Tableau [B⁻¹A | B⁻¹B₀ | B⁻¹b] + ligne des coûts réduits, pour une base donnée."""

    def __init__(self, cols: FloatArray, rhs: FloatArray, costs: FloatArray, basis: Sequence[int]):
        self.cols = cols
        self.rhs = rhs
        self.costs = costs
        self.basis = list(basis)
        self.start = cols[:, self.basis].copy()
        m, n = cols.shape
        self.width = n
        self.table = np.empty((m + 1, n + m + 1))
        self.reinvert()

    @property
    def m(self) -> int:
        return len(self.basis)

    def reinvert(self) -> None:
        m, n = self.m, self.width
        bmat = self.cols[:, self.basis]
        try:
            body = np.linalg.solve(bmat, np.column_stack([self.cols, self.start, self.rhs]))
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"Base singulière lors de la ré-inversion : {exc}") from exc
        self.table[:m] = body
        cb = self.costs[self.basis]
        self.table[m, :n] = self.costs - cb @ body[:, :n]
        self.table[m, n:-1] = 0.0
        self.table[m, -1] = -float(cb @ body[:, -1])

    @property
    def objective(self) -> float:
        return -float(self.table[-1, -1])

    def pivot(self, row: int, col: int) -> None:
        t = self.table
        t[row] /= t[row, col]
        factor = t[:, col].copy()
        factor[row] = 0.0
        nz = np.flatnonzero(factor)
        t[nz] -= factor[nz, None] * t[row]
        self.basis[row] = col

    def entering(self, bland: bool) -> int | None:
        reduced = self.table[-1, : self.width]
        if bland:
            idx = np.flatnonzero(reduced < -COST_TOL)
            return int(idx[0]) if idx.size else None
        j = int(np.argmin(reduced))
        return j if reduced[j] < -COST_TOL else None

    def leaving(self, col: int) -> tuple[int | None, float]:
        column = self.table[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return None, float("inf")
        ratios = np.maximum(self.table[rows, -1], 0.0) / column[rows]
        best = float(ratios.min())
        ties = rows[ratios <= best + TIE_TOL * max(1.0, best)]
        lex = self.table[:-1, self.width : -1]
        for j in range(lex.shape[1]):
            if ties.size == 1:
                break
            keys = lex[ties, j] / column[ties]
            low = float(keys.min())
            ties = ties[keys <= low + TIE_TOL * max(1.0, abs(low))]
        basis = np.asarray(self.basis)
        row = int(ties[np.argmin(basis[ties])])
        return row, best

    def run(self, max_pivots: int, phase: str) -> tuple[str, int]:
        stalled = 0
        before = self.objective
        for k in range(max_pivots):
            col = self.entering(bland=stalled >= DEGENERATE_SWITCH)
            if col is None:
                return OPTIMAL, k
            row, _ = self.leaving(col)
            if row is None:
                return UNBOUNDED, k
            self.pivot(row, col)
            if (k + 1) % REINVERT_EVERY == 0:
                self.reinvert()
            after = self.objective
            stalled = stalled + 1 if before - after <= STALL_TOL * (1.0 + abs(before)) else 0
            before = after
        raise SolverError(f"{phase} : plafond de {max_pivots} pivots atteint (cyclage ?)")


def solve_standard_form(
    a: FloatArray,
    b: FloatArray,
    c: FloatArray,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> SimplexResult:
    """Résout min cᵀx, A·x = b, x ≥ 0.

    `duals` (y, tel que Aᵀy ≤ c à l'optimum) est calculé depuis la base
    finale sur les données d'origine ; nul sur les lignes redondantes.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).copy()
    c = np.asarray(c, dtype=np.float64)
    if a.ndim != 2 or b.shape != (a.shape[0],) or c.shape != (a.shape[1],):
        raise DimensionError(f"Formes incompatibles : A {a.shape}, b {b.shape}, c {c.shape}")
    m, n = a.shape

    signs = np.where(b < 0, -1.0, 1.0)
    a = a * signs[:, None]
    b = b * signs

    # Phase 1
    cols = np.hstack([a, np.eye(m)])
    costs1 = np.concatenate([np.zeros(n), np.ones(m)])
    tab = _Tableau(cols, b, costs1, range(n, n + m))
    _, p1 = tab.run(max_pivots, "phase 1")
    infeasibility = tab.objective
    if infeasibility > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        logger.debug("Phase 1 : infaisable (somme des artificielles = %.3e)", infeasibility)
        return SimplexResult(INFEASIBLE, pivots={"phase1": p1, "phase2": 0})

    kept: list[int] = []
    redundant: list[int] = []
    for r in range(m):
        if tab.basis[r] < n:
            kept.append(r)
            continue
        row_vals = np.abs(tab.table[r, :n])
        j = int(np.argmax(row_vals))
        if row_vals[j] > PIVOT_TOL:
            tab.pivot(r, j)
            kept.append(r)
        else:
            redundant.append(r)
    if redundant:
        logger.debug("Lignes redondantes retirées : %s", redundant)

    # Phase 2
    basis2 = [tab.basis[r] for r in kept]
    a2, b2 = a[kept], b[kept]
    tab2 = _Tableau(a2, b2, c, basis2)
    status, p2 = tab2.run(max_pivots, "phase 2")
    pivots = {"phase1": p1, "phase2": p2}
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, pivots=pivots, redundant_rows=redundant)

    x = np.zeros(n)
    x[tab2.basis] = np.maximum(tab2.table[:-1, -1], 0.0)
    bmat = a2[:, tab2.basis]
    y_kept = np.linalg.solve(bmat.T, c[tab2.basis])
    duals = np.zeros(m)
    duals[kept] = y_kept
    duals *= signs
    logger.debug("Simplexe : optimum %.12g (%d + %d pivots)", float(c @ x), p1, p2)
    return SimplexResult(
        OPTIMAL,
        x=x,
        objective=float(c @ x),
        duals=duals,
        basis=list(tab2.basis),
        redundant_rows=redundant,
        pivots=pivots,
    )
