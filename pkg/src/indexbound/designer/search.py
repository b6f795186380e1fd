"""Minimisation de σ (bissection sur la faisabilité LP) et vérification des profils.

Le plus petit σ pour lequel le système de `build_constraints` est
faisable se cherche par bissection sur [0.5, 3.0], en supposant la
faisabilité croissante en σ. L'hypothèse est contrôlée par des sondes
au-dessus du résultat ; en cas de violation, on bascule sur un balayage
croissant à pas fixe suivi d'une bissection locale.

`verify_profile` re-contrôle un profil indépendamment du solveur, avec
`specfun` sur une grille 10× plus fine et le certificat de queue.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from ..errors import ContractError, DomainError
from ..report import ConstantReport
from ..specfun import CosineProfile, chi_values, tail_bound
from .constraints import X_MARGIN, DesignParams, build_constraints
from .feasibility import FeasibilityResult, solve_feasibility

logger = logging.getLogger("indexbound.designer")

SIGMA_BRACKET = (0.5, 3.0)
DEFAULT_SIGMA_TOL = 1e-4
# Décalages des sondes de monotonie au-dessus du σ trouvé.
SPOT_CHECK_OFFSETS = (0.002, 0.02, 0.2)
FALLBACK_SCAN_STEP = 0.01
# Un profil passe si sa pire marge est ≥ −PASS_TOLERANCE.
PASS_TOLERANCE = 1e-7
VERIFY_REFINEMENT = 10
_CHUNK = 100_000


@dataclass
class SigmaSearchResult:
    sigma: float
    profile: CosineProfile
    min_slack: float
    trials: list[dict[str, Any]] = field(default_factory=list)
    fallback_scan: bool = False


class _SigmaTrials:
    """Sonde σ ↦ faisabilité, avec journal des sondes pour les diagnostics."""

    def __init__(self, params: DesignParams):
        self.params = params
        self.trials: list[dict[str, Any]] = []

    def __call__(self, sigma: float) -> FeasibilityResult:
        res = solve_feasibility(build_constraints(self.params.with_sigma(sigma)))
        self.trials.append(
            {
                "sigma": sigma,
                "feasible": res.feasible,
                "min_slack": res.min_slack,
                "pivots": sum(res.pivots.values()),
            }
        )
        logger.debug("σ = %.6f : %s (marge %s)", sigma, "faisable" if res.feasible else "infaisable", res.min_slack)
        return res


def _bisect(
    trial: _SigmaTrials, lo: float, hi: float, hi_res: FeasibilityResult, tol: float
) -> tuple[float, FeasibilityResult]:
    """lo infaisable, hi faisable ; resserre jusqu'à hi − lo < tol."""
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        res = trial(mid)
        if res.feasible:
            hi, hi_res = mid, res
        else:
            lo = mid
    return hi, hi_res


def search_sigma(
    n: int,
    params: DesignParams | None = None,
    tol: float = DEFAULT_SIGMA_TOL,
) -> SigmaSearchResult:
    if n < 1:
        raise DomainError(f"n doit être ≥ 1, reçu {n}")
    if not tol > 0:
        raise DomainError(f"tol doit être > 0, reçu {tol}")
    lo, hi = SIGMA_BRACKET
    base = replace(params or DesignParams(), n=n, sigma=None)
    needed = hi + math.pi * n + X_MARGIN
    if base.x_max < needed:
        base = replace(base, x_max=float(math.ceil(needed)))
        logger.info("x_max étendu à %.1f pour couvrir σ + π·n", base.x_max)
    base.validate()

    trial = _SigmaTrials(base)
    hi_res = trial(hi)
    if not hi_res.feasible:
        raise DomainError(f"Infaisable dès σ = {hi} : paramètres trop serrés (n = {n})")
    lo_res = trial(lo)
    if lo_res.feasible:
        logger.warning("Faisable dès la borne basse σ = %.3f", lo)
        assert lo_res.profile is not None and lo_res.min_slack is not None
        return SigmaSearchResult(lo, lo_res.profile, lo_res.min_slack, trial.trials)

    sigma, best = _bisect(trial, lo, hi, hi_res, tol)

    violations = [s for s in (sigma + off for off in SPOT_CHECK_OFFSETS) if s < hi and not trial(s).feasible]
    fallback = bool(violations)
    if fallback:
        logger.warning("Faisabilité non monotone en σ (sondes %s) : balayage croissant", violations)
        grid = np.arange(lo, hi + 1e-12, FALLBACK_SCAN_STEP)
        prev = lo
        for s in grid[1:]:
            res = trial(float(s))
            if res.feasible:
                sigma, best = _bisect(trial, prev, float(s), res, tol)
                break
            prev = float(s)

    assert best.profile is not None and best.min_slack is not None
    logger.info("σ minimal (n = %d) : %.6f en %d sondes", n, sigma, len(trial.trials))
    return SigmaSearchResult(sigma, best.profile, best.min_slack, trial.trials, fallback)


def minimize_sigma(
    n: int,
    params: DesignParams | None = None,
    tol: float = DEFAULT_SIGMA_TOL,
) -> tuple[float, CosineProfile]:
    res = search_sigma(n, params, tol)
    return res.sigma, res.profile


# --------------------------------------------------------------------- #
# Vérification indépendante
# --------------------------------------------------------------------- #


@dataclass
class VerificationReport:
    sigma: float
    n: int
    grid_step: float
    points: int
    slacks: dict[str, float]
    locations: dict[str, float]

    @property
    def worst_family(self) -> str:
        return min(self.slacks, key=lambda k: self.slacks[k])

    @property
    def worst_slack(self) -> float:
        return self.slacks[self.worst_family]

    def passes(self, tolerance: float = PASS_TOLERANCE) -> bool:
        return self.worst_slack >= -tolerance

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["worst_family"] = self.worst_family
        d["worst_slack"] = self.worst_slack
        d["passes"] = self.passes()
        return d


def _chunked_chi(profile: CosineProfile, xs: np.ndarray) -> np.ndarray:
    return np.concatenate([chi_values(profile, xs[i : i + _CHUNK]) for i in range(0, xs.size, _CHUNK)])


def verify_profile(profile: CosineProfile, params: DesignParams) -> VerificationReport:
    if profile.n != params.n:
        raise ContractError(f"Profil à {profile.n + 1} coefficients, attendu {params.n + 1}")
    if params.sigma is None:
        raise ContractError("verify_profile exige params.sigma")
    sigma = params.sigma
    h = params.grid_step / VERIFY_REFINEMENT

    slacks: dict[str, float] = {}
    locations: dict[str, float] = {}
    total = profile.total
    slacks["equality"] = -abs(total - 1.0)

    band_x = sigma + h * np.arange(0, math.ceil((params.x_max - sigma) / h) + 1)
    band_x = np.minimum(band_x, params.x_max)
    chi = _chunked_chi(profile, band_x)
    lower = chi - (1.0 - params.eps_lo)
    upper = (1.0 + params.eps_hi) - chi
    for name, values in (("band_lower", lower), ("band_upper", upper)):
        i = int(np.argmin(values))
        slacks[name] = float(values[i])
        locations[name] = float(band_x[i])

    cap_x = h * np.arange(1, math.ceil(sigma / h))
    cap_x = cap_x[cap_x < sigma]
    if cap_x.size:
        cap = params.amp_bound - np.abs(_chunked_chi(profile, cap_x))
        i = int(np.argmin(cap))
        slacks["cap"] = float(cap[i])
        locations["cap"] = float(cap_x[i])

    if params.x_max > 0.5 * math.pi * profile.n:
        bound = tail_bound(profile, params.x_max)
        slacks["tail"] = min(params.eps_lo, params.eps_hi) - bound - abs(total - 1.0)
        locations["tail"] = params.x_max
    else:
        slacks["tail"] = -math.inf

    report = VerificationReport(
        sigma=sigma,
        n=profile.n,
        grid_step=h,
        points=int(band_x.size + cap_x.size),
        slacks=slacks,
        locations=locations,
    )
    logger.debug("Vérification σ=%.6f : pire marge %.3e (%s)", sigma, report.worst_slack, report.worst_family)
    return report


def design_report(
    n: int,
    params: DesignParams | None = None,
    tol: float = DEFAULT_SIGMA_TOL,
) -> ConstantReport:
    """σ minimal, profil, vérification et C = 30σ dans un rapport `lp`."""
    base = DesignParams.for_modes(n, **_overrides(params))
    started = time.perf_counter()
    search = search_sigma(n, base, tol)
    verification = verify_profile(search.profile, base.with_sigma(search.sigma))
    elapsed = time.perf_counter() - started

    inputs = base.to_dict()
    inputs.pop("sigma", None)
    inputs["sigma_tol"] = tol
    report = ConstantReport.build(
        "lp",
        search.sigma,
        inputs=inputs,
        profile=search.profile,
        diagnostics={
            "lp_min_slack": search.min_slack,
            "trials": search.trials,
            "fallback_scan": search.fallback_scan,
            "verification": verification.to_dict(),
            "runtime_s": round(elapsed, 4),
        },
    )
    if not verification.passes():
        logger.warning(
            "Profil n=%d : pire marge %.3e (%s) sous la tolérance",
            n,
            verification.worst_slack,
            verification.worst_family,
        )
    logger.info("Méthode LP (n = %d) : σ = %.6f, C = %.4f (%.1fs)", n, search.sigma, report.C, elapsed)
    return report


def _overrides(params: DesignParams | None) -> dict[str, Any]:
    if params is None:
        return {}
    d = params.to_dict()
    d.pop("n", None)
    d.pop("sigma", None)
    return d
