"""Configuration d'exécution : défauts ← YAML ← flags CLI.

Fichier YAML (voir config/indexbound.yaml) :

    logging:    {level: INFO, json: false}
    design:     {modes, eps_lo, eps_hi, amp_bound, grid_step, x_max, lp_margin, sigma_tol}
    slepian:    {quad_order, beta_grid, theta_grid, sigma_tol}
    output:     {format, out}
    acceptance: {modes: [5, 20, 50], jobs: 1}

Toute clé absente garde sa valeur par défaut ; une clé inconnue est
signalée en WARNING (faute de frappe probable) puis ignorée.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .designer.constraints import DesignParams
from .errors import InputError
from .report import FORMATS
from .slepian.quadrature import MAX_ORDER

logger = logging.getLogger("indexbound.config")

DEFAULT_CONFIG_PATH = "config/indexbound.yaml"

# (section, clé YAML) → champ de RunConfig
_YAML_FIELDS: dict[tuple[str, str], str] = {
    ("logging", "level"): "log_level",
    ("logging", "json"): "log_json",
    ("design", "modes"): "modes",
    ("design", "eps_lo"): "eps_lo",
    ("design", "eps_hi"): "eps_hi",
    ("design", "amp_bound"): "amp_bound",
    ("design", "grid_step"): "grid_step",
    ("design", "x_max"): "x_max",
    ("design", "lp_margin"): "lp_margin",
    ("design", "sigma_tol"): "sigma_tol",
    ("slepian", "quad_order"): "quad_order",
    ("slepian", "beta_grid"): "beta_grid",
    ("slepian", "theta_grid"): "theta_grid",
    ("slepian", "sigma_tol"): "slepian_sigma_tol",
    ("output", "format"): "format",
    ("output", "out"): "out",
    ("acceptance", "modes"): "acceptance_modes",
    ("acceptance", "jobs"): "jobs",
}


@dataclass(frozen=True)
class RunConfig:
    modes: int = 5
    eps_lo: float = 0.03022
    eps_hi: float = 0.02928
    amp_bound: float = 1.2
    grid_step: float = 0.005
    x_max: float = 60.0
    lp_margin: float = 1e-5
    sigma_tol: float = 1e-4
    quad_order: int = 200
    beta_grid: float = 1e-4
    theta_grid: float = 1e-5
    slepian_sigma_tol: float = 1e-10
    format: str = "json"
    out: str | None = None
    log_level: str = "INFO"
    log_json: bool = False
    jobs: int = 1
    acceptance_modes: tuple[int, ...] = field(default=(5, 20, 50))

    @classmethod
    def from_sources(
        cls,
        yaml_data: dict[str, Any] | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> RunConfig:
        """Défauts, puis sections YAML, puis flags CLI (valeurs None ignorées)."""
        values: dict[str, Any] = {}
        for section, content in (yaml_data or {}).items():
            if not isinstance(content, dict):
                raise InputError(f"Section `{section}` : mapping attendu")
            for key, value in content.items():
                name = _YAML_FIELDS.get((section, key))
                if name is None:
                    logger.warning("Clé de configuration inconnue ignorée : %s.%s", section, key)
                    continue
                values[name] = value
        known = {f.name for f in fields(cls)}
        for name, value in (overrides or {}).items():
            if value is not None and name in known:
                values[name] = value
        if "acceptance_modes" in values:
            values["acceptance_modes"] = tuple(values["acceptance_modes"])
        try:
            config = replace(cls(), **values)
        except TypeError as exc:
            raise InputError(f"Configuration invalide : {exc}") from exc
        config.validate()
        return config

    def validate(self) -> None:
        def _positive(name: str) -> None:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise InputError(f"`{name}` doit être un nombre > 0, reçu {value!r}")

        for name in ("eps_lo", "eps_hi", "amp_bound", "grid_step", "x_max", "sigma_tol",
                     "beta_grid", "theta_grid", "slepian_sigma_tol"):
            _positive(name)
        if not isinstance(self.modes, int) or self.modes < 1:
            raise InputError(f"`modes` doit être un entier ≥ 1, reçu {self.modes!r}")
        if self.amp_bound < 1.0 + self.eps_hi:
            raise InputError(f"`amp_bound` ({self.amp_bound}) doit être ≥ 1 + eps_hi")
        if self.grid_step > 0.01:
            raise InputError(f"`grid_step` doit être ≤ 0.01, reçu {self.grid_step}")
        if self.lp_margin < 0:
            raise InputError(f"`lp_margin` doit être ≥ 0, reçu {self.lp_margin}")
        if self.beta_grid > 0.01:
            raise InputError(f"`beta_grid` doit être ≤ 0.01, reçu {self.beta_grid}")
        if self.theta_grid > 1e-4:
            raise InputError(f"`theta_grid` doit être ≤ 1e-4, reçu {self.theta_grid}")
        if not isinstance(self.quad_order, int) or not (1 <= self.quad_order <= MAX_ORDER):
            raise InputError(f"`quad_order` doit être dans [1, {MAX_ORDER}], reçu {self.quad_order!r}")
        if self.format not in FORMATS:
            raise InputError(f"`format` doit être parmi {FORMATS}, reçu {self.format!r}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise InputError(f"`jobs` doit être un entier ≥ 1, reçu {self.jobs!r}")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise InputError(f"Niveau de log inconnu : {self.log_level!r}")
        if not self.acceptance_modes or any(not isinstance(m, int) or m < 1 for m in self.acceptance_modes):
            raise InputError(f"`acceptance.modes` invalide : {self.acceptance_modes!r}")

    def design_params(self, modes: int | None = None) -> DesignParams:
        return DesignParams.for_modes(
            self.modes if modes is None else modes,
            eps_lo=self.eps_lo,
            eps_hi=self.eps_hi,
            amp_bound=self.amp_bound,
            grid_step=self.grid_step,
            x_max=self.x_max,
            lp_margin=self.lp_margin,
        )

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["acceptance_modes"] = list(self.acceptance_modes)
        return d


def load_config(path: str | Path | None) -> dict[str, Any]:
    """Lit le YAML ; chemin None ou fichier par défaut absent → {}."""
    if path is None:
        default = Path(DEFAULT_CONFIG_PATH)
        if not default.is_file():
            return {}
        path = default
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise InputError(f"Configuration illisible ({path}) : {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InputError(f"Configuration {path} : mapping YAML attendu à la racine")
    logger.info("Configuration chargée depuis %s", path)
    return data
