"""Rapports de constante : structure, sérialisation et provenance.

Un `ConstantReport` porte toute la chaîne d'une exécution (β, seuil, θ,
σ, C, profil, diagnostics) pour qu'un chiffre publié puisse être
audité. Format JSON (un document par exécution) :

    {
      "method": "slepian" | "lp",
      "inputs": { ... },                 # paramètres effectifs
      "chain": [{"name": "beta", "value": 1.04015}, ...],
      "result": {"sigma": ..., "C": ...},
      "profile": [a_0, ..., a_n],        # méthode lp uniquement
      "diagnostics": { ... },
      "provenance": {
        "version": "0.1.0",
        "generated_at": "2026-10-16T08:00:00+00:00",
        "inputs_sha256": "<sha256 hex>"  # JSON canonique de `inputs`
      }
    }

`from_dict` ignore `chain` et `provenance` (dérivés) : relire un rapport
sérialisé redonne un objet égal champ à champ.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__
from .errors import ContractError, DomainError, InputError
from .specfun import CosineProfile

logger = logging.getLogger("indexbound.report")

# Rayon du support de Fourier de χ̂ (supporté dans [-2, 2]).
SUPPORT_RADIUS = 2.0
# C = 15·t₀ dans l'énoncé quantitatif.
PROPAGATION_FACTOR = 15.0

METHODS = ("slepian", "lp")
FORMATS = ("json", "csv", "text")

# Ordre fixe des maillons de la chaîne.
_CHAIN_FIELDS = ("beta", "threshold", "theta", "sigma", "C")


def universal_constant(sigma: float) -> float:
    """C = σ·2·15."""
    if not math.isfinite(sigma) or sigma < 0:
        raise DomainError(f"sigma doit être ≥ 0, reçu {sigma}")
    return sigma * SUPPORT_RADIUS * PROPAGATION_FACTOR


def canonical_sha256(payload: dict[str, Any]) -> str:
    """SHA-256 du JSON canonique (clés triées, séparateurs compacts)."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class ConstantReport:
    method: str
    sigma: float
    C: float
    inputs: dict[str, Any] = field(default_factory=dict)
    beta: float | None = None
    threshold: float | None = None
    theta: float | None = None
    profile: CosineProfile | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ContractError(f"Méthode inconnue : {self.method!r}")
        if self.C != universal_constant(self.sigma):
            raise ContractError(f"C = {self.C} ≠ 30·σ = {universal_constant(self.sigma)}")
        if self.method == "lp" and self.profile is None:
            raise ContractError("Un rapport lp doit porter un profil")

    @classmethod
    def build(cls, method: str, sigma: float, **kwargs: Any) -> ConstantReport:
        return cls(method=method, sigma=sigma, C=universal_constant(sigma), **kwargs)

    def chain(self) -> list[dict[str, Any]]:
        out = []
        for name in _CHAIN_FIELDS:
            value = getattr(self, name)
            if value is not None:
                out.append({"name": name, "value": value})
        return out

    def to_dict(self, *, with_provenance: bool = True) -> dict[str, Any]:
        d: dict[str, Any] = {
            "method": self.method,
            "inputs": self.inputs,
            "chain": self.chain(),
            "result": {"sigma": self.sigma, "C": self.C},
        }
        if self.profile is not None:
            d["profile"] = self.profile.to_list()
        d["diagnostics"] = self.diagnostics
        if with_provenance:
            d["provenance"] = {
                "version": __version__,
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "inputs_sha256": canonical_sha256(self.inputs),
            }
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ConstantReport:
        try:
            chain = {item["name"]: item["value"] for item in d.get("chain", [])}
            profile = d.get("profile")
            return cls(
                method=d["method"],
                sigma=float(d["result"]["sigma"]),
                C=float(d["result"]["C"]),
                inputs=dict(d.get("inputs") or {}),
                beta=chain.get("beta"),
                threshold=chain.get("threshold"),
                theta=chain.get("theta"),
                profile=CosineProfile.from_sequence(profile) if profile is not None else None,
                diagnostics=dict(d.get("diagnostics") or {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"Rapport invalide : {exc}") from exc


# --------------------------------------------------------------------- #
# Rendu
# --------------------------------------------------------------------- #


def render_json(report: ConstantReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def render_text(report: ConstantReport) -> str:
    lines = [f"Méthode : {report.method}"]
    for item in report.chain():
        lines.append(f"  {item['name']:<10} = {item['value']:.10g}")
    if report.profile is not None:
        lines.append(f"  profil (n = {report.profile.n}) :")
        for k, a in enumerate(report.profile.coeffs):
            lines.append(f"    a_{k:<3} = {a:+.10e}")
    for key, value in report.diagnostics.items():
        if not isinstance(value, (dict, list)):
            lines.append(f"  [{key}] {value}")
    return "\n".join(lines) + "\n"


def _fmt17(value: float) -> str:
    return format(value, ".17g")


def render_csv_rows(header: tuple[str, ...], rows: Iterable[Iterable[float]]) -> str:
    """CSV indépendant de la locale : point décimal, 17 chiffres significatifs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt17(float(v)) for v in row])
    return buf.getvalue()


def render_report_csv(report: ConstantReport) -> str:
    """Profil (k, a_k) pour la méthode lp, chaîne (name, value) sinon."""
    if report.profile is not None:
        return render_csv_rows(("k", "a_k"), enumerate(report.profile.coeffs))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("name", "value"))
    for item in report.chain():
        writer.writerow((item["name"], _fmt17(item["value"])))
    return buf.getvalue()


def render_report(report: ConstantReport, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_report_csv(report)
    if fmt == "text":
        return render_text(report)
    raise InputError(f"Format inconnu : {fmt!r} (attendu : {', '.join(FORMATS)})")


def emit(text: str, out: str | Path | None) -> None:
    """Écrit sur `out` (création des dossiers parents) ou sur stdout."""
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Écriture impossible sur {path} : {exc}") from exc
    logger.info("Rapport écrit : %s", path)


def load_report(path: str | Path) -> ConstantReport:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"Lecture du rapport {path} impossible : {exc}") from exc
    return ConstantReport.from_dict(data)
