"""Point d'entrée CLI d'IndexBound.

Expose `main()`, lié à la commande `indexbound` après `pip install`,
et utilisable via `python -m indexbound`.

Sous-commandes :
  - constant --method {slepian|lp} → chaîne complète jusqu'à C = 30σ.
  - design                         → σ minimal + profil pour --modes
                                     (ou une seule sonde avec --sigma).
  - chi-plot                       → échantillons CSV (x, χ_f(x)).
  - verify-paper                   → tableau des critères d'acceptation.

Codes de sortie : 0 succès, 1 échec numérique / infaisabilité,
2 erreur d'usage (flags, configuration, fichier illisible).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .config import DEFAULT_CONFIG_PATH, RunConfig, load_config
from .errors import IndexBoundError, InputError
from .report import FORMATS, ConstantReport, emit, render_csv_rows, render_report
from .specfun import PUBLISHED_N5_PROFILE, CosineProfile, chi_values

# Force UTF-8 sur stdout/stderr (Windows utilise cp1252 par défaut).
if hasattr(sys.stdout, "reconfigure"):
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")

logger = logging.getLogger("indexbound.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
MAX_PLOT_SAMPLES = 10_000_000


def _setup_logging(level: str, json_logs: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        try:
            from pythonjsonlogger.json import JsonFormatter
        except ImportError:  # python-json-logger < 3
            from pythonjsonlogger.jsonlogger import JsonFormatter
        handler.setFormatter(JsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), handlers=[handler], force=True)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        name: getattr(args, name, None)
        for name in (
            "modes",
            "eps_lo",
            "eps_hi",
            "amp_bound",
            "grid_step",
            "x_max",
            "lp_margin",
            "sigma_tol",
            "quad_order",
            "beta_grid",
            "theta_grid",
            "format",
            "out",
            "jobs",
            "acceptance_modes",
        )
    }
    if getattr(args, "debug", False):
        overrides["log_level"] = "DEBUG"
    if getattr(args, "log_json", False):
        overrides["log_json"] = True
    return RunConfig.from_sources(load_config(args.config), overrides)


# --------------------------------------------------------------------- #
# Sous-commandes
# --------------------------------------------------------------------- #


def cmd_constant(args: argparse.Namespace, config: RunConfig) -> int:
    if args.method == "slepian":
        from .slepian import slepian_constant

        report = slepian_constant(
            config.beta_grid,
            config.quad_order,
            theta_grid_step=config.theta_grid,
            sigma_tol=config.slepian_sigma_tol,
        )
    else:
        from .designer import design_report

        report = design_report(config.modes, config.design_params(), config.sigma_tol)
    emit(render_report(report, config.format), config.out)
    return EXIT_OK


def cmd_design(args: argparse.Namespace, config: RunConfig) -> int:
    from .designer import build_constraints, design_report, solve_feasibility, verify_profile

    if args.sigma is None:
        report = design_report(config.modes, config.design_params(), config.sigma_tol)
        emit(render_report(report, config.format), config.out)
        return EXIT_OK

    params = config.design_params().with_sigma(args.sigma)
    result = solve_feasibility(build_constraints(params))
    if not result.feasible or result.profile is None:
        print(f"Infaisable : σ = {args.sigma} (n = {config.modes}, marge {result.min_slack})", file=sys.stderr)
        return EXIT_FAILURE
    verification = verify_profile(result.profile, params)
    inputs = params.to_dict()
    report = ConstantReport.build(
        "lp",
        args.sigma,
        inputs=inputs,
        profile=result.profile,
        diagnostics={
            "lp_min_slack": result.min_slack,
            "pivots": result.pivots,
            "verification": verification.to_dict(),
        },
    )
    emit(render_report(report, config.format), config.out)
    return EXIT_OK


def _load_profile(path: str) -> CosineProfile:
    """Profil depuis un fichier : JSON (liste ou rapport avec `profile`) ou CSV / texte."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Profil illisible ({path}) : {exc}") from exc
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict):
        data = data.get("profile")
    if isinstance(data, list):
        return CosineProfile.from_sequence(data)

    values: list[str] = []
    for line in text.splitlines():
        cells = [c.strip() for c in line.replace(";", ",").split(",") if c.strip()]
        if not cells or cells[0].startswith("#"):
            continue
        if len(cells) == 1 and " " in cells[0]:
            values.extend(cells[0].split())
            continue
        values.append(cells[-1])
    if values:
        try:
            float(values[0])
        except ValueError:
            values = values[1:]  # en-tête CSV (k,a_k)
    try:
        coeffs = [float(v) for v in values]
    except ValueError as exc:
        raise InputError(f"Coefficient illisible dans {path} : {exc}") from exc
    if not coeffs:
        raise InputError(f"Aucun coefficient lisible dans {path}")
    return CosineProfile.from_sequence(coeffs)


def cmd_chi_plot(args: argparse.Namespace, config: RunConfig) -> int:
    if not args.step > 0:
        raise InputError(f"--step doit être > 0, reçu {args.step}")
    if args.plot_x_max < args.plot_x_min:
        raise InputError(f"--x-max ({args.plot_x_max}) < --x-min ({args.plot_x_min})")
    count = int(np.floor((args.plot_x_max - args.plot_x_min) / args.step + 1e-9)) + 1
    if count > MAX_PLOT_SAMPLES:
        raise InputError(f"{count} échantillons demandés (max {MAX_PLOT_SAMPLES})")

    profile = PUBLISHED_N5_PROFILE if args.profile == "paper-n5" else _load_profile(args.profile)
    xs = np.round(args.plot_x_min + args.step * np.arange(count), 12)
    values = chi_values(profile, xs)
    if args.format not in (None, "csv"):
        logger.warning("chi-plot n'émet que du CSV (format %s ignoré)", args.format)
    emit(render_csv_rows(("x", "chi"), zip(xs, values, strict=True)), config.out)
    logger.info("chi-plot : %d échantillons (n = %d)", count, profile.n)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace, config: RunConfig) -> int:
    from .acceptance import render_table, run_acceptance

    checks = run_acceptance(config)
    print(render_table(checks), end="")
    failed = [c.name for c in checks if not c.passed]
    if config.out:
        payload = {
            "version": __version__,
            "config": config.to_dict(),
            "checks": [c.to_dict() for c in checks],
            "passed": not failed,
        }
        emit(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", config.out)
    if failed:
        print(f"{len(failed)} critère(s) en échec : {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"Tous les critères sont satisfaits ({len(checks)}).")
    return EXIT_OK


# --------------------------------------------------------------------- #
# Parser
# --------------------------------------------------------------------- #


def _output_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", default=None, help="Fichier de sortie (défaut : stdout)")
    p.add_argument("--format", choices=FORMATS, default=None, help=f"Format de sortie (défaut {RunConfig().format})")
    return p


def _design_parent() -> argparse.ArgumentParser:
    defaults = RunConfig()
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--modes", type=int, default=None, help=f"Nombre de modes n (défaut {defaults.modes})")
    p.add_argument("--eps-lo", type=float, default=None, dest="eps_lo", help=f"ε₁, bande sous 1 (défaut {defaults.eps_lo})")
    p.add_argument("--eps-hi", type=float, default=None, dest="eps_hi", help=f"ε₂, bande au-dessus de 1 (défaut {defaults.eps_hi})")
    p.add_argument("--amp-bound", type=float, default=None, dest="amp_bound", help=f"Plafond |χ_f| (défaut {defaults.amp_bound})")
    p.add_argument("--grid-step", type=float, default=None, dest="grid_step", help=f"Pas de grille (défaut {defaults.grid_step})")
    p.add_argument("--x-max", type=float, default=None, dest="x_max", help=f"Fin de grille (défaut {defaults.x_max})")
    p.add_argument("--lp-margin", type=float, default=None, dest="lp_margin", help=f"Marge LP minimale (défaut {defaults.lp_margin})")
    p.add_argument("--quad-order", type=int, default=None, dest="quad_order", help=f"Ordre de Gauss-Legendre (défaut {defaults.quad_order})")
    p.add_argument("--sigma-tol", type=float, default=None, dest="sigma_tol", help=f"Tolérance de bissection sur σ (défaut {defaults.sigma_tol})")
    p.add_argument("--beta-grid", type=float, default=None, dest="beta_grid", help=f"Pas du balayage de β (défaut {defaults.beta_grid})")
    p.add_argument("--theta-grid", type=float, default=None, dest="theta_grid", help=f"Pas du balayage de θ (défaut {defaults.theta_grid})")
    return p


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indexbound",
        description="IndexBound : bornes certifiées de la constante universelle C",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-c",
        "--config",
        default=None,
        help=f"Fichier de configuration YAML (défaut : {DEFAULT_CONFIG_PATH} s'il existe)",
    )
    parser.add_argument("--debug", action="store_true", help="Active le mode debug")
    parser.add_argument("--log-json", action="store_true", dest="log_json", help="Logs JSON sur stderr")

    output = _output_parent()
    common = _design_parent()
    subparsers = parser.add_subparsers(dest="command", required=True)

    constant_p = subparsers.add_parser("constant", parents=[output, common], help="Calcule C par une des deux méthodes")
    constant_p.add_argument("--method", choices=("slepian", "lp"), default="slepian")

    design_p = subparsers.add_parser("design", parents=[output, common], help="σ minimal et profil optimal")
    design_p.add_argument("--sigma", type=float, default=None, help="Sonde de faisabilité à σ fixé")

    plot_p = subparsers.add_parser("chi-plot", parents=[output], help="Échantillons CSV de χ_f")
    plot_p.add_argument(
        "--profile",
        default="paper-n5",
        help="`paper-n5` ou chemin d'un fichier de coefficients (JSON, CSV, texte)",
    )
    plot_p.add_argument("--x-min", type=float, default=0.0, dest="plot_x_min")
    plot_p.add_argument("--x-max", type=float, default=10.0, dest="plot_x_max")
    plot_p.add_argument("--step", type=float, default=0.01)

    verify_p = subparsers.add_parser("verify-paper", parents=[output, common], help="Critères d'acceptation")
    verify_p.add_argument("--jobs", type=int, default=None, help="Tâches en parallèle (threads)")
    verify_p.add_argument(
        "--acceptance-modes",
        type=int,
        nargs="+",
        default=None,
        dest="acceptance_modes",
        help="Valeurs de n des recherches LP (défaut 5 20 50)",
    )
    return parser


_COMMANDS = {
    "constant": cmd_constant,
    "design": cmd_design,
    "chi-plot": cmd_chi_plot,
    "verify-paper": cmd_verify_paper,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        config = _config_from_args(args)
    except InputError as exc:
        print(f"Erreur de configuration : {exc}", file=sys.stderr)
        return EXIT_USAGE
    _setup_logging(config.log_level, config.log_json)
    if args.debug:
        logger.debug("Mode debug activé")
    logger.debug("Configuration : %s", config.to_dict())

    try:
        return _COMMANDS[args.command](args, config)
    except InputError as exc:
        print(f"Erreur d'entrée : {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IndexBoundError as exc:
        print(f"Échec ({type(exc).__name__}) : {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
