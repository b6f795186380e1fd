"""Smoke tests : vérifient que les imports et l'initialisation de base passent.

Ces tests ne valident pas la logique numérique, juste que le package
n'est pas cassé au niveau structurel (imports, point d'entrée, parser).
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


def test_import_indexbound_package():
    import indexbound

    assert indexbound.__version__
    # La version du package doit être alignée avec pyproject (0.1.x)
    assert indexbound.__version__.startswith("0.1")


def test_all_submodules_import():
    import importlib

    for mod in (
        "indexbound.errors",
        "indexbound.matgap",
        "indexbound.specfun",
        "indexbound.slepian",
        "indexbound.slepian.quadrature",
        "indexbound.slepian.concentration",
        "indexbound.designer",
        "indexbound.designer.simplex",
        "indexbound.designer.constraints",
        "indexbound.designer.feasibility",
        "indexbound.designer.search",
        "indexbound.report",
        "indexbound.config",
        "indexbound.acceptance",
        "indexbound.cli",
        "indexbound.__main__",
    ):
        importlib.import_module(mod)


def test_error_hierarchy_has_single_root():
    from indexbound import errors

    for name in (
        "DimensionError",
        "ContractError",
        "SpectralGapError",
        "GapTooSmallError",
        "DefectiveMatrixError",
        "InfeasibleThresholdError",
        "IterationError",
        "DomainError",
        "SolverError",
        "InputError",
    ):
        assert issubclass(getattr(errors, name), errors.IndexBoundError)
    assert issubclass(errors.GapTooSmallError, errors.SpectralGapError)


def test_parser_exposes_subcommands():
    from indexbound.cli import _build_parser

    parser = _build_parser()
    for command in ("constant", "design", "chi-plot", "verify-paper"):
        args = parser.parse_args([command])
        assert args.command == command


def test_pyproject_version_matches_package():
    import indexbound

    text = (ROOT / "pyproject.toml").read_text(encoding="utf-8")
    assert f'version = "{indexbound.__version__}"' in text
