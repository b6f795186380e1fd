"""Tests de la configuration d'exécution (indexbound.config).

Couverts :
  - fichier livré config/indexbound.yaml = valeurs par défaut
  - priorité défauts ← YAML ← flags CLI
  - clés inconnues signalées, valeurs invalides rejetées (InputError)
  - fichier par défaut absent, YAML illisible ou mal formé
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


@pytest.fixture
def yaml_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "design:\n"
        "  modes: 7\n"
        "  eps_lo: 0.05\n"
        "slepian:\n"
        "  quad_order: 300\n"
        "acceptance:\n"
        "  modes: [5]\n"
        "  jobs: 2\n"
        "logging:\n"
        "  json: true\n",
        encoding="utf-8",
    )
    return path


def test_shipped_config_matches_defaults():
    from indexbound.config import RunConfig, load_config

    data = load_config(ROOT / "config" / "indexbound.yaml")
    assert RunConfig.from_sources(data) == RunConfig()


def test_yaml_then_cli_precedence(yaml_file):
    from indexbound.config import RunConfig, load_config

    config = RunConfig.from_sources(load_config(yaml_file), {"modes": 9, "eps_hi": None})
    assert config.modes == 9
    assert config.eps_lo == 0.05
    assert config.eps_hi == RunConfig().eps_hi
    assert config.quad_order == 300
    assert config.acceptance_modes == (5,)
    assert config.jobs == 2
    assert config.log_json is True
    assert config.to_dict()["acceptance_modes"] == [5]


def test_unknown_key_is_reported(caplog):
    from indexbound.config import RunConfig

    with caplog.at_level(logging.WARNING, logger="indexbound.config"):
        config = RunConfig.from_sources({"design": {"modez": 3}})
    assert config == RunConfig()
    assert "design.modez" in caplog.text


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid_step": 0.5},
        {"eps_lo": -0.1},
        {"amp_bound": 1.01},
        {"modes": 0},
        {"quad_order": 5000},
        {"format": "xml"},
        {"jobs": 0},
        {"log_level": "LOUD"},
        {"theta_grid": 1e-3},
        {"acceptance_modes": []},
    ],
)
def test_invalid_values_are_rejected(overrides):
    from indexbound.config import RunConfig
    from indexbound.errors import InputError

    with pytest.raises(InputError):
        RunConfig.from_sources(None, overrides)


def test_section_must_be_mapping():
    from indexbound.config import RunConfig
    from indexbound.errors import InputError

    with pytest.raises(InputError, match="mapping"):
        RunConfig.from_sources({"design": [1, 2]})
    with pytest.raises(InputError):
        RunConfig.from_sources({"design": {"modes": "cinq"}})


def test_design_params_extend_x_max():
    from indexbound.config import RunConfig

    config = RunConfig(modes=20)
    assert config.design_params().n == 20
    assert config.design_params().x_max == 67.0
    assert config.design_params(5).x_max == 60.0


def test_load_config_default_path(tmp_path, monkeypatch):
    from indexbound.config import load_config

    monkeypatch.chdir(tmp_path)
    assert load_config(None) == {}

    (tmp_path / "config").mkdir()
    (tmp_path / "config" / "indexbound.yaml").write_text("design:\n  modes: 4\n", encoding="utf-8")
    assert load_config(None) == {"design": {"modes": 4}}


def test_load_config_errors(tmp_path):
    from indexbound.config import load_config
    from indexbound.errors import InputError

    with pytest.raises(InputError, match="illisible"):
        load_config(tmp_path / "absent.yaml")

    broken = tmp_path / "broken.yaml"
    broken.write_text("design: [unclosed\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_config(broken)

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(InputError, match="racine"):
        load_config(listing)

    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_config(empty) == {}
