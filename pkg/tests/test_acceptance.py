"""Tests des critères d'acceptation (indexbound.acceptance).

Couverts :
  - critères rapides (β, seuil, θ, profil publié, figure) : valeurs calculées
  - profil imprimé : marge stricte rapportée telle quelle, point d'entrée dans la bande
  - une IndexBoundError dans une tâche → ligne en échec, sans interrompre les autres
  - ordre des lignes indépendant de l'ordre de fin (ThreadPoolExecutor)
  - rendu du tableau
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


@pytest.fixture
def config():
    from indexbound.config import RunConfig

    return RunConfig(acceptance_modes=(5,))


def test_fast_chain_checks(config):
    from indexbound.acceptance import check_beta, check_theta, check_threshold

    (beta,) = check_beta(config)
    assert beta.name == "beta"
    assert float(beta.computed) == pytest.approx(1.04015, abs=1e-4)

    (threshold,) = check_threshold(config)
    assert threshold.passed

    (theta,) = check_theta(config)
    assert float(theta.computed) == pytest.approx(0.96978, abs=1e-3)


def test_published_profile_checks(config):
    from indexbound.acceptance import PUBLISHED_N5_SIGMA, check_figure, check_published_profile

    checks = check_published_profile(config) + check_figure(config)
    by_name = {c.name: c for c in checks}
    assert list(by_name) == [
        "published_profile_sum",
        "published_profile_slack",
        "published_profile_entry",
        "figure_band",
        "figure_amp",
    ]
    assert by_name["published_profile_sum"].passed
    assert by_name["figure_amp"].passed

    # la ligne stricte reflète la marge calculée, sans tolérance cachée
    slack = by_name["published_profile_slack"]
    assert slack.passed == (float(slack.computed) >= -1e-5)
    assert " en x = " in slack.detail

    entry = by_name["published_profile_entry"]
    assert float(entry.computed) >= PUBLISHED_N5_SIGMA
    assert entry.passed == (float(entry.computed) <= 1.42)
    assert by_name["figure_band"].detail.startswith("minimum en x = ")


def test_band_entry_point():
    import numpy as np

    from indexbound.acceptance import _band_entry

    xs = np.linspace(1.0, 2.0, 11)
    values = np.array([0.90, 0.95, 0.98, 1.0, 1.01, 1.0, 0.99, 1.0, 1.0, 1.0, 1.0])
    assert _band_entry(values, xs, 0.97, 1.03, 0.0) == pytest.approx(1.2)
    assert _band_entry(values, xs, 0.80, 1.03, 0.0) == pytest.approx(1.0)
    # une sortie sur le dernier point : pas d'entrée définitive
    values[-1] = 1.2
    assert _band_entry(values, xs, 0.97, 1.03, 0.0) == float("inf")
    # la tolérance absorbe un dépassement d'arrondi
    values[-1] = 1.03 + 5e-6
    assert _band_entry(values, xs, 0.97, 1.03, 1e-5) == pytest.approx(1.2)


def test_lp_check_reports_infeasibility(config, monkeypatch):
    import indexbound.acceptance as acceptance
    from indexbound.errors import DomainError

    def refuse(n, params, tol):
        raise DomainError("trop serré")

    monkeypatch.setattr(acceptance, "search_sigma", refuse)
    (check,) = acceptance.check_lp(config, 5)
    assert check.name == "lp_sigma_n5"
    assert not check.passed
    assert "trop serré" in check.detail


def test_build_tasks_follows_modes(config):
    from indexbound.acceptance import build_tasks

    names = [name for name, _ in build_tasks(config)]
    assert names == ["beta", "threshold", "theta", "slepian", "lp_n5", "published_profile", "figure"]


def test_run_acceptance_keeps_declaration_order(monkeypatch):
    import indexbound.acceptance as acceptance
    from indexbound.acceptance import Check
    from indexbound.config import RunConfig
    from indexbound.errors import IterationError

    def slow():
        time.sleep(0.05)
        return [Check("slow", "-", "-", "-", True)]

    def broken():
        raise IterationError("non convergé")

    def fast():
        return [Check("fast", "-", "-", "-", True)]

    monkeypatch.setattr(
        acceptance,
        "build_tasks",
        lambda config: [("slow", slow), ("broken", broken), ("fast", fast)],
    )
    checks = acceptance.run_acceptance(RunConfig(jobs=3))
    assert [c.name for c in checks] == ["slow", "broken", "fast"]
    assert [c.passed for c in checks] == [True, False, True]
    assert "IterationError" in checks[1].detail


def test_render_table():
    from indexbound.acceptance import Check, render_table

    table = render_table(
        [
            Check("beta", "1.04015", "1.04015000", "±1e-4", True, 0.12),
            Check("lp_sigma_n5", "≤ 1.42", "1.50000", "<300s", False, 3.0, "pire marge"),
        ]
    )
    lines = table.splitlines()
    assert lines[0].split()[:3] == ["critère", "attendu", "calculé"]
    assert set(lines[1].replace(" ", "")) == {"-"}
    assert "OK" in lines[2]
    assert "ÉCHEC" in lines[3]
    assert lines[3].endswith("# pire marge")
