"""Tests de l'algèbre matricielle des idempotents (indexbound.matgap).

Couverts :
  - idempotent d'indice : idempotence pour tout (U, V), similitude W·E₁₁·W⁻¹
  - P_a : entrées, trace 1, résidu d'idempotence sur une grille fine
  - β = sup ‖P_a‖, seuil 1/(4(2β+2)), θ associé (valeurs publiées)
  - construction différence : E(p₁, p₂) idempotent, similitude explicite, E(p, p) = E₀
  - projection de Riesz : rétraction d'un quasi-idempotent, rejets documentés
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


def _random_idempotent(rng, n: int, rank: int) -> np.ndarray:
    s = np.eye(n) + 0.3 * rng.standard_normal((n, n))
    d = np.diag([1.0] * rank + [0.0] * (n - rank))
    return s @ d @ np.linalg.inv(s)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --------------------------------------------------------------------- #
# Idempotent d'indice
# --------------------------------------------------------------------- #


def test_index_idempotent_is_idempotent_for_any_pair(rng):
    from indexbound.matgap import idempotency_defect, index_idempotent

    for n in (1, 2, 3, 5):
        u = rng.standard_normal((n, n))
        v = rng.standard_normal((n, n))
        p = index_idempotent(u, v)
        assert p.shape == (2 * n, 2 * n)
        scale = max(1.0, float(np.abs(p).max()))
        assert idempotency_defect(p) <= 1e-9 * scale**2


def test_index_idempotent_matches_similarity(rng):
    from indexbound.matgap import index_idempotent, index_similarity

    n = 3
    u = rng.standard_normal((n, n))
    v = rng.standard_normal((n, n))
    w, w_inv = index_similarity(u, v)
    assert np.allclose(w @ w_inv, np.eye(2 * n), atol=1e-10)

    e11 = np.zeros((2 * n, 2 * n))
    e11[:n, :n] = np.eye(n)
    assert np.allclose(w @ e11 @ w_inv, index_idempotent(u, v), atol=1e-9)


def test_index_idempotent_scalar_case_is_bott():
    from indexbound.matgap import bott_idempotent, index_idempotent

    for a in (-0.7, 0.0, 0.3, 1.0, 2.5):
        assert np.allclose(index_idempotent([[a]], [[a]]), bott_idempotent(a), atol=1e-14)


def test_index_idempotent_rejects_bad_shapes():
    from indexbound.errors import ContractError, DimensionError
    from indexbound.matgap import index_idempotent

    with pytest.raises(DimensionError):
        index_idempotent(np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(DimensionError, match="différentes"):
        index_idempotent(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError, match="non supportée"):
        index_idempotent(np.eye(65), np.eye(65))
    with pytest.raises(ContractError, match="non finies"):
        index_idempotent([[np.nan]], [[1.0]])


# --------------------------------------------------------------------- #
# P_a et constantes publiées
# --------------------------------------------------------------------- #


def test_bott_idempotent_endpoints():
    from indexbound.matgap import bott_idempotent

    assert np.array_equal(bott_idempotent(0.0), np.array([[0.0, 0.0], [0.0, 1.0]]))
    assert np.array_equal(bott_idempotent(1.0), np.array([[1.0, 0.0], [0.0, 0.0]]))
    assert np.array_equal(bott_idempotent(-1.0), np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_bott_idempotent_residual_on_fine_grid():
    from indexbound.matgap import bott_idempotent

    for a in np.linspace(-1.0, 1.0, 2001):
        p = bott_idempotent(float(a))
        assert np.abs(p @ p - p).max() < 1e-12
        assert abs(np.trace(p) - 1.0) < 1e-12


def test_bott_idempotent_rejects_non_finite():
    from indexbound.errors import DomainError
    from indexbound.matgap import bott_idempotent

    with pytest.raises(DomainError):
        bott_idempotent(float("inf"))


def test_operator_norm_matches_numpy(rng):
    from indexbound.matgap import operator_norm

    for n in (1, 2, 3, 6):
        m = rng.standard_normal((n, n))
        assert operator_norm(m) == pytest.approx(np.linalg.norm(m, 2), rel=1e-12)


def test_bott_norm_closed_form_matches_svd():
    from indexbound.matgap import bott_idempotent, bott_norm, deviation_norm

    e11 = np.array([[1.0, 0.0], [0.0, 0.0]])
    for a in (-0.9, -0.45, 0.0, 0.2, 0.6, 1.0):
        p = bott_idempotent(a)
        assert float(bott_norm(a)) == pytest.approx(np.linalg.norm(p, 2), rel=1e-12)
        assert float(deviation_norm(a)) == pytest.approx(np.linalg.norm(p - e11, 2), rel=1e-12, abs=1e-15)


def test_sup_bott_norm_published_value():
    from indexbound.matgap import bott_norm, sup_bott_norm

    sweep = sup_bott_norm(1e-4)
    assert sweep.beta == pytest.approx(1.04015, abs=1e-4)
    assert 0.0 < abs(sweep.argmax_a) < 1.0
    # Aucun point de grille ne dépasse le maximum raffiné
    assert float(np.max(bott_norm(np.linspace(-1, 1, 20001)))) <= sweep.beta + 1e-12


def test_sup_bott_norm_rejects_coarse_grid():
    from indexbound.errors import DomainError
    from indexbound.matgap import sup_bott_norm

    with pytest.raises(DomainError):
        sup_bott_norm(0.1)


def test_deviation_threshold_published_value():
    from indexbound.matgap import deviation_threshold, sup_bott_norm

    threshold = deviation_threshold(sup_bott_norm().beta)
    assert 1.0 / threshold == pytest.approx(16.3212, abs=1e-3)
    assert deviation_threshold(0.0) == pytest.approx(1.0 / 8.0)


def test_theta_for_threshold_published_value():
    from indexbound.matgap import deviation_norm, deviation_threshold, sup_bott_norm, theta_for_threshold

    threshold = deviation_threshold(sup_bott_norm().beta)
    theta = theta_for_threshold(threshold)
    assert theta == pytest.approx(0.96978, abs=1e-3)
    grid = np.linspace(theta, 1.0, 5001)
    assert float(np.max(deviation_norm(grid))) <= threshold + 1e-12
    assert float(deviation_norm(theta - 1e-4)) > threshold


def test_theta_is_zero_when_threshold_covers_everything():
    from indexbound.matgap import deviation_norm, theta_for_threshold

    worst = float(np.max(deviation_norm(np.linspace(0.0, 1.0, 100_001))))
    assert theta_for_threshold(worst + 1e-9) == 0.0


def test_theta_for_threshold_errors():
    from indexbound.errors import DomainError, InfeasibleThresholdError
    from indexbound.matgap import theta_for_threshold

    with pytest.raises(DomainError):
        theta_for_threshold(0.0)
    with pytest.raises(DomainError):
        theta_for_threshold(-1.0)
    with pytest.raises(InfeasibleThresholdError):
        theta_for_threshold(1e-20)


# --------------------------------------------------------------------- #
# Construction différence
# --------------------------------------------------------------------- #


def test_difference_idempotent_is_idempotent_and_similar(rng):
    from indexbound.matgap import difference_idempotent, difference_similarity, idempotency_defect

    n = 3
    p1 = _random_idempotent(rng, n, 2)
    p2 = _random_idempotent(rng, n, 1)
    e = difference_idempotent(p1, p2)
    assert e.shape == (4 * n, 4 * n)
    assert idempotency_defect(e) < 1e-8

    u, u_inv = difference_similarity(p2)
    assert np.allclose(u_inv @ u, np.eye(4 * n), atol=1e-9)
    diag = np.zeros((4 * n, 4 * n))
    diag[:n, :n] = p1
    diag[n : 2 * n, n : 2 * n] = np.eye(n) - p2
    assert np.allclose(u_inv @ diag @ u, e, atol=1e-8)


def test_difference_idempotent_of_equal_pair_is_trivial(rng):
    from indexbound.matgap import difference_idempotent, trivial_idempotent

    p = _random_idempotent(rng, 4, 2)
    assert np.allclose(difference_idempotent(p, p), trivial_idempotent(4), atol=1e-12)


def test_difference_idempotent_rank_is_tracked(rng):
    """trace E(p₁, p₂) − trace E₀ = rang p₁ − rang p₂."""
    from indexbound.matgap import difference_idempotent, trivial_idempotent

    p1 = _random_idempotent(rng, 4, 3)
    p2 = _random_idempotent(rng, 4, 1)
    e = difference_idempotent(p1, p2)
    assert np.trace(e) - np.trace(trivial_idempotent(4)) == pytest.approx(2.0, abs=1e-9)


def test_difference_idempotent_requires_idempotents():
    from indexbound.errors import ContractError, DimensionError
    from indexbound.matgap import difference_idempotent

    with pytest.raises(ContractError, match="idempotente"):
        difference_idempotent(0.5 * np.eye(2), np.eye(2))
    with pytest.raises(DimensionError):
        difference_idempotent(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        difference_idempotent(np.eye(17), np.eye(17))


# --------------------------------------------------------------------- #
# Projection de Riesz
# --------------------------------------------------------------------- #


def test_riesz_idempotent_retracts_quasi_idempotent(rng):
    from indexbound.matgap import idempotency_defect, riesz_idempotent

    p = _random_idempotent(rng, 4, 2)
    g = rng.standard_normal((4, 4))
    e = p + 0.01 * g / np.linalg.norm(g, 2)
    q = riesz_idempotent(e)
    assert idempotency_defect(q) < 1e-9
    assert np.trace(q) == pytest.approx(2.0, abs=1e-9)
    assert np.linalg.norm(q - p, 2) < 0.1


def test_riesz_idempotent_fixes_exact_idempotent(rng):
    from indexbound.matgap import riesz_idempotent

    p = _random_idempotent(rng, 3, 1)
    assert np.allclose(riesz_idempotent(p), p, atol=1e-10)


def test_riesz_idempotent_rejections():
    from indexbound.errors import DefectiveMatrixError, SpectralGapError
    from indexbound.matgap import riesz_idempotent

    with pytest.raises(SpectralGapError):
        riesz_idempotent(0.5 * np.eye(2))
    with pytest.raises(DefectiveMatrixError):
        riesz_idempotent([[1.0, 0.1], [0.0, 1.0]])


def test_quasi_idempotent_path_stays_in_domain(rng):
    from indexbound.matgap import bott_idempotent, idempotency_defect, quasi_idempotent_path

    p = bott_idempotent(0.5)
    e = p + 0.01 * rng.standard_normal((2, 2))
    defects = quasi_idempotent_path(p, e)
    assert len(defects) == 101
    assert defects[0] == pytest.approx(idempotency_defect(e))
    assert defects[-1] < 1e-12
    assert max(defects) < 0.25


def test_quasi_idempotent_path_errors():
    from indexbound.errors import ContractError, DomainError, SpectralGapError
    from indexbound.matgap import bott_idempotent, quasi_idempotent_path

    p = bott_idempotent(0.0)
    with pytest.raises(DomainError):
        quasi_idempotent_path(p, p, num=1)
    with pytest.raises(ContractError):
        quasi_idempotent_path(0.5 * np.eye(2), p)
    with pytest.raises(SpectralGapError):
        quasi_idempotent_path(p, 0.5 * np.eye(2))


# --------------------------------------------------------------------- #
# Exemples et propriétés complémentaires
# --------------------------------------------------------------------- #


def test_bott_idempotent_rational_example():
    from indexbound.matgap import bott_idempotent

    assert np.allclose(bott_idempotent(0.5), [[0.4375, 0.65625], [0.375, 0.5625]], rtol=0.0, atol=1e-15)


def test_operator_norm_examples_and_errors():
    from indexbound.errors import DimensionError
    from indexbound.matgap import operator_norm

    assert operator_norm(np.eye(2)) == pytest.approx(1.0, abs=1e-15)
    assert operator_norm([[0.0, 2.0], [0.0, 0.0]]) == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(DimensionError):
        operator_norm(np.ones((2, 3)))


def test_sup_bott_norm_matches_brute_force_scan():
    from indexbound.matgap import bott_norm, sup_bott_norm

    brute = float(np.max(bott_norm(np.linspace(-1.0, 1.0, 2_000_001))))
    assert sup_bott_norm(1e-4).beta == pytest.approx(brute, abs=1e-5)
    assert float(bott_norm(1.0)) == pytest.approx(1.0, abs=1e-15)
    assert float(bott_norm(-1.0)) == pytest.approx(1.0, abs=1e-15)


def test_theta_is_monotone_in_threshold():
    from indexbound.matgap import theta_for_threshold

    thetas = [theta_for_threshold(t) for t in np.linspace(0.02, 0.2, 10)]
    assert all(t1 >= t2 for t1, t2 in zip(thetas, thetas[1:]))


def test_deviation_threshold_identity():
    from indexbound.matgap import deviation_threshold

    for beta in (0.0, 1.0, 1.04015, 3.5):
        assert deviation_threshold(beta) * 4.0 * (2.0 * beta + 2.0) == pytest.approx(1.0, rel=1e-15)


def test_difference_of_bott_idempotents():
    from indexbound.matgap import bott_idempotent, difference_idempotent, difference_similarity, idempotency_defect

    assert idempotency_defect(difference_idempotent(bott_idempotent(1.0), bott_idempotent(0.0))) < 1e-12
    u, u_inv = difference_similarity(bott_idempotent(0.3))
    assert np.allclose(u @ u_inv, np.eye(8), atol=1e-12)


def test_difference_idempotent_random_pairs(rng):
    from indexbound.matgap import difference_idempotent, difference_similarity, idempotency_defect

    for _ in range(50):
        n = int(rng.integers(1, 5))
        p1 = _random_idempotent(rng, n, int(rng.integers(0, n + 1)))
        p2 = _random_idempotent(rng, n, int(rng.integers(0, n + 1)))
        e = difference_idempotent(p1, p2)
        assert idempotency_defect(e) < 1e-8
        u, u_inv = difference_similarity(p2)
        d = np.zeros((4 * n, 4 * n))
        d[:n, :n] = p1
        d[n : 2 * n, n : 2 * n] = np.eye(n) - p2
        assert np.abs(u_inv @ d @ u - e).max() < 1e-8


def test_riesz_idempotent_examples():
    from indexbound.matgap import bott_idempotent, riesz_idempotent

    assert np.allclose(riesz_idempotent(np.diag([0.9, 0.1])), np.diag([1.0, 0.0]), atol=1e-15)

    p = bott_idempotent(0.98)
    e = p + 1e-3 * np.array([[0.3, -0.7], [0.5, 0.2]])
    q = riesz_idempotent(e)
    assert np.abs(q - p).max() < 5e-3
    assert np.abs(q @ e - e @ q).max() < 1e-8
    assert np.abs(riesz_idempotent(q) - q).max() < 1e-10
