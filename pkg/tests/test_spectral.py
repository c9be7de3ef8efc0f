"""Companion stacking, spectral radii, stability criteria and closed forms."""

import json
import math

import numpy as np
import pytest

from fjmm import (
    FJMMModel,
    InvalidParameterError,
    LagMatrixFamily,
    SpectralAccuracyError,
    augmented,
    barbell,
    closed_form_rho_homogeneous,
    complete,
    corollary1_sufficient,
    cycle,
    erdos_renyi,
    lemma3_rho,
    prop2_check,
    row_stochastic,
    spectral_radius,
    spectral_radius_dense,
    spectral_radius_robust,
    stability_report,
    use_case_pair,
    watts_strogatz,
)
from helpers import random_model, random_stochastic


def example1_model() -> FJMMModel:
    W = row_stochastic(barbell(3))
    return FJMMModel(use_case_pair("two-hop", W, 0.8), [1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1])


def fig2_matrices():
    W = np.array([[1.0, 0, 0], [1.0, 0, 0], [0, 0, 1.0]])
    Wt = np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, 0]])
    lam = np.array([0.5, 1.0, 1.0])
    return W, Wt, lam


def test_augmented_single_lag_collapses():
    rng = np.random.default_rng(0)
    W = random_stochastic(rng, 4)
    lam = rng.random(4)
    model = FJMMModel(LagMatrixFamily((W,)), lam, rng.random(4))
    np.testing.assert_array_equal(augmented(model).matrix, lam[:, None] * W)


def test_augmented_block_layout_two_lags():
    model = example1_model()
    aug = augmented(model)
    n = 6
    A1 = model.lam[:, None] * model.family.matrices[0]
    A2 = model.lam[:, None] * model.family.matrices[1]
    np.testing.assert_array_equal(aug.matrix[:n, :n], np.zeros((n, n)))
    np.testing.assert_array_equal(aug.matrix[:n, n:], np.eye(n))
    np.testing.assert_array_equal(aug.matrix[n:, :n], A2)
    np.testing.assert_array_equal(aug.matrix[n:, n:], A1)
    np.testing.assert_array_equal(aug.offset[:n], np.zeros(n))
    np.testing.assert_array_equal(aug.offset[n:], (1 - model.lam) * model.s)
    # substochastic with nonnegative entries
    assert aug.matrix.min() >= 0
    assert aug.matrix.sum(axis=1).max() <= 1 + 1e-12


def test_augmented_pure_delay_has_period_two_structure():
    # all-susceptible, all weight on the lagged matrix: eigenvalues square to those of W
    W = row_stochastic(cycle(5))
    model = FJMMModel(LagMatrixFamily((np.zeros((5, 5)), W)), np.ones(5), np.zeros(5))
    aug = augmented(model).matrix
    rho = spectral_radius(aug)
    assert rho == pytest.approx(math.sqrt(spectral_radius_dense(W)), abs=1e-10)
    assert rho == pytest.approx(1.0, abs=1e-10)


def test_augmented_three_lags_companion_rows():
    rng = np.random.default_rng(1)
    W = random_stochastic(rng, 3)
    parts = (0.5 * W, 0.3 * W, 0.2 * W)
    lam = rng.random(3)
    model = FJMMModel(LagMatrixFamily(parts), lam, rng.random(3))
    aug = augmented(model).matrix
    assert aug.shape == (9, 9)
    np.testing.assert_array_equal(aug[:3, 3:6], np.eye(3))
    np.testing.assert_array_equal(aug[3:6, 6:9], np.eye(3))
    for lag in range(3):  # bottom block-row: (Lam W3, Lam W2, Lam W1)
        col = (2 - lag) * 3
        np.testing.assert_array_equal(aug[6:, col : col + 3], lam[:, None] * parts[lag])
    # oracle: the stacked recursion must reproduce plain stepping
    from fjmm import simulate

    traj = simulate(model, horizon=6)
    y = np.concatenate([traj.states[0], traj.states[1], traj.states[2]])
    offset = augmented(model).offset
    for t in range(3, traj.states.shape[0]):
        y = aug @ y + offset
        np.testing.assert_allclose(y[6:], traj.states[t], atol=1e-13)


def test_spectral_radius_identity_and_stochastic():
    assert spectral_radius(np.eye(5)) == pytest.approx(1.0, abs=1e-12)
    W = random_stochastic(np.random.default_rng(2), 8)
    assert spectral_radius(W) == pytest.approx(1.0, abs=1e-12)
    assert spectral_radius(np.zeros((3, 3))) == pytest.approx(0.0, abs=1e-12)


def test_spectral_radius_periodic_matrix():
    # plain power iteration oscillates here; the +1 shift must not
    assert spectral_radius(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0, abs=1e-12)


def test_spectral_radius_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        spectral_radius(np.array([[0.0, -1.0], [1.0, 0.0]]))
    with pytest.raises(InvalidParameterError):
        spectral_radius(np.zeros((2, 3)))
    with pytest.raises(InvalidParameterError):
        spectral_radius(np.array([[np.nan]]))


def test_spectral_radius_accuracy_error_carries_bracket():
    # two chained classes with identical radii: Rayleigh convergence is O(1/k)
    M = np.array([[0.5, 0.5], [0.0, 0.5]])
    with pytest.raises(SpectralAccuracyError) as err:
        spectral_radius(M, tol=1e-10, max_iter=200)
    lo, hi = err.value.bracket
    assert lo - 1e-12 <= 0.5 <= hi + 1e-12  # rigorous up to roundoff
    assert spectral_radius_robust(M, max_iter=200) == pytest.approx(0.5, abs=1e-12)


def test_spectral_radius_agrees_with_dense_oracle():
    rng = np.random.default_rng(3)
    checked = 0
    for trial in range(100):
        n = int(rng.integers(2, 51))
        M = rng.random((n, n))
        kind = trial % 4
        if kind == 1:  # reducible block-triangular
            k = int(rng.integers(1, n)) if n > 1 else 0
            M[:k, k:] = 0.0
        elif kind == 2:  # sparse, typically reducible
            M *= rng.random((n, n)) < 0.2
        elif kind == 3:  # periodic
            M = np.zeros((n, n))
            M[np.arange(n), (np.arange(n) + 1) % n] = 1.0
        truth = spectral_radius_dense(M)
        assert spectral_radius_robust(M) == pytest.approx(truth, abs=1e-9)
        checked += 1
    assert checked == 100


def test_stability_report_everyone_partially_anchored():
    rng = np.random.default_rng(4)
    W = random_stochastic(rng, 6)
    model = FJMMModel(use_case_pair("memory", W, 0.4), np.full(6, 0.9), rng.random(6))
    report = stability_report(model)
    assert report.stable and report.globally_reachable
    assert report.rho_comparison < 1 and report.rho_augmented < 1
    assert report.criteria_agree
    assert report.stubborn_set == frozenset(range(1, 7))


def test_stability_report_degroot_limit_unstable():
    W = row_stochastic(complete(4))
    model = FJMMModel(use_case_pair("inertia", W, 0.5), np.ones(4), np.zeros(4))
    report = stability_report(model)
    assert not report.stable
    assert report.stubborn_set == frozenset()
    assert report.rho_comparison == pytest.approx(1.0, abs=1e-9)
    assert report.rho_augmented == pytest.approx(1.0, abs=1e-9)
    assert report.criteria_agree


def test_stability_report_fig2_pair():
    W, Wt, lam = fig2_matrices()
    assert spectral_radius_robust(lam[:, None] * W) == pytest.approx(1.0, abs=1e-9)
    assert spectral_radius_robust(lam[:, None] * Wt) == pytest.approx(1.0, abs=1e-9)
    family = LagMatrixFamily((0.5 * W, 0.5 * Wt))
    report = stability_report(FJMMModel(family, lam, np.zeros(3)))
    assert report.stable
    assert report.rho_augmented < 1 - 1e-9
    assert report.criteria_agree


def test_stability_report_json_fields():
    report = stability_report(example1_model())
    payload = json.loads(report.to_json())
    assert set(payload) == {
        "rho_comparison",
        "rho_augmented",
        "stubborn_set",
        "globally_reachable",
        "stable",
        "criteria_agree",
    }
    assert payload["stubborn_set"] == [3, 4]
    assert payload["stable"] is True


def test_corollary1_cases():
    W, Wt, lam = fig2_matrices()
    # neither factor Schur stable, yet the blend is: sufficiency only
    assert not corollary1_sufficient(W, Wt, lam, 0.5)
    assert stability_report(
        FJMMModel(LagMatrixFamily((0.5 * W, 0.5 * Wt)), lam, np.zeros(3))
    ).stable

    rng = np.random.default_rng(5)
    Wc = random_stochastic(rng, 5)
    assert corollary1_sufficient(Wc, np.eye(5), np.full(5, 0.7), 0.5)  # Lam < I
    lam2 = np.array([0.0, 1.0, 1.0, 1.0, 1.0])
    assert corollary1_sufficient(Wc, np.eye(5), lam2, 0.3)  # anchored node reachable in W

    with pytest.raises(InvalidParameterError):
        corollary1_sufficient(Wc, np.eye(5), lam2, 0.0)  # boundary beta


def test_corollary1_true_implies_stable():
    rng = np.random.default_rng(6)
    for _ in range(30):
        W = random_stochastic(rng, 6, sparsity=0.4)
        Wt = random_stochastic(rng, 6, sparsity=0.4)
        lam = rng.choice([0.0, 0.5, 1.0], size=6)
        beta = float(rng.uniform(0.05, 0.95))
        if corollary1_sufficient(W, Wt, lam, beta):
            family = LagMatrixFamily(((1 - beta) * W, beta * Wt))
            assert stability_report(FJMMModel(family, lam, rng.random(6))).stable


def test_closed_form_reference_value_and_limits():
    value = closed_form_rho_homogeneous(0.6, 0.5)
    assert value == pytest.approx((0.3 + math.sqrt(0.09 + 1.2)) / 2, abs=1e-15)
    assert value == pytest.approx(0.71789, abs=5e-6)
    # limits: beta0 -> 0 gives sigma, beta0 -> 1 gives sqrt(sigma)
    for sigma in (0.2, 0.6, 0.95):
        assert closed_form_rho_homogeneous(sigma, 1e-12) == pytest.approx(sigma, abs=1e-9)
        assert closed_form_rho_homogeneous(sigma, 1 - 1e-12) == pytest.approx(
            math.sqrt(sigma), abs=1e-9
        )
        for beta0 in (0.1, 0.5, 0.9):
            v = closed_form_rho_homogeneous(sigma, beta0)
            assert sigma < v < 1.0
    with pytest.raises(InvalidParameterError):
        closed_form_rho_homogeneous(0.0, 0.5)
    with pytest.raises(InvalidParameterError):
        closed_form_rho_homogeneous(0.5, 1.0)


def test_closed_form_matches_eigenvalue_oracle():
    # independence from the graph and from the blend split
    sigma, beta0 = 0.6, 0.5
    expected = closed_form_rho_homogeneous(sigma, beta0)
    graphs = [cycle(12), complete(9), erdos_renyi(15, 0.5, seed=1), watts_strogatz(14, 4, 0.3, seed=2)]
    from fjmm import BlendCoefficients

    for g in graphs:
        W = row_stochastic(g)
        n = g.n
        for family in (
            use_case_pair("two-hop", W, beta0),
            use_case_pair("blend", W, beta0, BlendCoefficients(0.3, 0.7)),
            use_case_pair("blend", W, beta0, BlendCoefficients(1.0, 0.0)),
        ):
            model = FJMMModel(family, np.full(n, sigma), np.zeros(n))
            rho = spectral_radius_dense(augmented(model).matrix)
            assert rho == pytest.approx(expected, abs=1e-8)


def test_prop2_zero_beta_equality():
    rng = np.random.default_rng(7)
    W = random_stochastic(rng, 6)
    model = FJMMModel(use_case_pair("memory", W, 0.0), rng.random(6), rng.random(6))
    res = prop2_check(model)
    assert res.holds
    assert res.rho_augmented == pytest.approx(res.rho_comparison, abs=1e-10)


def test_prop2_homogeneous_reference_point():
    W = row_stochastic(cycle(8))
    model = FJMMModel(use_case_pair("inertia", W, 0.5), np.full(8, 0.6), np.zeros(8))
    res = prop2_check(model)
    assert res.rho_augmented == pytest.approx(closed_form_rho_homogeneous(0.6, 0.5), abs=1e-8)
    assert res.rho_comparison == pytest.approx(0.6, abs=1e-10)
    assert res.holds


def test_prop2_requires_two_lags():
    rng = np.random.default_rng(8)
    W = random_stochastic(rng, 4)
    model = FJMMModel(LagMatrixFamily((W,)), rng.random(4), rng.random(4))
    with pytest.raises(InvalidParameterError):
        prop2_check(model)


def test_recent_memory_never_faster_than_memoryless():
    rng = np.random.default_rng(9)
    for _ in range(30):
        model = random_model(rng, tags=("memory",))
        W = model.family.total()
        rho_fj = spectral_radius_dense(model.lam[:, None] * W)
        rho_aug = spectral_radius_dense(augmented(model).matrix)
        assert rho_aug >= rho_fj - 1e-12


def test_lemma3_exact_values():
    assert lemma3_rho(0.6, row_stochastic(cycle(20))) == pytest.approx(0.6, abs=1e-12)
    assert lemma3_rho(0.3, row_stochastic(complete(50))) == pytest.approx(0.3, abs=1e-12)
    W = random_stochastic(np.random.default_rng(10), 12)
    assert lemma3_rho(0.999, W) == pytest.approx(0.999, abs=1e-12)


def test_theorem1_three_way_equivalence_sample():
    rng = np.random.default_rng(11)
    seen_unstable = 0
    for _ in range(60):
        model = random_model(rng)
        report = stability_report(model)
        assert report.criteria_agree
        for rho in (report.rho_comparison, report.rho_augmented):
            if abs(rho - 1.0) > 1e-9:
                assert (rho < 1.0) == report.stable
        if not report.stable:
            seen_unstable += 1
    assert seen_unstable > 0  # the sample exercises both verdicts
