"""Polarization index, mean trajectories and convergence timing."""

import numpy as np
import pytest

from fjmm import (
    FJMMModel,
    barbell,
    convergence_time,
    equilibrium,
    mean_trajectory,
    polarization_index,
    row_stochastic,
    simulate,
    use_case_pair,
)
from helpers import random_stochastic


def test_polarization_zero_at_consensus():
    report = polarization_index(np.full(7, 0.42))
    assert report.P == 0.0
    assert report.mean == pytest.approx(0.42)


def test_polarization_fully_split():
    report = polarization_index(np.array([0.0, 0, 0, 1, 1, 1]))
    assert report.mean == pytest.approx(0.5)
    assert report.P == pytest.approx(0.25, abs=1e-15)


def test_polarization_memory_equilibrium_below_split():
    xbar = np.array([4 / 13, 4 / 13, 0.0, 1.0, 9 / 13, 9 / 13])
    report = polarization_index(xbar)
    # oracle: mean is exactly 1/2, deviations are two pairs of 5/26 plus the anchors
    expected = (4 * (5 / 26) ** 2 + 2 * 0.25) / 6
    assert expected == pytest.approx(73 / 676, abs=1e-15)
    assert report.P == pytest.approx(expected, abs=1e-15)
    assert report.P < 0.25  # memory softens the fully split profile


def test_polarization_translation_and_scaling():
    rng = np.random.default_rng(0)
    x = rng.random(9)
    base = polarization_index(x).P
    assert polarization_index(x + 3.7).P == pytest.approx(base, abs=1e-12)
    assert polarization_index(2.0 * x).P == pytest.approx(4.0 * base, rel=1e-12)


def test_mean_trajectory_constant():
    W = random_stochastic(np.random.default_rng(1), 4)
    s = np.array([0.2, 0.4, 0.6, 0.8])
    model = FJMMModel(use_case_pair("memory", W, 0.5), np.zeros(4), s)
    traj = simulate(model, horizon=15)
    np.testing.assert_allclose(mean_trajectory(traj), 0.5, atol=0)


def test_convergence_time_zero_when_already_there():
    model = FJMMModel(
        use_case_pair("two-hop", row_stochastic(barbell(3)), 0.8),
        [1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1],
    )
    xbar = equilibrium(model)
    traj = simulate(model, init=xbar, horizon=20)
    diag = convergence_time(traj, xbar, tol=1e-9)
    assert diag.converged and diag.steps == 0

    # a tolerance larger than the worst initial error also gives zero
    traj2 = simulate(model, horizon=20)
    diag2 = convergence_time(traj2, xbar, tol=10.0)
    assert diag2.steps == 0


def test_convergence_time_not_converged_sentinel():
    model = FJMMModel(
        use_case_pair("two-hop", row_stochastic(barbell(3)), 0.8),
        [1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1],
    )
    xbar = equilibrium(model)
    traj = simulate(model, horizon=3)
    diag = convergence_time(traj, xbar, tol=1e-12)
    assert not diag.converged and diag.steps is None
    assert diag.final_error > 1e-12


def test_convergence_time_requires_staying_inside():
    # a dip that re-escapes must not count as converged
    class FakeTraj:
        lag = 1
        states = np.array([[1.0], [0.0], [1.0], [0.0], [0.0]])

    diag = convergence_time(FakeTraj(), np.zeros(1), tol=0.5)
    assert diag.steps == 3


def test_convergence_time_antitone_in_tol():
    model = FJMMModel(
        use_case_pair("two-hop", row_stochastic(barbell(3)), 0.8),
        [1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1],
    )
    xbar = equilibrium(model)
    traj = simulate(model, horizon=400)
    steps = [convergence_time(traj, xbar, tol).steps for tol in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(s is not None for s in steps)
    assert steps == sorted(steps)


def test_estimated_rate_matches_spectral_radius():
    from fjmm import augmented, spectral_radius_dense

    model = FJMMModel(
        use_case_pair("two-hop", row_stochastic(barbell(3)), 0.8),
        [1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1],
    )
    xbar = equilibrium(model)
    traj = simulate(model, horizon=60)  # errors still decaying, above noise
    diag = convergence_time(traj, xbar, tol=1e-6)
    rho = spectral_radius_dense(augmented(model).matrix)
    assert diag.estimated_rate == pytest.approx(rho, abs=0.05)
    assert 0.0 <= diag.estimated_rate <= 1.0
    # fully settled trajectories yield no informative ratios
    settled = simulate(model, horizon=500)
    assert convergence_time(settled, xbar, tol=1e-6).estimated_rate is None
