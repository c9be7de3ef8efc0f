"""Lag-matrix family constructors and admissibility validation."""

import numpy as np
import pytest

from fjmm import (
    BlendCoefficients,
    InvalidParameterError,
    LagMatrixFamily,
    MatrixValidationError,
    barbell,
    lagged_communication_pair,
    row_stochastic,
    use_case_pair,
    validate_family,
)
from helpers import ALL_TAGS, random_stochastic

SUM_TOL = 1e-10


def test_inertia_halves():
    W = row_stochastic(barbell(3))
    fam = use_case_pair("inertia", W, 0.5)
    np.testing.assert_allclose(fam.matrices[0], 0.5 * W)
    np.testing.assert_allclose(fam.matrices[1], 0.5 * np.eye(6))


def test_two_hop_row_from_barbell():
    W = row_stochastic(barbell(3))
    fam = use_case_pair("two-hop", W, 0.8)
    # row 1 of W^2 is the half/half mix of rows 2 and 3 (the neighbors of node 1)
    expected = 0.8 * np.array([5 / 12, 1 / 6, 1 / 4, 1 / 6, 0, 0])
    np.testing.assert_allclose(fam.matrices[1][0], expected, atol=1e-15)
    np.testing.assert_allclose(fam.matrices[1][0], 0.8 * (0.5 * W[1] + 0.5 * W[2]), atol=0)


def test_zero_beta_recovers_memoryless_family():
    W = random_stochastic(np.random.default_rng(0), 5)
    for tag in ("two-hop", "two-hop-alt", "inertia", "memory"):
        fam = use_case_pair(tag, W, 0.0)
        np.testing.assert_array_equal(fam.matrices[0], W)
        assert np.all(fam.matrices[1] == 0.0)


def test_full_beta_endpoints():
    W = random_stochastic(np.random.default_rng(1), 4)
    np.testing.assert_allclose(use_case_pair("memory", W, 1.0).matrices[1], W)
    np.testing.assert_allclose(use_case_pair("two-hop", W, 1.0).matrices[1], W @ W)
    assert np.all(use_case_pair("memory", W, 1.0).matrices[0] == 0.0)


def test_two_hop_alt_is_stochastic_and_normalized():
    rng = np.random.default_rng(2)
    for _ in range(10):
        W = random_stochastic(rng, 6, sparsity=0.4)
        fam = use_case_pair("two-hop-alt", W, 0.7)
        Wt = fam.matrices[1] / 0.7
        np.testing.assert_allclose(Wt.sum(axis=1), 1.0, atol=1e-12)
        B = (W > 0).astype(float)
        target = W @ B
        # rows proportional to W B
        np.testing.assert_allclose(Wt * target.sum(axis=1, keepdims=True), target, atol=1e-12)


def test_blend_requires_coefficients():
    W = random_stochastic(np.random.default_rng(3), 4)
    with pytest.raises(InvalidParameterError):
        use_case_pair("blend", W, 0.5)
    fam = use_case_pair("blend", W, 0.5, BlendCoefficients(0.3, 0.7))
    np.testing.assert_allclose(fam.matrices[1], 0.5 * (0.3 * W + 0.7 * np.eye(4)))


def test_blend_coefficients_validation():
    with pytest.raises(InvalidParameterError):
        BlendCoefficients(0.6, 0.6)
    with pytest.raises(InvalidParameterError):
        BlendCoefficients(-0.1, 1.1)


def test_unknown_tag_and_bad_matrix():
    W = random_stochastic(np.random.default_rng(4), 4)
    with pytest.raises(InvalidParameterError):
        use_case_pair("nope", W, 0.5)
    with pytest.raises(MatrixValidationError):
        use_case_pair("inertia", W * 0.5, 0.5)  # rows no longer sum to 1
    with pytest.raises(InvalidParameterError):
        use_case_pair("inertia", W, 1.5)  # beta out of range


def test_lagged_communication_split():
    assert np.all(lagged_communication_pair(np.eye(3)).matrices[1] == 0.0)
    W = 0.5 * (np.ones((3, 3)) - np.eye(3))
    fam = lagged_communication_pair(W)
    assert np.all(fam.matrices[0] == 0.0)
    np.testing.assert_array_equal(fam.matrices[1], W)


def test_lagged_communication_sum_exact():
    rng = np.random.default_rng(5)
    for _ in range(10):
        W = random_stochastic(rng, 7)
        fam = lagged_communication_pair(W)
        np.testing.assert_array_equal(fam.matrices[0] + fam.matrices[1], W)


def test_family_sum_stochastic_for_all_tags():
    rng = np.random.default_rng(6)
    for _ in range(40):
        W = random_stochastic(rng, int(rng.integers(2, 9)), sparsity=0.6)
        n = W.shape[0]
        beta = rng.random(n)
        for tag in ALL_TAGS:
            if tag == "lagged-comm":
                fam = lagged_communication_pair(W)
            elif tag == "blend":
                a1 = float(rng.random())
                fam = use_case_pair(tag, W, beta, BlendCoefficients(a1, 1 - a1))
            else:
                fam = use_case_pair(tag, W, beta)
            report = validate_family(fam)
            assert report.passed, report.failures
            assert report.max_row_sum_deviation <= SUM_TOL


def test_validate_family_failures():
    bad = LagMatrixFamily((np.array([[0.5, -0.1], [0.2, 0.3]]), np.eye(2) * 0.5))
    report = validate_family(bad)
    assert not report.passed
    assert any("lag 1" in f and "(1, 2)" in f for f in report.failures)

    short = LagMatrixFamily((np.full((2, 2), 0.45),))  # rows sum to 0.9
    report = validate_family(short)
    assert not report.passed
    assert report.max_row_sum_deviation == pytest.approx(0.1, abs=1e-15)


def test_memory_vs_two_hop_at_full_beta():
    # at beta = 1 the recent-memory family is (0, W) and the two-hop one (0, W^2)
    W = random_stochastic(np.random.default_rng(7), 5)
    np.testing.assert_array_equal(use_case_pair("memory", W, 1.0).matrices[1], W)
    np.testing.assert_allclose(use_case_pair("two-hop", W, 1.0).matrices[1], W @ W)
