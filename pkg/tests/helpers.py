"""Shared factories for seeded random models used across the test suite."""

from __future__ import annotations

import numpy as np

from fjmm import (
    BlendCoefficients,
    FJMMModel,
    erdos_renyi,
    lagged_communication_pair,
    row_stochastic,
    use_case_pair,
)

ALL_TAGS = ("two-hop", "two-hop-alt", "inertia", "memory", "blend", "lagged-comm")


def random_stochastic(rng: np.random.Generator, n: int, sparsity: float | None = None) -> np.ndarray:
    """Random row-stochastic matrix; optional sparsification keeps rows nonzero."""
    M = rng.random((n, n))
    if sparsity is not None:
        M = M * (rng.random((n, n)) < sparsity)
        for i in range(n):
            if M[i].sum() == 0.0:
                M[i, int(rng.integers(n))] = 1.0
    return M / M.sum(axis=1, keepdims=True)


def random_graph_matrix(rng: np.random.Generator, n_max: int = 12) -> np.ndarray:
    """Uniform-weight matrix of a random graph, sometimes with self-reliance mixed in."""
    n = int(rng.integers(3, n_max + 1))
    p = float(rng.choice([0.2, 0.5, 0.8]))
    W = row_stochastic(erdos_renyi(n, p, seed=int(rng.integers(2**63))))
    if rng.random() < 0.5:
        W = 0.3 * np.eye(n) + 0.7 * W
    return W


def random_model(
    rng: np.random.Generator,
    n_max: int = 12,
    lam_choices=(0.0, 0.5, 1.0),
    tags=ALL_TAGS,
) -> FJMMModel:
    """A random two-lag model drawn over graphs, use-case tags and susceptibilities."""
    W = random_graph_matrix(rng, n_max)
    n = W.shape[0]
    tag = tags[int(rng.integers(len(tags)))]
    if tag == "lagged-comm":
        family = lagged_communication_pair(W)
    else:
        beta = rng.random(n) if rng.random() < 0.5 else float(rng.random())
        blend = None
        if tag == "blend":
            a1 = float(rng.random())
            blend = BlendCoefficients(a1, 1.0 - a1)
        family = use_case_pair(tag, W, beta, blend)
    lam = rng.choice(np.asarray(lam_choices, dtype=float), size=n)
    s = rng.random(n)
    return FJMMModel(family, lam, s)
