"""Lag-matrix families: how past and present opinions are weighted.

A family (W1, ..., WL) of nonnegative matrices whose sum is row-stochastic
defines one memory-and-multi-hop model. The constructors here cover the
standard two-matrix decompositions

    W1 = (I - [beta]) W,   W2 = [beta] Wt

for several choices of the lagged matrix Wt, plus the lagged-communication
split W1 = diag(W), W2 = W - diag(W).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InvalidParameterError, MatrixValidationError
from .graphs import assert_stochastic, binary_adjacency

FAMILY_SUM_TOL = 1e-10

# CLI/config tags for the two-matrix constructors.
USE_CASES = ("two-hop", "two-hop-alt", "inertia", "memory", "blend")
ALL_TAGS = USE_CASES + ("lagged-comm",)


@dataclass(frozen=True)
class BlendCoefficients:
    """Convex weights for Wt = alpha1 * W + alpha2 * I."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise InvalidParameterError(
                f"blend coefficients must be nonnegative, got ({self.alpha1}, {self.alpha2})"
            )
        if abs(self.alpha1 + self.alpha2 - 1.0) > 1e-12:
            raise InvalidParameterError(
                f"blend coefficients must sum to 1, got {self.alpha1 + self.alpha2!r}"
            )


@dataclass(frozen=True)
class LagMatrixFamily:
    """Ordered lag matrices (W1, ..., WL); lag ell applies to x(t - ell + 1)."""

    matrices: tuple

    def __post_init__(self):
        if not self.matrices:
            raise InvalidParameterError("a family needs at least one lag matrix")
        n = np.asarray(self.matrices[0]).shape[0]
        mats = []
        for ell, M in enumerate(self.matrices, start=1):
            M = np.ascontiguousarray(M, dtype=float)
            if M.shape != (n, n):
                raise InvalidParameterError(f"lag matrix {ell} has shape {M.shape}, expected {(n, n)}")
            mats.append(M)
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def L(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    def total(self) -> np.ndarray:
        """Sum of all lag matrices (stochastic for a valid family)."""
        out = self.matrices[0].copy()
        for M in self.matrices[1:]:
            out += M
        return out


@dataclass(frozen=True)
class FamilyValidation:
    """Outcome of validate_family."""

    passed: bool
    max_row_sum_deviation: float
    min_entry: float
    failures: tuple


def as_beta(beta: Union[float, Sequence], n: int) -> np.ndarray:
    """Validate a per-node memory weight vector; scalars broadcast to all nodes."""
    arr = np.asarray(beta, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise InvalidParameterError(f"beta has shape {arr.shape}, expected ({n},)")
    if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("beta entries must lie in [0, 1]")
    return arr


def _lagged_matrix(uc: str, W: np.ndarray, blend: Optional[BlendCoefficients]) -> np.ndarray:
    n = W.shape[0]
    if uc == "two-hop":
        return W @ W
    if uc == "two-hop-alt":
        B = binary_adjacency(W).astype(float)
        M = W @ B
        D = M.sum(axis=1)
        # W stochastic guarantees positivity: every influencing node has
        # out-degree >= 1, so a zero here means W was malformed.
        assert np.all(D > 0), "two-hop-alt normalizer hit a zero row; W is malformed"
        return M / D[:, None]
    if uc == "inertia":
        return np.eye(n)
    if uc == "memory":
        return W.copy()
    if uc == "blend":
        if blend is None:
            raise InvalidParameterError("use case 'blend' requires BlendCoefficients")
        return blend.alpha1 * W + blend.alpha2 * np.eye(n)
    raise InvalidParameterError(f"unknown use case {uc!r}; expected one of {USE_CASES}")


def use_case_pair(
    uc: str,
    W: np.ndarray,
    beta: Union[float, Sequence],
    blend: Optional[BlendCoefficients] = None,
) -> LagMatrixFamily:
    """Two-matrix family W1 = (I - [beta]) W, W2 = [beta] Wt for a use-case tag.

    Tags: 'two-hop' (Wt = W^2), 'two-hop-alt' (Wt = D^-1 W B with
    D = [W B 1]), 'inertia' (Wt = I), 'memory' (Wt = W), 'blend'
    (Wt = alpha1 W + alpha2 I, coefficients required).
    """
    W = assert_stochastic(W)
    b = as_beta(beta, W.shape[0])
    Wt = _lagged_matrix(uc, W, blend)
    W1 = (1.0 - b)[:, None] * W
    W2 = b[:, None] * Wt
    return LagMatrixFamily((W1, W2))


def lagged_communication_pair(W: np.ndarray) -> LagMatrixFamily:
    """Split W into its diagonal (current self-opinion) and off-diagonal (lagged peers).

    The two parts sum back to W exactly.
    """
    W = assert_stochastic(W)
    D = np.diag(np.diag(W))
    return LagMatrixFamily((D, W - D))


def validate_family(family: LagMatrixFamily, tol: float = FAMILY_SUM_TOL) -> FamilyValidation:
    """Report whether the family is admissible (entries >= 0, stochastic sum)."""
    failures = []
    min_entry = float("inf")
    for ell, M in enumerate(family.matrices, start=1):
        min_entry = min(min_entry, float(M.min()))
        if np.any(M < 0):
            i, j = np.argwhere(M < 0)[0]
            failures.append(
                f"lag {ell}: negative entry {M[i, j]!r} at ({int(i) + 1}, {int(j) + 1})"
            )
        if not np.all(np.isfinite(M)):
            failures.append(f"lag {ell}: non-finite entry")
    row_sums = family.total().sum(axis=1)
    deviation = float(np.max(np.abs(row_sums - 1.0)))
    if deviation > tol:
        i = int(np.argmax(np.abs(row_sums - 1.0)))
        failures.append(f"row {i + 1} of the summed family deviates by {deviation:.3e}")
    return FamilyValidation(
        passed=not failures,
        max_row_sum_deviation=deviation,
        min_entry=min_entry,
        failures=tuple(failures),
    )


def family_from_tag(
    tag: str,
    W: np.ndarray,
    beta: Union[float, Sequence, None] = None,
    blend: Optional[BlendCoefficients] = None,
) -> LagMatrixFamily:
    """Dispatch covering every CLI tag, including 'lagged-comm' (no beta)."""
    if tag == "lagged-comm":
        return lagged_communication_pair(W)
    if beta is None:
        raise InvalidParameterError(f"use case {tag!r} requires a beta value")
    return use_case_pair(tag, W, beta, blend)
