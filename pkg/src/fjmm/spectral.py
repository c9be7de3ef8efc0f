"""Stability certification and convergence rates.

Stability of the memory model is decided three ways and cross-checked:

  1. spectral radius of the memoryless comparison matrix A,
  2. spectral radius of the stacked companion matrix A_d whose recursion
     y(t) = A_d y(t-1) + C reproduces the lagged dynamics (this radius is
     the model's convergence rate),
  3. the combinatorial criterion: the anchored nodes {i : lam_ii < 1}
     must be non-empty and reachable from every node in the graph of the
     summed lag matrices.

The graph criterion is exact and is authoritative for the verdict; the
radii are diagnostics (they sit exactly at 1 for unstable models, which
no floating-point test should be trusted to resolve).

Radii are computed by power iteration on M + I from the all-ones vector.
The +1 shift makes the Perron root strictly dominant in modulus even for
periodic or reducible nonnegative matrices. For strictly positive
iterates the component-wise ratios of consecutive iterates bracket the
radius rigorously; when zero rows keep that bracket from closing, a
rate-aware Rayleigh-quotient test takes over, and a dense eigensolver
remains available as a fallback and as the test oracle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _accel
from .dynamics import FJMMModel, as_susceptibility, stubborn_set
from .errors import (
    InvalidParameterError,
    NumericalFailureError,
    SpectralAccuracyError,
)
from .graphs import assert_stochastic, globally_reachable
from .influence import LagMatrixFamily, as_beta

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
# |rho - 1| at or below this is "at the stability boundary": the numeric
# verdict is withheld and the graph criterion alone decides
BOUNDARY_BAND = 1e-9


@dataclass(frozen=True)
class AugmentedSystem:
    """Companion form of the lagged recursion: y(t) = A_d y(t-1) + C.

    The stacked state is y(t-1) = [x(t-L+1); ...; x(t)]. For L=2 the
    matrix is [[0, I], [Lam*W2, Lam*W1]] and C = [0; (I-Lam)s].
    """

    matrix: np.ndarray
    offset: np.ndarray
    lag: int
    n: int


def augmented(model: FJMMModel) -> AugmentedSystem:
    """Companion stacking of the model's lag blocks (L=1 collapses to Lam*W1)."""
    n, L = model.n, model.L
    scaled = model.scaled_lags()  # scaled[l] = Lam * W_{l+1}
    if L == 1:
        matrix = scaled[0].copy()
    else:
        matrix = np.zeros((n * L, n * L))
        for blk in range(L - 1):
            matrix[blk * n : (blk + 1) * n, (blk + 1) * n : (blk + 2) * n] = np.eye(n)
        for lag in range(L):
            col = (L - 1 - lag) * n
            matrix[(L - 1) * n :, col : col + n] = scaled[lag]
    offset = np.zeros(n * L)
    offset[(L - 1) * n :] = model.anchor()
    return AugmentedSystem(matrix=np.ascontiguousarray(matrix), offset=offset, lag=L, n=n)


def _validated_nonnegative(M) -> np.ndarray:
    M = np.ascontiguousarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidParameterError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidParameterError("matrix contains non-finite entries")
    if np.any(M < 0):
        i, j = np.argwhere(M < 0)[0]
        raise InvalidParameterError(f"negative entry at ({int(i) + 1}, {int(j) + 1})")
    return M


def spectral_radius(
    M: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    backend=None,
) -> float:
    """Spectral radius of a nonnegative matrix via shifted power iteration.

    Converges either through the rigorous ratio bracket (irreducible
    cases; certified within tol) or through stabilization of the Rayleigh
    quotient with a geometric-tail error bound. Exhausting max_iter
    raises SpectralAccuracyError carrying the best rigorous bracket.
    """
    M = _validated_nonnegative(M)
    kernel = (backend or _accel).power_chunk
    n = M.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    lo_best, hi_best = -math.inf, math.inf
    prev_r = math.nan
    deltas: list = []
    iters = 0
    chunk = 16
    while iters < max_iter:
        size = min(chunk, max_iter - iters)
        stats = np.empty((size, 3))
        done = kernel(M, x, stats)
        for k in range(done):
            rayleigh, lo, hi = (float(v) for v in stats[k])
            iters += 1
            if not math.isfinite(rayleigh):
                raise NumericalFailureError("power iteration produced non-finite values")
            lo_best = max(lo_best, lo)
            hi_best = min(hi_best, hi)
            if hi_best - lo_best <= tol:
                return max(0.5 * (lo_best + hi_best) - 1.0, 0.0)
            if math.isfinite(prev_r):
                deltas.append(abs(rayleigh - prev_r))
                if len(deltas) > 5:
                    deltas.pop(0)
                if len(deltas) >= 3 and iters >= 8:
                    d_eff = max(deltas[-3:])
                    if d_eff == 0.0:
                        value = min(max(rayleigh, lo_best), hi_best) - 1.0
                        return max(value, 0.0)
                    ratios = [
                        deltas[i + 1] / deltas[i]
                        for i in range(len(deltas) - 1)
                        if deltas[i] > 0.0
                    ]
                    rate = min(max(ratios), 0.9999) if ratios else 0.9999
                    if d_eff <= tol and d_eff * rate / (1.0 - rate) <= 0.5 * tol:
                        value = min(max(rayleigh, lo_best), hi_best) - 1.0
                        return max(value, 0.0)
            prev_r = rayleigh
        if done < size:
            raise NumericalFailureError("power iteration iterate degenerated")
        chunk = min(chunk * 2, 512)
    raise SpectralAccuracyError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations",
        bracket=(max(lo_best - 1.0, 0.0), hi_best - 1.0),
        estimate=max(min(max(prev_r, lo_best), hi_best) - 1.0, 0.0),
        iterations=iters,
    )


def spectral_radius_dense(M: np.ndarray) -> float:
    """Dense eigensolver fallback/oracle: max |eigenvalue|."""
    M = _validated_nonnegative(M)
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def spectral_radius_robust(M: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int = 20_000) -> float:
    """Power iteration, falling back to the dense eigensolver if it stalls."""
    try:
        return spectral_radius(M, tol=tol, max_iter=max_iter)
    except SpectralAccuracyError:
        return spectral_radius_dense(M)


@dataclass(frozen=True)
class StabilityReport:
    """All three stability criteria for one model, cross-checked.

    ``stable`` is the graph criterion's verdict. ``criteria_agree`` is
    False only when a radius lies outside the boundary band yet its
    verdict contradicts the graph one (which would falsify the
    equivalence theorem and is treated as a bug).
    """

    rho_comparison: float
    rho_augmented: float
    stubborn_set: frozenset
    globally_reachable: bool
    stable: bool
    criteria_agree: bool

    def to_dict(self) -> dict:
        sig12 = lambda v: float(f"{v:.12g}")  # noqa: E731
        return {
            "rho_comparison": sig12(self.rho_comparison),
            "rho_augmented": sig12(self.rho_augmented),
            "stubborn_set": sorted(self.stubborn_set),
            "globally_reachable": self.globally_reachable,
            "stable": self.stable,
            "criteria_agree": self.criteria_agree,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def stability_report(model: FJMMModel, tol: float = DEFAULT_TOL) -> StabilityReport:
    """Evaluate the comparison radius, the companion radius and the graph criterion."""
    anchored = stubborn_set(model.lam)
    union_graph = model.family.total()
    reachable = globally_reachable(union_graph, anchored)
    rho_cmp = spectral_radius_robust(model.comparison_matrix(), tol=tol)
    rho_aug = spectral_radius_robust(augmented(model).matrix, tol=tol)
    agree = True
    for rho in (rho_cmp, rho_aug):
        if abs(rho - 1.0) > BOUNDARY_BAND and (rho < 1.0) != reachable:
            agree = False
    return StabilityReport(
        rho_comparison=rho_cmp,
        rho_augmented=rho_aug,
        stubborn_set=frozenset(anchored),
        globally_reachable=reachable,
        stable=reachable,
        criteria_agree=agree,
    )


def corollary1_sufficient(
    W: np.ndarray,
    W_tilde: np.ndarray,
    lam: Union[float, Sequence],
    beta: Union[float, Sequence],
) -> bool:
    """Sufficient stability test for W1 = (I-[beta])W, W2 = [beta]Wt families.

    True when Lam*W or Lam*Wt alone is Schur stable, i.e. when the
    anchored nodes are globally reachable in either matrix's own graph.
    Sufficient only: a blend can be stable although both factors sit at
    radius 1. Requires beta strictly inside (0, 1) so both graphs
    actually contribute to the union.
    """
    W = assert_stochastic(W)
    Wt = assert_stochastic(W_tilde)
    n = W.shape[0]
    b = as_beta(beta, n)
    if np.any(b <= 0) or np.any(b >= 1):
        raise InvalidParameterError("corollary requires beta strictly inside (0, 1)")
    lam_arr = as_susceptibility(lam, n)
    anchored = stubborn_set(lam_arr)
    return globally_reachable(W, anchored) or globally_reachable(Wt, anchored)


def closed_form_rho_homogeneous(sigma: float, beta0: float) -> float:
    """Convergence rate for uniform susceptibility sigma and uniform memory weight.

    Valid for the two-hop family (Wt = W^2) and for any inertia/memory
    blend Wt = a1 W + a2 I; the value is independent of the graph and of
    the blend split:

        rho = (sigma (1 - beta0) + sqrt(sigma^2 (1 - beta0)^2 + 4 sigma beta0)) / 2

    and always lies strictly between sigma and 1.
    """
    if not 0.0 < sigma < 1.0:
        raise InvalidParameterError(f"sigma must lie strictly in (0, 1), got {sigma}")
    if not 0.0 < beta0 < 1.0:
        raise InvalidParameterError(f"beta0 must lie strictly in (0, 1), got {beta0}")
    a = sigma * (1.0 - beta0)
    return 0.5 * (a + math.sqrt(a * a + 4.0 * sigma * beta0))


@dataclass(frozen=True)
class Prop2Result:
    rho_augmented: float
    rho_comparison: float
    holds: bool


def prop2_check(model: FJMMModel, tol: float = DEFAULT_TOL) -> Prop2Result:
    """Verify that memory never speeds convergence: rho(A_d) >= rho(A).

    Scoped to two-lag models, matching the statement it checks.
    """
    if model.L != 2:
        raise InvalidParameterError(f"check is stated for L=2 models, got L={model.L}")
    # the 1e-12 margin of the inequality demands sharper radii than the
    # default tolerance; stalled iterations drop to the dense solver fast
    tight = min(tol, 1e-13)
    rho_aug = spectral_radius_robust(augmented(model).matrix, tol=tight, max_iter=3000)
    rho_cmp = spectral_radius_robust(model.comparison_matrix(), tol=tight, max_iter=3000)
    return Prop2Result(rho_aug, rho_cmp, holds=rho_aug >= rho_cmp - 1e-12)


def lemma3_rho(sigma: float, W_hat: np.ndarray) -> float:
    """rho(sigma * W_hat) for stochastic W_hat; equals sigma exactly."""
    W_hat = assert_stochastic(W_hat)
    return spectral_radius(sigma * W_hat)
