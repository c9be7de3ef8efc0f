"""Numpy reference implementations of the hot kernels.

These are the import-time fallback when the compiled extension is absent
(or when FJMM_PURE_PYTHON is set). The compiled kernels in _kernels.pyx
implement the same contracts; tests assert agreement between the two.
"""

from __future__ import annotations

import numpy as np

# components below this are treated as numerically vanished: eigenvector
# ratio bounds are only valid for strictly positive iterates
TINY = 1e-250


def power_chunk(M: np.ndarray, x: np.ndarray, stats: np.ndarray) -> int:
    """Run shifted power iterations y = (M + I) x, updating x in place.

    For each iteration, one row of ``stats`` receives
      [0] Rayleigh quotient x'(M+I)x  (x holds unit 2-norm on entry),
      [1] min_i y_i / x_i and [2] max_i y_i / x_i  (eigenvalue bounds for
          positive x; -inf/+inf when a component of x has underflowed).

    Returns the number of iterations completed (short only if the iterate
    degenerates, which the caller reports as a numerical failure).
    """
    for t in range(stats.shape[0]):
        y = M @ x
        y += x
        stats[t, 0] = float(x @ y)
        if x.min() > TINY:
            r = y / x
            stats[t, 1] = r.min()
            stats[t, 2] = r.max()
        else:
            stats[t, 1] = -np.inf
            stats[t, 2] = np.inf
        norm = float(np.linalg.norm(y))
        if norm <= 0.0 or not np.isfinite(norm):
            return t + 1
        np.divide(y, norm, out=x)
    return stats.shape[0]


def simulate_lags(
    A: np.ndarray,
    b: np.ndarray,
    traj: np.ndarray,
    max_steps: int,
    stop_tol: float,
    consec_needed: int,
) -> tuple:
    """Advance x(t+1) = sum_l A[l] x(t-l) + b for up to max_steps steps.

    ``A`` has shape (L, n, n) with A[0] applied to the newest state;
    ``traj`` is preallocated with the L seed states in rows 0..L-1
    (oldest first) and receives one row per step. With stop_tol >= 0 the
    recursion stops early once the max-norm step difference stays below
    stop_tol for ``consec_needed`` consecutive steps.

    Returns (steps_taken, stopped_by_tolerance).
    """
    L = A.shape[0]
    g = L
    consec = 0
    for step in range(max_steps):
        x = b.copy()
        for lag in range(L):
            x += A[lag] @ traj[g - 1 - lag]
        traj[g] = x
        diff = float(np.max(np.abs(x - traj[g - 1])))
        g += 1
        if stop_tol >= 0.0:
            consec = consec + 1 if diff < stop_tol else 0
            if consec >= consec_needed:
                return step + 1, True
    return max_steps, False
