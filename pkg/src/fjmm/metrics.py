"""Outcome measures: polarization, mean opinion, convergence diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import Trajectory


@dataclass(frozen=True)
class PolarizationReport:
    """Mean squared deviation of an opinion profile from its average."""

    P: float
    mean: float
    equilibrium: np.ndarray


@dataclass(frozen=True)
class ConvergenceDiagnostics:
    """Steps until a trajectory stays within tol of its limit.

    ``steps`` is None (and ``converged`` False) when the trajectory never
    settles; ``final_error`` always reports the last distance. The
    estimated per-step contraction rate is a diagnostic only, never a
    stability criterion.
    """

    steps: Optional[int]
    converged: bool
    final_error: float
    tol: float
    estimated_rate: Optional[float] = None


def polarization_index(xbar: np.ndarray) -> PolarizationReport:
    """P = (xbar - x*)'(xbar - x*) / n with x* the arithmetic mean."""
    xbar = np.asarray(xbar, dtype=float)
    mean = float(xbar.mean())
    dev = xbar - mean
    return PolarizationReport(P=float(dev @ dev / xbar.size), mean=mean, equilibrium=xbar.copy())


def mean_trajectory(traj: Trajectory) -> np.ndarray:
    """Network-average opinion at every stored time (seed history included)."""
    return traj.states.mean(axis=1)


def _errors_from(traj: Trajectory, xbar: np.ndarray) -> np.ndarray:
    """Max-norm distance to xbar for the simulated part (t >= 0)."""
    xbar = np.asarray(xbar, dtype=float)
    post = traj.states[traj.lag - 1 :]
    return np.max(np.abs(post - xbar), axis=1)


def estimate_rate(traj: Trajectory, xbar: np.ndarray, window: int = 20) -> Optional[float]:
    """Average ratio of successive max-norm errors over the last ``window`` steps.

    Errors at the floating-point noise floor are excluded; None when no
    informative pair remains.
    """
    err = _errors_from(traj, xbar)
    floor = 1e-14 * max(1.0, float(np.max(np.abs(xbar))))
    ratios = []
    for a, b in zip(err[-window - 1 : -1], err[-window:]):
        if a > floor and b > floor:
            ratios.append(b / a)
    if not ratios:
        return None
    return float(np.mean(ratios))


def convergence_time(traj: Trajectory, xbar: np.ndarray, tol: float) -> ConvergenceDiagnostics:
    """First t >= 0 from which the trajectory stays within tol of xbar.

    All later stored states must also satisfy the bound; a dip that
    re-escapes does not count.
    """
    err = _errors_from(traj, xbar)
    within = err <= tol
    steps: Optional[int] = None
    # last index where the bound is violated; convergence starts after it
    violations = np.nonzero(~within)[0]
    if violations.size == 0:
        steps = 0
    elif violations[-1] + 1 < within.size:
        steps = int(violations[-1] + 1)
    return ConvergenceDiagnostics(
        steps=steps,
        converged=steps is not None,
        final_error=float(err[-1]),
        tol=tol,
        estimated_rate=estimate_rate(traj, xbar),
    )
