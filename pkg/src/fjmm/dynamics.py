"""Opinion recursions: the memory model, its memoryless comparison, equilibria.

The model updates

    x(t+1) = Lam * (W1 x(t) + ... + WL x(t-L+1)) + (I - Lam) s

where Lam is the diagonal susceptibility matrix, the lag family (W1..WL)
sums to a stochastic matrix and s holds the innate opinions. The
comparison system replaces the lagged average by the one-step matrix
A = Lam * (W1 + ... + WL) and shares the equilibrium

    xbar = (I - A)^-1 (I - Lam) s

whenever either system is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import _accel
from .errors import (
    InstabilityError,
    InvalidParameterError,
    InvalidStateError,
    InvariantViolationError,
    NumericalFailureError,
)
from .influence import LagMatrixFamily

# condition estimate beyond this flags a near-singular equilibrium solve
COND_THRESHOLD = 1.0 / np.sqrt(np.finfo(float).eps)
RESIDUAL_TOL_PER_NODE = 1e-10
HULL_SLACK = 1e-12


def as_susceptibility(lam: Union[float, Sequence], n: int) -> np.ndarray:
    """Validate per-node susceptibilities in [0, 1]; scalars broadcast."""
    arr = np.asarray(lam, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise InvalidParameterError(f"susceptibility has shape {arr.shape}, expected ({n},)")
    if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("susceptibility entries must lie in [0, 1]")
    return arr


def stubborn_set(lam: np.ndarray) -> set:
    """1-based nodes with susceptibility strictly below 1 (anchored to s)."""
    return {int(i) + 1 for i in np.nonzero(np.asarray(lam) < 1.0)[0]}


@dataclass(frozen=True)
class FJMMModel:
    """A fully parameterized memory model: lag family, susceptibility, innate opinions."""

    family: LagMatrixFamily
    lam: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        n = self.family.n
        object.__setattr__(self, "lam", as_susceptibility(self.lam, n))
        s = np.ascontiguousarray(self.s, dtype=float)
        if s.shape != (n,):
            raise InvalidParameterError(f"innate opinions have shape {s.shape}, expected ({n},)")
        if not np.all(np.isfinite(s)):
            raise InvalidParameterError("innate opinions must be finite")
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def L(self) -> int:
        return self.family.L

    def scaled_lags(self) -> np.ndarray:
        """(L, n, n) stack of Lam * W_ell, newest lag first."""
        out = np.empty((self.L, self.n, self.n))
        for idx, W in enumerate(self.family.matrices):
            out[idx] = self.lam[:, None] * W
        return np.ascontiguousarray(out)

    def anchor(self) -> np.ndarray:
        """(I - Lam) s, the constant term of every update."""
        return (1.0 - self.lam) * self.s

    def comparison_matrix(self) -> np.ndarray:
        """A = Lam * (W1 + ... + WL), the memoryless comparison matrix."""
        return self.lam[:, None] * self.family.total()

    def comparison_model(self) -> "FJMMModel":
        """The L=1 model with the summed influence matrix (same Lam, s)."""
        return FJMMModel(LagMatrixFamily((self.family.total(),)), self.lam, self.s)


@dataclass(frozen=True)
class Trajectory:
    """Opinion states x(-L+1), ..., x(T): seed history plus simulated steps.

    Row r of ``states`` holds time t = r - (lag - 1); ``stopped_by`` is
    'tolerance' when the stop criterion fired before the horizon.
    """

    states: np.ndarray
    lag: int
    stopped_by: str = "horizon"

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def t_final(self) -> int:
        return self.states.shape[0] - self.lag

    def times(self) -> np.ndarray:
        return np.arange(self.states.shape[0]) - (self.lag - 1)

    def x(self, t: int) -> np.ndarray:
        r = t + self.lag - 1
        if not 0 <= r < self.states.shape[0]:
            raise InvalidParameterError(f"time {t} outside stored range")
        return self.states[r]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, path) -> None:
        """Write ``t,x_1,...,x_n`` rows, seed history at t = -L+1..0."""
        header = "t," + ",".join(f"x_{i + 1}" for i in range(self.n))
        lines = [header]
        for t, row in zip(self.times(), self.states):
            lines.append(f"{int(t)}," + ",".join(repr(v) for v in row.tolist()))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def step(model: FJMMModel, history: Sequence) -> np.ndarray:
    """One update from the last L opinion vectors, newest first."""
    hist = [np.asarray(h, dtype=float) for h in history]
    if len(hist) != model.L:
        raise InvalidStateError(f"history holds {len(hist)} states, model needs {model.L}")
    out = model.anchor()
    for A, h in zip(model.scaled_lags(), hist):
        if h.shape != (model.n,):
            raise InvalidStateError(f"history vector has shape {h.shape}, expected ({model.n},)")
        out = out + A @ h
    return out


def _seed_history(model: FJMMModel, init) -> np.ndarray:
    if init is None or (isinstance(init, str) and init == "innate"):
        return np.tile(model.s, (model.L, 1))
    if isinstance(init, Trajectory):
        if init.states.shape[0] < model.L:
            raise InvalidStateError("trajectory seed shorter than the memory depth")
        return init.states[-model.L :].copy()
    arr = np.asarray(init, dtype=float)
    if arr.ndim == 1:
        arr = np.tile(arr, (model.L, 1))
    if arr.shape != (model.L, model.n):
        raise InvalidStateError(f"seed history has shape {arr.shape}, expected ({model.L}, {model.n})")
    return arr.copy()


def simulate(
    model: FJMMModel,
    init=None,
    horizon: int = 1000,
    stop_tol: Optional[float] = None,
) -> Trajectory:
    """Iterate the model from a seed history (default: all rows equal s).

    Runs until ``horizon`` steps or, when stop_tol is given, until the
    max-norm difference of consecutive states stays below stop_tol for L
    consecutive steps, whichever comes first.
    """
    if horizon < 1:
        raise InvalidParameterError(f"horizon must be >= 1, got {horizon}")
    traj = np.empty((model.L + horizon, model.n))
    traj[: model.L] = _seed_history(model, init)  # rows oldest first
    A = model.scaled_lags()
    steps, hit_tol = _accel.simulate_lags(
        A,
        model.anchor(),
        traj,
        horizon,
        -1.0 if stop_tol is None else float(stop_tol),
        model.L,
    )
    states = traj[: model.L + steps]
    if not np.all(np.isfinite(states)):
        raise NumericalFailureError("simulation produced non-finite opinions (bug signal)")
    return Trajectory(states=states, lag=model.L, stopped_by="tolerance" if hit_tol else "horizon")


def simulate_comparison(
    model: FJMMModel,
    init=None,
    horizon: int = 1000,
    stop_tol: Optional[float] = None,
) -> Trajectory:
    """Simulate the memoryless comparison system of the model.

    Seed histories longer than one state contribute only their newest row.
    """
    comp = model.comparison_model()
    if isinstance(init, Trajectory):
        init = init.states[-1]
    elif init is not None and not isinstance(init, str):
        arr = np.asarray(init, dtype=float)
        init = arr[-1] if arr.ndim == 2 else arr
    return simulate(comp, init, horizon, stop_tol)


def _solve_stable(model: FJMMModel, rhs: np.ndarray) -> np.ndarray:
    from . import spectral  # deferred: spectral imports nothing from here

    report = spectral.stability_report(model)
    if not report.stable:
        raise InstabilityError(
            "model is not exponentially stable; see the attached stability report",
            report=report,
        )
    A = model.comparison_matrix()
    lhs = np.eye(model.n) - A
    cond = np.linalg.cond(lhs)
    if not np.isfinite(cond) or cond > COND_THRESHOLD:
        raise InstabilityError(
            f"I - A is near-singular (condition estimate {cond:.3e}); "
            "the model sits at the edge of stability, see the stability report",
            report=report,
        )
    sol = np.linalg.solve(lhs, rhs)
    residual = np.max(np.abs(lhs @ sol - rhs))
    if residual > RESIDUAL_TOL_PER_NODE * model.n:
        raise NumericalFailureError(f"equilibrium solve residual {residual:.3e} too large")
    return sol


def equilibrium(model: FJMMModel) -> np.ndarray:
    """xbar = (I - A)^-1 (I - Lam) s via a dense direct solve (stable models only)."""
    return _solve_stable(model, model.anchor())


def control_matrix(model: FJMMModel) -> np.ndarray:
    """(I - A)^-1 (I - Lam): row i gives how innate opinions mix into node i's limit."""
    return _solve_stable(model, np.diag(1.0 - model.lam))


def hull_envelope(traj: Trajectory, s: np.ndarray) -> tuple:
    """Running min/max envelopes over each L-deep window joined with s.

    Returns (m, M) over t = 0..T. Their monotonicity (m nondecreasing, M
    nonincreasing) is guaranteed by the update's convexity; a violation
    beyond a 1e-12 slack signals a stepping bug and raises.
    """
    s = np.asarray(s, dtype=float)
    L = traj.lag
    states = traj.states
    if states.shape[0] < L:
        raise InvalidStateError("trajectory shorter than its own memory depth")
    s_min, s_max = float(s.min()), float(s.max())
    count = states.shape[0] - L + 1
    m = np.empty(count)
    M = np.empty(count)
    for idx in range(count):
        window = states[idx : idx + L]
        m[idx] = min(float(window.min()), s_min)
        M[idx] = max(float(window.max()), s_max)
    if np.any(np.diff(m) < -HULL_SLACK) or np.any(np.diff(M) > HULL_SLACK):
        raise InvariantViolationError(
            "hull envelope lost monotonicity; the stepping rule is corrupted"
        )
    return m, M
