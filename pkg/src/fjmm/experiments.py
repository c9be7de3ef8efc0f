"""Seeded reproductions of the model's numerical studies.

Each experiment returns an ExperimentResult whose ``write`` method emits
``<name>.csv`` (plus ``<name>_<table>.csv`` for side tables) and
``<name>.meta.json`` recording the full parameterization, the seeds and
the active kernel backend. Identical seeds reproduce byte-identical CSV
bodies.

Where the original studies relied on unpublished random choices (which
nodes are stubborn, which random-graph sample), fixed default seeds are
published here and the assertions downstream are about orderings and
trends rather than point values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _accel
from ._version import __version__
from .dynamics import FJMMModel, Trajectory, equilibrium, simulate, simulate_comparison
from .errors import InvalidParameterError, InvariantViolationError
from .graphs import (
    RNG_ALGORITHM,
    InfluenceGraph,
    barbell,
    complete,
    cycle,
    erdos_renyi,
    read_edge_list,
    row_stochastic,
    watts_strogatz,
)
from .influence import BlendCoefficients, LagMatrixFamily, use_case_pair
from .metrics import convergence_time, mean_trajectory, polarization_index
from .spectral import (
    StabilityReport,
    augmented,
    closed_form_rho_homogeneous,
    spectral_radius_robust,
    stability_report,
)

#: Seeds published with the toolkit so every study is reproducible.
DEFAULT_SEEDS = {
    "erdos-renyi": 7,
    "watts-strogatz": 11,
    "example3": 23,
    "heterogeneous": 5,
}

DEFAULT_BETA_GRID = tuple(round(0.1 * i, 1) for i in range(10))  # 0.0 .. 0.9

EXPERIMENT_NAMES = (
    "example1",
    "example2",
    "example3",
    "fig2",
    "homogeneous-sweep",
    "heterogeneous-sweep",
)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip, no numpy wrapper
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


@dataclass
class ExperimentResult:
    """A named table of records plus the metadata needed to re-run it."""

    name: str
    columns: tuple
    rows: list
    parameters: dict
    seed: Optional[int] = None
    tables: dict = field(default_factory=dict)  # suffix -> (columns, rows)
    summary: dict = field(default_factory=dict)

    def csv_body(self, table: Optional[str] = None) -> str:
        columns, rows = (self.columns, self.rows) if table is None else self.tables[table]
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, outdir) -> list:
        """Write all CSV tables and the metadata record; returns the paths."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        paths = []
        main = outdir / f"{self.name}.csv"
        main.write_text(self.csv_body(), encoding="utf-8")
        paths.append(main)
        for suffix in sorted(self.tables):
            side = outdir / f"{self.name}_{suffix}.csv"
            side.write_text(self.csv_body(suffix), encoding="utf-8")
            paths.append(side)
        meta = {
            "name": self.name,
            "parameters": self.parameters,
            "seed": self.seed,
            "summary": self.summary,
            "toolkit_version": __version__,
            "kernel_backend": _accel.BACKEND,
            "rng": RNG_ALGORITHM,
            "outputs": [p.name for p in paths],
        }
        meta_path = outdir / f"{self.name}.meta.json"
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(meta_path)
        return paths


def graph_from_spec(spec: str, seed: Optional[int] = None) -> InfluenceGraph:
    """Build a graph from a compact spec string.

    Forms: ``barbell:K``, ``cycle:N``, ``complete:N``, ``erdos-renyi:N,P``,
    ``watts-strogatz:N,K,P`` and ``file:PATH`` (edge-list file). Random
    families require a seed.
    """
    if spec.startswith("file:"):
        return read_edge_list(spec[5:])
    family, _, args = spec.partition(":")
    parts = [a for a in args.split(",") if a] if args else []
    try:
        if family == "barbell":
            return barbell(int(parts[0]))
        if family == "cycle":
            return cycle(int(parts[0]))
        if family == "complete":
            return complete(int(parts[0]))
        if family == "erdos-renyi":
            if seed is None:
                raise InvalidParameterError("erdos-renyi needs a seed")
            return erdos_renyi(int(parts[0]), float(parts[1]), seed)
        if family == "watts-strogatz":
            if seed is None:
                raise InvalidParameterError("watts-strogatz needs a seed")
            return watts_strogatz(int(parts[0]), int(parts[1]), float(parts[2]), seed)
    except (IndexError, ValueError) as exc:
        raise InvalidParameterError(f"malformed graph spec {spec!r}: {exc}") from exc
    raise InvalidParameterError(
        f"unknown graph family {family!r}; expected barbell, cycle, complete, "
        "erdos-renyi, watts-strogatz or file:PATH"
    )


def _polarized_innate(n: int) -> np.ndarray:
    """First half anchored at 0, second half at 1."""
    s = np.zeros(n)
    s[n // 2 :] = 1.0
    return s


def _fj_model(W: np.ndarray, lam, s) -> FJMMModel:
    """The memoryless original model as a one-lag family."""
    return FJMMModel(LagMatrixFamily((W,)), np.asarray(lam, float), np.asarray(s, float))


def example1() -> ExperimentResult:
    """Six-node barbell with stubborn bridge endpoints: memory softens polarization.

    The original model keeps the two cliques at their anchors (0 and 1);
    the two-hop memory model with uniform memory weight 0.8 pulls the
    free nodes to 4/13 and 9/13.
    """
    g = barbell(3)
    W = row_stochastic(g)
    s = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    lam = np.array([1.0, 1.0, 0.0, 0.0, 1.0, 1.0])
    records = []
    summary = {}
    for label, model in (
        ("fj", _fj_model(W, lam, s)),
        ("fj-mm", FJMMModel(use_case_pair("two-hop", W, 0.8), lam, s)),
    ):
        report = stability_report(model)
        xbar = equilibrium(model)
        pol = polarization_index(xbar)
        records.append((label, *xbar.tolist(), pol.P, report.rho_augmented, report.stable))
        summary[label] = {"equilibrium": xbar.tolist(), "P": pol.P}
    columns = ("model", *(f"x_{i}" for i in range(1, 7)), "P", "rho_augmented", "stable")
    return ExperimentResult(
        name="example1",
        columns=columns,
        rows=records,
        parameters={
            "graph": "barbell:3",
            "use_case": "two-hop",
            "beta0": 0.8,
            "lambda": lam.tolist(),
            "innate": s.tolist(),
        },
        summary=summary,
    )


def example2(grid: Optional[Sequence] = None) -> ExperimentResult:
    """Polarization versus memory weight on the ten-node barbell.

    Bridge endpoints are totally stubborn; everyone else is maximally
    susceptible. Raising the uniform memory weight strengthens two-hop
    influence across the bridge and weakens polarization.
    """
    grid = DEFAULT_BETA_GRID if grid is None else tuple(grid)
    if any(not 0.0 <= b < 1.0 for b in grid):
        raise InvalidParameterError("beta0 grid must lie in [0, 1)")
    g = barbell(5)
    W = row_stochastic(g)
    n = g.n
    s = _polarized_innate(n)
    lam = np.ones(n)
    lam[4] = lam[5] = 0.0  # bridge endpoints (nodes 5 and 6)
    rows = []
    for beta0 in grid:
        model = FJMMModel(use_case_pair("two-hop", W, beta0), lam, s)
        report = stability_report(model)
        xbar = equilibrium(model)
        pol = polarization_index(xbar)
        rows.append((beta0, pol.P, pol.mean, report.rho_augmented, report.rho_comparison, report.stable))
    return ExperimentResult(
        name="example2",
        columns=("beta0", "P", "mean", "rho_augmented", "rho_comparison", "stable"),
        rows=rows,
        parameters={
            "graph": "barbell:5",
            "use_case": "two-hop",
            "beta0_grid": list(grid),
            "stubborn_nodes": [5, 6],
            "innate": s.tolist(),
        },
    )


def example3(seed: Optional[int] = None) -> ExperimentResult:
    """Mean-opinion dynamics and final profiles on the sixteen-node barbell.

    Stubborn nodes: both bridge endpoints plus one seeded random node in
    each clique. The three simulated systems (original, memory, its
    memoryless comparison) are run to a common horizon; the memory model
    reaches the shared equilibrium last.
    """
    seed = DEFAULT_SEEDS["example3"] if seed is None else seed
    rng = np.random.default_rng(seed)
    k = 8
    g = barbell(k)
    W = row_stochastic(g)
    n = g.n
    s = _polarized_innate(n)
    pick_left = int(rng.integers(1, k))  # node in 1..k-1 (bridge endpoint k excluded)
    pick_right = int(rng.integers(k + 2, n + 1))  # node in k+2..n
    stubborn = sorted({k, k + 1, pick_left, pick_right})
    lam = np.ones(n)
    lam[[i - 1 for i in stubborn]] = 0.0

    beta0 = 0.8
    fj = _fj_model(W, lam, s)
    mm = FJMMModel(use_case_pair("two-hop", W, beta0), lam, s)

    rho_aug = stability_report(mm).rho_augmented
    horizon = min(max(int(math.ceil(math.log(1e-10) / math.log(rho_aug))), 200), 20_000)
    runs: dict = {
        "fj": simulate(fj, horizon=horizon),
        "fj-mm": simulate(mm, horizon=horizon),
        "comparison": simulate_comparison(mm, horizon=horizon),
    }
    means = {label: mean_trajectory(t)[t.lag - 1 :] for label, t in runs.items()}
    rows = [
        (t, means["fj"][t], means["fj-mm"][t], means["comparison"][t])
        for t in range(horizon + 1)
    ]
    finals = [
        (
            node + 1,
            s[node],
            lam[node],
            runs["fj"].final[node],
            runs["fj-mm"].final[node],
            runs["comparison"].final[node],
        )
        for node in range(n)
    ]
    xbar = equilibrium(mm)
    diag_mm = convergence_time(runs["fj-mm"], xbar, tol=1e-6)
    diag_cmp = convergence_time(runs["comparison"], xbar, tol=1e-6)
    summary = {
        "stubborn_nodes": stubborn,
        "horizon": horizon,
        "steps_to_1e-6": {"fj-mm": diag_mm.steps, "comparison": diag_cmp.steps},
        "fjmm_vs_comparison_limit_maxdiff": float(
            np.max(np.abs(runs["fj-mm"].final - runs["comparison"].final))
        ),
        "fjmm_vs_fj_limit_maxdiff": float(np.max(np.abs(runs["fj-mm"].final - runs["fj"].final))),
    }
    return ExperimentResult(
        name="example3",
        columns=("t", "mean_fj", "mean_fjmm", "mean_comparison"),
        rows=rows,
        parameters={
            "graph": "barbell:8",
            "use_case": "two-hop",
            "beta0": beta0,
            "stubborn_nodes": stubborn,
            "innate": s.tolist(),
        },
        seed=seed,
        tables={
            "final": (
                ("node", "s", "lambda", "x_fj", "x_fjmm", "x_comparison"),
                finals,
            )
        },
        summary=summary,
    )


def homogeneous_sweep(
    sigma: float = 0.6,
    grid: Optional[Sequence] = None,
    use_case: str = "two-hop",
    blend: Optional[BlendCoefficients] = None,
    seeds: Optional[dict] = None,
) -> ExperimentResult:
    """Convergence rate versus memory weight under uniform susceptibility.

    Runs the four reference graphs and records, per weight, the numeric
    companion radius next to its closed form and the comparison value
    sigma: the rate does not depend on the graph at all.
    """
    if not 0.0 < sigma < 1.0:
        raise InvalidParameterError(f"sigma must lie strictly in (0, 1), got {sigma}")
    grid = tuple(round(0.1 * i, 1) for i in range(1, 10)) if grid is None else tuple(grid)
    seeds = {**DEFAULT_SEEDS, **(seeds or {})}
    graphs = (
        ("cycle-20", cycle(20)),
        ("erdos-renyi-150", erdos_renyi(150, 0.4, seeds["erdos-renyi"])),
        ("watts-strogatz-200", watts_strogatz(200, 120, 0.7, seeds["watts-strogatz"])),
        ("complete-50", complete(50)),
    )
    rows = []
    for label, g in graphs:
        W = row_stochastic(g)
        n = g.n
        lam = np.full(n, sigma)
        s = _polarized_innate(n)
        for beta0 in grid:
            family = use_case_pair(use_case, W, beta0, blend)
            model = FJMMModel(family, lam, s)
            rho_num = spectral_radius_robust(augmented(model).matrix)
            rho_cf = closed_form_rho_homogeneous(sigma, beta0)
            rho_cmp = spectral_radius_robust(model.comparison_matrix())
            rows.append((label, beta0, rho_num, rho_cf, rho_cmp, sigma))
    rows.sort(key=lambda r: (r[0], r[1]))
    return ExperimentResult(
        name="homogeneous-sweep",
        columns=("graph", "beta0", "rho_numeric", "rho_closed_form", "rho_comparison", "sigma"),
        rows=rows,
        parameters={
            "sigma": sigma,
            "use_case": use_case,
            "blend": None if blend is None else [blend.alpha1, blend.alpha2],
            "beta0_grid": list(grid),
            "graph_seeds": {k: seeds[k] for k in ("erdos-renyi", "watts-strogatz")},
            "isolated_nodes": "resampled away (generator convention)",
        },
    )


def heterogeneous_sweep(
    graph_spec: str = "watts-strogatz:200,120,0.7",
    stubborn_fraction: float = 0.15,
    grid: Optional[Sequence] = None,
    use_case: str = "two-hop",
    seed: Optional[int] = None,
    graph_seed: Optional[int] = None,
) -> ExperimentResult:
    """Rates under a random totally stubborn subset, versus memory weight.

    Records the memory model's companion radius, the comparison radius
    and the memoryless baseline rho(Lam W) for each weight.
    """
    if not 0.0 < stubborn_fraction <= 1.0:
        raise InvalidParameterError(f"stubborn fraction must lie in (0, 1], got {stubborn_fraction}")
    seed = DEFAULT_SEEDS["heterogeneous"] if seed is None else seed
    graph_seed = DEFAULT_SEEDS["watts-strogatz"] if graph_seed is None else graph_seed
    grid = (*DEFAULT_BETA_GRID, 0.95, 0.99) if grid is None else tuple(grid)
    g = graph_from_spec(graph_spec, graph_seed)
    W = row_stochastic(g)
    n = g.n
    rng = np.random.default_rng(seed)
    count = max(1, int(round(stubborn_fraction * n)))
    chosen = np.sort(rng.choice(n, size=count, replace=False))
    lam = np.ones(n)
    lam[chosen] = 0.0
    s = _polarized_innate(n)
    rho_fj = spectral_radius_robust(lam[:, None] * W)
    rows = []
    for beta0 in grid:
        model = FJMMModel(use_case_pair(use_case, W, beta0), lam, s)
        rho_mm = spectral_radius_robust(augmented(model).matrix)
        rho_cmp = spectral_radius_robust(model.comparison_matrix())
        report = stability_report(model)
        rows.append((beta0, rho_mm, rho_cmp, rho_fj, report.stable))
    return ExperimentResult(
        name="heterogeneous-sweep",
        columns=("beta0", "rho_fjmm", "rho_comparison", "rho_fj", "stable"),
        rows=rows,
        parameters={
            "graph": graph_spec,
            "graph_seed": graph_seed,
            "use_case": use_case,
            "stubborn_fraction": stubborn_fraction,
            "stubborn_nodes": (chosen + 1).tolist(),
            "beta0_grid": list(grid),
        },
        seed=seed,
    )


@dataclass(frozen=True)
class Fig2Instance:
    """A three-node pair of influence matrices, each unstable alone.

    Both factors put the radius of Lam*W at exactly 1 (one free node is
    cut off from the anchored node in each graph), yet any strict blend
    restores global reachability and hence exponential stability.
    """

    W: np.ndarray
    W_tilde: np.ndarray
    lam: np.ndarray
    reports: dict
    result: ExperimentResult


def fig2_instance() -> Fig2Instance:
    """Construct and verify the stabilization-by-memory example."""
    W = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    W_tilde = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    lam = np.array([0.5, 1.0, 1.0])
    s = np.array([0.0, 0.5, 1.0])
    rho_w = spectral_radius_robust(lam[:, None] * W)
    rho_wt = spectral_radius_robust(lam[:, None] * W_tilde)
    for label, rho in (("W", rho_w), ("W_tilde", rho_wt)):
        if abs(rho - 1.0) > 1e-9:
            raise InvariantViolationError(
                f"factor {label} should sit at radius 1, got {rho!r} (spectral bug)"
            )
    reports = {}
    rows = []
    for beta0 in (0.0, 0.25, 0.5, 0.75, 1.0):
        family = LagMatrixFamily(((1.0 - beta0) * W, beta0 * W_tilde))
        report = stability_report(FJMMModel(family, lam, s))
        expected_stable = 0.0 < beta0 < 1.0
        if report.stable != expected_stable or (
            expected_stable and report.rho_augmented >= 1.0
        ):
            raise InvariantViolationError(
                f"blend beta0={beta0} should be {'stable' if expected_stable else 'unstable'}"
            )
        reports[beta0] = report
        rows.append((beta0, report.rho_augmented, report.rho_comparison, report.stable))
    result = ExperimentResult(
        name="fig2",
        columns=("beta0", "rho_augmented", "rho_comparison", "stable"),
        rows=rows,
        parameters={
            "W": W.tolist(),
            "W_tilde": W_tilde.tolist(),
            "lambda": lam.tolist(),
            "rho_lam_w": rho_w,
            "rho_lam_w_tilde": rho_wt,
        },
    )
    return Fig2Instance(W=W, W_tilde=W_tilde, lam=lam, reports=reports, result=result)


def run_experiment(name: str, outdir, **overrides) -> ExperimentResult:
    """Dispatch by experiment name and write its outputs to ``outdir``."""
    if name == "example1":
        result = example1()
    elif name == "example2":
        result = example2(grid=overrides.get("grid"))
    elif name == "example3":
        result = example3(seed=overrides.get("seed"))
    elif name == "fig2":
        result = fig2_instance().result
    elif name == "homogeneous-sweep":
        result = homogeneous_sweep(
            sigma=overrides.get("sigma", 0.6),
            grid=overrides.get("grid"),
            use_case=overrides.get("use_case", "two-hop"),
            blend=overrides.get("blend"),
            seeds=overrides.get("seeds"),
        )
    elif name == "heterogeneous-sweep":
        result = heterogeneous_sweep(
            graph_spec=overrides.get("graph_spec", "watts-strogatz:200,120,0.7"),
            stubborn_fraction=overrides.get("stubborn_fraction", 0.15),
            grid=overrides.get("grid"),
            use_case=overrides.get("use_case", "two-hop"),
            seed=overrides.get("seed"),
            graph_seed=overrides.get("graph_seed"),
        )
    else:
        raise InvalidParameterError(
            f"unknown experiment {name!r}; valid names: {', '.join(EXPERIMENT_NAMES)}"
        )
    result.write(outdir)
    return result
