"""Command-line interface.

Subcommands wire the toolkit into scriptable pipelines:

    fjmm gen-graph  --graph barbell:5 --out DIR
    fjmm simulate   --graph barbell:3 --use-case two-hop --beta 0.8 \\
                    --stubborn 3,4 --innate polarized --out DIR
    fjmm stability  --graph cycle:20 --use-case inertia --beta 0.5 --lambda 0.6
    fjmm experiment example1 --out DIR

Exit codes: 0 success, 1 input error, 2 equilibrium requested for an
unstable model (stability report goes to stderr), 3 unstable verdict from
the ``stability`` command. Flags override values from an optional JSON
config file (``--config``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import FJMMModel, equilibrium, simulate
from .errors import FJMMError, InstabilityError, InvalidParameterError
from .experiments import EXPERIMENT_NAMES, graph_from_spec, run_experiment
from .graphs import row_stochastic, write_edge_list, write_matrix_csv
from .influence import ALL_TAGS, BlendCoefficients, family_from_tag
from .metrics import convergence_time, polarization_index
from .spectral import stability_report

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSTABLE_EQUILIBRIUM = 2
EXIT_UNSTABLE = 3


class _CliError(Exception):
    """Input problem; reported on stderr and mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep the documented code 1
        raise _CliError(message)


def _read_vector(path: str, n: int) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise _CliError(f"vector file not found: {path}")
    tokens = p.read_text(encoding="utf-8").replace(",", " ").split()
    values = np.array([float(t) for t in tokens])
    if values.shape != (n,):
        raise _CliError(f"{path}: expected {n} values, found {values.size}")
    return values


def _scalar_or_file(text: str, n: int) -> np.ndarray:
    try:
        return np.full(n, float(text))
    except ValueError:
        return _read_vector(text, n)


def _merge_config(args: argparse.Namespace) -> dict:
    """JSON config file values, overridden by any flag given on the line."""
    config = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise _CliError(f"config file not found: {args.config}")
        try:
            config = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise _CliError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise _CliError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        config[key.replace("_", "-")] = value
    return config


def _build_graph(config: dict):
    spec = config.get("graph")
    if not spec:
        raise _CliError("a graph is required (--graph FAMILY:ARGS or --graph FILE)")
    if ":" not in spec or Path(spec).exists():
        if not Path(spec).exists():
            raise _CliError(f"graph file not found: {spec}")
        spec = f"file:{spec}"
    return graph_from_spec(spec, config.get("seed"))


def _build_model(config: dict) -> FJMMModel:
    g = _build_graph(config)
    W = row_stochastic(g)
    n = g.n

    lam_spec = config.get("lambda")
    stubborn = config.get("stubborn")
    if (lam_spec is None) == (stubborn is None):
        raise _CliError("give exactly one susceptibility spec: --lambda or --stubborn")
    if stubborn is not None:
        lam = np.ones(n)
        for token in str(stubborn).split(","):
            node = int(token)
            if not 1 <= node <= n:
                raise _CliError(f"stubborn node {node} outside 1..{n}")
            lam[node - 1] = 0.0
    else:
        lam = _scalar_or_file(str(lam_spec), n)

    innate = config.get("innate", "polarized")
    if innate == "polarized":
        s = np.zeros(n)
        s[n // 2 :] = 1.0
    else:
        s = _read_vector(str(innate), n)

    tag = config.get("use-case", "two-hop")
    if tag not in ALL_TAGS:
        raise _CliError(f"unknown use case {tag!r}; valid tags: {', '.join(ALL_TAGS)}")
    beta = None
    if tag != "lagged-comm":
        beta_spec = config.get("beta")
        if beta_spec is None:
            raise _CliError(f"use case {tag!r} requires --beta")
        beta = _scalar_or_file(str(beta_spec), n)
    blend = None
    if tag == "blend":
        alpha1 = config.get("alpha1")
        if alpha1 is None:
            raise _CliError("use case 'blend' requires --alpha1")
        blend = BlendCoefficients(float(alpha1), 1.0 - float(alpha1))
    family = family_from_tag(tag, W, beta, blend)
    return FJMMModel(family, lam, s)


def _cmd_gen_graph(config: dict) -> int:
    g = _build_graph(config)
    outdir = Path(config.get("out", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, outdir / "graph.edges")
    write_matrix_csv(row_stochastic(g), outdir / "W.csv")
    print(f"wrote {outdir / 'graph.edges'} and {outdir / 'W.csv'} (n={g.n})")
    return EXIT_OK


def _cmd_simulate(config: dict) -> int:
    model = _build_model(config)
    horizon = int(config.get("horizon", 1000))
    tol = float(config.get("tol", 1e-6))
    outdir = Path(config.get("out", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    traj = simulate(model, horizon=horizon, stop_tol=tol * 1e-3)
    traj.to_csv(outdir / "trajectory.csv")
    report = stability_report(model)
    if not report.stable:
        print(report.to_json(), file=sys.stderr)
        print(f"model unstable; trajectory written to {outdir / 'trajectory.csv'}", file=sys.stderr)
        return EXIT_UNSTABLE_EQUILIBRIUM
    xbar = equilibrium(model)
    pol = polarization_index(xbar)
    diag = convergence_time(traj, xbar, tol)
    summary = {
        "equilibrium": xbar.tolist(),
        "polarization_index": pol.P,
        "mean_opinion": pol.mean,
        "convergence_steps": diag.steps,
        "convergence_tol": tol,
        "stopped_by": traj.stopped_by,
        "stability": report.to_dict(),
    }
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {outdir / 'trajectory.csv'} and {outdir / 'summary.json'}")
    return EXIT_OK


def _cmd_stability(config: dict) -> int:
    model = _build_model(config)
    report = stability_report(model)
    print(report.to_json())
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def _cmd_experiment(config: dict, name: str) -> int:
    if name not in EXPERIMENT_NAMES:
        print(
            f"unknown experiment {name!r}; valid names: {', '.join(EXPERIMENT_NAMES)}",
            file=sys.stderr,
        )
        return EXIT_INPUT
    overrides: dict = {}
    if config.get("sigma") is not None:
        overrides["sigma"] = float(config["sigma"])
    if config.get("grid") is not None:
        overrides["grid"] = [float(v) for v in str(config["grid"]).split(",")]
    if config.get("use-case") is not None:
        overrides["use_case"] = config["use-case"]
    if config.get("stubborn-fraction") is not None:
        overrides["stubborn_fraction"] = float(config["stubborn-fraction"])
    if config.get("seed") is not None:
        overrides["seed"] = int(config["seed"])
    if config.get("graph") is not None:
        overrides["graph_spec"] = config["graph"]
    if config.get("alpha1") is not None:
        a1 = float(config["alpha1"])
        overrides["blend"] = BlendCoefficients(a1, 1.0 - a1)
    outdir = config.get("out", ".")
    result = run_experiment(name, outdir, **overrides)
    print(f"experiment {name}: wrote {result.name}.csv and {result.name}.meta.json in {outdir}")
    return EXIT_OK


def _add_model_flags(p: _Parser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--graph", help="graph spec (e.g. barbell:5, erdos-renyi:150,0.4) or edge-list file")
    p.add_argument("--use-case", dest="use_case", help=f"one of {', '.join(ALL_TAGS)}")
    p.add_argument("--beta", help="memory weight: scalar or per-node file")
    p.add_argument("--alpha1", help="blend coefficient for use case 'blend'")
    p.add_argument("--lambda", dest="lambda_", help="susceptibility: scalar or per-node file")
    p.add_argument("--stubborn", help="comma-separated 1-based nodes with susceptibility 0")
    p.add_argument("--innate", help="innate opinions: vector file or preset 'polarized'")
    p.add_argument("--seed", type=int, help="seed for random graph families")
    p.add_argument("--out", help="output directory")
    p.add_argument("--tol", type=float, help="convergence tolerance")
    p.add_argument("--horizon", type=int, help="maximum number of simulated steps")


def build_parser() -> _Parser:
    parser = _Parser(prog="fjmm", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("gen-graph", "simulate", "stability"):
        p = sub.add_parser(name)
        _add_model_flags(p)
    pexp = sub.add_parser("experiment")
    pexp.add_argument("name", help=f"one of {', '.join(EXPERIMENT_NAMES)}")
    _add_model_flags(pexp)
    pexp.add_argument("--sigma", help="uniform susceptibility for homogeneous-sweep")
    pexp.add_argument("--grid", help="comma-separated beta0 grid")
    pexp.add_argument("--stubborn-fraction", dest="stubborn_fraction")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _merge_config(args)
        if "lambda-" in config:  # dest name quirk for the reserved word
            config["lambda"] = config.pop("lambda-")
        if args.command == "gen-graph":
            return _cmd_gen_graph(config)
        if args.command == "simulate":
            return _cmd_simulate(config)
        if args.command == "stability":
            return _cmd_stability(config)
        if args.command == "experiment":
            return _cmd_experiment(config, config.pop("name"))
        raise _CliError(f"unknown command {args.command!r}")
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InstabilityError as exc:
        if exc.report is not None:
            print(exc.report.to_json(), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE_EQUILIBRIUM
    except (FJMMError, InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
