"""Command-line interface: exit codes, file outputs, config handling."""

import json

import numpy as np
import pytest

from fjmm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_graph_writes_files(tmp_path, capsys):
    code, out, _ = run(capsys, "gen-graph", "--graph", "barbell:3", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "graph.edges").exists()
    assert (tmp_path / "W.csv").exists()
    assert "n=6" in out


def test_simulate_reference_model(tmp_path, capsys):
    code, _, _ = run(
        capsys,
        "simulate",
        "--graph", "barbell:3",
        "--use-case", "two-hop",
        "--beta", "0.8",
        "--stubborn", "3,4",
        "--innate", "polarized",
        "--horizon", "5000",
        "--out", str(tmp_path),
    )
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    np.testing.assert_allclose(
        summary["equilibrium"], [4 / 13, 4 / 13, 0, 1, 9 / 13, 9 / 13], atol=1e-9
    )
    assert summary["stability"]["stable"] is True
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0].startswith("t,x_1")


def test_simulate_all_stubborn_constant(tmp_path, capsys):
    code, _, _ = run(
        capsys,
        "simulate",
        "--graph", "cycle:4",
        "--use-case", "memory",
        "--beta", "0.5",
        "--lambda", "0",
        "--innate", "polarized",
        "--horizon", "50",
        "--out", str(tmp_path),
    )
    assert code == 0
    rows = (tmp_path / "trajectory.csv").read_text().splitlines()[1:]
    values = {row.split(",", 1)[1] for row in rows}
    assert len(values) == 1  # every state equals the innate profile


def test_simulate_unstable_exits_two(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "simulate",
        "--graph", "cycle:4",
        "--use-case", "inertia",
        "--beta", "0.5",
        "--lambda", "1",
        "--out", str(tmp_path),
    )
    assert code == 2
    assert '"stable": false' in err
    assert (tmp_path / "trajectory.csv").exists()
    assert not (tmp_path / "summary.json").exists()


def test_missing_graph_file_exits_one(capsys):
    code, _, err = run(capsys, "simulate", "--graph", "/no/such/file.edges", "--lambda", "0.5")
    assert code == 1
    assert "not found" in err


def test_stability_exit_codes(capsys):
    code, out, _ = run(
        capsys, "stability",
        "--graph", "cycle:5", "--use-case", "inertia", "--beta", "0.5", "--lambda", "0.6",
    )
    assert code == 0
    assert json.loads(out)["stable"] is True

    code, out, _ = run(
        capsys, "stability",
        "--graph", "cycle:5", "--use-case", "inertia", "--beta", "0.5", "--lambda", "1",
    )
    assert code == 3
    assert json.loads(out)["stable"] is False


def test_stability_requires_exactly_one_lambda_spec(capsys):
    code, _, err = run(capsys, "stability", "--graph", "cycle:5", "--use-case", "memory", "--beta", "0.1")
    assert code == 1 and "exactly one" in err
    code, _, err = run(
        capsys, "stability",
        "--graph", "cycle:5", "--use-case", "memory", "--beta", "0.1",
        "--lambda", "0.5", "--stubborn", "1",
    )
    assert code == 1 and "exactly one" in err


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "graph": "barbell:3",
        "use-case": "two-hop",
        "beta": "0.8",
        "stubborn": "3,4",
        "out": str(tmp_path / "from-config"),
    }))
    code, _, _ = run(capsys, "stability", "--config", str(config))
    assert code == 0
    # flag overrides the config's stubborn set: nobody anchored -> unstable
    code, _, _ = run(capsys, "stability", "--config", str(config), "--lambda", "1")
    assert code == 1  # both lambda and stubborn now present
    config2 = tmp_path / "run2.json"
    config2.write_text(json.dumps({"graph": "cycle:4", "use-case": "inertia", "beta": "0.5"}))
    code, _, _ = run(capsys, "stability", "--config", str(config2), "--lambda", "1")
    assert code == 3


def test_experiment_commands(tmp_path, capsys):
    code, _, _ = run(capsys, "experiment", "example1", "--out", str(tmp_path))
    assert code == 0
    body = (tmp_path / "example1.csv").read_text().splitlines()
    assert len(body) == 3  # header + two model rows

    code, _, err = run(capsys, "experiment", "nonsense", "--out", str(tmp_path))
    assert code == 1
    assert "valid names" in err


def test_experiment_homogeneous_with_overrides(tmp_path, capsys):
    code, _, _ = run(
        capsys, "experiment", "homogeneous-sweep",
        "--sigma", "0.6", "--grid", "0.5", "--out", str(tmp_path),
    )
    assert code == 0
    rows = (tmp_path / "homogeneous-sweep.csv").read_text().splitlines()[1:]
    assert len(rows) == 4  # one grid point on four graphs
    meta = json.loads((tmp_path / "homogeneous-sweep.meta.json").read_text())
    assert meta["parameters"]["sigma"] == 0.6


def test_unknown_flag_exits_one(capsys):
    code, _, err = run(capsys, "stability", "--nonsense", "1")
    assert code == 1


def test_weighted_edge_list_roundtrip_through_cli(tmp_path, capsys):
    edges = tmp_path / "g.edges"
    edges.write_text("1 2\n2 3\n3 1\n", encoding="utf-8")
    code, out, _ = run(capsys, "stability",
                       "--graph", str(edges), "--use-case", "memory", "--beta", "0.2",
                       "--stubborn", "1")
    assert code == 0
    assert json.loads(out)["stubborn_set"] == [1]
