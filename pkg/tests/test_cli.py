import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mhdlab import cli
from mhdlab.fieldio import read_field


def run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "mhdlab.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


def test_config_merge_and_set(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"grid": {"N": 128}, "seed": 7}))
    config = cli.load_config(str(cfg_path), ["grid.M=4.0", "solve.dt=0.01",
                                             "experiment.name=residuals"])
    assert config["grid"]["N"] == 128
    assert config["grid"]["d"] == 2          # default preserved
    assert config["grid"]["M"] == 4.0
    assert config["solve"]["dt"] == 0.01
    assert config["seed"] == 7


def test_validation_aggregates_errors():
    config = cli.load_config(None, ["grid.N=13", "grid.d=5", "family.delta=0.9",
                                    "solve.cfl=2.0"])
    with pytest.raises(cli.ConfigError) as info:
        cli.validate_config(config)
    msg = str(info.value)
    assert "grid" in msg and "family" in msg and "solve" in msg


def test_generate_norm_simulate_round_trip(tmp_path):
    out = tmp_path / "out"
    r = run_cli(["generate", "--set", "grid.N=128", "--set", "family.n=4",
                 "--set", f"output_dir={out}"], tmp_path)
    assert r.returncode == 0, r.stderr
    sidecar = json.loads((out / "family.json").read_text())
    assert sidecar["family"]["n"] == 4
    _, u0 = read_field(out / "u0.mhdf")
    assert u0.grid.npts == 128

    r = run_cli(["norm", str(out / "u0.mhdf"), "--s", "2.0"], tmp_path)
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["kind"] == "Hs" and report["value"] > 0

    r = run_cli(["norm", str(out / "b0.mhdf"), "--kind", "besov",
                 "--s", "1.0", "--r", "2.0"], tmp_path)
    data = json.loads(r.stdout)
    assert data["kind"] == "Besov"
    assert all(len(pair) == 2 for pair in data["per_block"])

    r = run_cli(["simulate",
                 "--set", f"input.u0={out / 'u0.mhdf'}",
                 "--set", f"input.b0={out / 'b0.mhdf'}",
                 "--set", "solve.t_end=0.02", "--set", "solve.dt=0.002",
                 "--set", "solve.record_every=5",
                 "--set", f"output_dir={out}"], tmp_path)
    assert r.returncode == 0, r.stderr
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0].startswith("t,Hs_u,Hs_b")
    assert len(lines) == 4  # t=0, 0.01, 0.02


def test_norm_analytic_value(tmp_path):
    # sin(3 x1) on the unit-scale torus: closed-form H^1 norm
    from mhdlab.fieldio import write_field
    from mhdlab.spectral import Field, Grid

    g = Grid(2, 64, 1.0)
    x1 = g.meshgrid()[0]
    path = tmp_path / "sin3.mhdf"
    write_field(path, Field.from_samples(g, np.sin(3 * x1)))
    r = run_cli(["norm", str(path), "--s", "1.0"], tmp_path)
    got = json.loads(r.stdout)["value"]
    assert got == pytest.approx(np.sqrt(2 * np.pi**2 * 10.0), rel=1e-10)


def test_malformed_field_file_exit_code(tmp_path):
    bad = tmp_path / "bad.mhdf"
    bad.write_bytes(b"BAAD" + bytes(32))
    r = run_cli(["norm", str(bad)], tmp_path)
    assert r.returncode == cli.EXIT_IO
    assert "bad.mhdf" in r.stderr and "offset 0" in r.stderr


def test_invalid_config_exit_code(tmp_path):
    r = run_cli(["generate", "--set", "grid.N=13"], tmp_path)
    assert r.returncode == cli.EXIT_CONFIG
    assert "grid" in r.stderr
    # under-resolved oscillation is rejected up front
    r = run_cli(["generate", "--set", "grid.N=64", "--set", "family.n=8"], tmp_path)
    assert r.returncode == cli.EXIT_CONFIG
    assert "Nyquist" in r.stderr


def test_experiment_asymptotics_deterministic(tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        r = run_cli(["experiment", "asymptotics",
                     "--set", f"output_dir={out}",
                     "--set", "experiment.n_list=[16,32,64]",
                     "--set", "experiment.alpha_list=[0.0]"], tmp_path)
        assert r.returncode in (0, 1), r.stderr
        outs.append((out / "asymptotics.csv").read_bytes()
                    + (out / "asymptotics.json").read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads((tmp_path / "a" / "asymptotics.json").read_text())
    assert rep["checks"]["sin_within_5pct"]


def test_unknown_experiment_rejected(tmp_path):
    r = run_cli(["experiment", "everything"], tmp_path)
    assert r.returncode == 2  # argparse rejects the choice
