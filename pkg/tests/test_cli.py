"""CLI wiring: JSON/CSV output, determinism, exit codes."""

import json
import math

import numpy as np

import qoct.acceptance
from qoct.acceptance import CriterionResult
from qoct.cli import main


def run_cli(args, capsys):
    rc = main(args)
    out = capsys.readouterr().out
    return rc, out


def test_min_time_json(capsys):
    rc, out = run_cli(["min-time", "--alpha", "1"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert abs(doc["total_time"] - math.pi / math.sqrt(2.0)) < 1e-15
    assert len(doc["law"]) == 1
    assert np.linalg.norm(np.array(doc["endpoint"]) - [0, 0, 1]) < 1e-10


def test_min_time_with_target(capsys):
    rc, out = run_cli(["min-time", "--alpha", "2", "--target", "0,1,0"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert abs(doc["total_time"] - math.pi / 2.0) < 1e-12


def test_min_time_domain_error_exit_code(capsys):
    assert main(["min-time", "--alpha", "0"]) == 2


def test_min_time_unreachable_target_exit_code(capsys):
    assert main(["min-time", "--alpha", "1", "--target", "0.7071067811865476,0,0.7071067811865476"]) == 2


def test_min_energy_json(capsys):
    rc, out = run_cli(["min-energy", "--alpha", "1", "--tol", "1e-7"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert abs(doc["m3_0"] - 1.0 / math.sqrt(3.0)) < 1e-7
    assert abs(doc["transfer_time"] - math.sqrt(3.0) * math.pi / 2.0) < 1e-6
    assert doc["regime"] == "super-critical"
    assert doc["bounds"][0] == 0.0


def test_sweep_synthesis_deterministic(tmp_path):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    args = ["sweep-synthesis", "--alpha", "2", "--mode", "time", "--n", "3",
            "--samples", "25"]
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2
    assert b1.startswith(b"# schema=qoct-v1\nt,psi1,psi2,psi3,u1,u2,param\n")


def test_sweep_synthesis_stays_in_octant(tmp_path):
    p = tmp_path / "energy.csv"
    assert main(["sweep-synthesis", "--alpha", "0.5", "--mode", "energy",
                 "--n", "3", "--samples", "30", "--out", str(p)]) == 0
    tab = np.genfromtxt(p, delimiter=",", skip_header=2)
    assert np.all(np.isfinite(tab))
    assert tab[:, 1:4].min() >= -1e-9


def test_sweep_alpha_csv(tmp_path):
    p = tmp_path / "sweep.csv"
    assert main(["sweep-alpha", "--from", "0.5", "--to", "2", "--n", "3",
                 "--tol", "1e-7", "--out", str(p)]) == 0
    tab = np.genfromtxt(p, delimiter=",", skip_header=2)
    assert tab.shape == (3, 3)
    assert abs(tab[1, 0] - 1.0) < 1e-12
    assert abs(tab[1, 1] - 1.0 / math.sqrt(3.0)) < 1e-6


def test_oracle_json(capsys):
    rc, out = run_cli(["oracle", "--alpha", "1", "--n", "500", "--seed", "5"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["margin"] == doc["best_time"] - doc["closed_form_time"]
    assert doc["margin"] >= -5e-3


def test_lift_json(capsys, tmp_path):
    traj = tmp_path / "traj.csv"
    rc, out = run_cli(
        ["lift", "--alpha", "1", "--mode", "time", "--energies=-1,0.3,0.7",
         "--phases", "0,0", "--trajectory-out", str(traj)],
        capsys,
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["final_population"] >= 1.0 - 1e-5
    assert doc["trajectory_file"] == str(traj)
    tab = np.genfromtxt(traj, delimiter=",", skip_header=2)
    assert np.allclose(tab[:, 1:].sum(axis=1), 1.0, atol=1e-9)


def test_verify_exit_codes(monkeypatch, capsys):
    ok = [CriterionResult("A01-x", True, "fine")]
    monkeypatch.setattr(qoct.acceptance, "run_all", lambda fast=False: ok)
    assert main(["verify"]) == 0
    bad = [CriterionResult("A01-x", True, "fine"), CriterionResult("A02-y", False, "boom")]
    monkeypatch.setattr(qoct.acceptance, "run_all", lambda fast=False: bad)
    assert main(["verify", "--fast"]) == 3
    out = capsys.readouterr().out
    assert "FAIL" in out and "1 of 2" in out


def test_float_formatting_round_trips(capsys):
    rc, out = run_cli(["min-time", "--alpha", "0.3"], capsys)
    doc = json.loads(out)
    from qoct import min_time_law

    assert doc["total_time"] == min_time_law(0.3).total_duration
