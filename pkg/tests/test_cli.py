"""Command-line interface: flags, outputs, exit codes, determinism."""
import json

import numpy as np
import pytest

from rotwave.cli import main

CSV_HEADER = "t," + ",".join(f"a{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)) + ",tipx,tipy,tipz"


def read_lines(path):
    return path.read_text().splitlines()


# ----------------------------------------------------------------- simulate

def test_simulate_writes_csv(tmp_path, capsys):
    rc = main(["simulate", "--scenario", "case1", "--lambda", "0.01", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "case1_lambda0.01.csv" in out
    path = tmp_path / "case1_lambda0.01.csv"
    lines = read_lines(path)
    assert lines[0] == CSV_HEADER
    assert len(lines) == 502  # header + horizon * samples_per_period + 1
    # rows re-read as rotations applied to the tip seed
    for line in lines[1::100]:
        vals = np.array([float(v) for v in line.split(",")])
        assert vals.shape == (13,)
        a = vals[1:10].reshape(3, 3)
        assert np.linalg.norm(a.T @ a - np.eye(3)) < 1e-8
        assert abs(np.linalg.norm(vals[10:13]) - 3.0) < 1e-8


def test_simulate_lambda_grid_multiple_files(tmp_path, capsys):
    rc = main([
        "simulate", "--scenario", "case2", "--lambda-grid", "0.05,0.1",
        "--horizon", "1", "--samples-per-period", "10", "--out", str(tmp_path),
    ])
    assert rc == 0
    assert (tmp_path / "case2_lambda0.05.csv").exists()
    assert (tmp_path / "case2_lambda0.1.csv").exists()
    assert len(read_lines(tmp_path / "case2_lambda0.05.csv")) == 12


def test_simulate_unknown_scenario(capsys):
    rc = main(["simulate", "--scenario", "nope", "--lambda", "0.01"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "case1" in err  # the message lists what is available


def test_simulate_deterministic(tmp_path):
    for sub in ("a", "b"):
        rc = main([
            "simulate", "--scenario", "case1", "--lambda", "0.05",
            "--horizon", "2", "--out", str(tmp_path / sub),
        ])
        assert rc == 0
    a = (tmp_path / "a" / "case1_lambda0.05.csv").read_bytes()
    b = (tmp_path / "b" / "case1_lambda0.05.csv").read_bytes()
    assert a == b


# ---------------------------------------------------------------- frequency

def run_frequency(capsys, args):
    rc = main(["frequency"] + args)
    assert rc == 0
    return json.loads(capsys.readouterr().out)


def test_frequency_case2_orthogonal_drift(capsys):
    entries = run_frequency(capsys, ["--scenario", "case2", "--lambda", "0.05"])
    (entry,) = entries
    assert entry["lambda"] == 0.05
    assert entry["motion"] == "OrthogonalDrift"
    assert entry["resonance"] == {"kind": "Resonant", "k": 1}
    assert abs(entry["ortho_defect"]) < 1e-6
    assert abs(entry["norm_X"] - np.sqrt(0.05)) < 1e-6
    assert abs(entry["norm_Xf"] - (np.sqrt(0.05) + 20.05)) < 1e-6
    assert entry["circle_fit"] is not None
    assert entry["circle_fit"]["rms"] < 1e-6 * 3.0


def test_frequency_case1_rigid_at_zero(capsys):
    entries = run_frequency(capsys, ["--scenario", "case1", "--lambda", "0"])
    (entry,) = entries
    assert entry["motion"] == "RigidRotation"
    assert np.allclose(entry["X"], [0.0, 0.0, 2.0], atol=1e-9)
    assert entry["X"] == entry["Xf"]


def test_frequency_case3_slow_meander(capsys):
    entries = run_frequency(capsys, ["--scenario", "case3", "--lambda", "0.05"])
    (entry,) = entries
    assert entry["motion"] == "SlowMeanderAboutX0"
    assert entry["ortho_defect"] > 0.1


def test_frequency_resonant_critical_circle_is_null(capsys):
    # at lambda = 0 the resonant monodromy is I: all period samples coincide
    entries = run_frequency(capsys, ["--scenario", "case2", "--lambda", "0"])
    (entry,) = entries
    assert entry["circle_fit"] is None
    assert entry["motion"] == "RigidRotation"


def test_frequency_grid_order(capsys):
    entries = run_frequency(
        capsys, ["--scenario", "case1", "--lambda-grid", "0.01,0.05", "--horizon", "2"]
    )
    assert [e["lambda"] for e in entries] == [0.01, 0.05]


def test_frequency_deterministic(capsys):
    args = ["--scenario", "case1", "--lambda", "0.05", "--horizon", "2"]
    rc = main(["frequency"] + args)
    assert rc == 0
    first = capsys.readouterr().out
    rc = main(["frequency"] + args)
    assert rc == 0
    assert capsys.readouterr().out == first


# ---------------------------------------------------------------------- bch

def test_bch_quarter_turns(capsys):
    rc = main(["bch", "0", "0", "1.5707963267948966",
               "1.5707963267948966", "0", "0", "--check"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = dict(
        line.split(": ", 1) for line in out.splitlines() if ": " in line
    )
    vec = [float(v) for v in lines["result"].strip("[]").split(",")]
    assert np.allclose(vec, 1.2091995761561452 * np.ones(3), atol=1e-12)
    assert abs(float(lines["norm"]) - 2.0943951023931953) < 1e-12
    assert lines["branch"] == "GenericNonPositive"  # cos(2 pi / 3) < 0
    assert float(lines["check |exp(result) - exp(x) exp(y)|_F"]) < 1e-10
    for name in ("alpha", "beta", "gamma", "e", "a1", "b1", "c1", "d1", "d", "s"):
        assert name in lines


def test_bch_identity_product(capsys):
    rc = main(["bch", "0.3", "0.1", "-0.2", "-0.3", "-0.1", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "branch: IdentityProduct" in out
    assert "result: [0, 0, 0]" in out


def test_bch_reduces_large_input(capsys):
    rc = main(["bch", "0", "0", "4", "0", "0", "0"])
    assert rc == 0
    out = capsys.readouterr().out
    z = float(out.splitlines()[0].strip("result: []").split(",")[2])
    assert abs(z - (4.0 - 2 * np.pi)) < 1e-12


# -------------------------------------------------------------------- drift

def test_drift_example4(capsys):
    rc = main(["drift", "--scenario", "example4", "--lambda", "0.01"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert isinstance(doc, dict)  # single lambda -> single object
    assert abs(doc["mu_star"] - 0.1) < 1e-6
    assert abs(doc["ortho_defect"]) < 1e-6


def test_drift_lambda_zero(capsys):
    rc = main(["drift", "--scenario", "example4", "--lambda", "0"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mu_star"] == 0.0
    assert doc["ortho_defect"] is None


def test_drift_bad_bracket_is_numerical_error(capsys):
    rc = main(["drift", "--scenario", "example4", "--lambda", "0.01",
               "--mu-bracket", "0.2,0.3"])
    assert rc == 3
    assert "sign" in capsys.readouterr().err


def test_drift_needs_mu_scenario(capsys):
    rc = main(["drift", "--scenario", "case1", "--lambda", "0.01"])
    assert rc == 2


# ------------------------------------------------------------------- verify

def test_verify_single_scenario(capsys):
    rc = main(["verify", "--scenario", "example5", "--lambda", "0.01"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "example5 lambda=0.01" in out
    assert " ok" in out and "FAIL" not in out
    assert "worst deviation:" in out


# ------------------------------------------------------------ config wiring

def test_dump_config(capsys, tmp_path):
    rc = main(["simulate", "--scenario", "case3", "--lambda", "0.05",
               "--out", str(tmp_path), "--dump-config"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scenario"] == "case3"
    assert doc["lambda_grid"] == [0.05]
    assert doc["horizon"] == 5
    assert list(tmp_path.iterdir()) == []  # dump only, no run


def test_lambda_flags_are_exclusive(capsys):
    rc = main(["frequency", "--scenario", "case1",
               "--lambda", "0.05", "--lambda-grid", "0.01,0.05"])
    assert rc == 2


def test_config_file_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"scenario": "case2", "lambda_grid": [0.05], "horizon": 2}))
    entries = run_frequency(capsys, ["--config", str(cfg)])
    assert entries[0]["motion"] == "OrthogonalDrift"
    # flags override the file
    entries = run_frequency(capsys, ["--config", str(cfg), "--scenario", "case1"])
    assert entries[0]["motion"] == "MeanderO1"


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"scenario": "case1", "wavelength": 3}))
    assert main(["frequency", "--config", str(cfg)]) == 2
    assert "wavelength" in capsys.readouterr().err


def test_config_file_malformed(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text("{not json")
    assert main(["frequency", "--config", str(cfg)]) == 2


def test_negative_lambda_rejected(capsys):
    assert main(["frequency", "--scenario", "case1", "--lambda", "-0.1"]) == 2


def test_out_under_file_is_io_error(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    rc = main(["simulate", "--scenario", "case1", "--lambda", "0.01",
               "--horizon", "1", "--out", str(blocker / "sub")])
    assert rc == 2


def test_bad_subcommand_exits_2(capsys):
    assert main(["frobnicate"]) == 2
