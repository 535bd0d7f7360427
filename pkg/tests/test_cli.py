import json
import math
import os

import numpy as np
import pytest

from twinprep import cli, formats, protocol


def run_cli(argv):
    return cli.main(argv)


def test_run_prints_fidelities(capsys):
    assert run_cli(["run", "--mode", "equatorial", "--phi", "0.7"]) == 0
    out = capsys.readouterr().out
    assert "outcome 0" in out and "outcome 1" in out
    fid = float(out.split("fidelity_B=")[1].split()[0])
    assert fid == pytest.approx(0.5 + 1 / (2 * math.sqrt(2)), abs=1e-9)


def test_run_json_deterministic(capsys):
    assert run_cli(["run", "--mode", "polar", "--theta", "0.9", "--json"]) == 0
    first = capsys.readouterr().out
    assert run_cli(["run", "--mode", "polar", "--theta", "0.9", "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    body = json.loads(first)
    assert body["outcomes"][0]["fidelity_B"] == pytest.approx(5 / 6, abs=1e-9)


def test_run_bad_angle_is_usage_error(capsys):
    assert run_cli(["run", "--mode", "equatorial", "--phi", "9.9"]) == 2
    assert "error" in capsys.readouterr().err


def test_run_missing_mode_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        run_cli(["run", "--phi", "0.7"])
    assert excinfo.value.code == 2


def test_tradeoff_writes_deterministic_csv(tmp_path, capsys):
    out1 = tmp_path / "curve1.csv"
    out2 = tmp_path / "curve2.csv"
    argv = ["tradeoff", "--alpha-steps", "2", "--max-iters", "150"]
    assert run_cli(argv + ["--out", str(out1)]) == 0
    assert run_cli(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    rows = formats.loads_tradeoff(out1.read_text())
    assert [r.alpha for r in rows] == sorted(r.alpha for r in rows)
    curve = [r.Er_eq10 for r in rows]
    assert all(b - a >= -1e-12 for a, b in zip(curve, curve[1:]))


def test_tradeoff_unwritable_path(tmp_path, capsys):
    target = tmp_path / "nodir" / "curve.csv"
    code = run_cli(["tradeoff", "--alpha-steps", "2", "--max-iters", "50",
                    "--out", str(target)])
    assert code == 3
    assert "cannot write" in capsys.readouterr().err


def test_ere_on_maximally_mixed(tmp_path, capsys):
    path = tmp_path / "mixed.cmx"
    formats.write_matrix(path, np.eye(4) / 4)
    assert run_cli(["ere", str(path)]) == 0
    out = capsys.readouterr().out
    assert "value_bits" in out and "0.6095" in out and "0.4425" in out
    sigma = formats.read_matrix(str(path) + ".sigma")
    assert np.trace(sigma).real == pytest.approx(1.0, abs=1e-9)


def test_ere_invalid_matrix(tmp_path, capsys):
    path = tmp_path / "bad.cmx"
    formats.write_matrix(path, np.eye(4))  # trace 4, not a state
    assert run_cli(["ere", str(path)]) == 4
    assert "trace" in capsys.readouterr().err


def test_ere_missing_file(tmp_path, capsys):
    assert run_cli(["ere", str(tmp_path / "absent.cmx")]) == 3
    assert "cannot read" in capsys.readouterr().err


def test_locc_session_and_replay(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run_cli(["locc", "--mode", "equatorial", "--phi", "1.1",
                    "--seed", "7", "--out", "t.txt"]) == 0
    out = capsys.readouterr().out
    assert "classical cost: 1 bit" in out
    assert run_cli(["locc", "--replay", "t.txt"]) == 0
    assert "replay matches: True" in capsys.readouterr().out


def test_locc_seed_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("RSP_SEED", "11")
    assert run_cli(["locc", "--mode", "polar", "--theta", "0.4"]) == 0
    capsys.readouterr()
    assert os.path.exists("rsp-transcript-seed11.txt")


def test_locc_same_location_same_fidelity(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run_cli(["locc", "--mode", "equatorial", "--phi", "0.5", "--seed", "3",
                    "--topology", "standard", "--out", "a.txt"]) == 0
    first = capsys.readouterr().out
    assert run_cli(["locc", "--mode", "equatorial", "--phi", "0.5", "--seed", "3",
                    "--topology", "same-location", "--out", "b.txt"]) == 0
    second = capsys.readouterr().out
    fid = lambda text: [ln for ln in text.splitlines() if ln.startswith("final report")]
    assert fid(first) == fid(second)


def test_locc_requires_mode_or_replay(capsys):
    assert run_cli(["locc"]) == 2
    assert "either --mode or --replay" in capsys.readouterr().err


def test_verify_single_criterion_json(capsys):
    assert run_cli(["verify", "--criterion", "5", "--json"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["cid"] == 5 and record["passed"] is True


def test_verify_catches_mutated_operation(capsys, monkeypatch):
    # corrupting the pole-fidelity constant must turn criterion 6 red
    monkeypatch.setattr(protocol, "pole_fidelity", lambda alpha: (1 + alpha**2) / 2.001)
    assert run_cli(["verify", "--criterion", "6"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_catches_mutated_tradeoff(capsys, monkeypatch):
    original = protocol.tradeoff_entanglement
    monkeypatch.setattr(protocol, "tradeoff_entanglement",
                        lambda f: original(f) * 1.01)
    assert run_cli(["verify", "--criterion", "5"]) == 1
    capsys.readouterr()
