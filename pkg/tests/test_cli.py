import csv
import json
import math

import pytest

from aptflow.circuit import parse_circuit
from aptflow.cli import main, read_config

FAST = ["--trials", "4", "--points", "3", "--dense", "20"]


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_fig3_files(tmp_path):
    assert main(["fig3", "--out", str(tmp_path), *FAST]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert len(names) == 9
    assert "fig3_manifest.json" in names
    assert "fig3_grid_lambda_1.01.csv" in names and "fig3_curve_lambda_0.5.csv" in names
    grid = rows(tmp_path / "fig3_grid_lambda_2.csv")
    assert len(grid) == 4
    assert grid[0]["reference"] == "1" and float(grid[0]["D_nominal"]) == pytest.approx(1.0)
    for r in grid:
        assert float(r["D_lower"]) <= float(r["D_nominal"]) <= float(r["D_upper"])
    assert len(rows(tmp_path / "fig3_curve_lambda_2.csv")) == 20


def test_fig3_noiseless_bands_collapse(tmp_path):
    assert main(["fig3", "--out", str(tmp_path), "--noise", "0", "--lambda", "1.5", *FAST]) == 0
    for r in rows(tmp_path / "fig3_grid_lambda_1.5.csv"):
        assert float(r["D_upper"]) - float(r["D_lower"]) < 1e-12


def test_manifest_replay_is_bitwise(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["fig3", "--out", str(a), "--lambda", "2", "--seed", "11", *FAST]) == 0
    manifest = json.loads((a / "fig3_manifest.json").read_text())
    assert manifest["seed"] == 11 and manifest["command"] == "fig3"
    assert main(["fig3", "--out", str(b), "--config", str(a / "fig3_manifest.json")]) == 0
    for name in manifest["outputs"]:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nlambda-min = 2\nlambda_max = 3\nsteps = 3\ns = 2\n")
    assert read_config(cfg)["lambda_min"] == 2.0
    assert main(["fig4a", "--out", str(tmp_path), "--config", str(cfg), "--steps", "2"]) == 0
    table = rows(tmp_path / "fig4a.csv")
    assert [float(r["lambda"]) for r in table] == [2.0, 3.0]
    assert float(table[0]["period_numeric"]) == pytest.approx(math.pi / (2 * math.sqrt(3)), rel=1e-6)


def test_fig4a_default_sweep(tmp_path):
    assert main(["fig4a", "--out", str(tmp_path)]) == 0
    table = rows(tmp_path / "fig4a.csv")
    assert len(table) == 10
    # lambda = 0.5, 1.0, ..., 5.0
    assert table[0]["regime"] == "unbroken" and table[0]["period_numeric"] == ""
    assert table[1]["regime"] == "exceptional_point" and table[1]["amplitude"] == ""
    for r in table[2:]:
        lam = float(r["lambda"])
        assert r["regime"] == "broken"
        assert float(r["period_numeric"]) == pytest.approx(float(r["period_formula"]), rel=1e-6)
        assert float(r["amplitude"]) == pytest.approx(2 / (lam ** 2 + 1), abs=1e-8)


def test_fig4b(tmp_path):
    assert main(["fig4b", "--out", str(tmp_path), "--lambda", "2,0.5", "--dense", "11"]) == 0
    table = rows(tmp_path / "fig4b_lambda_2.csv")
    assert len(table) == 11 and float(table[0]["purity"]) == pytest.approx(1.0)
    assert all(0.5 - 1e-12 <= float(r["purity"]) <= 1 + 1e-12 for r in table)


def test_export_circuit(tmp_path, capsys):
    args = ["export-circuit", "--out", str(tmp_path), "--lambda", "2", "--t", "0"]
    assert main(args) == 0
    echo = json.loads(capsys.readouterr().out)
    assert echo["gate_count"] == 12 and echo["success_probability"] == pytest.approx(0.25)
    text = (tmp_path / echo["file"]).read_text()
    assert text.startswith("qubits 4\nx q3\n") and text.endswith("\n")
    assert len(parse_circuit(text)) == 12
    assert main(args) == 0
    assert (tmp_path / echo["file"]).read_text() == text


def test_export_circuit_three_qubit(tmp_path, capsys):
    assert main(["export-circuit", "--out", str(tmp_path), "--scheme", "three", "--t", "0.2"]) == 0
    assert json.loads(capsys.readouterr().out)["gate_count"] == 8


def test_export_circuit_single_lambda_only(tmp_path):
    assert main(["export-circuit", "--out", str(tmp_path), "--lambda", "2,3"]) == 1


@pytest.mark.parametrize("args, regime, anti", [
    (["--r", "6", "--s", "3", "--mu", "3"], "broken", True),
    (["--r", "3", "--s", "3", "--mu", "3"], "exceptional_point", True),
    (["--r", "1.5", "--s", "3", "--mu", "3"], "unbroken", True),
    (["--r", "1", "--theta", "0.3", "--s", "1", "--mu", "2"], None, False),
])
def test_symmetry(tmp_path, capsys, args, regime, anti):
    assert main(["symmetry", "--out", str(tmp_path), *args]) == 0
    echo = json.loads(capsys.readouterr().out)
    assert echo == json.loads((tmp_path / "symmetry.json").read_text())
    assert echo["negative_transpose"] is True and echo["anti_commutes"] is anti
    if regime:
        assert echo["regime"] == regime


def test_out_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("APT_FLOW_OUT", str(tmp_path / "env"))
    assert main(["symmetry"]) == 0
    assert (tmp_path / "env" / "symmetry.json").exists()


@pytest.mark.parametrize("args", [
    ["bogus"],
    ["fig4a", "--steps", "x"],
    ["fig4a", "--lambda", "-1"],
    ["fig3", "--trials", "0"],
    ["fig3", "--noise", "1.5"],
])
def test_domain_errors_exit_1(tmp_path, args):
    with pytest.raises(SystemExit) as exc:
        code = main([*args, "--out", str(tmp_path)])
        raise SystemExit(code)
    assert exc.value.code == 1


def test_bad_config_exit_1(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    assert main(["fig4a", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    cfg.write_text("no equals sign\n")
    assert main(["fig4a", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_io_errors_exit_2(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["symmetry", "--out", str(blocker / "sub")]) == 2
    assert main(["fig4a", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)]) == 2
