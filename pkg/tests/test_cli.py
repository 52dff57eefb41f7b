"""CLI driver: verdicts, exit codes, JSON/CSV schemas and determinism."""

import csv
import json

import numpy as np
import pytest

from biconf import cli
from biconf.cli import ISOPARAM_COLUMNS, SIGNS_COLUMNS, SWEEP_COLUMNS, main


def read_json(path):
    return json.loads(path.read_text())


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------
def test_verify_pass_hyperbolic(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "--example", "hyperbolic_slice",
                 "--params", "m=5,t=2", "--points", "5", "--seed", "7",
                 "--json", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["verdict"] == "PASS"
    assert "general" in data["systems"]
    assert "totally_geodesic" in data["systems"]
    assert data["oracle"]["max_norm"] < 1e-5


def test_verify_pass_sphere_umbilic_truncated_decimals(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "--example", "sphere_umbilic",
                 "--params", "m=4,a=0.8660254,b=0.5", "--points", "5",
                 "--seed", "7", "--json", str(out)])
    assert code == 0
    assert read_json(out)["verdict"] == "PASS"


def test_verify_fail_off_root(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "--example", "euclidean_graph",
                 "--params", "m=4,t=0.3", "--points", "5", "--seed", "7",
                 "--json", str(out)])
    assert code == 1
    data = read_json(out)
    assert data["verdict"] == "FAIL"
    top = data["systems"]["general"]["summary"]
    assert max(top["max_normal"], top["max_tangential"]) > 1e-3


def test_verify_unknown_example_exit_2(capsys):
    assert main(["verify", "--example", "nosuch", "--params", "m=4"]) == 2
    assert "config error" in capsys.readouterr().err


def test_verify_bad_params_exit_2(capsys):
    assert main(["verify", "--example", "sphere_umbilic",
                 "--params", "m=4,a=0.6,b=0.5"]) == 2
    capsys.readouterr()


def test_verify_missing_example_exit_2(capsys):
    assert main(["verify", "--points", "3"]) == 2
    capsys.readouterr()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "example": "hyperbolic_slice",
        "params": "m=4,t=1",
        "points": 3,
        "seed": 5,
    }))
    out = tmp_path / "v.json"
    code = main(["verify", "--config", str(cfg), "--points", "2",
                 "--json", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["points"] == 2  # flag wins over file
    assert data["seed"] == 5    # file value survives


def test_corrupt_config_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert main(["verify", "--config", str(cfg)]) == 2
    capsys.readouterr()


# ----------------------------------------------------------------------
# residual
# ----------------------------------------------------------------------
def test_residual_single_system(tmp_path):
    out = tmp_path / "r.json"
    code = main(["residual", "--system", "totally_geodesic",
                 "--example", "sphere_equator", "--params", "m=4",
                 "--points", "4", "--seed", "3", "--json", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["summary"]["verdict"] == "zero"
    assert len(data["reports"]) == 4
    record = data["reports"][0]
    assert set(record) == {"system", "point", "normal", "tangential",
                           "norm_normal", "norm_tangential", "metadata"}


def test_residual_oracle_system(tmp_path):
    out = tmp_path / "r.json"
    code = main(["residual", "--system", "oracle",
                 "--example", "hyperbolic_slice", "--params", "m=4,t=1",
                 "--points", "3", "--seed", "3", "--json", str(out)])
    assert code == 0
    assert read_json(out)["summary"]["verdict"] == "zero"


def test_residual_nonzero_exit_1(tmp_path):
    out = tmp_path / "r.json"
    code = main(["residual", "--system", "general",
                 "--example", "euclidean_graph", "--params", "m=5,t=1",
                 "--points", "3", "--seed", "3", "--json", str(out)])
    assert code == 1
    assert read_json(out)["summary"]["verdict"] == "nonzero"


def test_residual_wrong_class_exit_2(capsys):
    # umbilic system on a minimal input is a config-level error
    code = main(["residual", "--system", "totally_umbilical",
                 "--example", "sphere_equator", "--params", "m=4",
                 "--points", "2", "--seed", "3"])
    assert code == 2
    capsys.readouterr()


def test_residual_unknown_system_exit_2(capsys):
    assert main(["residual", "--system", "bogus", "--example",
                 "sphere_equator", "--params", "m=4"]) == 2
    capsys.readouterr()


# ----------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------
def test_sweep_euclidean_brackets_roots(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--example", "euclidean_graph", "--m", "5",
                 "--t-range=-3:3:0.25", "--points", "1", "--seed", "3",
                 "--csv", str(out)])
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    ts = [float(r[3]) for r in rows[1:]]
    conds = [float(r[4]) for r in rows[1:]]
    # sign changes of the condition polynomial bracket t=-2 and t=1/2
    crossings = [(ts[i], ts[i + 1]) for i in range(len(ts) - 1)
                 if conds[i] == 0.0 or conds[i] * conds[i + 1] < 0]
    assert any(lo <= -2.0 <= hi for lo, hi in crossings)
    assert any(lo <= 0.5 <= hi for lo, hi in crossings)
    verdicts = {r[3]: r[7] for r in rows[1:]}
    assert verdicts["-2"] == "zero"
    assert verdicts["0.5"] == "zero"
    assert verdicts["1"] == "nonzero"


def test_sweep_signs_grid(tmp_path):
    out = tmp_path / "signs.csv"
    code = main(["sweep", "--signs", "--m-range", "4:10", "--csv", str(out)])
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert tuple(rows[0]) == SIGNS_COLUMNS
    assert all(r[-1] == "negative" for r in rows[1:])
    assert {int(r[0]) for r in rows[1:]} == set(range(4, 11))


def test_sweep_empty_range_exit_2(capsys):
    assert main(["sweep", "--example", "euclidean_graph", "--m", "5",
                 "--t-range=3:-3:0.1"]) == 2
    assert main(["sweep", "--example", "euclidean_graph", "--m", "5",
                 "--t-range=0:1:-0.5"]) == 2
    assert main(["sweep", "--example", "euclidean_graph", "--m", "5"]) == 2
    capsys.readouterr()


# ----------------------------------------------------------------------
# signs
# ----------------------------------------------------------------------
def test_signs_json_schema(tmp_path):
    out = tmp_path / "signs.json"
    code = main(["signs", "--m-max", "8", "--json", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["verdict"] == "all-negative"
    assert data["result"]["ok"]
    cell = data["result"]["cells"][0]
    assert set(cell) == {"m", "c", "H2", "A", "B", "chain", "chain_float",
                         "P1", "P2", "P3", "ok"}


def test_signs_custom_grid(tmp_path):
    out = tmp_path / "signs.json"
    code = main(["signs", "--m-max", "6", "--grid", "c=0,-1/2;H2=1,9/4",
                 "--json", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["grid"]["c"] == ["0", "-1/2"]
    assert data["grid"]["H2"] == ["1", "9/4"]


def test_signs_bad_m_max_exit_2(capsys):
    assert main(["signs", "--m-max", "3"]) == 2
    capsys.readouterr()


# ----------------------------------------------------------------------
# isoparam
# ----------------------------------------------------------------------
def test_isoparam_equator(tmp_path):
    csv_out = tmp_path / "iso.csv"
    json_out = tmp_path / "iso.json"
    code = main(["isoparam", "--example", "sphere_equator", "--params",
                 "m=4", "--points", "120", "--seed", "11",
                 "--csv", str(csv_out), "--json", str(json_out)])
    assert code == 0
    rows = list(csv.reader(csv_out.read_text().splitlines()))
    assert tuple(rows[0]) == ISOPARAM_COLUMNS
    lams = [float(r[0]) for r in rows[1:]]
    assert lams == sorted(lams)
    data = read_json(json_out)
    assert data["is_isoparametric"] is True
    assert data["single_valuedness_deviation"] < 1e-6


def test_isoparam_too_few_points_exit_2(capsys):
    assert main(["isoparam", "--example", "sphere_equator", "--params",
                 "m=4", "--points", "10", "--seed", "11"]) == 2
    capsys.readouterr()


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------
@pytest.fixture(scope="module")
def report_pair(tmp_path_factory):
    base = tmp_path_factory.mktemp("reports")
    paths = (base / "r1.json", base / "r2.json")
    for p in paths:
        code = main(["report", "--seed", "9", "--points", "3",
                     "--out", str(p)])
        assert code == 0
    return paths


def test_report_consistent_and_deterministic(report_pair):
    a, b = (read_json(p) for p in report_pair)
    assert a["verdict"] == "consistent"
    assert set(a["claims"]) == {
        "euclidean_family", "hyperbolic_family", "sphere_equator",
        "sphere_umbilic_family", "umbilic_nonexistence_certificates",
        "bochner_suite", "oracle_equivalence"}
    # byte-identical modulo the timestamp field
    a.pop("timestamp")
    b.pop("timestamp")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_merge_mode(tmp_path, report_pair):
    out = tmp_path / "merged.json"
    code = main(["report", "--inputs", str(report_pair[0]),
                 str(report_pair[1]), "--out", str(out)])
    assert code == 0
    data = read_json(out)
    assert data["mode"] == "merge"
    assert data["verdict"] == "consistent"
    assert len(data["runs"]) == 2


def test_report_merge_flags_failures(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"verdict": "FAIL"}))
    out = tmp_path / "merged.json"
    code = main(["report", "--inputs", str(bad), "--out", str(out)])
    assert code == 1
    assert read_json(out)["verdict"] == "inconsistent"


def test_report_corrupt_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "corrupt.json"
    bad.write_text("{oops")
    assert main(["report", "--inputs", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "corrupt.json" in err


# ----------------------------------------------------------------------
# misc plumbing
# ----------------------------------------------------------------------
def test_env_seed_default(monkeypatch, tmp_path):
    monkeypatch.setenv("BICONF_SEED", "321")
    out = tmp_path / "v.json"
    code = main(["verify", "--example", "sphere_equator", "--params", "m=4",
                 "--points", "2", "--json", str(out)])
    assert code == 0
    assert read_json(out)["seed"] == 321


def test_parse_params_vectors():
    params = cli.parse_params("m=3,t=0.5,a=1:0:0,b=2")
    assert params == {"m": 3, "t": 0.5, "a": (1.0, 0.0, 0.0), "b": 2.0}
    with pytest.raises(cli.ConfigError):
        cli.parse_params("m")


def test_unknown_command_exit_2():
    assert main(["frobnicate"]) == 2
