import json

import numpy as np
import pytest

from biofilm1d.cli import ENV_OUTPUT_DIR, ConfigError, RunConfig, main, parse_grid, read_csv

from oracles import linear_bvp


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path))
    return tmp_path


def header_config(path):
    for line in path.read_text().splitlines():
        if line.startswith("# config="):
            return json.loads(line[len("# config="):])
    raise AssertionError("no config header")


def test_bvp_linear_matches_closed_form(out):
    assert main(["bvp", "--h", "1", "--rate", "linear:1", "--n", "1024"]) == 0
    cols, data = read_csv(out / "bvp.csv")
    assert cols == ["y", "u", "u_y", "u_yy"]
    assert np.max(np.abs(data[:, 1] - linear_bvp(data[:, 0], 1.0))) <= 1e-6
    summary = (out / "bvp_summary.csv").read_text().splitlines()
    assert summary[-2] == "h,residual,iterations,method,f_h"


def test_bvp_tiny_height(out):
    assert main(["bvp", "--h", "1e-6"]) == 0
    _, data = read_csv(out / "bvp.csv")
    assert np.allclose(data[:, 1], 1.0, atol=1e-5)


def test_floats_round_trip(out):
    main(["bvp", "--h", "0.7", "--n", "16"])
    text = (out / "bvp.csv").read_text().splitlines()
    row = text[-1].split(",")
    assert all(float(repr(float(x))) == float(x) for x in row)
    assert max(len(x.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) for x in row) <= 17


@pytest.mark.parametrize(
    "argv,key",
    [
        (["bvp", "--rate", "tanh"], "rate"),
        (["bvp", "--growth", "affine:1"], "growth"),
        (["bvp", "--n", "many"], "n"),
        (["bvp", "--n", "4"], "n"),
        (["bvp", "--kappa", "-1"], "kappa"),
        (["evolve", "--scheme", "rk4"], "scheme"),
        (["evolve", "--v0", "spline"], "v0"),
    ],
)
def test_config_errors_exit_one(out, capsys, argv, key):
    assert main(argv) == 1
    assert repr(key) in capsys.readouterr().err


def test_unknown_flag_exits_one(out):
    assert main(["bvp", "--bogus", "1"]) == 1


def test_config_file_and_flag_precedence(out, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"h": 2.0, "n": 32, "rate": "linear:1"}))
    assert main(["bvp", "--config", str(cfg), "--n", "64"]) == 0
    echoed = header_config(out / "bvp.csv")
    assert echoed["h"] == 2.0 and echoed["n"] == 64 and echoed["rate"] == "linear:1"


def test_unknown_config_key(out, tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"h": 2.0, "height": 3.0}))
    assert main(["bvp", "--config", str(cfg)]) == 1
    assert "'height'" in capsys.readouterr().err


def test_config_round_trip():
    cfg = RunConfig(h=0.1 + 0.2, rate="monod:1:0.5", store_dt=0.25, stride=3)
    assert RunConfig.from_json(cfg.to_json()) == cfg
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError) as info:
        RunConfig.from_dict({**cfg.to_dict(), "extra": 1})
    assert info.value.key == "extra"


def test_output_header_reproduces_run(out):
    assert main(["bvp", "--h", "0.3", "--n", "32"]) == 0
    first = (out / "bvp.csv").read_text()
    assert RunConfig.load(out / "bvp.csv") == RunConfig(h=0.3, n=32)
    assert main(["bvp", "--config", str(out / "bvp.csv")]) == 0
    assert (out / "bvp.csv").read_text() == first


def test_output_dir_flag_beats_env(out, tmp_path):
    other = tmp_path / "elsewhere"
    assert main(["bvp", "--n", "16", "--output-dir", str(other), "--prefix", "a_"]) == 0
    assert (other / "a_bvp.csv").exists()


def test_equilibrium_record(out):
    assert main(["equilibrium", "--rate", "tanh:2", "--growth", "affine:1:0.5"]) == 0
    cols, data = read_csv_text(out / "equilibrium.csv")
    rec = dict(zip(cols, data))
    assert float(rec["relative_delta"]) <= 1e-8
    assert rec["unique"] == "true"
    assert rec["certificate"].startswith("unique")


def read_csv_text(path):
    import csv

    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1]


def test_no_equilibrium_exit_three(out, capsys):
    assert main(["equilibrium", "--growth", "affine:1:2"]) == 3
    assert "status: no-equilibrium" in capsys.readouterr().out


def test_quasisteady_extinction(out, capsys):
    assert main(["quasisteady", "--growth", "affine:1:2", "--rate", "tanh:2", "--h0", "1"]) == 0
    assert "status: extinct" in capsys.readouterr().out
    cols, data = read_csv(out / "quasisteady.csv")
    assert cols == ["t", "h", "G", "flux_ratio"]
    assert np.all(np.diff(data[:, 1]) < 0)
    assert "status=extinct" in (out / "quasisteady.csv").read_text()


def test_evolve_with_profiles(out):
    assert main(["evolve", "--t_end", "2", "--n", "32", "--stride", "50"]) == 0
    cols, data = read_csv(out / "evolve.csv")
    assert cols == ["t", "h", "G", "flux_ratio"] and data[0, 1] == 3.5
    pcols, prof = read_csv(out / "evolve_profiles.csv")
    assert pcols == ["t", "y", "v"]
    assert np.unique(prof[:, 0]).size == 5  # rows 0, 50, 100, 150, 200
    assert np.all(prof[:, 2] >= -1e-12)


def test_evolve_from_table(out, tmp_path):
    table = tmp_path / "v0.csv"
    np.savetxt(table, np.column_stack([[0, 0.5, 1], [0.4, 0.2, 0.0]]), delimiter=",")
    assert main(["evolve", "--t_end", "0.5", "--n", "16", "--v0", f"file:{table}"]) == 0
    assert main(["evolve", "--v0", f"file:{tmp_path / 'missing.csv'}"]) == 1


def test_outputs_are_deterministic(out):
    argv = ["evolve", "--t_end", "1", "--n", "16", "--scheme", "cnab2"]
    main(argv)
    first = (out / "evolve.csv").read_bytes()
    main(argv)
    assert (out / "evolve.csv").read_bytes() == first


def test_verify_selected_checks(out):
    assert main(["verify", "small_h"]) == 0
    cols, row = read_csv_text(out / "verify.csv")
    assert cols[:2] == ["check", "passed"] and row[:2] == ["small_h_limit", "true"]
    rec = json.loads((out / "verify.jsonl").read_text().splitlines()[0])
    assert rec["passed"] is True


def test_verify_unknown_check(out):
    assert main(["verify", "nonsense"]) == 1


def test_sweep_rows_and_jobs(out):
    argv = ["sweep", "--grid", "h=0.5,1,2", "--grid", "rate=tanh:2,linear:1", "--n", "32"]
    assert main(argv + ["--jobs", "1"]) == 0
    serial = (out / "sweep.csv").read_text()
    assert main(argv + ["--jobs", "2"]) == 0
    assert (out / "sweep.csv").read_text() == serial
    lines = [ln for ln in serial.splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("h,rate,status") and len(lines) == 7


def test_sweep_marks_missing_equilibria(out):
    argv = ["sweep", "--target", "equilibrium", "--grid", "growth=affine:1:0.5,affine:1:3", "--n", "32"]
    assert main(argv) == 0
    text = (out / "sweep.csv").read_text()
    assert "no-equilibrium" in text


def test_bad_grid(out):
    assert main(["sweep", "--grid", "height=1,2"]) == 1
    assert main(["sweep", "--grid", "h"]) == 1
    with pytest.raises(ConfigError):
        parse_grid(["n=a,b"])
