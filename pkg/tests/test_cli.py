import csv
import io
import json
import subprocess
import sys

import pytest

from kout.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kstar(capsys):
    code, out, _ = run(capsys, "kstar", "--mu-tilde", "0.5,0.9")
    assert code == 0
    assert out.splitlines() == ["mu_tilde,k_star", "0.5,3", "0.9,43"]


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "1000", "--mu", "0.9,0.06,0.04", "--k", "1,2,3")
    assert code == 0
    d = json.loads(out)
    assert d["upper_bound_asymptotic"] == pytest.approx(0.9602, abs=5e-5)
    assert d["k_avg"] == pytest.approx(1.14)


def test_simulate_forced_edge(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "2", "--mu", "1.0", "--k", "1",
                       "--trials", "100", "--seed", "7")
    assert code == 0
    d = json.loads(out)
    assert d["empirical_p_connected"] == 1.0 and d["trials"] == 100 and d["master_seed"] == 7
    assert d["mean_y"] == 1.0


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "10", "--mu", "1.0", "--k", "1",
                       "--trials", "20", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["n"] == "10"


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "4", "--mu", "1", "--k", "1")
    assert code == 0
    d = json.loads(out)
    assert d["p_connected"] == "26/27" and d["e_y"] == "2/27" and d["state_count"] == 81


def test_oracle_too_large(capsys):
    code, _, err = run(capsys, "oracle", "--n", "12", "--mu", "1", "--k", "3")
    assert code == 1 and "states" in err


def test_sweep_values_and_range(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--n", "30", "--mu", "0.5,0.5", "--k", "1,2",
                       "--vary", "k_r", "--values", "2,3", "--trials", "50")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["1;2", "1;3"]
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "sweep", "--n", "30", "--mu", "1", "--k", "1", "--vary", "n",
                     "--range", "20:22", "--trials", "10", "--format", "json", "--out", str(path))
    assert code == 0
    assert [r["n"] for r in json.loads(path.read_text())] == [20, 21, 22]


def test_sweep_needs_spec(capsys):
    code, _, err = run(capsys, "sweep", "--n", "30", "--mu", "1", "--k", "1")
    assert code == 1 and "sweep" in err


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 20, "mu": [1.0], "k": [1], "trials": 40, "master_seed": 3,
                               "sweep": {"vary": "n", "start": 20, "stop": 21}}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--trials", "10", "--n", "25")
    d = json.loads(out)
    assert code == 0 and d["trials"] == 10 and d["n"] == 25 and d["master_seed"] == 3


def test_figure1_small(capsys):
    code, out, _ = run(capsys, "figure1", "--trials", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == [f"1;2;{k}" for k in range(3, 21)]
    assert all(r["n"] == "1000" and r["trials"] == "5" for r in rows)


@pytest.mark.parametrize("argv", [
    ["simulate", "--n", "5", "--mu", "0.5,0.5", "--k", "3,2"],
    ["bounds", "--n", "5", "--mu", "0.5,0.4", "--k", "1,2"],
    ["bounds", "--n", "5", "--mu", "1"],
    ["simulate", "--n", "5", "--mu", "1", "--k", "1", "--trials", "0"],
    ["simulate", "--bogus"],
    ["frobnicate"],
    ["kstar", "--mu-tilde", "1.5"],
    ["bounds", "--n", "x"],
])
def test_invalid_input_exit_one(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err


def test_unknown_flag_prints_usage(capsys):
    code, _, err = run(capsys, "simulate", "--bogus")
    assert code == 1 and "usage:" in err


def test_io_errors_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "bounds", "--config", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "kstar", "--mu-tilde", "0.5", "--out",
                     str(tmp_path / "no" / "such" / "dir.csv"))
    assert code == 2


def test_bad_json_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("[1, 2]")
    code, _, _ = run(capsys, "bounds", "--config", str(cfg))
    assert code == 1


def test_threads_env_does_not_change_output(tmp_path):
    outs = []
    for threads in ("1", "8"):
        path = tmp_path / f"out{threads}.csv"
        subprocess.run([sys.executable, "-m", "kout.cli", "simulate", "--n", "50", "--mu",
                        "0.9,0.1", "--k", "1,2", "--trials", "1500", "--seed", "11",
                        "--format", "csv", "--out", str(path)],
                       check=True, env={"KOUT_THREADS": threads, "PATH": ""})
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_progress_goes_to_stderr(capsys):
    code, out, err = run(capsys, "-v", "simulate", "--n", "6", "--mu", "1", "--k", "1",
                         "--trials", "10")
    assert code == 0 and "configuration 1/1" in err
    json.loads(out)
