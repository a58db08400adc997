import csv
import io
import json
import subprocess
import sys

import pytest

from veronese_blocks import cli, verify
from veronese_blocks.cli import JobConfig, UsageError, dump_json, main, run


def invoke(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def as_json(capsys, *argv):
    status, out, err = invoke(capsys, *argv, "--format", "json")
    assert status == 0, err
    return json.loads(out)


def test_intersect_example(capsys):
    report = as_json(capsys, "intersect", "--ell", "1", "--g", "3", "--profile", "1,1,1,5")
    assert report["schema"] == "vb-1" and report["command"] == "intersect"
    assert report["outputs"]["value"] == "1/2"


def test_intersect_explicit_weights(capsys):
    report = as_json(capsys, "intersect", "--d", "3", "--gamma", "0",
                     "--weights", "1/2^8", "--profile", "1,1,1,5")
    assert report["outputs"]["value"] == "1/2"


def test_rank_example(capsys):
    status, out, _ = invoke(capsys, "rank", "--ell", "2", "--weights", "1,1,1,1")
    assert status == 0 and "2" in out.split()
    assert as_json(capsys, "rank", "--ell", "2", "--weights", "1,1,1,1")["outputs"]["rank"] == 2


def test_verify_poscomb_example(capsys):
    report = as_json(capsys, "verify", "poscomb", "--ell", "3", "--g", "7")
    assert report["pass"] is True
    assert report["outputs"]["coefficients"] == {"3": "220", "5": "48", "7": "8"}


@pytest.mark.parametrize("argv", [
    ("verify", "increasing", "--ell", "2", "--g", "6"),
    ("verify", "determinant", "--ell", "3", "--imax", "8"),
    ("verify", "same-face", "--ell", "2", "--g", "5"),
    ("verify", "kequalsell", "--ell", "3", "--n", "10"),
    ("verify", "wall", "--ell", "2", "--g", "4"),
    ("verify", "contraction", "--ell", "7", "--k", "2", "--n", "10"),
    ("verify", "jensen", "--g", "4"),
    ("verify", "classes", "--g", "4"),
    ("verify", "criterion", "--ell", "2", "--n", "5"),
])
def test_verify_claims_pass(capsys, argv):
    assert as_json(capsys, *argv)["pass"] is True


def test_contraction_exclusion_in_report(capsys):
    report = as_json(capsys, "verify", "contraction", "--ell", "4", "--k", "3", "--n", "8")
    assert report["outputs"]["excluded"] is True
    assert report["outputs"]["recorded_facts"]["2,2,2,2"].endswith("= 0")


def test_sigma_and_class(capsys):
    report = as_json(capsys, "sigma", "--ell", "1", "--g", "3", "--subset", "1,2,3")
    assert report["outputs"]["sigma"] == 1
    report = as_json(capsys, "class", "--ell", "1", "--g", "3")
    assert list(report["outputs"]["coefficients"].values()) == ["3/14", "1/7", "2/7"]


def test_cb_intersect(capsys):
    report = as_json(capsys, "cb-intersect", "--family", "omega1", "--ell", "3", "--g", "3", "--i", "3")
    assert report["outputs"]["values"] == {"3": 1}
    report = as_json(capsys, "cb-intersect", "--family", "kequalsell", "--ell", "2", "--n", "8", "--i", "1")
    assert report["outputs"]["values"] == {"1": 2}


def test_table_jensen_csv(capsys):
    status, out, _ = invoke(capsys, "table", "jensen", "--g", "3", "--format", "csv")
    assert status == 0 and "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["ell", "i", "value"]
    body = {(int(r[0]), int(r[1])): r[2] for r in rows[1:]}
    assert len(body) == 9
    assert body[(1, 1)] == "1/2" and body[(1, 2)] == "0" and body[(3, 3)] == "1/4"


def test_table_ranks(capsys):
    report = as_json(capsys, "table", "ranks", "--ell", "2", "--jmax", "6", "--check-oracle")
    rows = report["outputs"]["rows"]
    assert [2, 0, 1] in rows and [4, 0, 2] in rows and [6, 0, 4] in rows
    assert report["oracle"]["pass"] is True


def test_table_classes_and_cb_vectors(capsys):
    report = as_json(capsys, "table", "classes", "--g", "4", "--check-oracle")
    assert len(report["outputs"]["rows"]) == 16 and report["oracle"]["pass"] is True
    report = as_json(capsys, "table", "cb-vectors", "--g", "3", "--check-oracle")
    assert report["oracle"]["pass"] is True


def test_table_refuses_large_range(capsys):
    status, _, err = invoke(capsys, "table", "jensen", "--g", "30")
    assert status == 1 and "estimated" in err
    assert as_json(capsys, "table", "jensen", "--g", "13", "--max-g", "13")["inputs"]["g"] == 13


@pytest.mark.parametrize("argv", [
    (),
    ("frobnicate",),
    ("rank", "--ell", "two", "--weights", "1,1"),
    ("intersect", "--ell", "3", "--g", "3", "--profile", "1,1,1,5"),  # d = 1
    ("intersect", "--ell", "1", "--g", "3", "--profile", "1,1,1,4"),
    ("verify",),
    ("table", "jensen"),
    ("rank", "--ell", "2", "--weights", "1,1", "--bogus", "3"),
])
def test_usage_errors(capsys, argv):
    status, _, err = invoke(capsys, *argv)
    assert status == 1 and err


def test_d1_names_scope(capsys):
    _, _, err = invoke(capsys, "intersect", "--ell", "3", "--g", "3", "--profile", "1,1,1,5")
    assert "d=1" in err


def test_falsification_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(
        cli.VERIFIERS, "poscomb",
        lambda p: verify.CheckReport("poscomb", False, {"ell": 1}, {}, {"why": "planted"}),
    )
    status, out, _ = invoke(capsys, "verify", "poscomb", "--ell", "1", "--g", "3", "--format", "json")
    report = json.loads(out)
    assert status == 2 and report["pass"] is False and report["witness"] == {"why": "planted"}


def test_oracle_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli.cb, "rank_recurrence", lambda ell, j, t: 7)
    status, _, _ = invoke(capsys, "table", "ranks", "--ell", "2", "--jmax", "3", "--check-oracle")
    assert status == 2


def test_json_round_trip(capsys):
    status, out, _ = invoke(capsys, "verify", "same-face", "--ell", "3", "--g", "6", "--format", "json")
    assert dump_json(json.loads(out)) == out


def test_repeated_runs_identical():
    config = JobConfig("table", {"kind": "classes", "g": "6"}, "json")
    assert run(config) == run(config)


def test_thread_count_does_not_change_output(monkeypatch):
    config = JobConfig("table", {"kind": "cb-vectors", "g": "8"}, "json", check_oracle=True)
    outputs = set()
    for threads in ("1", "2", "8"):
        monkeypatch.setenv(cli.THREADS_ENV, threads)
        outputs.add(run(config)[1])
    assert len(outputs) == 1


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "many")
    with pytest.raises(UsageError):
        run(JobConfig("table", {"kind": "jensen", "g": "2"}))


def test_jobconfig_validation():
    with pytest.raises(UsageError):
        JobConfig("nope")
    with pytest.raises(UsageError):
        JobConfig("rank", output_format="xml")


def test_config_file_with_override(tmp_path, capsys):
    path = tmp_path / "job.cfg"
    path.write_text("# poscomb at level 1\ncommand = verify\nclaim = poscomb\nell = 1\ng = 3\nformat = json\n")
    report = as_json(capsys, "--config", str(path))
    assert report["inputs"] == {"claim": "poscomb", "ell": 1, "g": 3}
    report = as_json(capsys, "--config", str(path), "--g", "5")
    assert report["inputs"]["g"] == 5


def test_config_file_malformed(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("command verify\n")
    status, _, err = invoke(capsys, "--config", str(path))
    assert status == 1 and "key = value" in err


def test_out_path(tmp_path, capsys):
    target = tmp_path / "jensen.csv"
    status, out, _ = invoke(capsys, "table", "jensen", "--g", "2", "--format", "csv", "--out", str(target))
    assert status == 0 and out == ""
    data = target.read_bytes()
    assert data.startswith(b"ell,i,value\n") and b"\r" not in data


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "veronese_blocks", "rank", "--ell", "3", "--weights", "1,1,1,3", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["outputs"]["rank"] == 1
