"""Command-line harness: exit codes, stream round trips, metric lines."""

import json
import shutil
import subprocess
import sys

import pytest

from dynclust import cli
from dynclust.graph import read_stream


def run_main(argv):
    return cli.main(argv)


def gen_stream(tmp_path, kind="two-cluster", n=24, m=60, seed=3, name="s.txt"):
    path = tmp_path / name
    rc = run_main(["gen", "--kind", kind, "--n", str(n), "--m", str(m),
                   "--seed", str(seed), "--out", str(path)])
    assert rc == 0
    return path


def read_jsonl(path):
    lines = [json.loads(x) for x in path.read_text().splitlines() if x]
    assert lines, "no output lines"
    return lines


def test_gen_writes_a_parseable_stream(tmp_path, capsys):
    path = gen_stream(tmp_path)
    out = capsys.readouterr().out
    assert "wrote 60 insertions" in out
    s = read_stream(str(path))
    assert s.n == 24 and len(s.edges) == 60


def test_gen_rejects_impossible_request(tmp_path, capsys):
    rc = run_main(["gen", "--kind", "gnp", "--n", "5", "--m", "999",
                   "--out", str(tmp_path / "x.txt")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_incremental_run_emits_jsonl_and_summary(tmp_path):
    stream = gen_stream(tmp_path)
    out = tmp_path / "metrics.jsonl"
    rc = run_main(["run", "--mode", "incremental", "--input", str(stream),
                   "--k", "2", "--out", str(out)])
    assert rc == 0
    lines = read_jsonl(out)
    steps, summary = lines[:-1], lines[-1]
    assert summary["summary"] is True
    assert summary["mode"] == "incremental"
    assert summary["steps"] == 60
    assert {"t", "S_size", "resample_phases", "sigma_inc_bicriteria",
            "sigma_inc_reduction", "spanner_restarts"} <= set(summary)
    assert [s["step"] for s in steps] == list(range(1, 61))
    for s in steps:
        assert "cost_H" in s and "opt_infinite" in s


def test_verify_mode_passes_on_a_clean_stream(tmp_path):
    stream = gen_stream(tmp_path, n=20, m=50, seed=5)
    rc = run_main(["run", "--mode", "verify", "--input", str(stream),
                   "--k", "2", "--out", str(tmp_path / "v.jsonl")])
    assert rc == 0


def test_verify_mode_reports_violations(tmp_path, monkeypatch, capsys):
    stream = gen_stream(tmp_path, n=16, m=30, seed=1)

    def boom(state, prev):
        raise AssertionError("synthetic breakage")

    monkeypatch.setattr(cli, "check_invariants", boom)
    rc = run_main(["run", "--mode", "verify", "--input", str(stream),
                   "--k", "2", "--out", str(tmp_path / "v.jsonl")])
    assert rc == 1
    err = capsys.readouterr().err
    assert "invariant violation at step 1" in err


def test_oracle_flag_adds_cost_columns(tmp_path):
    stream = gen_stream(tmp_path, n=12, m=30, seed=2)
    out = tmp_path / "o.jsonl"
    rc = run_main(["run", "--mode", "incremental", "--input", str(stream),
                   "--k", "2", "--oracle", "--out", str(out)])
    assert rc == 0
    lines = read_jsonl(out)
    finite = [s for s in lines[:-1] if not s["opt_infinite"]]
    assert finite
    assert all({"cost_G", "opt", "ratio"} <= set(s) for s in finite)
    assert lines[-1]["max_ratio"] is not None


def test_static_baseline_mode(tmp_path):
    stream = gen_stream(tmp_path, n=16, m=30, seed=4)
    out = tmp_path / "b.jsonl"
    rc = run_main(["run", "--mode", "static-baseline", "--input", str(stream),
                   "--k", "2", "--out", str(out)])
    assert rc == 0
    lines = read_jsonl(out)
    assert lines[-1]["mode"] == "static-baseline"
    assert all("cost_G" in s for s in lines[:-1])


def test_bench_mode_prints_a_report(tmp_path, capsys):
    stream = gen_stream(tmp_path, n=20, m=40, seed=6)
    capsys.readouterr()  # drop the gen notice
    rc = run_main(["run", "--mode", "bench", "--input", str(stream), "--k", "2"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["backend"] in ("compiled", "python")
    assert report["steps"] == 40
    assert {"incremental_total_s", "static_total_s", "speedup",
            "incremental_p50_ms", "solve_every"} <= set(report)


def test_parse_error_carries_the_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("n 8\ne 0 1 2\ne 1 two 3\n")
    rc = run_main(["run", "--mode", "incremental", "--input", str(bad), "--k", "2"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "error:" in err and "line 3" in err


def test_semantic_edge_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "loop.txt"
    bad.write_text("n 8\ne 3 3 1\n")
    rc = run_main(["run", "--mode", "incremental", "--input", str(bad), "--k", "2"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_missing_input_exits_2(tmp_path, capsys):
    rc = run_main(["run", "--mode", "incremental",
                   "--input", str(tmp_path / "nope.txt"), "--k", "2"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "extra",
    [
        ["--k", "0"],
        ["--k", "2", "--eps-red", "0.7"],
        ["--k", "2", "--lambda", "0"],
        ["--k", "2", "--beta", "1.5"],
    ],
)
def test_bad_parameters_exit_2(tmp_path, capsys, extra):
    stream = gen_stream(tmp_path, n=10, m=12, seed=0)
    rc = run_main(["run", "--mode", "incremental", "--input", str(stream)] + extra)
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_console_script_is_installed(tmp_path):
    exe = shutil.which("dynclust")
    if exe is None:
        pytest.skip("console script not on PATH in this environment")
    out = tmp_path / "s.txt"
    proc = subprocess.run(
        [exe, "gen", "--kind", "gnp", "--n", "10", "--m", "12",
         "--seed", "0", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert read_stream(str(out)).n == 10
