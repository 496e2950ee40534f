import csv
import io
import json
import math
import subprocess
import sys

import pytest

from conftest import G1_EDGES
from tmotif.cli import main, parse_duration
from tmotif.synth import random_graph


@pytest.fixture
def files(tmp_path):
    g1 = tmp_path / "g1.txt"
    g1.write_text("".join(f"{u} {v} {t}\n" for u, v, t in G1_EDGES))
    path3 = tmp_path / "path3.txt"
    path3.write_text("0 1\n1 2\n2 3\n")
    g = random_graph(30, 200, 2000, seed=1)
    synth = tmp_path / "synth.txt"
    synth.write_text("".join(f"{u} {v} {t}\n" for u, v, t, _ in g.edges))
    return {"g1": str(g1), "path3": str(path3), "synth": str(synth), "dir": tmp_path}


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_both_mode_on_g1(files, capsys):
    code, out = _run(capsys, "run", "--graph", files["g1"], "--motif", files["path3"],
                     "--delta", "25", "--mode", "both", "--samples", "50")
    assert code == 0
    report = json.loads(out)
    assert report["estimate"] == 1.0 and report["exact"] == 1
    assert report["relative_error"] == 0.0
    assert report["W_delta"] == 1 and report["k"] == 50 and report["sum_X"] == 50
    assert report["graph"] == {"path": files["g1"], "n": 4, "m": 3, "time_span": 20}
    assert report["schema_version"] == 1
    for key in ("hits", "B_max", "B_avg", "B_std", "seed", "threads", "timings", "motif",
                "delta"):
        assert key in report
    numbers = [v for v in report.values() if isinstance(v, (int, float))]
    assert all(math.isfinite(v) for v in numbers)


def test_stable_json_is_byte_identical(files, capsys):
    args = ["run", "--graph", files["synth"], "--motif", "M4-0", "--delta", "10m",
            "--samples", "20000", "--seed", "7", "--stable-output"]
    outs = {_run(capsys, *args, "--threads", str(t))[1] for t in (1, 2, 4, 8)}
    outs.add(_run(capsys, *args)[1])
    assert len(outs) == 1
    assert "timings" not in json.loads(outs.pop())


def test_text_output(files, capsys):
    code, out = _run(capsys, "run", "--graph", files["g1"], "--motif", files["path3"],
                     "--delta", "25", "--mode", "both", "--output", "text", "--samples", "5")
    assert code == 0
    assert "estimate   1" in out and "exact      1" in out


def test_diagnostics_and_auto(files, capsys):
    code, out = _run(capsys, "run", "--graph", files["synth"], "--motif", "M3-0",
                     "--delta", "1h", "--samples", "auto", "--eps", "0.3", "--diagnostics")
    assert code == 0
    report = json.loads(out)
    assert report["diagnostics"]["auto_samples"]["pilot_k"] > 0
    assert report["k"] >= 1


@pytest.mark.parametrize("argv,code", [
    (["--samples", "0"], 1),
    (["--samples", "many"], 1),
    (["--delta", "5x"], 1),
    (["--motif", "M9-9"], 1),
    (["--threads", "0"], 1),
    (["--graph", "/nonexistent/graph.txt"], 2),
])
def test_error_exit_codes(files, capsys, argv, code):
    base = {"--graph": files["g1"], "--motif": files["path3"], "--delta": "25",
            "--samples": "10"}
    for flag, value in zip(argv[::2], argv[1::2]):
        base[flag] = value
    flat = [x for kv in base.items() for x in kv]
    try:
        got = main(["run", *flat])
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_malformed_graph_is_io_error(files, caplog):
    bad = files["dir"] / "bad.txt"
    bad.write_text("1 2 3\n1 2\n")
    assert main(["run", "--graph", str(bad), "--motif", "M4-0", "--delta", "5"]) == 2
    assert "line 2" in caplog.text


def test_cap_exit_code(files):
    assert main(["run", "--graph", files["synth"], "--motif", "M4-2", "--delta", "1W",
                 "--mode", "exact", "--cap", "10"]) == 3


def test_bench_rows(files, capsys):
    code, out = _run(capsys, "bench", "--graph", files["synth"], "--motif", "M4-0",
                     "--delta", "600", "--samples", "2000", "--thread-list", "1,2",
                     "--repetitions", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert len({r["estimate"] for r in rows}) == 1
    code, out = _run(capsys, "bench", "--graph", files["synth"], "--motif", "M4-0",
                     "--delta", "600", "--samples", "100", "--thread-list", "1",
                     "--repetitions", "1", "--output", "json")
    assert json.loads(out)[0]["threads"] == 1


@pytest.mark.parametrize("text,seconds", [("90", 90), ("90s", 90), ("15m", 900),
                                          ("2h", 7200), ("1D", 86400), ("1W", 604800)])
def test_parse_duration(text, seconds):
    assert parse_duration(text) == seconds


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "tmotif.cli", "run", "--graph", files["g1"],
                           "--motif", files["path3"], "--delta", "25", "--samples", "3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["estimate"] == 1.0
