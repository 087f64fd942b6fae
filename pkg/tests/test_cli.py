import json
import subprocess
import sys

import pytest

from relturan.cli import fill_template, main, parse_host, read_config
from relturan.errors import InputError
from relturan.hypergraph import Hypergraph


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_and_reload(tmp_path, capsys):
    path = tmp_path / "h.json"
    assert run(["gen", "--host", "pg:q=3", "--out", str(path)], capsys)[0] == 0
    H = Hypergraph.load(path)
    assert (H.n, H.e) == (26, 52)
    assert parse_host(str(path)) == H
    assert parse_host(f"file:{path}") == H


@pytest.mark.parametrize("spec, n, e", [
    ("complete:n=6:r=3", 6, 20), ("partite:sizes=2,3,4", 9, 24), ("layered:n=2:s=2,2,2", None, 1024),
    ("unbalanced:n=2:s=2,2,2", 24, 256), ("heawood", 14, 21), ("tutte-coxeter", 30, 45),
    ("gq:q=2", 30, 45), ("tcfree:geom=pg:q=2:r=3:m=7", 21, 147),
])
def test_host_grammar(spec, n, e):
    H = parse_host(spec)
    assert H.e == e and (n is None or H.n == n)


def test_random_host_is_seeded():
    assert parse_host("random:n=12:r=3:p=0.3:seed=5") == parse_host("random:n=12:r=3:p=0.3:seed=5")
    assert parse_host("random:n=12:r=2:p=0.5", seed=1) == parse_host("random:n=12:r=2:p=0.5", seed=1)


def test_extract_then_check_round_trip(tmp_path, capsys):
    rep_path = tmp_path / "rep.json"
    code, _, _ = run(["extract", "--host", "complete:n=9:r=2", "--pattern", "K:2,2",
                      "--algo", "recursive", "--trials", "4", "--seed", "3",
                      "--out", str(rep_path)], capsys)
    assert code == 0
    rep = json.loads(rep_path.read_text())
    assert rep["algorithm"] == "recursive" and len(rep["yields"]) == 4
    assert rep["best"] == max(rep["yields"]) and rep["meta"]["seed"] == 3
    code, out, _ = run(["check", "--host", "complete:n=9:r=2", "--pattern", "K:2,2",
                        "--sub", str(rep_path)], capsys)
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize("algo, host, pattern", [
    ("rhom", "complete:n=8:r=2", "K:2,2"),
    ("recursive", "layered:n=2:s=2,2,2", "K:2,2,2"),
    ("tc", "complete:n=7:r=3", "tcrange:3,2"),
    ("split", "partite:sizes=3,3,3", "K:2,2,2"),
    ("del", "complete:n=8:r=2", "tcrange:2,2"),
])
def test_all_algorithms(algo, host, pattern, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["extract", "--host", host, "--pattern", pattern, "--algo", algo,
                "--trials", "2", "--out", str(out)], capsys)[0] == 0
    code, _, _ = run(["check", "--host", host, "--pattern", pattern, "--sub", str(out)], capsys)
    assert code == 0


def test_check_reports_violation(tmp_path, capsys):
    path = tmp_path / "k33.json"
    assert run(["gen", "--host", "partite:sizes=3,3", "--out", str(path)], capsys)[0] == 0
    code, _, err = run(["check", "--host", "partite:sizes=3,3", "--pattern", "K:2,2",
                        "--sub", str(path)], capsys)
    assert code == 4 and "violation" in err and "witness" in err


def test_exact_and_budget_refusal(capsys):
    code, out, _ = run(["exact", "--host", "partite:sizes=3,3", "--pattern", "K:2,2",
                        "--deterministic"], capsys)
    assert code == 0 and json.loads(out)["value"] == 6
    code, _, err = run(["exact", "--host", "complete:n=12:r=2", "--pattern", "K:2,2"], capsys)
    assert code == 3 and "bounds: lower=0 upper=66" in err


def test_input_errors(capsys):
    assert run(["gen", "--host", "bogus:1"], capsys)[0] == 2
    assert run(["extract", "--host", "complete:n=6:r=2", "--pattern", "K:2",
                "--algo", "rhom"], capsys)[0] == 2
    assert run(["extract", "--host", "complete:n=6:r=2", "--pattern", "K:2,2",
                "--algo", "split"], capsys)[0] == 2
    assert run(["extract", "--host", "complete:n=6:r=2", "--pattern", "TC:5/2",
                "--algo", "tc", "--ell", "5"], capsys)[0] == 3


def test_count_exponents_supersat_fit(capsys):
    code, out, _ = run(["count", "--host", "complete:n=5:r=2", "--pattern", "TC:3/2 + TC:4/2"],
                       capsys)
    assert json.loads(out)["total"] == 25
    code, out, _ = run(["count", "--host", "complete:n=5:r=2", "--pattern", "TC:3/2",
                        "--format", "csv"], capsys)
    assert out.splitlines() == ["pattern,copies", "TC:3/2,10"]
    code, out, _ = run(["exponents", "--s", "2,2,2"], capsys)
    d = json.loads(out)
    assert (d["alpha"], d["beta"], d["beta1"], d["beta2"]) == ("1/8", "1/6", "3/7", "5/21")
    code, out, _ = run(["supersat", "--n", "2", "--s", "2,2"], capsys)
    d = json.loads(out)
    assert d["copy_count"] == 36 and d["illustrative"] is True
    code, out, _ = run(["fit", "--point", "16,100,25", "--point", "64,100,12.5",
                        "--point", "256,100,6.25"], capsys)
    assert json.loads(out)["slope"] == pytest.approx(0.5)


SWEEP = ["sweep", "--host", "complete:n={delta+1}:r=2", "--pattern", "K:2,2",
         "--algo", "recursive", "--grid", "delta=3,4,5", "--trials", "3", "--seeds", "0,1"]


def _strip_stamp(text):
    return [ln for ln in text.splitlines() if "timestamp=" not in ln]


def test_sweep_csv_is_reproducible(capsys):
    code, a, _ = run(SWEEP, capsys)
    assert code == 0
    code, b, _ = run(SWEEP, capsys)
    assert _strip_stamp(a) == _strip_stamp(b)
    lines = _strip_stamp(a)
    assert lines[0].startswith("# meta=")
    assert lines[1] == "delta,host_edges,extracted,exact_or_bound,seed"
    assert len(lines) == 2 + 6
    rows = [ln.split(",") for ln in lines[2:]]
    assert [int(r[0]) for r in rows] == [3, 3, 4, 4, 5, 5]
    # K_4, K_5 and K_6 are within the exact budget, so the bound column is exact there
    assert all(r[3] != "" for r in rows)
    assert all(int(r[2]) <= float(r[3]) for r in rows)


def test_sweep_independent_of_thread_count(monkeypatch, capsys):
    monkeypatch.setenv("RELTURAN_THREADS", "1")
    _, a, _ = run(SWEEP, capsys)
    monkeypatch.setenv("RELTURAN_THREADS", "3")
    _, b, _ = run(SWEEP, capsys)
    assert _strip_stamp(a) == _strip_stamp(b)


def test_sweep_per_trial_and_fit(tmp_path, capsys):
    fit_path = tmp_path / "fit.json"
    csv_path = tmp_path / "s.csv"
    code, _, _ = run(SWEEP + ["--per-trial", "--fit", "--fit-out", str(fit_path),
                              "--out", str(csv_path)], capsys)
    assert code == 0
    rows = [ln for ln in csv_path.read_text().splitlines() if not ln.startswith("#")][1:]
    assert len(rows) == 3 * 2 * 3
    fit = json.loads(fit_path.read_text())
    assert len(fit["points"]) == 3 and fit["stat"] == "mean"
    code, out, _ = run(["fit", "--csv", str(csv_path)], capsys)
    assert json.loads(out)["slope"] == pytest.approx(fit["slope"])


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# extraction defaults\ncommand = extract\nhost = complete:n=8:r=2\n"
                   "pattern = K:2,2\nalgo = rhom\ntrials = 3\nseed = 7\n")
    code, out, _ = run(["--config", str(cfg)], capsys)
    d = json.loads(out)
    assert code == 0 and d["trials"] == 3 and d["seed"] == 7
    code, out, _ = run(["--config", str(cfg), "extract", "--seed", "8"], capsys)
    assert json.loads(out)["seed"] == 8
    bad = tmp_path / "bad.cfg"
    bad.write_text("command = extract\nnonsense = 1\n")
    assert run(["--config", str(bad)], capsys)[0] == 2
    assert run(["--config", str(tmp_path / "missing.cfg")], capsys)[0] == 2


def test_fill_template():
    assert fill_template("complete:n={delta+1}:r=2", {"delta": 16}) == "complete:n=17:r=2"
    assert fill_template("random:n={2*n}:r=2:p={p}", {"n": 5, "p": 0.25}) == "random:n=10:r=2:p=0.25"
    with pytest.raises(InputError):
        fill_template("{__import__('os')}", {})
    with pytest.raises(InputError):
        fill_template("{delta", {"delta": 1})


def test_read_config_rejects_bad_lines(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("just words\n")
    with pytest.raises(InputError):
        read_config(p)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "relturan", "exponents", "--s", "2,2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["beta"] == "1/2"
