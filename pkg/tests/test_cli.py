import io
import subprocess
import sys

import pytest

from mucalc.cli import main
from mucalc.coalgebra import load_model, satisfies
from mucalc.formula import normalize, parse


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_solve_sat():
    code, out = cli("solve", "--logic", "rel", "mu X. (p | dia X)")
    assert code == 10 and out.splitlines()[0] == "SAT"


def test_solve_unsat():
    code, out = cli("solve", "--logic", "rel", "mu X. dia X")
    assert code == 20 and out.splitlines()[0] == "UNSAT"


def test_solve_unknown():
    code, out = cli("solve", "nu X. mu Y. ((p & dia X) | dia Y)", "--max-nodes", "1")
    assert code == 30 and out.startswith("UNKNOWN (node budget")


def test_graded_model_file(tmp_path):
    path = tmp_path / "m.txt"
    code, out = cli("solve", "--logic", "graded", "nu X. (a & <1> X)", "--extract-model", str(path), "--verify")
    assert code == 10
    assert "verified yes" in out and "model file re-check yes" in out
    m = load_model(path.read_text())
    assert satisfies(m, normalize(parse("nu X. (a & <1> X)", "graded")))


def test_model_to_stdout():
    code, out = cli("solve", "--logic", "prob", "nu X. (safe & <19/20> X)", "--extract-model", "-")
    assert code == 10
    text = out.split("\n", 1)[1]
    assert text.startswith("mucalc-model 1") and load_model(text).size == 1


def test_formula_from_file(tmp_path):
    f = tmp_path / "phi.txt"
    f.write_text("dia p & box !p\n")
    assert cli("solve", "--file", str(f))[0] == 20


def test_stats_and_dumps_deterministic():
    args = ("solve", "--stats", "--dump-npa", "--dump-dpa", "nu X. mu Y. ((p & dia X) | dia Y)")
    a, b = cli(*args), cli(*args)
    assert a == b
    stats = dict(l.split()[1:3] for l in a[1].splitlines() if l.startswith("stat "))
    for key in ("closure_size", "alternation_depth", "expanded", "backend_calls", "peak_sweeps", "label_checks"):
        assert key in stats
    assert "wall_time" not in stats
    assert int(stats["label_checks"]) > 0
    assert "npa states=" in a[1] and "dpa states=" in a[1]


def test_timing_flag():
    assert "stat wall_time" in cli("solve", "--stats", "--timing", "p")[1]


@pytest.mark.parametrize("argv", [
    ("solve", "p &"),
    ("solve", "<1> p"),
    ("solve", "--logic", "fusion:rel", "p"),
    ("solve", "--logic", "modal", "p"),
    ("solve", "p", "--formula", "q"),
    ("solve",),
    ("solve", "--file", "/nonexistent/formula"),
])
def test_errors(argv, capsys):
    code, _ = cli(*argv)
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_oracle_finds_single_state():
    code, out = cli("oracle", "mu X. (p | dia X)", "--states", "1")
    assert code == 0 and out.startswith("model found (1 states")
    assert "atoms 0 p" in out


def test_oracle_none():
    code, out = cli("oracle", "mu X. dia X", "--states", "3")
    assert code == 0 and out.strip() == "none up to 3 states"


def test_oracle_fairness():
    code, out = cli("oracle", "nu X. mu Y. ((p & dia X) | dia Y)", "--states", "2")
    assert out.startswith("model found")
    m = load_model(out.split("\n", 1)[1])
    assert satisfies(m, normalize(parse("nu X. mu Y. ((p & dia X) | dia Y)")))


def test_selftest_determinize():
    code, out = cli("selftest", "--suite", "determinize", "--cases", "1000")
    assert code == 0 and out.strip() == "determinize: 1000/1000 pass"


def test_selftest_graded_onestep():
    code, out = cli("selftest", "--suite", "onestep", "--logic", "graded", "--cases", "100")
    assert code == 0 and "100/100 pass" in out


def test_selftest_seed_from_environment(monkeypatch):
    a = cli("selftest", "--suite", "mcgame", "--cases", "2", "--seed", "1")
    monkeypatch.setenv("MUCALC_SEED", "1")
    b = cli("selftest", "--suite", "mcgame", "--cases", "2", "--seed", "99")
    assert a == b and a[0] == 0


def test_selftest_unknown_suite(capsys):
    assert cli("selftest", "--suite", "nope")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mucalc", "solve", "p & !p"], capture_output=True, text=True)
    assert proc.returncode == 20 and proc.stdout.strip() == "UNSAT"
