import json
import subprocess
import sys

import pytest

from suenrich import corpus
from suenrich.cli import main

EX = corpus.corpus_dir()


def ex(name):
    return str(EX / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_monoid(capsys):
    code, rep, _ = run(capsys, "monoid", ex("ends_a.dfa"))
    assert code == 0
    assert rep["schema"] == 1 and rep["command"][0] == "monoid"
    assert rep["monoid"]["elements"] == ["1", "a", "b"]
    assert rep["monoid"]["accepting"] == ["a"]


def test_wfw(capsys, tmp_path):
    out = tmp_path / "w.dfa"
    code, rep, _ = run(capsys, "wfw", ex("ends_a.dfa"), "--dfa-out", str(out))
    assert code == 0 and rep["M"] == 3 and not rep["W"]["empty"]
    assert out.read_text().startswith("alphabet:")
    code, rep, _ = run(capsys, "wfw", ex("ends_a.dfa"), "-F", "")
    assert code == 0 and rep["W"]["empty"]


def test_separate_curated_instance(capsys):
    code, rep, _ = run(capsys, "separate", "--class", "sigma1", ex("contains_aa.dfa"), ex("abstar.dfa"))
    assert code == 0
    assert rep["verdict"] == "separable"
    assert rep["checks"] and all(c["pass"] for c in rep["checks"])
    names = {c["name"] for c in rep["checks"]}
    assert {"separator-contains-L1", "separator-avoids-L2"} <= names


def test_separate_negative(capsys):
    code, rep, _ = run(capsys, "separate", "--class", "sigma1", "--no-lift",
                       ex("only_a.dfa"), ex("contains_a.dfa"))
    assert code == 1 and rep["verdict"] == "not separable"


def test_cover(capsys):
    code, rep, _ = run(capsys, "cover", "--class", "at", ex("ends_a.dfa"), ex("ends_b.dfa"))
    assert code in (0, 1)
    assert all(c["pass"] for c in rep["checks"])


def test_output_is_deterministic(capsys):
    argv = ["separate", "--class", "sigma1", "--seed", "3", ex("ends_a.dfa"), ex("ends_b.dfa")]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_efgame(capsys):
    code, rep, _ = run(capsys, "efgame", "--logic", "fo2", "--k", "2", "ab", "ba")
    assert code == 1 and rep["holds"] is False and "trace" not in rep
    code, rep, _ = run(capsys, "efgame", "--logic", "sigma", "--n", "1", "--k", "2", "--trace",
                       "ab", "aabb")
    assert code == 0 and rep["holds"] and "trace" in rep
    code, _, err = run(capsys, "efgame", "--logic", "sigma", "--k", "9", "a", "a")
    assert code == 2 and "error" in err


def test_omega(capsys):
    f = ex("inf_a.omega")
    code, rep, _ = run(capsys, "omega", "axioms", f)
    assert code == 0
    code, rep, _ = run(capsys, "omega", "eval", f, "(ab)^w")
    assert code == 0 and rep["value"] == "w_a" and rep["accepted"]
    code, rep, _ = run(capsys, "omega", "eta", f, "(a)^w")
    assert code == 0 and rep["checks"][0]["pass"]
    code, rep, _ = run(capsys, "omega", "eqinf", f, "(b)^w")
    assert code == 0 and rep["pass"]
    code, _, _ = run(capsys, "omega", "eval", f)
    assert code == 2


def test_verify_single_suite(capsys):
    code, rep, _ = run(capsys, "verify", "--suite", "su")
    assert code == 0 and rep["pass"]
    assert rep["suites"][0]["checks"] == []


def test_malformed_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.dfa"
    bad.write_text("alphabet: a b\nstates: 2\ninitial: 5\n")
    code, rep, err = run(capsys, "monoid", str(bad))
    assert code == 2 and rep is None and "error" in err
    code, _, err = run(capsys, "monoid", str(tmp_path / "missing.dfa"))
    assert code == 2
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2
    code, _, _ = run(capsys, "separate", "--class", "nope", ex("ends_a.dfa"), ex("ends_b.dfa"))
    assert code == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "suenrich", "monoid", ex("only_a.dfa")],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["monoid"]["elements"]
