import json
import shutil
import subprocess
import sys

import pytest

from igmonoid.cli import CORPUS, corpus_dir, golden_path, main, run_corpus


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def corpus(name):
    return str(corpus_dir() / name)


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", corpus("and.igm"), "--report", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1 and rep["command"] == "validate"
    assert rep["result"]["valid"] is True
    assert rep["result"]["cocycle"]["kernel_index"] == 2


def test_maximal_order_report(capsys):
    code, out, _ = run(capsys, "maximal-order", corpus("and.igm"), "--report", "json")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["verdict"] is True
    parts = sorted(tuple(o["partition"][0]) for o in res["orbits"])
    assert parts == [("(u1, u3)", "(u2, u4)"), ("(u1, u4)", "(u2, u3)")]


def test_torsion_report(capsys):
    code, out, _ = run(capsys, "torsion", corpus("torsionex.igm"), "--report", "json")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["torsion_free"] is False
    assert res["witness"]["order"] == 2 and res["witness"]["group"] == "(12)(34)"


def test_ybe_report(capsys):
    code, out, _ = run(capsys, "ybe", corpus("belvb.irel"), "--report", "json")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["ybe"] is True and res["group_order"] == 8
    assert res["sigmas"] == {"x1": "(23)", "x2": "(14)", "x3": "(1243)", "x4": "(1342)"}


def test_text_report(capsys):
    code, out, _ = run(capsys, "torsion", corpus("and.igm"))
    assert code == 0
    assert out.startswith("torsion  and.igm\n")
    assert "torsion_free" in out


def test_expect_refuted_gives_status_one(capsys):
    code, _, _ = run(capsys, "torsion", corpus("torsionex.igm"), "--expect", "torsion-free")
    assert code == 1
    code, _, _ = run(capsys, "torsion", corpus("torsionex.igm"), "--expect", "torsion")
    assert code == 0
    code, _, _ = run(capsys, "maximal-order", corpus("nonmax.igm"), "--expect", "maximal-order")
    assert code == 1


def test_input_errors_give_status_two(capsys, tmp_path):
    bad = tmp_path / "bad.igm"
    bad.write_text("gens u1 u2\nrel u1 =\n")
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "syntax" and payload["line"] == 2
    code, _, err = run(capsys, "ybe", corpus("and.igm"))
    assert code == 2 and "error" in json.loads(err)
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.igm"))
    assert code == 2 and json.loads(err)["error"] == "io"
    code, _, _ = run(capsys, "torsion", corpus("and.igm"), "--expect", "ybe")
    assert code == 2
    code, _, _ = run(capsys, "validate")
    assert code == 2


def test_semantic_error_gives_status_two(capsys, tmp_path):
    bad = tmp_path / "bad.igm"
    bad.write_text("gens u1 u2 u3 u4\nrel u1 u2 = u3 u4\nact s = (13)\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert json.loads(err)["error"] == "RelationNotPreserved"


def test_reports_are_deterministic(capsys):
    outs = {run(capsys, "witness", corpus("nonmax.igm"), "--report", "json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_witness_report_is_labelled_bounded(capsys):
    code, out, _ = run(capsys, "witness", corpus("and.igm"), "--report", "json")
    res = json.loads(out)
    assert code == 0 and res["params"] == {"bound": 2}
    assert res["result"]["non_maximal_witness"] is None
    assert "bounded" in res["result"]["disclaimer"]


def test_corpus_matches_golden_reports(capsys):
    code, out, _ = run(capsys, "corpus", "--report", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert set(rep["results"]) == set(CORPUS)


def test_corpus_detects_changed_golden(tmp_path):
    for name in CORPUS:
        shutil.copy(corpus_dir() / name, tmp_path / name)
        shutil.copy(golden_path(corpus_dir() / name), golden_path(tmp_path / name))
    _, ok = run_corpus(False, tmp_path)
    assert ok
    g = golden_path(tmp_path / "and.igm")
    g.write_text(g.read_text().replace('"verdict": true', '"verdict": false'))
    report, ok = run_corpus(False, tmp_path)
    assert not ok and report["results"]["and.igm"] == "mismatch"
    run_corpus(True, tmp_path)
    assert run_corpus(False, tmp_path)[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "igmonoid.cli", "sigma", corpus("belvb.irel"), "--report", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "sigma"


@pytest.mark.parametrize("command", ["validate", "torsion", "primes", "maximal-order", "witness"])
def test_every_command_runs_on_the_swap_example(capsys, command):
    code, out, _ = run(capsys, command, corpus("and.igm"), "--report", "json")
    assert code == 0 and json.loads(out)["command"] == command
