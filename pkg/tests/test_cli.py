import json
import subprocess
import sys

import numpy as np
import pytest

from orthostab.cli import main
from orthostab.matcore import mat_to_json


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_stabdim_sym(tmp_path, capsys):
    spec = _write(tmp_path / "s.json", {"type": "sym", "classes": [{"eigenvalue": [1, 0], "parts": [[1, 2]]}]})
    code, out = run(["stabdim", "--spec", spec, "--oracle"], capsys)
    d = json.loads(out)
    assert code == 0 and d["total"] == 1 and d["oracle"] == 1


def test_oracle_and_classify(tmp_path, capsys):
    m = _write(tmp_path / "m.json", [[2, 0], [0, -3]])
    code, out = run(["oracle", "--matrix", m, "--action", "herm"], capsys)
    assert code == 0 and json.loads(out)["nullity"] == 0
    code, out = run(["classify", "--matrix", m], capsys)
    assert code == 0 and json.loads(out)["inertia"] == [1, 1, 0]


def test_solve_then_verify_reproduces_certificates(tmp_path, capsys):
    spec = _write(tmp_path / "h.json", {"type": "herm", "classes": [
        {"kind": "zero", "parts": [{"alpha": 2, "m": 2, "signs": [1, -1]}]},
        {"kind": "negpair", "mu": 0.8, "parts": [[1, 1]]}]})
    out_dir = tmp_path / "out"
    code, out = run(["solve", "--spec", spec, "--samples", "3", "--seed", "4", "--out", str(out_dir)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["feasible"] and len(rep["samples"]) == 3
    for cert in rep["samples"]:
        code, out = run(["verify", "--q", str(out_dir / cert["file"]), "--m", str(out_dir / "M.json"),
                         "--action", "herm"], capsys)
        v = json.loads(out)
        assert code == 0
        assert abs(v["orth_residual"] - cert["orth_residual"]) <= 1e-12
        assert abs(v["action_residual"] - cert["action_residual"]) <= 1e-12


def test_verify_failure_exit_code(tmp_path, capsys):
    q = _write(tmp_path / "q.json", mat_to_json(2 * np.eye(2)))
    m = _write(tmp_path / "m.json", mat_to_json(np.eye(2)))
    code, _ = run(["verify", "--q", q, "--m", m, "--action", "sym"], capsys)
    assert code == 1


def test_reduce(tmp_path, capsys):
    a = _write(tmp_path / "a.json", [[1, 0], [0, 2]])
    b = _write(tmp_path / "b.json", [[4, 0], [0, 4]])
    code, out = run(["reduce", "--a", a, "--b", b], capsys)
    assert code == 0 and json.loads(out)["certificate"] <= 1e-9


@pytest.mark.parametrize("name", ["2.7", "3.3"])
def test_examples(name, capsys):
    code, out = run(["example", "--name", name], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_input_errors(tmp_path, capsys):
    bad = _write(tmp_path / "bad.json", {"type": "herm", "classes": [{"kind": "pos", "lambda": -1,
                                                                      "parts": [{"alpha": 1, "m": 1}]}]})
    assert main(["stabdim", "--spec", bad]) == 2
    assert main(["stabdim", "--spec", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["oracle", "--matrix", str(tmp_path / "junk.json"), "--action", "sym"]) == 2
    ns = _write(tmp_path / "ns.json", [[0, 1], [0, 0]])
    assert main(["oracle", "--matrix", ns, "--action", "sym"]) == 2


def test_ambiguous_rank_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("ORTHOSTAB_TOL", "1")  # restored after the test; main overwrites it
    # commutator singular values 3.1e-6, 1.7e-6, 1.4e-6; the threshold lands between the top two
    m = _write(tmp_path / "m.json", [[1, 0, 0], [0, 1 + 1e-6, 0], [0, 0, 1 + 2.2e-6]])
    assert main(["--tol-multiplier", "1.15e9", "oracle", "--matrix", m, "--action", "sym"]) == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "orthostab", "example", "--name", "2.7"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["numeric_bit_exact"]
