import json
import subprocess
import sys

import numpy as np
import pytest

from symplectic_sr.cli import main
from symplectic_sr.core import symplectic_adjoint
from symplectic_sr.fixtures import a6, a12
from symplectic_sr.io import write_matrix
from symplectic_sr.jhessenberg import mjhess
from symplectic_sr.reproduce import reproduce_tables


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main(list(argv) + ["--report", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_uncured_breakdown(tmp_path):
    code, rep = run(tmp_path, "reduce", "--alg", "jhess", "--fixture", "a6", "--no-cure")
    assert code == 2
    assert rep["status"] == "breakdown" and rep["breakdown"]["step"] == 1
    assert rep["breakdown"]["pivot"] == 0.0


def test_uncured_breakdown_a12(tmp_path):
    code, rep = run(tmp_path, "reduce", "--alg", "jhmsh", "--fixture", "a12")
    assert code == 2 and rep["breakdown"]["step"] == 3


def test_mjhess_report(tmp_path):
    code, rep = run(tmp_path, "reduce", "--alg", "mjhess", "--fixture", "a12")
    assert code == 0 and rep["status"] == "ok"
    assert rep["residuals"]["j_orthogonality"]["2"] <= 1e-12
    assert rep["schema_version"] == 1 and rep["input_digest"].startswith("sha256:")
    kinds = [e["kind"] for e in rep["events"]]
    assert kinds[:2] == ["breakdown", "cure_applied"]
    assert rep["config"]["cure"] is True and rep["timing_s"] >= 0


def test_report_matches_library(tmp_path):
    _, rep = run(tmp_path, "reduce", "--alg", "mjhess", "--fixture", "a12")
    res = mjhess(a12())
    lib = np.linalg.norm(symplectic_adjoint(res.s) @ res.s - np.eye(12), 2)
    assert rep["residuals"]["j_orthogonality"]["2"] == pytest.approx(lib, rel=1e-15)
    assert rep["residuals"]["similarity"]["2"] == pytest.approx(res.residual, rel=1e-15)


def test_factor_identity(tmp_path):
    path = tmp_path / "I.mm"
    write_matrix(path, np.eye(6))
    code, rep = run(tmp_path, "factor", "--alg", "srdeco", "--input", str(path))
    assert code == 0
    assert rep["residuals"]["reconstruction"]["2"] == 0.0
    assert rep["residuals"]["j_orthogonality"]["max"] == 0.0


@pytest.mark.parametrize("cure", ["h2", "g2", "block:3"])
def test_cure_kinds(tmp_path, cure):
    code, rep = run(tmp_path, "reduce", "--alg", "jhess", "--fixture", "a12", "--cure", cure)
    assert code == 0 and rep["config"]["cure"] is True
    assert rep["config"]["cure_kind"] == cure.split(":")[0]


def test_eig(tmp_path):
    code, rep = run(tmp_path, "eig", "--fixture", "a6", "--seed", "3")
    assert code == 0 and len(rep["eigenvalues"]) == 6 and rep["converged"]
    key = lambda z: (round(z.real, 6), z.imag)
    lams = sorted((complex(*z) for z in rep["eigenvalues"]), key=key)
    ref = sorted(np.linalg.eigvals(a6()), key=key)
    assert max(abs(x - y) for x, y in zip(lams, ref)) < 1e-8
    assert max(rep["eigenvalue_residuals"]) < 1e-8


def test_eig_rejects_no_cure(tmp_path):
    code, rep = run(tmp_path, "eig", "--fixture", "a6", "--no-cure")
    assert code == 1 and rep is None


def test_cure_budget_exit_code(tmp_path, monkeypatch):
    from symplectic_sr.jhessenberg import Reduction
    monkeypatch.setattr(Reduction, "cure", lambda self, j: None)
    code, rep = run(tmp_path, "reduce", "--alg", "mjhess", "--fixture", "a6")
    assert code == 3 and rep["status"] == "budget_exhausted" and rep["step"] == 1


def test_odd_dimension(tmp_path):
    path = tmp_path / "odd.csv"
    path.write_text("1,2,3\n4,5,6\n7,8,10\n")
    assert main(["factor", "--input", str(path)]) == 1


def test_missing_input(tmp_path):
    assert main(["factor", "--input", str(tmp_path / "none.mtx")]) == 1


def test_unknown_flag():
    with pytest.raises(SystemExit) as info:
        main(["reduce", "--fixture", "a6", "--bogus"])
    assert info.value.code == 1


def test_bad_cure_kind():
    with pytest.raises(SystemExit) as info:
        main(["reduce", "--fixture", "a6", "--cure", "block:1"])
    assert info.value.code == 1


def test_reproduce_command(tmp_path):
    code, rep = run(tmp_path, "reproduce")
    assert code == 0
    rows = {r["method"]: r for r in rep["table"]}
    assert rows["jhess"]["j_orthogonality"] is None and rows["jhess"]["breakdown_step"] == 3
    assert rows["mjhess"]["j_orthogonality"] <= 1e-12
    assert rep["equivalences"]["D3"]["similarity_defect"] <= 1e-10


def test_reproduce_table():
    rep = reproduce_tables()
    assert rep.row("jhess").failed
    assert not rep.row("mjhess").failed
    d3 = rep.equivalences["D3"]
    np.testing.assert_allclose(d3.d, np.eye(12), atol=1e-12)
    assert d3.similarity_defect <= 1e-10
    assert rep.breakdowns == {"jhess/a6": 1, "jhmsh/a6": 1, "jhess/a12": 3, "jhmsh/a12": 3}
    assert rep.cure_a6_error <= 1e-12
    text = rep.format()
    assert "fails" in text and "D3" in text


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "symplectic_sr", "reduce", "--alg", "jhess",
                           "--fixture", "a6", "--no-cure", "--report", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "breakdown" in proc.stderr
    assert json.loads(out.read_text())["breakdown"]["step"] == 1
