import csv
import io
import json
import subprocess
import sys

import pytest

from abcensus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_census_csv(capsys):
    code, out, _ = run(capsys, "census", "--n-max", "4")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "N,psi_ev,psi_odd,psi,phi,main_term,residual,residual_over_N175"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["N"], r["psi"]) for r in rows] == [("3", "2"), ("4", "8")]
    assert "\r" not in out


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "--n-max", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1 and data[0]["psi"] == 2
    assert list(data[0]) == ["N", "psi_ev", "psi_odd", "psi", "phi", "main_term", "residual", "residual_over_N175"]


def test_census_rejects_small_n(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["census", "--n-max", "2"])
    assert exc.value.code == 2
    assert "n-max must be ≥ 3" in capsys.readouterr().err


def test_census_output_independent_of_threads(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["census", "--n-max", "600", "--out", str(a)]) == 0
    assert main(["census", "--n-max", "600", "--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_figures(capsys):
    code, out, _ = run(capsys, "figures", "--n-max", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["N", "s_n", "c_n", "s_minus_c", "fig2"]
    assert float(rows[1]["s_n"]) == 2.0
    assert float(rows[0]["fig2"]) == pytest.approx(-0.3678, abs=1e-4)


def test_figures_empty_range():
    with pytest.raises(SystemExit) as exc:
        main(["figures", "--n-max", "1"])
    assert exc.value.code == 2


def test_quadratics_trace_bound(capsys):
    code, out, _ = run(capsys, "quadratics", "--trace-bound", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    r = rows[0]
    assert (r["period"], r["Delta"], r["u0"], r["v0"]) == ("1", "5", "3", "1")
    assert float(r["rho"]) == pytest.approx(1.9248, abs=1e-4)
    code, out, _ = run(capsys, "quadratics", "--trace-bound", "4")
    assert len(list(csv.DictReader(io.StringIO(out)))) == 3


def test_quadratics_empty(capsys):
    code, out, _ = run(capsys, "quadratics", "--trace-bound", "2")
    assert code == 0 and out == "period,per,eper,Delta,u0,v0,rho\n"


def test_quadratics_sorted_by_rho(capsys):
    code, out, _ = run(capsys, "quadratics", "--trace-bound", "60")
    rows = list(csv.DictReader(io.StringIO(out)))
    rhos = [float(r["rho"]) for r in rows]
    assert rhos == sorted(rhos)


def test_quadratics_x_bound(capsys):
    code, out, _ = run(capsys, "quadratics", "--x-bound", "3")
    assert code == 0 and len(out.strip().split("\n")) == 4
    with pytest.raises(SystemExit) as exc:
        main(["quadratics", "--x-bound", "-1"])
    assert exc.value.code == 2


def test_verify_reports_each_check(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "300", "--trace-bound", "200", "--skip-asymptotics")
    status = {line.split()[0]: line.split()[1] for line in out.splitlines()[:-1]}
    failing = {name for name, s in status.items() if s == "FAIL"}
    # the strict right-hand sandwich is an equality; see the sandwich tests
    assert failing == {"sandwich-upper-strict"}
    assert code == 1


def test_verify_strict_uses_brute_force_everywhere(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "700", "--strict", "--trace-bound", "50",
                       "--skip-asymptotics", "--format", "json")
    rows = {r["name"]: r for r in json.loads(out)}
    assert rows["oracle-equivalence"]["passed"]
    assert "3..700" in rows["oracle-equivalence"]["detail"]


@pytest.mark.slow
def test_verify_c2_fault_is_caught(capsys):
    code, out, _ = run(capsys, "verify", "--trace-bound", "50", "--format", "json")
    clean = {r["name"]: r["passed"] for r in json.loads(out)}
    code_f, out_f, _ = run(capsys, "verify", "--trace-bound", "50", "--format", "json", "--inject-c2-fault")
    faulty = {r["name"]: r["passed"] for r in json.loads(out_f)}
    assert clean["asymptotic-ratio"] and not faulty["asymptotic-ratio"]
    assert code_f != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abcensus", "census", "--n-max", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("3,1,0,2,2,")
