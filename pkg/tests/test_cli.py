import csv
import json

import numpy as np
import pytest

from snqi import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_table_default(capsys):
    code, out = run(capsys, "table", "--delta", "0")
    assert code == 0
    assert "lower bound" in out.out
    payload = json.loads(out.out[out.out.index("{"):])
    assert payload["settings"]["theta_nodes"] == 64
    p = payload["payload"]
    assert p["f_single_rho"] == pytest.approx(2 / 3)
    assert p["f_double_tau_lb"] == pytest.approx(0.76934, abs=1e-5)


def test_table_end_points(capsys, tmp_path):
    code, _ = run(capsys, "table", "--delta", "1", "--json", str(tmp_path / "t.json"))
    assert code == 0
    p = json.loads((tmp_path / "t.json").read_text())["payload"]
    assert p["f_single_tau"] == pytest.approx(0.5)
    code, _ = run(capsys, "table", "--delta", "0.03", "--json", str(tmp_path / "u.json"))
    p = json.loads((tmp_path / "u.json").read_text())["payload"]
    assert p["f_single_tau"] == pytest.approx(2 / 3 - 0.005)


def test_sweep_csv_window_and_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _ = run(capsys, "sweep", "--min", "0", "--max", "0.1", "--steps", "101", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.open()))
    assert list(rows[0]) == [f.name for f in cli.fields(cli.SweepRecord)]
    window = [float(r["delta"]) for r in rows if r["snqi"] == "true"]
    assert min(window) == pytest.approx(0.001) and max(window) == pytest.approx(0.071)
    assert all(0 < d < 7 - 4 * np.sqrt(3) for d in window)
    first = rows[0]
    assert float(first["chi_rho"]) == pytest.approx(1, abs=1e-10)
    assert float(first["chi_tau"]) == pytest.approx(1, abs=1e-10)
    mi = [(float(r["delta"]), float(r["mi_double_tau"])) for r in rows]
    above = [d for d, v in mi if v > float(first["mi_double_rho"])]
    assert max(above) == pytest.approx(0.057, abs=2e-3)
    # 17 significant digits round trip
    assert float(first["f_double_tau_lb"]) == (2 * np.sqrt(3) + 15) / 24


def test_sweep_json(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, _ = run(capsys, "sweep", "--min", "0.5", "--max", "1", "--steps", "3", "--format", "json", "--out", str(out))
    recs = json.loads(out.read_text())["payload"]["records"]
    assert code == 0 and len(recs) == 3
    assert recs[-1]["mi_double_tau"] == 0 and recs[-1]["chi_tau"] == pytest.approx(0, abs=1e-10)
    for r in recs:
        assert all(0 <= r[k] <= 1 for k in ("f_single_rho", "f_single_tau", "f_double_rho", "f_double_tau_lb"))


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "sweep", "--min", "0.5", "--max", "0.2")[0] == 2
    assert run(capsys, "sweep", "--steps", "1")[0] == 2
    assert run(capsys, "sweep", "--out", str(tmp_path / "no" / "x.csv"))[0] == 2
    assert run(capsys, "table", "--delta", "3")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


@pytest.mark.parametrize("suite", ["morphisms", "povm", "classical"])
def test_verify_suites(capsys, suite):
    code, out = run(capsys, "verify", "--suite", suite, "--seed", "3")
    data = json.loads(out.out)
    assert code == 0 and data["payload"]["pass"]
    rep = data["payload"]["reports"][0]
    assert rep["seed"] == 3
    assert all(c["pass"] == (c["residual"] <= c["tolerance"]) for c in rep["checks"])


def test_verify_measures_uses_mc_flags(capsys):
    code, out = run(capsys, "--mc-samples", "20000", "verify", "--suite", "measures")
    data = json.loads(out.out)
    assert code == 0
    assert data["settings"]["mc_samples"] == 20000
    names = [c["name"] for c in data["payload"]["reports"][0]["checks"]]
    assert any("monte_carlo" in n for n in names)


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(cli.SUITES, "povm", lambda rep, rng, q: rep.add("forced", 1.0, 0.0))
    assert run(capsys, "verify", "--suite", "povm")[0] == 1


def test_figures(capsys, tmp_path):
    f5 = tmp_path / "f5.csv"
    run(capsys, "figure", "--which", "fig5", "--out", str(f5))
    rows = list(csv.reader(f5.open()))
    assert float(rows[-1][1]) == pytest.approx(0.2787, abs=1e-4)
    f6 = tmp_path / "f6.csv"
    run(capsys, "figure", "--which", "fig6", "--out", str(f6))
    vals = {(float(a), float(g)): float(m) for a, g, m in list(csv.reader(f6.open()))[1:]}
    assert vals[(1.5, 1.0)] == pytest.approx(0.6231, abs=1e-4)
    for (a, g), m in vals.items():
        assert a <= g / 2 + 1 + 1e-12 and g <= 1
        if (-a, g) in vals:
            assert m == pytest.approx(vals[(-a, g)], abs=1e-12)
    f3 = tmp_path / "f3.json"
    run(capsys, "figure", "--which", "fig3", "--out", str(f3))
    data = json.loads(f3.read_text())["payload"]
    assert data["columns"][0] == "delta" and len(data["rows"]) == 101


def test_choi(capsys):
    code, out = run(capsys, "choi", "--delta", "0")
    p = json.loads(out.out)["payload"]
    assert code == 0 and p["is_cp"] is False
    assert p["eigenvalues"] == sorted(p["eigenvalues"], reverse=True)
    assert min(p["eigenvalues"]) == pytest.approx(-0.5)


def test_povm_dump(capsys, tmp_path):
    path = tmp_path / "p.json"
    assert run(capsys, "povm", "--dump", str(path))[0] == 0
    p = json.loads(path.read_text())["payload"]
    e = np.array(p["effects"][0]["real"]) + 1j * np.array(p["effects"][0]["imag"])
    assert e.shape == (16, 16)
    assert p["diagnostics"]["completeness_error"] <= 1e-10
    assert p["diagnostics"]["phases"]["+"]["single_phase_feasible"] is False
