import csv
import io
import json
import math

import pytest

from logpole.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def test_ladder_default(capsys):
    code, out, _ = run(capsys, "ladder")
    assert code == 0
    assert "# M = 320.0" in out and "# n0 = 4" in out
    rows = body(out)
    assert rows[0] == ["n", "lambda_n", "q_lambda_n", "alpha_n", "support_lo", "support_hi"]
    data = rows[1:]
    assert len(data) == 8
    lams = [float(r[1]) for r in data]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    for r in data:
        assert float(r[2]) == pytest.approx(10.0 ** int(r[0]), rel=1e-12)


def test_ladder_single_level_json(capsys):
    code, out, _ = run(capsys, "ladder", "--levels", "6..6", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 1 and payload["rows"][0][0] == 6
    assert "levels = 6..6" in payload["config"]


def test_bad_config_exit_2(capsys):
    assert run(capsys, "ladder", "--M", "0.5")[0] == 2
    assert run(capsys, "ladder", "--M", "abc")[0] == 2
    assert run(capsys, "ladder", "--levels", "3..2")[0] == 2
    assert run(capsys, "quasimode", "--n", "2")[0] == 2


def test_verify_ode_and_unknown(capsys):
    code, out, err = run(capsys, "verify", "--suite", "ode")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["check"] == "ode" and rep["pass"] is True
    assert "PASS ode" in err
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2


def test_verify_failure_exit_1(capsys):
    # M = 160 is below the decay threshold for N = 2
    code, out, _ = run(capsys, "verify", "--suite", "decay", "--M", "160", "--levels", "4..10")
    assert code == 1
    assert json.loads(out)["reports"][0]["pass"] is False


@pytest.mark.slow
def test_verify_all_default(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0, err
    assert all(r["pass"] for r in json.loads(out)["reports"])


def test_evolve_rows(tmp_path, capsys):
    code, _, _ = run(capsys, "evolve", "--out", str(tmp_path), "--T", "10", "--dt", "0.1", "--stride", "10")
    assert code == 0
    rows = body((tmp_path / "evolve_n4.csv").read_text())
    assert rows[0] == ["t", "D", "bound", "mass_fraction"]
    data = [[float(x) for x in r] for r in rows[1:]]
    assert len(data) == 100 // 10 + 1
    assert data[0][0] == 0.0 and data[0][1] == 0.0
    assert data[-1][1] <= data[-1][2]
    summary = json.loads((tmp_path / "evolve_n4.summary.json").read_text())
    assert summary["passed"] is True


def test_evolve_range_and_grid_errors(capsys):
    assert run(capsys, "evolve", "--n", "9")[0] == 2
    assert run(capsys, "evolve", "--T", "10", "--dt", "0.3", "--stride", "7")[0] == 2


def test_quotients(tmp_path, capsys):
    code, _, _ = run(capsys, "quotients", "--family", "strichartz", "--q", "4", "--q0", "2", "--out", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "quotients_strichartz.summary.json").read_text())
    assert summary["slope"] >= 3 / 4 - 0.1
    code, _, _ = run(capsys, "quotients", "--family", "resolvent", "--out", str(tmp_path))
    assert json.loads((tmp_path / "quotients_resolvent.summary.json").read_text())["slope"] >= 1
    assert run(capsys, "quotients", "--family", "strichartz", "--q", "2", "--q0", "2")[0] == 2
    assert run(capsys, "quotients", "--family", "loss_strichartz", "--q", "6", "--sigma", "1")[0] == 2


def test_potential_export(capsys):
    code, out, _ = run(capsys, "potential", "--levels", "4..5", "--points-per-decade", "16")
    assert code == 0
    rows = body(out)
    assert rows[0] == ["r", "V", "W", "level"]
    vals = [[float(x) for x in r] for r in rows[1:]]
    assert all(v[1] >= 0 and v[1] == v[2] for v in vals)


def test_quasimode_export(capsys):
    code, out, _ = run(capsys, "quasimode", "--n", "5", "--samples", "41", "--j", "1")
    assert code == 0
    rows = body(out)
    assert rows[0] == ["r", "u_n", "f_n_d0", "f_n_d1"]
    u = [float(r[1]) for r in rows[1:]]
    assert max(u) > 0 and len(u) == 41 and math.isclose(u[0], 0.0, abs_tol=0)


def test_config_file_and_determinism(tmp_path, capsys):
    _, first, _ = run(capsys, "ladder", "--levels", "4..6")
    cfg = tmp_path / "run.cfg"
    cfg.write_text(first)
    _, second, _ = run(capsys, "ladder", "--config", str(cfg))
    assert first == second
