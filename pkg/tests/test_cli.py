import csv
import json

import pytest

from gdjsim.cli import fmt, main, qkd_curve_rows


def _run(argv, tmp_path, name="out.txt"):
    path = tmp_path / name
    code = main(list(argv) + ["--out", str(path)])
    return code, path.read_bytes()


def _csv_rows(data: bytes):
    lines = [ln for ln in data.decode().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_fmt():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(True) == "true"
    assert fmt(None) == ""
    assert fmt(3) == "3"


def test_run_gd_text(capsys):
    assert main(["run", "gd", "constant00"]) == 0
    out = capsys.readouterr().out
    assert "constant00" in out


def test_run_gdj_json(tmp_path):
    code, data = _run(["run", "gdj", "balanced01", "--n", "3", "--format", "json"], tmp_path)
    assert code == 0
    doc = json.loads(data)
    assert doc["result"]["i"] == "000" and doc["result"]["j"] == "000"
    assert doc["result"]["class"] == "balanced01"


def test_run_with_shots(tmp_path):
    code, data = _run(["run", "gd", "constant11", "--shots", "4000", "--format", "json"], tmp_path)
    assert code == 0
    assert json.loads(data)["result"]["counts"] == {"10": 4000}


def test_bad_class_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "gd", "badname"])
    assert exc.value.code == 2


def test_non_promise_custom_function(capsys):
    assert main(["run", "gdj", "custom", "--fx", "0110", "--fy", "0000", "--n", "2"]) == 3
    assert "error" in capsys.readouterr().err


def test_oversized_register(capsys):
    assert main(["run", "gdj", "constant00", "--n", "20"]) == 4


def test_query_complexity_rows(tmp_path):
    code, data = _run(["query-complexity", "--n-max", "3"], tmp_path)
    assert code == 0
    rows = _csv_rows(data)
    assert [int(r["classical_dj"]) for r in rows] == [2, 3, 5]
    assert [int(r["classical_gdj"]) for r in rows] == [2, 5, 17]
    assert all(r["bruteforce_dj"] == r["classical_dj"] for r in rows)
    assert {r["quantum_dj"] for r in rows} == {"1"} and {r["quantum_gdj"] for r in rows} == {"2"}


@pytest.mark.parametrize("panel, expected_rows", [
    ("noise", 21), ("infogain", 20), ("resources", 20)])
def test_panel_row_counts(panel, expected_rows, tmp_path):
    code, data = _run(["panels", panel, "--trials", "500"], tmp_path)
    assert code == 0
    assert len(_csv_rows(data)) == expected_rows


def test_stddev_panel(tmp_path):
    code, data = _run(["panels", "stddev", "--trials", "50", "--dim-max", "16"], tmp_path)
    assert code == 0
    rows = _csv_rows(data)
    assert len(rows) >= 2
    assert all(float(r[k]) >= 0 for r in rows for k in r if k != "d")


def test_qkd_curve_marks_waypoints(tmp_path):
    code, data = _run(["qkd", "curve"], tmp_path)
    assert code == 0
    rows = _csv_rows(data)
    d50 = [r for r in rows if "d50_dj" in r["marker"]]
    assert len(d50) == 1
    assert abs(int(d50[0]["d"]) - 8663) <= 1
    assert 0.49 <= float(d50[0]["p_dj"]) <= 0.51


def test_curve_rows_ideal_model():
    rows = qkd_curve_rows(0.1, 8e-4, 2.5e-3, 100, 50, "ideal")
    assert rows[0][:3] == (0, 0.0, 0.0)


def test_qkd_simulate_jsonl(tmp_path):
    code, data = _run(["qkd", "simulate", "--d", "100", "--eta", "1"], tmp_path)
    assert code == 0
    lines = data.decode().splitlines()
    assert len(lines) == 101
    assert "summary" in json.loads(lines[-1])


def test_qkd_bad_eta(capsys):
    assert main(["qkd", "simulate", "--eta", "2"]) == 2


@pytest.mark.parametrize("argv", [
    ["run", "gdj", "balanced10", "--n", "2", "--shots", "100"],
    ["query-complexity", "--n-max", "3"],
    ["panels", "noise", "--trials", "300"],
    ["panels", "stddev", "--trials", "20", "--dim-max", "8"],
    ["qkd", "curve", "--d-step", "5000"],
    ["qkd", "simulate", "--d", "200", "--eta", "0.5", "--test-fraction", "0.5"],
    ["life-death", "constant11"],
])
def test_same_seed_gives_identical_bytes(argv, tmp_path):
    _, first = _run(argv + ["--seed", "17"], tmp_path, "a.txt")
    _, second = _run(argv + ["--seed", "17"], tmp_path, "b.txt")
    assert first == second
    assert b"\r\n" not in first


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("GDJSIM_SEED", "5")
    _, a = _run(["qkd", "simulate", "--d", "50", "--eta", "0.5"], tmp_path, "a.txt")
    _, b = _run(["qkd", "simulate", "--d", "50", "--eta", "0.5", "--seed", "5"], tmp_path, "b.txt")
    assert a == b


def test_life_death(capsys):
    assert main(["life-death", "balanced01"]) == 0
    assert capsys.readouterr().out.startswith("Room 1: Death, Room 2: Life")
