import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from qid import cli
from qid.cli import main
from qid.qseries import SeriesOverflowError

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_verify_uchimura(capsys):
    status, out, _ = run(capsys, "verify", "--identity", "uchimura", "--order", "100")
    assert status == 0 and "OK" in out


def test_verify_eq2_json(capsys):
    status, out, _ = run(capsys, "verify", "--identity", "eq2", "--order", "5", "--format", "json")
    data = json.loads(out)
    assert status == 0
    assert data["lhs"][-2:] == ["3", "2"] and data["rhs"][-2:] == ["3", "2"]
    jsonschema.validate(data, SCHEMA)


def test_verify_usage_errors(capsys):
    status, _, err = run(capsys, "verify", "--identity", "dilcher1", "--m", "0", "--order", "10")
    assert status == 2 and "error" in err
    assert run(capsys, "verify", "--identity", "nope")[0] == 2
    assert run(capsys, "verify", "--identity", "uchimura", "--order", "-1")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--identity", "b-dilcher2", "--m", "2", "--t", "3", "--order", "12"],
        ["verify", "--identity", "thm41", "--n", "5", "--m", "2"],
        ["verify", "--identity", "thm32", "--n", "6", "--k", "3"],
        ["verify", "--identity", "cor33", "--n", "6"],
        ["verify", "--identity", "dilcher1", "--m", "2", "--order", "15"],
    ],
)
def test_json_reports_match_schema(capsys, argv):
    status, out, _ = run(capsys, *argv, "--format", "json")
    assert status == 0
    jsonschema.validate(json.loads(out), SCHEMA)


def test_verify_all_json_schema_and_order(capsys):
    status, out, _ = run(capsys, "verify", "--identity", "all", "--order", "12", "--format", "json", "--no-timing")
    data = json.loads(out)
    assert status == 0 and len(data) > 20
    for rep in data:
        jsonschema.validate(rep, SCHEMA)
    keys = [(r["identity"], [r["params"][p] if r["params"][p] is not None else -1 for p in "mtnk"]) for r in data]
    assert keys == sorted(keys)


def test_determinism_without_timing(capsys, tmp_path):
    argv = ["verify", "--identity", "b-dilcher1", "--m", "2", "--order", "20", "--format", "json", "--no-timing"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["elapsed_ms"] is None
    path = tmp_path / "r.json"
    assert main(argv + ["--output", str(path)]) == 0
    assert path.read_text() == first


def test_verify_csv(capsys):
    status, out, _ = run(capsys, "verify", "--identity", "uchimura", "--order", "10", "--format", "csv", "--no-timing")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert status == 0 and rows[0]["equal"] == "true" and rows[0]["order"] == "10"


def test_mismatch_status(capsys, monkeypatch):
    import qid.identities as ids

    monkeypatch.setattr(ids, "uchimura_lhs", lambda N: ids.dilcher_lhs(1, None, False, N, printed_sign=True))
    status, out, _ = run(capsys, "verify", "--identity", "uchimura", "--order", "5")
    assert status == 1 and "MISMATCH at q^1" in out and "lhs=-1 rhs=1" in out


def test_overflow_status(capsys, monkeypatch):
    def boom(spec):
        raise SeriesOverflowError("coefficient out of int64 range")

    monkeypatch.setattr(cli, "verify", boom)
    status, _, err = run(capsys, "verify", "--identity", "uchimura", "--order", "5")
    assert status == 3 and "overflow" in err


def test_max_order_env(capsys, monkeypatch):
    monkeypatch.setenv("QID_MAX_ORDER", "20")
    assert run(capsys, "verify", "--identity", "uchimura", "--order", "21")[0] == 2
    assert run(capsys, "verify", "--identity", "uchimura", "--order", "20")[0] == 0
    monkeypatch.setenv("QID_MAX_ORDER", "lots")
    assert run(capsys, "verify", "--identity", "uchimura", "--order", "2")[0] == 2


def test_enumerate(capsys):
    assert run(capsys, "enumerate", "--n", "5", "--strict")[1] == "[5]\n[4,1]\n[3,2]\n"
    assert run(capsys, "enumerate", "--n", "0")[1] == "[]\n"
    assert run(capsys, "enumerate", "--n", "4")[1].split() == ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]
    assert run(capsys, "enumerate", "--n", "-1")[0] == 2


def test_enumerate_stats_hooks(capsys):
    status, out, _ = run(capsys, "enumerate", "--n", "6", "--strict", "--stats")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert status == 0 and len(rows) == 4
    assert {r["partition"]: r["hooks"] for r in rows} == {
        "[6]": "6 5 4 3 2 1",
        "[5,1]": "6",
        "[4,2]": "5 4",
        "[3,2,1]": "5",
    }
    assert rows[2]["arms"] == "4 3" and rows[3]["corners"] == "3"


def test_enumerate_json(capsys):
    out = run(capsys, "enumerate", "--n", "5", "--strict", "--format", "json")[1]
    assert json.loads(out) == ["[5]", "[4,1]", "[3,2]"]


def test_bijection_report(capsys):
    status, out, _ = run(capsys, "bijection", "--n", "6", "--k", "3")
    assert status == 0
    assert "[4,2] -> [3,2,1]" in out and "unpaired: [6]" in out
    data = json.loads(run(capsys, "bijection", "--n", "6", "--k", "3", "--format", "json")[1])
    assert data["pairs"] == [["[4,2]", "[3,2,1]"]] and data["unpaired"] == ["[6]"]


def test_bijection_trace(capsys):
    status, out, _ = run(capsys, "bijection", "--n", "5", "--k", "2", "--trace", "[5]")
    assert status == 0 and out.strip() == "(5,0) -> (3,2) -> sorted [3,2]"
    status, _, err = run(capsys, "bijection", "--n", "5", "--k", "2", "--trace", "[3,2]")
    assert status == 2 and "class B" in err


def test_bijection_sweep(capsys):
    status, out, _ = run(capsys, "bijection", "--sweep", "--max-n", "40")
    assert status == 0 and "0 failing" in out
    assert run(capsys, "bijection", "--sweep")[0] == 2


def test_bijection_reduce(capsys):
    status, out, _ = run(capsys, "bijection", "--reduce", "[5]", "--indices", "1", "--format", "json")
    data = json.loads(out)
    assert status == 0 and data["terminal"] == "leftover" and data["rectangles"] == [[5, 1]]
    assert run(capsys, "bijection", "--reduce", "[5]")[0] == 2


def test_table_uchimura(capsys):
    status, out, _ = run(capsys, "table", "--identity", "uchimura", "--order", "6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert status == 0
    assert [r["lhs"] for r in rows[1:]] == ["1", "2", "2", "3", "2", "4"]
    assert all(r["lhs"] == r["rhs"] and r["equal"] == "true" for r in rows)
    assert "b_degree" not in rows[0]


def test_table_bivariate(capsys):
    out = run(capsys, "table", "--identity", "b-dilcher1", "--m", "1", "--order", "2")[1]
    rows = {(r["q_degree"], r["b_degree"]): (r["lhs"], r["rhs"]) for r in csv.DictReader(io.StringIO(out))}
    assert rows[("2", "1")] == ("1", "1") and rows[("2", "2")] == ("1", "1")


def test_table_thm41(capsys):
    out = run(capsys, "table", "--identity", "thm41", "--n", "5", "--m", "2")[1]
    rows = list(csv.DictReader(io.StringIO(out)))
    k1 = next(r for r in rows if r["b_degree"] == "1")
    assert (k1["lhs"], k1["rhs"]) == ("4", "4")
    assert sum(int(r["lhs"]) for r in rows) == 9


def test_table_usage(capsys):
    assert run(capsys, "table", "--identity", "all")[0] == 2
    assert run(capsys, "table", "--identity", "dilcher2", "--m", "1")[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "qid", "enumerate", "--n", "3", "--strict"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "[3]\n[2,1]\n"
