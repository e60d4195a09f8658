import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from zitter import cli


def run(argv):
    out = io.StringIO()
    code = cli.run(argv, out)
    return code, out.getvalue()


def schema(name):
    return json.loads(resources.files("zitter").joinpath("schemas", f"{name}.json").read_text())


@pytest.fixture
def files(tmp_path):
    (tmp_path / "contradiction.txt").write_text("x1 & ~x1\n")
    (tmp_path / "taut.txt").write_text("x1 | ~x1\n")
    (tmp_path / "sat.cnf").write_text("c three clauses\np cnf 3 3\n1 -2 0\n2 3 0\n-1 -3 0\n")
    (tmp_path / "broken.txt").write_text("x1 & & x2\n")
    return tmp_path


class TestSat:
    def test_contradiction(self, files):
        code, text = run(["sat", "--formula", str(files / "contradiction.txt")])
        assert code == 1
        doc = json.loads(text)
        assert doc["outcome"] == "UNSAT"
        jsonschema.validate(doc, schema("sat"))

    def test_tautology_and_sat(self, files):
        code, text = run(["sat", "--formula", str(files / "taut.txt"), "--json"])
        assert code == 0 and json.loads(text)["outcome"] == "TAUTOLOGY"
        code, text = run(["sat", "--formula", str(files / "sat.cnf"), "--shots", "2000", "--seed", "3"])
        doc = json.loads(text)
        assert code == 0 and doc["outcome"] == "SAT"
        assert abs(doc["shots"]["estimate"] - doc["shots"]["exact"]) < 5 * 0.5 / 2000 ** 0.5
        jsonschema.validate(doc, schema("sat"))

    def test_plain(self, files):
        code, text = run(["sat", "--formula", str(files / "contradiction.txt"), "--format", "plain"])
        assert code == 1 and "UNSAT" in text

    def test_metadata(self, files):
        _, text = run(["sat", "--formula", str(files / "sat.cnf"), "--seed", "12", "--samples", "5"])
        meta = json.loads(text)["meta"]
        assert meta["seed"] == 12 and meta["config"]["samples"] == 5 and meta["version"]
        assert len(json.loads(text)["evidence"]) == 5

    def test_syntax_error_exit_2(self, files, capsys):
        code, _ = run(["sat", "--formula", str(files / "broken.txt")])
        assert code == 2
        assert "position 5" in capsys.readouterr().err

    def test_missing_file(self, files):
        assert run(["sat", "--formula", str(files / "nope.txt")])[0] == 2

    def test_bad_epsilon(self, files):
        assert run(["sat", "--formula", str(files / "taut.txt"), "--epsilon", "1.5"])[0] == 2


class TestTable:
    def test_ion_table(self):
        code, text = run(["table", "--model", "8"])
        assert code == 0
        lines = text.splitlines()
        meta = json.loads(lines[0][2:])
        jsonschema.validate(meta, schema("table"))
        rows = list(csv.DictReader(lines[1:]))
        assert len(rows) == 64
        assert rows[1] == {"i": "1", "k": "2", "p": "0.25"}

    def test_electron_table(self):
        rows = list(csv.DictReader(run(["table", "--model", "4"])[1].splitlines()[1:]))
        assert {(r["i"], r["k"]): r["p"] for r in rows}[("1", "3")] == "0"
        assert len(rows) == 16


class TestDiscriminate:
    def test_accuracy(self):
        code, text = run(["discriminate", "--runs", "20000", "--state", "2", "--seed", "7"])
        doc = json.loads(text)
        assert code == 0 and doc["verdict_accuracy"] == 1.0
        assert sum(doc["histogram"]) == 20000
        assert abs(doc["tail_ratio"] - 0.25) < 0.02
        jsonschema.validate(doc, schema("discriminate"))

    def test_cap(self):
        doc = json.loads(run(["discriminate", "--runs", "500", "--state", "1", "--max-tests", "2"])[1])
        assert doc["unresolved"] > 0
        jsonschema.validate(doc, schema("discriminate"))

    def test_bad_state(self):
        assert run(["discriminate", "--runs", "5", "--state", "9"])[0] == 2


class TestScanStudy:
    def test_scan_csv(self, files):
        target = files / "scan.csv"
        code, text = run(["scan", "--formula", str(files / "sat.cnf"), "--grid", "16", "--csv", str(target)])
        assert code == 0
        jsonschema.validate(json.loads(text), schema("scan"))
        rows = list(csv.reader(target.read_text().splitlines()))
        assert rows[0] == ["theta", "f", "fprime"]
        assert len(rows) == 17
        assert float(rows[5][0]) == pytest.approx(4 * 2 * 3.141592653589793 / 16)

    def test_scan_stdout(self, files):
        code, text = run(["scan", "--formula", str(files / "contradiction.txt"), "--grid", "4"])
        assert code == 0
        rows = list(csv.reader(text.splitlines()))[1:]
        assert all(r[1] == "0" and r[2] == "0" for r in rows)

    def test_study(self):
        code, text = run(["study", "--n", "6", "--sat-count", "1"])
        doc = json.loads(text)
        assert code == 0
        jsonschema.validate(doc, schema("study"))
        lo, hi = doc["value_bounds"]
        assert lo <= doc["max_abs_f"] <= hi


class TestVerifyBench:
    def test_verify(self):
        code, text = run(["verify"])
        doc = json.loads(text)
        jsonschema.validate(doc, schema("verify"))
        assert code == 0 and doc["failed"] == 0 and doc["passed"] == len(doc["checks"])

    def test_bench(self, capsys):
        code, text = run(["bench", "--min-n", "3", "--max-n", "7"])
        doc = json.loads(text)
        jsonschema.validate(doc, schema("bench"))
        assert code == 0 and doc["all_agree"]
        assert [r["classical_evaluations"] for r in doc["rows"]] == [8, 16, 32, 64, 128]
        assert "classical" in capsys.readouterr().err

    def test_bench_timings(self):
        doc = json.loads(run(["bench", "--min-n", "3", "--max-n", "4", "--timings"])[1])
        assert "classical_seconds" in doc["rows"][0]
        jsonschema.validate(doc, schema("bench"))


class TestUsage:
    def test_unknown_subcommand(self):
        assert run(["frobnicate"])[0] == 64

    def test_missing_argument(self):
        assert run(["discriminate", "--runs", "3"])[0] == 64

    def test_bad_seed(self):
        assert run(["table", "--model", "4", "--seed", "-1"])[0] == 64

    def test_seed_env(self, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV, "99")
        doc = json.loads(run(["study", "--n", "3", "--sat-count", "2"])[1])
        assert doc["meta"]["seed"] == 99
        monkeypatch.setenv(cli.SEED_ENV, "banana")
        assert run(["study", "--n", "3", "--sat-count", "2"])[0] == 64


def test_every_schema_is_valid_json_schema():
    for name in ("sat", "scan", "study", "discriminate", "table", "verify", "bench"):
        jsonschema.Draft202012Validator.check_schema(schema(name))
