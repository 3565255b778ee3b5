import io
import json
import subprocess
import sys

import pytest

from flagpuzzle.cli import run
from flagpuzzle.oracle import oracle_product, triple_intersection_oracle
from flagpuzzle.quantum import lift_string
from flagpuzzle.rulesets import read_bundle_text
from flagpuzzle.strings import fmt, parse


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_count_and_oracle_agree():
    code, out = call("count", "012", "012", "210", "--flag", "1,2,3")
    assert code == 0 and out == "1\n"
    for triple in [("0122", "1022", "2210"), ("0212", "2012", "2102"), ("10212", "02121", "22010")]:
        assert call("count", *triple)[1] == call("oracle", *triple)[1]


def test_json_lines_output():
    code, out = call("--format=json-lines", "count", "012", "012", "210")
    assert code == 0
    assert json.loads(out) == {"u": "012", "v": "012", "w": "210", "count": 1}


def test_product():
    code, out = call("product", "1022", "1022")
    assert code == 0
    want = oracle_product((1, 0, 2, 2), (1, 0, 2, 2))
    got = {}
    for line in out.splitlines():
        c, w = line.split()
        got[parse(w.strip("[]"))] = int(c)
    assert got == want
    code, out = call("--format", "json-lines", "product", "0122", "1022")
    assert [json.loads(x)["w"] for x in out.splitlines()] == ["1022"]


def test_quantum_example():
    args = ("2022020202", "0202202022", "2222202000")
    code, out = call("quantum", "--grassmannian", "4,10", "--degree", "2", *args)
    assert code == 0
    lifted = out.splitlines()[0].split()
    assert lifted[0] == "lifted" and lifted[1] == "1012021212"
    assert lifted[1:] == [fmt(lift_string(parse(x), 2)) for x in args]
    assert int(out.splitlines()[-1]) == triple_intersection_oracle(*(parse(x) for x in lifted[1:]))


def test_quantum_degree_mismatch(capsys):
    code, _ = call("quantum", "--grassmannian", "2,4", "--degree", "0", "0022", "0022", "0022")
    assert code == 2
    assert capsys.readouterr().err.startswith("error degree-mismatch:")


def test_invalid_arguments(capsys):
    assert call("count", "012", "0x2", "210")[0] == 2
    assert call("count", "012", "0122", "210")[0] == 2
    assert call("count", "012", "012", "210", "--flag", "1,1,3")[0] == 2
    err = capsys.readouterr().err.splitlines()
    assert len(err) == 3 and all(line.startswith("error invalid-argument:") for line in err)


def test_propagate_trace():
    code, out = call("propagate", "2", "2041", "5410", "0", "0241")
    assert code == 0
    assert "AF FF11 FF9" in out
    code, out = call("propagate", "--trace", "1", "1027", "2031", "2", "1015")
    assert "-- DD2" in out and "-- DD7" in out
    code, out = call("--format=json-lines", "propagate", "2", "2041", "5410", "0", "0241")
    recs = [json.loads(x) for x in out.splitlines()]
    assert [r["region"] for r in recs if "region" in r] == ["AF", "FF11", "FF9"]
    assert recs[-1]["result"].startswith("(2,0241,")


def test_propagate_multi_step():
    code, out = call("propagate", "1", "420620", "251220", "2", "102425")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and lines[-1].startswith("result (1,102425,")


def test_propagate_bad_relation(capsys):
    assert call("propagate", "2", "2041", "5410", "0", "2222")[0] == 2
    assert capsys.readouterr().err.startswith("error invalid-argument:")


def test_tables_command():
    code, out = call("tables")
    assert code == 0
    assert out.splitlines()[:2] == ["pieces 8", "rules 15"]
    assert out.splitlines()[2].startswith("regions 80")


def test_tables_override_invalid(tmp_path, capsys):
    bad = read_bundle_text().replace("piece 7 4 0\n", "", 1)
    f = tmp_path / "bundle.txt"
    f.write_text(bad)
    code, _ = call("--tables", str(f), "tables")
    assert code == 3
    assert capsys.readouterr().err.startswith("error table-invalid: cardinality")


def test_verify_suites():
    code, out = call("verify", "pieri")
    assert code == 0 and "pass" in out and "FAIL" not in out
    code, out = call("verify", "propagation", "--max-len", "3")
    assert code == 0 and "pass" in out
    code, out = call("--format=json-lines", "verify", "tables")
    assert json.loads(out)["status"] == "pass"


@pytest.mark.parametrize("suite", ["puzzles", "oracle", "quantum"])
def test_verify_other_suites(suite):
    code, out = call("verify", suite)
    assert code == 0 and "FAIL" not in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "flagpuzzle", "count", "012", "012", "210"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1\n"
