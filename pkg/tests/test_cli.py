import json
import subprocess
import sys

import pytest

from codewidth.cli import run
from codewidth.codes import format_code, ghw_bruteforce, reed_muller, reed_solomon


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_widths_rm13(capsys):
    code, out, _ = cli(capsys, "widths", "rm", "--r", "1", "--m", "3", "--threads", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["code"] == {"q": 2, "n": 8, "k": 4}
    assert doc["result"]["treewidth"] == 3 and doc["result"]["trelliswidth"] == 3
    assert doc["witnesses"]["order"] == list(range(8))
    assert doc["witnesses"]["tree"].startswith("(")
    assert set(doc) == {"code", "command", "params", "result", "witnesses"}


def test_byte_stable(capsys):
    argv = ("widths", "rs", "--n", "5", "--k", "2", "--p", "7", "--threads", "2")
    _, a, _ = cli(capsys, *argv)
    _, b, _ = cli(capsys, *argv[:-1], "1")
    assert a == b
    for fmt in ("json", "csv"):
        _, a, _ = cli(capsys, "verify", "appendix-b", "--max-m", "6", "--format", fmt)
        _, b, _ = cli(capsys, "verify", "appendix-b", "--max-m", "6", "--format", fmt)
        assert a == b and "millis" not in a


def test_ghw_csv(capsys):
    code, out, _ = cli(capsys, "ghw", "rm", "--r", "1", "--m", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["u,d_u", "1,4", "2,6", "3,7", "4,8"]


def test_ghw_closed_matches_bruteforce(capsys):
    _, a, _ = cli(capsys, "ghw", "rm", "--r", "2", "--m", "4", "--format", "csv")
    _, b, _ = cli(capsys, "ghw", "rm", "--r", "2", "--m", "4", "--format", "csv", "--method", "closed")
    assert a == b
    code, _, err = cli(capsys, "ghw", "file", "x.code", "--method", "closed")
    assert code == 2


def test_trellis_profile_text(capsys):
    code, out, _ = cli(capsys, "trellis-profile", "rm", "--r", "1", "--m", "3", "--format", "text")
    assert code == 0
    top, bottom = out.splitlines()
    assert top.split()[1:] == ["0", "1", "2", "3", "2", "3", "2", "1", "0"]
    assert bottom.split()[1:] == ["1", "2", "3", "3", "3", "3", "2", "1"]
    # each branch value sits strictly between its two states
    assert top.index("0") < bottom.index("1") < top.index("1")


def test_trellis_profile_order(capsys):
    code, out, _ = cli(capsys, "trellis-profile", "rm", "--r", "1", "--m", "2", "--order", "3,2,1,0")
    assert code == 0 and json.loads(out)["params"]["order"] == [3, 2, 1, 0]
    code, _, err = cli(capsys, "trellis-profile", "rm", "--r", "1", "--m", "2", "--order", "0,1")
    assert code == 2 and "order" in err


def test_u_profile(capsys):
    _, out, _ = cli(capsys, "u-profile", "rs", "--n", "4", "--k", "2", "--p", "5")
    assert json.loads(out)["result"]["U"] == [0, 0, 0, 1, 2]


def test_file_source(tmp_path, capsys):
    path = tmp_path / "rs.code"
    path.write_text(format_code(reed_solomon(5, 3, 7)))
    code, out, _ = cli(capsys, "trelliswidth", "file", str(path), "--exhaustive")
    assert code == 0 and json.loads(out)["result"]["trelliswidth"] == 3


def test_missing_file(capsys):
    code, _, err = cli(capsys, "widths", "file", "missing.code")
    assert code == 2 and "not found" in err


def test_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.code"
    path.write_text("2 3 1\n1 2 1\n")
    code, _, err = cli(capsys, "ghw", "file", str(path))
    assert code == 2 and "line 2, column 3" in err


def test_usage_errors(capsys):
    assert cli(capsys)[0] == 2
    assert cli(capsys, "widths")[0] == 2
    assert cli(capsys, "widths", "rm", "--r", "1")[0] == 2
    assert cli(capsys, "treewidth", "rm", "--r", "1", "--m", "2")[0] == 2
    assert cli(capsys, "widths", "rm", "--r", "3", "--m", "2")[0] == 2
    assert cli(capsys, "widths", "rs", "--n", "4", "--k", "2", "--p", "6")[0] == 2
    assert cli(capsys, "widths", "rm", "--r", "1", "--m", "2", "--threads", "0")[0] == 2
    assert cli(capsys, "--help")[0] == 0


def test_size_gate(capsys):
    code, _, err = cli(capsys, "treewidth", "rm", "--r", "1", "--m", "4", "--exhaustive")
    assert code == 2 and "8" in err and "--force" in err


def test_separators(capsys):
    code, out, _ = cli(capsys, "separators", "--tree", "((0,1),2,(3,4))", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "kind,node,n1,n2,n3"
    _, a, _ = cli(capsys, "separators", "--random", "40", "--seed", "5")
    _, b, _ = cli(capsys, "separators", "--random", "40", "--seed", "5")
    assert a == b
    assert cli(capsys, "separators", "--tree", "(0,(1")[0] == 2
    code, out, _ = cli(capsys, "separators", "--tree", "(0,1,2)")
    assert code == 0 and json.loads(out)["result"]["vstar"] is None


def test_verify_reports(capsys):
    code, out, _ = cli(capsys, "verify", "appendix-b", "--max-m", "12")
    assert code == 0
    reports = json.loads(out)
    assert [r["params"]["m"] for r in reports] == list(range(2, 13))
    assert all(r["pass"] for r in reports)
    code, out, _ = cli(capsys, "verify", "srm", "--timing")
    assert code == 0 and all("millis" in r for r in json.loads(out))


def test_verify_failure_exit(capsys):
    code, out, err = cli(capsys, "verify", "prop1", "rm", "--r", "2", "--m", "2")
    assert code == 1
    assert json.loads(out)[0]["counterexample"]["tree"]
    assert "counterexample" in err or "failed" in err


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = cli(capsys, "u-profile", "rm", "--r", "1", "--m", "3", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["U"][-1] == 4
    code, _, err = cli(capsys, "u-profile", "rm", "--r", "1", "--m", "3", "-o", str(tmp_path / "no" / "x"))
    assert code == 2 and "no" in err


def test_cli_matches_library(capsys):
    _, out, _ = cli(capsys, "ghw", "rs", "--n", "6", "--k", "4", "--p", "7")
    assert json.loads(out)["result"]["d"] == list(ghw_bruteforce(reed_solomon(6, 4, 7)).d)


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "codewidth", "ghw", "rm", "--r", "1", "--m", "3", "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("u,d_u")
    proc = subprocess.run([sys.executable, "-m", "codewidth", "widths", "file", "missing.code"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
