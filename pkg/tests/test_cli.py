import json
import subprocess
import sys
from pathlib import Path

import credarg
from credarg.cli import decimal6, fmt, main

CORPUS = Path(credarg.__file__).parent / "corpus"


def corpus(name):
    return str(CORPUS / name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="case.arg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_eval_urn(capsys):
    code, out, _ = run_cli(capsys, "eval", corpus("urn.arg"))
    assert code == 0
    assert "27/31 (0.870968)" in out


def test_accept_picnic(capsys):
    code, out, _ = run_cli(capsys, "accept", corpus("picnic.arg"))
    assert code == 0
    assert "ACCEPTED at 0.95 with [0.95, 1]" in out
    code, out, _ = run_cli(capsys, "accept", corpus("picnic.arg"), "--threshold", "0.96")
    assert code == 1
    assert "REJECTED at 0.96" in out


def test_audit_frisbee(capsys):
    code, out, _ = run_cli(capsys, "audit", corpus("frisbee.arg"), "--json")
    assert code == 1
    data = json.loads(out)["result"]
    assert data["conjunction"]["lower"]["exact"] == "9/10"
    assert data["conjunction"]["upper"]["exact"] == "1"
    assert data["passed"] is False


def test_decide_outing(capsys):
    code, out, _ = run_cli(capsys, "decide", corpus("outing.arg"))
    assert code == 0
    assert "EU(hold) = [4, 6]" in out and "gamma_maximin: hold" in out
    code, out, _ = run_cli(capsys, "decide", corpus("outing.arg"), "--rule", "interval_dominance")
    assert "interval_dominance: hold" in out


def test_eliminate_barometer(capsys):
    code, out, _ = run_cli(capsys, "eliminate", corpus("barometer.arg"), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["result"]["new_interval"]["lower"]["exact"] == "43/50"
    assert data["result"]["deviation_bound"]["exact"] == "1/20"
    assert len(data["result"]["expansion"]) == 2
    assert any("consistency" in d for d in data["diagnostics"])


def test_maxent(capsys):
    code, out, _ = run_cli(capsys, "maxent", corpus("rain.arg"), "--json")
    assert code == 0
    data = json.loads(out)["result"]
    assert abs(float(data["query"]["probability"]) - 0.65) < 1e-9


def test_oracle_flag(capsys):
    code, out, _ = run_cli(capsys, "eval", corpus("urn.arg"), "--resolution", "50")
    assert code == 0 and "grid oracle at resolution 50" in out


def test_inconsistent(tmp_path, capsys):
    path = write(tmp_path, "atoms a\nconstraint P(a) = 0.3\nconstraint P(a) >= 0.5\nquery a\n")
    code, out, _ = run_cli(capsys, "eval", path)
    assert code == 2
    assert "inconsistent" in out


def test_impossible_evidence(tmp_path, capsys):
    path = write(tmp_path, "atoms a\nconstraint P(a) = 1\nobserve !a\nquery a\n")
    code, out, _ = run_cli(capsys, "eval", path)
    assert code == 3
    assert "impossible evidence" in out


def test_parse_error_names_position(tmp_path, capsys):
    path = write(tmp_path, "atoms a\nquery a &\n")
    code, out, _ = run_cli(capsys, "eval", path)
    assert code == 4
    assert f"{path}:2:" in out


def test_missing_file(capsys):
    code, _, _ = run_cli(capsys, "eval", "/nonexistent/file.arg")
    assert code == 4


def test_usage_error(capsys):
    assert main(["frobnicate", corpus("urn.arg")]) == 4
    assert main(["eval"]) == 4
    assert main(["eval", corpus("urn.arg"), "--resolution", "0"]) == 4
    assert main(["--help"]) == 0


def test_atom_cap_flag(tmp_path, capsys):
    names = " ".join(f"x{i}" for i in range(17))
    path = write(tmp_path, f"atoms {names}\nquery x0\n")
    assert run_cli(capsys, "eval", path)[0] == 4
    assert run_cli(capsys, "eval", path, "--max-atoms", "17")[0] == 0


def test_several_files_keep_order(capsys):
    code, out, _ = run_cli(capsys, "eval", corpus("urn.arg"), corpus("rain.arg"), "--json")
    data = json.loads(out)
    assert [d["file"] for d in data] == [corpus("urn.arg"), corpus("rain.arg")]
    assert code == 0


def test_worst_exit_code_wins(tmp_path, capsys):
    bad = write(tmp_path, "atoms a\nquery\n")
    code, _, _ = run_cli(capsys, "eval", corpus("urn.arg"), bad)
    assert code == 4


def test_json_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "credarg", "eliminate", corpus("barometer.arg"), "--json"]
    first = subprocess.run(argv, capture_output=True, check=False).stdout
    second = subprocess.run(argv, capture_output=True, check=False).stdout
    assert first and first == second


def test_number_formatting():
    from fractions import Fraction as F

    assert fmt(F(27, 31)) == "27/31 (0.870968)"
    assert fmt(F(19, 20)) == "0.95"
    assert decimal6(F(1, 8)) == "0.125000"
    assert decimal6(F(5, 10**7)) == "0.000000"
    assert decimal6(F(15, 10**7)) == "0.000002"
