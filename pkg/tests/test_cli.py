import json

import pytest

from permtri.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_q3(capsys):
    code, out = run(capsys, "verify", "--q", "3")
    assert code == 0
    report = json.loads(out.out)
    assert report["mismatches"] == []
    assert report["schema"] == 1
    assert (report["p"], report["n"], report["modulus"]) == (3, 1, [2, 1, 1])
    assert report["total_pairs"] == 81


def test_classify_pair(capsys):
    code, out = run(capsys, "classify", "--q", "5", "--a", "1", "--b", "0")
    assert code == 0
    report = json.loads(out.out)
    assert report["is_pp"] is True and report["case"] == "A.ii"


def test_usage_errors(capsys):
    assert run(capsys, "verify", "--q", "6")[0] == 2
    code, out = run(capsys, "verify", "--q", "64")
    assert code == 2 and "sampling" in out.err
    assert run(capsys, "classify", "--q", "5", "--a", "25", "--b", "0")[0] == 2
    assert run(capsys, "verify", "--q", "5", "--p", "5")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "hermite", "--q", "9")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_p_n_form(capsys):
    code, out = run(capsys, "verify", "--p", "2", "--n", "2")
    assert code == 0 and json.loads(out.out)["q"] == 4


def test_sampling_mode(capsys):
    code, out = run(capsys, "verify", "--q", "49", "--samples", "30")
    assert code == 0
    assert json.loads(out.out)["mode"] == "sample"


def test_csv_pp_pairs(capsys):
    code, out = run(capsys, "verify", "--q", "4", "--format", "csv")
    lines = out.out.splitlines()
    assert code == 0
    assert lines[0] == "a_enc,b_enc,case_tag"
    assert "0,0,B.i" in lines and "1,1,B.ii" in lines
    assert len(lines) == 1 + 6


def test_csv_key_value_projection(capsys):
    code, out = run(capsys, "classify", "--q", "5", "--a", "1", "--b", "0", "--format", "csv")
    assert code == 0
    assert "case,A.ii" in out.out.splitlines()


@pytest.mark.parametrize("command", ["identities", "hermite"])
def test_passing_commands(capsys, command):
    code, _ = run(capsys, command, "--q", "4")
    assert code == 0


def test_mismatch_exit_code(capsys):
    # the published closed form at s = 1 + (q-2)q fails for some odd-q pairs
    code, out = run(capsys, "powersums", "--q", "5")
    report = json.loads(out.out)
    assert code == 1
    assert report["closed_forms"]["eq323"]["failures"]
    assert report["closed_forms"]["eq323_corrected"]["failures"] == []
    assert run(capsys, "powersums", "--q", "4")[0] == 0


def test_cubic_command(capsys):
    code, out = run(capsys, "cubic", "--q", "8")
    report = json.loads(out.out)
    assert code == 0
    assert report["uniqueness"]["all_ok"] and report["uniqueness"]["instances"] > 0
    code, out = run(capsys, "cubic", "--q", "9")
    assert code == 0
    assert json.loads(out.out)["disc_identities"]["failures"] == {"eq319": 0, "eq320": 0}


def test_cubic_single_point(capsys):
    _, out = run(capsys, "cubic", "--q", "8")
    first = json.loads(out.out)["uniqueness"]["results"][0]
    a, b = first["a"], first["b"]
    code, out = run(capsys, "cubic", "--q", "8", "--a", str(a), "--b", str(b), "--w", str(b))
    point = json.loads(out.out)["point"]
    assert code == 0 and point["u"] == 0 and point["v"] == 1


def test_reports_are_byte_identical(tmp_path):
    one, many = tmp_path / "one.json", tmp_path / "many.json"
    assert main(["verify", "--q", "7", "--workers", "1", "--out", str(one)]) == 0
    assert main(["verify", "--q", "7", "--workers", "4", "--out", str(many)]) == 0
    assert one.read_bytes() == many.read_bytes()
    assert one.read_bytes().endswith(b"}\n")


def test_timing_flag(capsys):
    code, out = run(capsys, "verify", "--q", "3", "--timing")
    assert json.loads(out.out)["elapsed_ms"] is not None
