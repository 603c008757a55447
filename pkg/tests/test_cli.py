"""Command dispatcher: exit codes, report formats, emitted spec files."""

import json
import random
import string

import pytest

from linjacobi.cli import main, run_command

AFF1 = """\
algebroid
  rank 2
  c[1,2] = (1)*e_2
end

cocycle
  phi[1] = 2
  phi[2] = 0
end
"""

REMARK = """\
patch
  x fiber
  y fiber
end

jacobi
  lambda = (1*x*y)*d/dx^d/dy
  efield = (1*x)*d/dx
end
"""


@pytest.fixture
def aff1_spec(tmp_path):
    p = tmp_path / "aff1.spec"
    p.write_text(AFF1)
    return str(p)


@pytest.fixture
def remark_spec(tmp_path):
    p = tmp_path / "remark.spec"
    p.write_text(REMARK)
    return str(p)


def test_verify_algebroid_passes(aff1_spec):
    code, out = run_command(["verify-algebroid", aff1_spec])
    assert code == 0
    assert "summary: 3 pass, 0 fail" in out


def test_verify_cocycle(aff1_spec):
    code, out = run_command(["verify-cocycle", aff1_spec])
    assert code == 0
    assert "cocycle_condition" in out


def test_broken_input_exits_one(tmp_path):
    p = tmp_path / "bad.spec"
    p.write_text("algebroid\n  rank 3\n  c[1,2] = (1)*e_1\n"
                 "  c[2,3] = (1)*e_2\nend\n")
    code, out = run_command(["verify-algebroid", str(p)])
    assert code == 1
    assert "jacobi_identity" in out and "fail" in out


def test_forward_emits_jacobi_spec(aff1_spec):
    code, out = run_command(["forward", aff1_spec])
    assert code == 0
    assert "lambda = (-1*mu2)*d/dmu1^d/dmu2" in out
    assert "efield = (-2)*d/dmu1" in out


def test_invert_on_counterexample(remark_spec):
    code, out = run_command(["invert", remark_spec])
    assert code == 1
    assert "C2" in out
    assert "-1*x" in out


def test_invert_json_schema(remark_spec):
    code, out = run_command(["invert", remark_spec, "--json"])
    assert code == 1
    doc = json.loads(out)
    assert set(doc) == {"checks", "summary"}
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["C2"]["verdict"] == "fail"
    assert by_name["C2"]["residual"] == "-1*x"
    assert doc["summary"]["fail"] == 1
    # identical invocations must emit identical bytes
    assert run_command(["invert", remark_spec, "--json"])[1] == out


def test_roundtrip(aff1_spec):
    code, out = run_command(["roundtrip", aff1_spec])
    assert code == 0
    assert "inverse_after_forward" in out


def test_invert_of_forward_output(tmp_path, aff1_spec):
    _, out = run_command(["forward", aff1_spec])
    jspec = tmp_path / "forward.spec"
    jspec.write_text(out.split("\n\n", 1)[1] + "\n")
    code, out2 = run_command(["invert", str(jspec)])
    assert code == 0
    assert "c[1,2] = (1)*e_2" in out2
    assert "phi[1] = 2" in out2


def test_bracket_prints_value(remark_spec):
    code, out = run_command(["bracket", remark_spec, "--f", "x", "--g", "y"])
    assert code == 0
    assert out.strip() == "0"
    code, out = run_command(["bracket", remark_spec, "--f", "x*y", "--g", "x"])
    assert code == 0


def test_parse_error_exits_two(tmp_path):
    p = tmp_path / "junk.spec"
    p.write_text("patch\n  x wobble\nend\n")
    code, out = run_command(["verify-jacobi", str(p)])
    assert code == 2
    assert "2:5" in out


def test_missing_file_exits_two():
    code, out = run_command(["verify-jacobi", "/nonexistent/never.spec"])
    assert code == 2


def test_caps_enforced(tmp_path):
    p = tmp_path / "big.spec"
    coords = "\n".join(f"  x{i} base" for i in range(1, 6))
    p.write_text(f"patch\n{coords}\nend\n\njacobi\n  lambda = 0\nend\n")
    code, out = run_command(["verify-jacobi", str(p)])
    assert code == 2 and "cap" in out
    code, _ = run_command(["verify-jacobi", str(p), "--no-caps"])
    assert code == 0


def test_degree_cap(tmp_path):
    p = tmp_path / "deep.spec"
    p.write_text("patch\n  x fiber\n  y fiber\nend\n\n"
                 "jacobi\n  lambda = (x^7)*d/dx^d/dy\nend\n")
    code, out = run_command(["verify-jacobi", str(p)])
    assert code == 2 and "degree" in out


def test_out_flag_writes_report(tmp_path, aff1_spec):
    target = tmp_path / "report.json"
    code, out = run_command(["verify-algebroid", aff1_spec, "--json",
                             "--out", str(target)])
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["summary"] == {"pass": 3, "fail": 0}


def test_gallery_command(capsys):
    assert main(["gallery", "so3"]) == 0
    assert "summary" in capsys.readouterr().out
    assert main(["gallery", "remark_counterexample"]) == 1
    assert main(["gallery", "not_a_case"]) == 2


def test_gallery_spec_round_trip(tmp_path):
    code, text = run_command(["gallery", "heisenberg3", "--spec"])
    assert code == 0
    p = tmp_path / "h3.spec"
    p.write_text(text if text.endswith("\n") else text + "\n")
    assert run_command(["roundtrip", str(p)])[0] == 0


def test_quick_fuzz(tmp_path):
    """Random garbage must never escape the exit-code contract."""
    rng = random.Random(99)
    charset = string.ascii_lowercase + string.digits + " \n\t[],=*^()-+/#_"
    p = tmp_path / "fuzz.spec"
    for _ in range(500):
        text = "".join(rng.choice(charset)
                       for _ in range(rng.randint(0, 120)))
        p.write_text(text)
        code, _ = run_command(["verify-jacobi", str(p)])
        assert code in (0, 1, 2)
