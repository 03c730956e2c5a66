import json
import subprocess
import sys

import pytest

from paracontact.cli import main

BROKEN = """[frame]
labels xi a b
[metric]
g xi xi = 1
g a b = 1
[phi]
phi a = a
phi b = -b
[eta]
eta xi = 1
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    for name in ["ex-mu2-hm-n", "ex-mu0-h1", "ex-mu0-h2+", "ex-mu2-nonconstant", "ex-mu0-nonconstant"]:
        assert name in out
    code, out, _ = run(capsys, "list", "--format", "structured")
    assert {b["name"] for b in json.loads(out)["builtins"]} >= {"ex-mu2-hm-n"}


def test_classify_mu2_hm(capsys):
    code, out, _ = run(capsys, "classify", "--builtin", "ex-mu2-hm-n", "--param", "n=2", "--param", "m=2")
    assert code == 0
    assert "(kappa,mu)=(-1,2)" in out


def test_canonical_sign(capsys):
    code, out, _ = run(capsys, "canonical", "--builtin", "ex-mu2-nonconstant", "--point", "1,0,0")
    assert code == 0 and "eps1=+1" in out
    code, out, _ = run(capsys, "canonical", "--builtin", "ex-mu2-nonconstant", "--point", "-2,3,0",
                       "--format", "structured")
    assert code == 0 and json.loads(out)["bases"][0]["signs"] == [-1]


def test_verify_broken_file(capsys, tmp_path):
    f = tmp_path / "broken.pc"
    f.write_text(BROKEN)
    code, out, _ = run(capsys, "verify", "--file", str(f))
    assert code == 1
    assert "FAIL d eta = Phi" in out


def test_rejected_document_exits_1(capsys, tmp_path):
    f = tmp_path / "jacobi.pc"
    f.write_text(BROKEN.replace("labels xi a b", "labels xi a b c d\nbracket a b = a\nbracket a c = b")
                 .replace("g a b = 1", "g a b = 1\ng c d = 1").replace("phi b = -b", "phi b = -b\nphi c = c\nphi d = -d"))
    code, out, _ = run(capsys, "verify", "--file", str(f))
    assert code == 1 and "Jacobi" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify"],
        ["verify", "--builtin", "nope"],
        ["classify", "--builtin", "ex-mu0-h2+", "--param", "n=3", "--param", "m=1"],
        ["canonical", "--builtin", "ex-mu2-nonconstant", "--point", "1,2"],
        ["deform", "--builtin", "ex-mu0-h1", "--param", "n=1"],
        ["deform", "--builtin", "ex-mu0-h1", "--param", "n=1", "--c", "0"],
        ["frobnicate"],
        ["verify", "--builtin", "ex-mu0-h1", "--file", "x.pc"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_parse_error_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.pc"
    f.write_text("[frame]\n")
    code, _, err = run(capsys, "verify", "--file", str(f))
    assert code == 2 and "line 1" in err


def test_deform_check(capsys):
    code, out, _ = run(capsys, "deform", "--builtin", "ex-mu0-h1", "--param", "n=1", "--c", "-1", "--check")
    assert code == 0 and "predicted = (-1, 4)" in out
    code, _, _ = run(capsys, "deform", "--builtin", "ex-mu0-h1", "--param", "n=2", "--c", "2", "--check")
    assert code == 1


def test_deform_output_reloads(capsys, tmp_path):
    code, out, _ = run(capsys, "deform", "--builtin", "ex-mu2-nonconstant", "--c", "3", "--format", "structured")
    assert code == 0
    f = tmp_path / "d.pc"
    f.write_text(json.loads(out)["document"])
    code, out, _ = run(capsys, "classify", "--file", str(f))
    assert code == 0 and "(kappa,mu)=(-1,2)" in out


def test_report_structured_is_stable(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "report", "--builtin", "ex-mu0-nonconstant", "--format", "structured")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["nullity"]["mu"] == "0"


def test_report_all(capsys):
    code, out, _ = run(capsys, "report", "--all", "--format", "structured")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "paracontact", "classify", "--builtin", "ex-mu0-h1", "--param", "n=1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "(kappa,mu)=(-1,0)" in p.stdout
