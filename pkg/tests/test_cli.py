import io
import json
import subprocess
import sys

import pytest

from dmst.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_identity_prints_zero_certificate():
    code, out, _ = run("identity", "--q", "2", "--n", "2")
    assert code == 0
    assert "identity certificate: 0" in out and "KMthm certificate: 0" in out


def test_hilbert_both_agrees():
    code, out, _ = run("hilbert", "--q", "3", "--n", "1", "--twist", "1", "--method", "both", "--tmax", "5")
    assert code == 0
    assert "closed form: (s + t)/((1-t^2))" in out
    assert out.strip().endswith("agree")


def test_hilbert_json():
    code, out, _ = run("hilbert", "--q", "2", "--n", "2", "--composition", "1,1", "--method", "both", "--tmax", "6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["agree"] is True


@pytest.mark.parametrize("group", ["GL", "SL", "U", "K"])
def test_hilbert_groups(group):
    code, _, err = run("hilbert", "--q", "3", "--n", "2", "--group", group, "--method", "both", "--tmax", "10")
    assert code == 0, err


def test_steinberg_both():
    code, out, _ = run("steinberg", "--q", "2", "--n", "2", "--method", "both", "--tmax", "7", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "tDeg,sDeg,closed,oracle"


def test_verify_lemma45():
    code, out, _ = run("verify", "--check", "lemma45", "--q", "3", "--n", "2")
    assert code == 0 and out.startswith("lemma45: PASS")


def test_verify_all_json():
    code, out, _ = run("verify", "--check", "all", "--q", "3", "--n", "2", "--tmax", "6", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"basis", "dickson", "lemma45", "cor1", "vm", "crabb", "groups"}
    assert all(v["passed"] for v in doc.values())


def test_invalid_configuration_exit_two():
    assert run("hilbert", "--q", "6", "--n", "1")[0] == 2
    assert run("hilbert", "--q", "3", "--n", "2", "--composition", "3")[0] == 2
    assert run("field", "--q", "4", "--modulus", "1,0,1")[0] == 2
    assert run("bogus")[0] == 2


def test_twist_is_normalized():
    a = run("hilbert", "--q", "3", "--n", "1", "--twist", "3", "--tmax", "4")
    b = run("hilbert", "--q", "3", "--n", "1", "--twist", "1", "--tmax", "4")
    assert a == b


def test_deterministic_output():
    argv = ("invariants", "--q", "3", "--n", "2", "--composition", "1,1", "--twist", "1", "--format", "json")
    assert run(*argv) == run(*argv)
    doc = json.loads(run(*argv)[1])
    assert len(doc["generators"]) == 4


def test_field_command():
    code, out, _ = run("field", "--q", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["field"] == "2^2/1,1,1" and doc["elements"] == ["0", "1", "u", "u+1"] and doc["generator"] == "u"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dmst", "identity", "--q", "3", "--n", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "0" in proc.stdout
