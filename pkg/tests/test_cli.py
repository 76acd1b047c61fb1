import io
import json
import shutil
import subprocess
import sys

import pytest

from conftest import CORPUS
from mondcert.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_s1():
    assert run("verify", str(CORPUS / "s1.germ")) == (0, "CertifiedEquality codim=1 mu_I=1\n", "")


def test_verify_cross_cap():
    assert run("verify", str(CORPUS / "crosscap.germ"))[1] == "CertifiedEquality codim=0 mu_I=0\n"


def test_verify_non_weighted_homogeneous():
    code, out, _ = run("verify", str(CORPUS / "nonwh.germ"))
    assert code == 0
    assert out.startswith("CertifiedInequality codim=1 dimM=1")


def test_analyze_json():
    code, out, _ = run("analyze", "--json", str(CORPUS / "crosscap.germ"))
    assert code == 0
    rep = json.loads(out)
    assert rep["invariants"]["ae_codim"]["value"] == 0 and rep["mu_I"] == 0
    assert rep["verdict"] == "CertifiedEquality"


def test_verify_json():
    code, out, _ = run("verify", "--json", str(CORPUS / "s2.germ"))
    assert json.loads(out) == {"schema": "mondcert-verdict/1", "name": "S2", "verdict": "CertifiedEquality",
                               "codim": 2, "dim_M": 2, "mu_I": 2}


def test_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.germ"
    bad.write_text("n = 2\nsource = x, y\n")
    code, out, err = run("analyze", str(bad))
    assert code == 2 and out == "" and "missing" in err


def test_not_one_to_one_exits_2(tmp_path):
    p = tmp_path / "fold.germ"
    p.write_text("n = 2\nsource = x, y\ntarget = Y1, Y2, Y3\ncomponent = x\ncomponent = y^2\ncomponent = x*y^2\n")
    code, _, err = run("verify", str(p))
    assert code == 2 and "NotGenericallyOneToOne" in err


def test_resource_limit_exits_3():
    code, _, err = run("analyze", "--pair-cap=2", str(CORPUS / "h2.germ"))
    assert code == 3 and "ResourceLimitExceeded" in err


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        run("analyze", "--order=sideways", str(CORPUS / "s1.germ"))
    assert info.value.code == 2


def test_bad_nice_table_exits_2(tmp_path):
    t = tmp_path / "nice"
    t.write_text("2 = perhaps\n")
    assert run("verify", f"--nice-table={t}", str(CORPUS / "s1.germ"))[0] == 2


def test_nice_table_changes_verdict(tmp_path):
    t = tmp_path / "nice"
    t.write_text("2 = no\n")
    code, out, _ = run("verify", f"--nice-table={t}", str(CORPUS / "s1.germ"))
    assert code == 0 and out.startswith("NotApplicable")


def test_negative_control_exits_0():
    code, out, _ = run("verify", str(CORPUS / "negative.germ"))
    assert code == 0 and out.startswith("NotApplicable codim=inf")


def test_empty_batch(tmp_path):
    code, out, _ = run("batch", str(tmp_path))
    assert code == 0
    assert len(out.splitlines()) == 2
    code, out, _ = run("batch", "--json", str(tmp_path))
    assert json.loads(out)["rows"] == []


def test_batch_with_a_bad_file(tmp_path):
    for name in ("s1.germ", "s2.germ"):
        shutil.copy(CORPUS / name, tmp_path / name)
    (tmp_path / "broken.germ").write_text("n = 2\n")
    code, out, _ = run("batch", "--json", str(tmp_path))
    assert code == 1
    rows = json.loads(out)["rows"]
    assert [r["file"] for r in rows] == ["broken.germ", "s1.germ", "s2.germ"]
    assert rows[0]["verdict"] == "Error" and rows[0]["exit"] == 2
    assert [r["codim"] for r in rows[1:]] == [1, 2]


def test_batch_table_on_corpus():
    code, out, _ = run("batch", "--jobs=2", str(CORPUS))
    assert code == 0
    lines = {l.split()[0]: l.split() for l in out.splitlines()[2:]}
    assert lines["S1"][5] == "1" and lines["S2"][5] == "2" and lines["S3"][5] == "3"


def test_batch_json_round_trip():
    _, out1, _ = run("batch", "--json", str(CORPUS))
    _, out2, _ = run("batch", "--json", "--jobs=3", str(CORPUS))
    assert out1 == out2
    from mondcert.report import dumps
    assert dumps(json.loads(out1)) == out1


def test_module_entry_point_is_byte_deterministic():
    cmd = [sys.executable, "-m", "mondcert", "analyze", "--json", str(CORPUS / "b2.germ")]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["verdict"] == "CertifiedEquality"


def test_batch_missing_directory(tmp_path):
    assert run("batch", str(tmp_path / "nope"))[0] == 2
