import json
import shutil
import subprocess

import pytest

from vb0.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from vb0.harness import default_corpus_dir

CORPUS = default_corpus_dir()


def path(name):
    return str(CORPUS / f"{name}.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_multiplier_both_routes(capsys):
    code, out, _ = run(capsys, "multiplier", path("dihedral_08"), "--method", "both", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["exterior"] == data["cohomology"] == [2]


def test_b0_text_output(capsys):
    code, out, _ = run(capsys, "b0", path("quaternion_08"))
    assert code == EXIT_OK
    assert "B0 (exterior):   1" in out and "B0 (cohomology, bicyclic): 1" in out


def test_b0_modulus_must_be_multiple(capsys):
    code, _, err = run(capsys, "b0", path("dihedral_08"), "--method", "cohomology", "--modulus", "12")
    assert code == EXIT_USAGE and "multiple" in err


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "multiplier", path("order64_d8_x_d8"), "--method", "cohomology")
    assert code == EXIT_CAP and "cap" in err


def test_subgroup_commands(capsys):
    code, out, _ = run(capsys, "marginal", path("quaternion_08"), "--json")
    assert code == EXIT_OK and json.loads(out)["order"] == 2
    code, out, _ = run(capsys, "verbal", path("symmetric_4"), "--json")
    assert json.loads(out)["order"] == 12
    code, out, _ = run(capsys, "verbal", path("dihedral_08"), "--variety", "nilpotent-2", "--json")
    assert json.loads(out)["order"] == 1
    code, out, _ = run(capsys, "tvalues", path("quaternion_08"), "--word", "[x1,x2]", "--json")
    assert json.loads(out)["count"] == 2


def test_vp_check(capsys):
    code, out, _ = run(capsys, "vp-check", path("quaternion_08"), "--normal", "0,3", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["marginal"] and not data["vp"] and data["criterion"] == "holds"


def test_vp_check_rejects_non_subgroup(capsys):
    code, _, err = run(capsys, "vp-check", path("symmetric_3"), "--normal", "1,2")
    assert code == EXIT_USAGE


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["b0"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "prop9.9"])
    assert exc.value.code == EXIT_USAGE
    code, _, _ = run(capsys, "b0", "/no/such/file.txt")
    assert code == EXIT_USAGE


def test_bad_word_is_usage_error(capsys):
    code, _, err = run(capsys, "tvalues", path("symmetric_3"), "--word", "[x1,x1]")
    assert code == EXIT_USAGE


def test_verify_writes_json(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, text, _ = run(capsys, "verify", "prop4.5", "--max-order", "8", "-o", str(out))
    assert code == EXIT_OK and "prop4.5: attempted" in text
    assert json.loads(out.read_text())["propositions"]["prop4.5"]["failed"] == 0


def test_report_command(capsys, tmp_path):
    src = tmp_path / "corpus"
    src.mkdir()
    for name in ("dihedral_08", "quaternion_08", "symmetric_3"):
        shutil.copy(path(name), src)
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "report", "--corpus", str(src), "-o", str(out), "--checks", "prop3.4")
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert set(data["groups"]) == {"D8", "Q8", "S3"} and data["ok"]


def test_report_with_failing_engine(capsys, tmp_path, monkeypatch):
    import vb0.multiplier as mult
    from vb0.abelian import AbelianStructure

    real = mult.bogomolov_tilde

    def mutant(G):
        r = real(G)
        r.B0_tilde = AbelianStructure((3,)) if G.order == 6 else r.B0_tilde
        return r

    monkeypatch.setattr(mult, "bogomolov_tilde", mutant)
    src = tmp_path / "corpus"
    src.mkdir()
    shutil.copy(path("symmetric_3"), src)
    code, _, _ = run(capsys, "report", "--corpus", str(src), "-o", str(tmp_path / "r.json"))
    assert code == EXIT_FAIL


def test_installed_script():
    exe = shutil.which("vb0")
    if exe is None:
        pytest.skip("vb0 console script not installed")
    res = subprocess.run([exe, "multiplier", path("klein_4")], capture_output=True, text=True)
    assert res.returncode == 0 and "C2" in res.stdout
