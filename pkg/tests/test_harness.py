import json

import pytest

from conftest import cyclic, dihedral
from vb0.groups import all_normal_subgroups, center, format_group_text, whole
from vb0.harness import (PROPOSITIONS, build_report, load_corpus, report, run_campaign,
                         verify_functoriality, verify_invariance, verify_lemma35, verify_prop33_tail,
                         verify_prop34_order, verify_prop48)
from vb0.abelian import AbelianStructure
from vb0.report import SCHEMA_VERSION, VerificationReport


# --- corpus loading ------------------------------------------------------------------

def test_bundled_corpus(corpus):
    assert len(corpus) >= 60 and not corpus.notes
    orders = {e.label: e.group.order for e in corpus}
    assert orders["Q16"] == 16 and orders["SD16"] == 16 and orders["G64 (B0 = C2)"] == 64
    assert all(e.group.order <= 16 for e in corpus.upto(16))


def test_empty_directory(tmp_path):
    c = load_corpus(tmp_path)
    assert len(c) == 0 and c.notes == []


def test_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nowhere")


def test_single_file(tmp_path):
    (tmp_path / "d8.txt").write_text(format_group_text(dihedral(8)))
    c = load_corpus(tmp_path)
    assert [e.label for e in c] == ["D8"]


def test_bad_files_are_skipped_with_notes(tmp_path):
    (tmp_path / "a_good.txt").write_text("# label: C2\nmtable 2\n0 1\n1 0\n")
    (tmp_path / "b_loop.txt").write_text(
        "mtable 5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n")
    (tmp_path / "c_dup.txt").write_text("# label: C2\nperm 2\n(1 2)\n")
    (tmp_path / "d_junk.txt").write_text("hello\n")
    c = load_corpus(tmp_path)
    assert [e.label for e in c] == ["C2"]
    assert len(c.notes) == 3
    assert any("NonAssociative" in n for n in c.notes)
    assert any("duplicate" in n for n in c.notes)


# --- single-instance verifiers ---------------------------------------------------------

def test_tail_and_order_checks_on_d8(D8):
    for N in all_normal_subgroups(D8):
        assert verify_prop33_tail(D8, N).ok
        assert verify_prop34_order(D8, N).ok
        assert verify_lemma35(D8, N).ok


def test_product_formula():
    rep = verify_prop48(dihedral(8), cyclic(2))
    assert rep.ok and rep.passed == 1


def test_invariance(Q8):
    rep = verify_invariance(Q8, seed=3)
    assert rep.ok and rep.passed == 4


def test_functoriality_needs_nested_subgroups(D8):
    Z = center(D8)
    assert verify_functoriality(D8, Z, whole(D8)).ok
    small = [N for N in all_normal_subgroups(D8) if N.order == 4]
    with pytest.raises(ValueError):
        verify_functoriality(D8, small[0], Z)


# --- campaigns --------------------------------------------------------------------------

@pytest.mark.parametrize("name", PROPOSITIONS)
def test_every_campaign_passes_on_small_groups(corpus, name):
    rep = run_campaign(name, corpus, max_order=8)
    assert rep.failed == 0, rep.failures[:3]
    assert rep.attempted > 0


def test_unknown_campaign(corpus):
    with pytest.raises(KeyError):
        run_campaign("prop9.9", corpus)


def test_report_to_dict_counts():
    r = VerificationReport("x")
    r.record("a", True)
    r.record("b", False, "bad", 7)
    r.skip("c", "hypothesis failed")
    d = r.to_dict(include_timings=False)
    assert (d["attempted"], d["passed"], d["failed"], d["skipped"]) == (3, 1, 1, 1)
    assert d["failures"][0]["witness"] == 7 and d["skips"][0]["instance"] == "c"
    assert not r.ok


# --- JSON report --------------------------------------------------------------------

def test_report_file_and_exit_code(corpus, tmp_path):
    out = tmp_path / "r.json"
    assert report(corpus, ["prop3.4", "dual-route"], out, max_order=8) == 0
    data = json.loads(out.read_text())
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["ok"] and data["disagreements"] == []
    assert data["groups"]["D8"]["multiplier"] == [2]
    assert data["propositions"]["prop3.4"]["failed"] == 0


def test_report_is_deterministic_without_timings(corpus):
    a = build_report(corpus, ["prop2.1"], max_order=6, include_timings=False)
    b = build_report(corpus, ["prop2.1"], max_order=6, include_timings=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_mutant_engine_is_caught(corpus, tmp_path, monkeypatch):
    import vb0.multiplier as mult

    real = mult.bogomolov_tilde

    def mutant(G):
        r = real(G)
        if G.order == 8 and not (G.table == G.table.T).all():
            r.B0_tilde = AbelianStructure((2,))
        return r

    monkeypatch.setattr(mult, "bogomolov_tilde", mutant)
    out = tmp_path / "r.json"
    assert report(corpus, ["dual-route"], out, max_order=8) == 1
    data = json.loads(out.read_text())
    assert not data["ok"]
    assert set(data["disagreements"]) == {"D8", "Q8"}
    assert data["propositions"]["dual-route"]["failed"] == 2
