import warnings

import pytest

from conftest import symmetric
from vb0.groups import all_normal_subgroups, center, derived_subgroup, whole
from vb0.identities import (bracket_word, companion, gamma_pair, verify_chain23, verify_hulse_lennox,
                            verify_prop21, whitelist_reason)
from vb0.report import FAIL, PASS, SKIP
from vb0.words import abelian, compose, left_normed, parse_word


SMALL = ["S3", "D8", "Q8", "A4", "D12", "C2 x C4", "Dic12", "S4"]


def test_whitelist_lower_central_pairs():
    for c in (1, 2, 3):
        V, W = gamma_pair(c)
        assert whitelist_reason(V, W) is not None
    with pytest.raises(ValueError):
        gamma_pair(0)


def test_whitelist_bracket_with_fresh_variable():
    w = parse_word("[[x1,x2],[x3,x4]]")
    V = (parse_word("[[[x1,x2],[x3,x4]],x5]"),)
    assert whitelist_reason(V, (w,)) is not None
    assert companion(V) == (w,)


def test_composites_are_not_whitelisted():
    u, w = parse_word("[x1,x2]"), parse_word("[x1,x2,x3]")
    V = (compose(u, w),)
    assert whitelist_reason(V, (u,)) is None
    assert whitelist_reason(V, (w,)) is None


def test_companion_rejects_other_shapes():
    with pytest.raises(ValueError):
        companion((parse_word("[[x1,x2],[x3,x4]]"),))


@pytest.mark.parametrize("label", SMALL)
@pytest.mark.parametrize("c", [1, 2])
def test_prop21_gamma_pairs(corpus, label, c):
    G = corpus.get(label).group
    V, W = gamma_pair(c)
    for N in all_normal_subgroups(G):
        rep = verify_prop21(G, N, V, W)
        assert rep.failed == 0 and rep.passed == 3, rep.failures


@pytest.mark.parametrize("label", SMALL)
def test_chain23_default_companion(corpus, label):
    G = corpus.get(label).group
    for N in all_normal_subgroups(G):
        rep = verify_chain23(G, N, (left_normed(3),))
        assert rep.failed == 0 and rep.passed == 3, rep.failures


def test_abelian_law_recovers_commutator_identities(D8):
    # with V = [x1,x2] and W = x1: [N V* G] = [N, G]
    N = center(D8)
    rep = verify_prop21(D8, N, abelian(), gamma_pair(1)[1])
    assert rep.ok
    rep = verify_prop21(D8, whole(D8), abelian(), gamma_pair(1)[1])
    assert rep.ok


def test_off_whitelist_pair_is_skipped_with_warning():
    G = symmetric(3)
    u, w = parse_word("[x1,x2]"), parse_word("[x1,x2,x3]")
    V = (compose(u, w),)
    with pytest.warns(UserWarning, match="not on the whitelist"):
        rep = verify_prop21(G, whole(G), V, (u,))
    assert rep.skipped == 3 and rep.passed == 0 and rep.failed == 0
    # the hypothesis genuinely fails here, and so does the third check
    assert any("observed fail" in r.detail for r in rep.results)
    assert rep.notes


def test_failure_carries_witness(monkeypatch):
    import vb0.identities as ident

    G = symmetric(3)
    # pretend the Hall bracket is trivial so the second inclusion fails
    from vb0.groups import trivial_subgroup
    monkeypatch.setattr(ident, "hall_bracket", lambda N, V, G: trivial_subgroup(G))
    V, W = gamma_pair(1)
    rep = verify_prop21(G, whole(G), V, W)
    bad = [r for r in rep.results if r.status == FAIL]
    assert bad and all(r.witness is not None for r in bad)
    assert all(r.witness in derived_subgroup(G).elements for r in bad)


@pytest.mark.parametrize("label", ["S3", "D8", "Q8", "A4"])
def test_hulse_lennox_identity(corpus, label):
    G = corpus.get(label).group
    u, w = left_normed(2), left_normed(1)
    for K in all_normal_subgroups(G):
        rep = verify_hulse_lennox(G, K, u, w)
        assert rep.results[0].status == PASS, rep.failures


def test_bracket_word_shifts_variables():
    v = bracket_word(parse_word("[x1,x2]"), parse_word("[x1,x2]"))
    assert v == parse_word("[[x1,x2],[x3,x4]]")
    assert bracket_word(left_normed(2), left_normed(1)) == left_normed(3)


def test_report_counts_never_mix_skips_and_passes(D8):
    V = (compose(left_normed(2), left_normed(3)),)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = verify_chain23(D8, whole(D8), V, (left_normed(2),))
    assert rep.passed == 0 and all(r.status == SKIP for r in rep.results)
