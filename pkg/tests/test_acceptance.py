"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.  The order-64 part of criterion 12 is
opt-in through ``VB0_STRETCH=1``.
"""

import math
import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE_KEY, cyclic, stretch_enabled  # noqa: E402
from vb0.abelian import AbelianStructure  # noqa: E402
from vb0.cohomology import (b0_cohomological, cocycle_space, exhaustive_h2_oracle,  # noqa: E402
                            multiplier_from_cohomology)
from vb0.groups import (center, direct_product, from_mul_table, is_abelian,  # noqa: E402
                        subgroup_generated)
from vb0.harness import (_pairs_for_prop48, load_corpus, run_campaign, verify_invariance,  # noqa: E402
                         verify_prop48)
from vb0.multiplier import bogomolov_tilde, schur_multiplier, wedge_group  # noqa: E402
from vb0.presentation import Presentation, todd_coxeter  # noqa: E402
from vb0.report import VerificationReport  # noqa: E402
from vb0.vp import Extension, is_vp_extension, vp_criterion_check  # noqa: E402
from vb0.words import abelian, parse_free_word  # noqa: E402


def _line(number, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} :: {detail}"


def _campaign_line(rep: VerificationReport) -> str:
    return f"attempted {rep.attempted}, passed {rep.passed}, failed {rep.failed}, skipped {rep.skipped}"


# ---------------------------------------------------------------------------
# criteria; each returns (ok, detail)


def criterion_1(corpus):
    bad, n = [], 0
    for e in corpus.upto(32):
        a = bogomolov_tilde(e.group).B0_tilde
        b = b0_cohomological(e.group).B0_structure
        n += 1
        if a != b:
            bad.append((e.label, a.to_list(), b.to_list()))
    return not bad, f"{n} groups, disagreements {bad}"


def criterion_2(corpus):
    bad, n = [], 0
    for e in corpus.upto(24):
        n += 1
        if schur_multiplier(e.group) != multiplier_from_cohomology(e.group):
            bad.append(e.label)
    for a, b in [(2, 2), (2, 4), (4, 4), (2, 6), (3, 3), (3, 6), (4, 6), (2, 8)]:
        G = direct_product(cyclic(a), cyclic(b))
        expect = AbelianStructure((math.gcd(a, b),))
        n += 1
        if not (schur_multiplier(G) == multiplier_from_cohomology(G) == expect):
            bad.append(f"C{a} x C{b}")
    return not bad, f"{n} groups, mismatches {bad}"


def criterion_3(corpus):
    groups = [from_mul_table([[0]])] + [cyclic(n) for n in (2, 3, 4)] + [corpus.get("C2 x C2").group]
    bad, n = [], 0
    for G in groups:
        for N in (2, 3, 4):
            n += 1
            brute = exhaustive_h2_oracle(G, N)
            lin = cocycle_space(G, N).h2_order()
            if brute != lin:
                bad.append((G.label or "1", N, brute, lin))
    return not bad, f"{n} (group, N) cases, mismatches {bad}"


def criterion_4(corpus):
    bad, n = [], 0
    for e in corpus.upto(32):
        if not is_abelian(e.group):
            continue
        n += 1
        if not (bogomolov_tilde(e.group).B0_tilde.is_trivial
                and b0_cohomological(e.group).B0_structure.is_trivial):
            bad.append(e.label)
    return not bad and n > 0, f"{n} abelian groups, nontrivial {bad}"


def criterion_5(corpus):
    pairs = _pairs_for_prop48([e.group for e in corpus.upto(32)], 64)
    rep = VerificationReport("prop4.8")
    for G1, G2 in pairs:
        rep.extend(verify_prop48(G1, G2))
    return rep.ok and rep.passed >= 20, _campaign_line(rep)


def criterion_6(corpus):
    rep = run_campaign("prop3.4", corpus, 16)
    return rep.ok and rep.passed > 0, _campaign_line(rep)


def criterion_7(corpus):
    rep = run_campaign("lemma3.5", corpus, 32)
    return rep.ok and rep.passed > 0, _campaign_line(rep)


def criterion_8(corpus):
    reps = [run_campaign(name, corpus, m) for name, m in
            (("prop2.3", 16), ("prop2.1", 16), ("lemma2.2", 12))]
    ok = all(r.ok and r.passed > 0 and r.skipped == 0 for r in reps)
    return ok, "; ".join(f"{r.proposition} {_campaign_line(r)}" for r in reps)


def criterion_9(corpus):
    rep = run_campaign("prop4.5", corpus, 16)
    Q8 = corpus.get("Q8").group
    C4 = corpus.get("C4").group
    q8_vp = bool(is_vp_extension(Extension.canonical(Q8, center(Q8)), abelian()))
    sq = next(g for g in range(4) if C4.element_orders[g] == 2)
    E4 = Extension.canonical(C4, subgroup_generated(C4, [sq]))
    c4_vp = bool(is_vp_extension(E4, abelian()))
    known = (not q8_vp and vp_criterion_check(Extension.canonical(Q8, center(Q8)), abelian()).ok
             and c4_vp and vp_criterion_check(E4, abelian()).ok)
    return rep.ok and known, f"{_campaign_line(rep)}; Q8 centre VP={q8_vp}, C4 > C2 VP={c4_vp}"


def criterion_10(corpus):
    rep = run_campaign("lemma4.7", corpus, 32)
    return rep.ok and rep.passed > 0, _campaign_line(rep)


def criterion_11(corpus):
    rep = VerificationReport("invariance")
    labels = ["D8", "Q8", "C2 x D8", "SD16", "2^(1+4)+"]
    for label in labels:
        rep.extend(verify_invariance(corpus.get(label).group, seed=11, presented=False))
    return rep.ok and rep.passed == 3 * len(labels), f"{', '.join(labels)}: {_campaign_line(rep)}"


def criterion_12(corpus):
    P = Presentation(2, tuple(parse_free_word(r) for r in ("x1^2", "x2^2", "(x1 x2)^100")))
    t0 = time.perf_counter()
    T = todd_coxeter(P)
    dt = time.perf_counter() - t0
    ok = T.ncosets == 200 and dt < 1.0
    detail = f"Todd-Coxeter n=100: {T.ncosets} cosets in {dt:.3f}s"
    if not stretch_enabled():
        return ok, detail + "; order-64 stretch not run (set VB0_STRETCH=1)"
    found = []
    for e in corpus:
        G = e.group
        if G.order != 64:
            continue
        t0 = time.perf_counter()
        W = wedge_group(G, "curly", materialize=False)
        build = time.perf_counter() - t0
        a = bogomolov_tilde(G).B0_tilde
        b = b0_cohomological(G, cap=64).B0_structure
        ok = ok and build < 600 and a == b == W.kernel
        found.append(f"{e.label}: B0={a.to_list()} (cohomology {b.to_list()}), curly build {build:.1f}s")
    return ok, detail + "; " + "; ".join(found)


CRITERIA = [
    (1, "dual-route agreement, |G| <= 32", criterion_1),
    (2, "multiplier agreement, |G| <= 24 and C_a x C_b", criterion_2),
    (3, "exhaustive H^2 oracle, |G| <= 4", criterion_3),
    (4, "abelian groups have trivial B~0", criterion_4),
    (5, "product formula on >= 20 pairs", criterion_5),
    (6, "third-slot exactness, |G| <= 16", criterion_6),
    (7, "quotient divisibility, |G| <= 32", criterion_7),
    (8, "verbal/marginal identities", criterion_8),
    (9, "marginal VP criterion", criterion_9),
    (10, "marginal VP order identity, |G| <= 32", criterion_10),
    (11, "presentation invariance on 5 groups", criterion_11),
    (12, "performance floor", criterion_12),
]


@pytest.fixture(scope="module")
def acceptance_corpus():
    return load_corpus()


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(request, acceptance_corpus, number, title, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn(acceptance_corpus)
    except Exception as exc:  # a crash is a failed criterion, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = _line(number, title, ok, f"{detail} [{time.perf_counter() - t0:.1f}s]")
    # printed in the terminal summary by conftest.py
    request.config.stash.setdefault(ACCEPTANCE_KEY, []).append(line)
    assert ok, detail


if __name__ == "__main__":
    corpus = load_corpus()
    failures = 0
    for number, title, fn in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = fn(corpus)
        print(_line(number, title, ok, f"{detail} [{time.perf_counter() - t0:.1f}s]"), flush=True)
        failures += not ok
    sys.exit(1 if failures else 0)
