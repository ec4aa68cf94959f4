"""Corpus loading, verification campaigns and the JSON report."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import multiplier as _mult
from .cohomology import COHOMOLOGY_CAP, b0_cohomological
from .errors import CapExceeded, VB0Error
from .groups import (Group, Homomorphism, Subgroup, all_normal_subgroups, center,
                     derived_subgroup, direct_product, from_permutations, intersection,
                     is_abelian, join, quotient, relabel, require_normal, subgroup_generated)
from .identities import gamma_pair, verify_chain23, verify_hulse_lennox, verify_prop21
from .multiplier import WEDGE_CAP, induced_map
from .presentation import cayley_presentation, image_group, todd_coxeter
from .report import SCHEMA_VERSION, VerificationReport
from .vp import Extension, are_equivalent, is_vp_extension, lemma47_check, vp_criterion_check
from .words import (LawsLike, Leaf, abelian, left_normed, nilpotent, parse_word, value_set,
                    verbal_subgroup)

# ---------------------------------------------------------------------------
# corpus


@dataclass
class CorpusEntry:
    label: str
    group: Group
    path: str


@dataclass
class Corpus:
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def upto(self, max_order: int) -> list:
        return [e for e in self.entries if e.group.order <= max_order]

    def get(self, label: str) -> CorpusEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def default_corpus_dir() -> Path:
    return Path(str(resources.files("vb0") / "data" / "corpus"))


def load_corpus(directory=None) -> Corpus:
    """Load every ``*.txt`` group file; invalid files are skipped with a note."""
    from .groups import load_group

    directory = default_corpus_dir() if directory is None else Path(directory)
    corpus = Corpus()
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory {directory} does not exist")
    seen = set()
    for path in sorted(directory.glob("*.txt")):
        try:
            G = load_group(path)
        except (VB0Error, ValueError) as exc:
            corpus.notes.append(f"{path.name}: skipped ({type(exc).__name__}: {exc})")
            continue
        label = G.label or path.stem
        if label in seen:
            corpus.notes.append(f"{path.name}: skipped (duplicate label {label!r})")
            continue
        seen.add(label)
        G.label = label
        corpus.entries.append(CorpusEntry(label, G, str(path)))
    return corpus


# ---------------------------------------------------------------------------
# per-instance verifiers


def b0_order(G: Group) -> int:
    return _mult.bogomolov_tilde(G).B0_tilde.order


def _tag(G: Group, N: Subgroup | None = None, extra: str = "") -> str:
    base = G.label or f"order {G.order}"
    if N is not None:
        base += f" / N{N.order}:{','.join(str(int(x)) for x in N.elements[:6])}{'...' if N.order > 6 else ''}"
    return base + extra


def verify_prop33_tail(G: Group, N: Subgroup, V: LawsLike | None = None) -> VerificationReport:
    """Exactness of ``N/<T(G)∩N> -> G/V(G) -> (G/N)/V(G/N) -> 1``.

    Everything is computed on subgroups of G that contain V(G): the image of
    the first map is ``N V(G)`` and the kernel of the second is the preimage of
    ``V(G/N)``.
    """
    V = abelian() if V is None else V
    require_normal(G, N)
    report = VerificationReport("prop3.3")
    tag = _tag(G, N)
    with report.timed():
        T = value_set(V, G)
        VG = verbal_subgroup(V, G)
        tn = subgroup_generated(G, [x for x in N.elements if int(x) in T])
        Q, pi = quotient(G, N)
        VQ = verbal_subgroup(V, Q)
        report.record(f"{tag}: first map well defined", tn.issubset(VG),
                      "<T(G)&N> inside V(G)")
        piV = Subgroup(Q, np.unique(pi.image[list(VG.elements)]))
        report.record(f"{tag}: second map well defined", piV == VQ,
                      f"|pi(V(G))|={piV.order}, |V(G/N)|={VQ.order}")
        image = join(G, N, VG)
        inVQ = np.zeros(Q.order, dtype=bool)
        inVQ[list(VQ.elements)] = True
        kernel = Subgroup(G, np.flatnonzero(inVQ[pi.image]))
        report.record(f"{tag}: exact at G/V(G)", image == kernel,
                      f"|N V(G)|={image.order}, |preimage of V(G/N)|={kernel.order}",
                      _first_diff(image, kernel))
        report.record(f"{tag}: onto (G/N)/V(G/N)", pi.is_surjective())
    return report


def _first_diff(A: Subgroup, B: Subgroup):
    d = sorted(set(A.elements) ^ set(B.elements))
    return int(d[0]) if d else None


def verify_prop34_order(G: Group, N: Subgroup) -> VerificationReport:
    """``|B~0(G/N)| = |im alpha*| |(N∩G')/<T(G)∩N>|`` for the abelian variety."""
    require_normal(G, N)
    report = VerificationReport("prop3.4")
    tag = _tag(G, N)
    with report.timed():
        Q, pi = quotient(G, N)
        bg = _mult.bogomolov_tilde(G).B0_tilde
        bq = _mult.bogomolov_tilde(Q).B0_tilde
        alpha = induced_map(pi, "curly")
        T = value_set(abelian(), G)
        tn = subgroup_generated(G, [x for x in N.elements if int(x) in T])
        ng = intersection(N, derived_subgroup(G))
        term = ng.order // tn.order
        ok = bq.order == alpha.image_order * term
        report.record(f"{tag}: third-slot exactness", ok,
                      f"|B0(G/N)|={bq.order}, |im|={alpha.image_order}, "
                      f"|(N&G')/<T&N>|={term}, |ker| (first term)={alpha.kernel_order}",
                      {"B0(G)": bg.to_list(), "B0(G/N)": bq.to_list(), "image": alpha.image_order,
                       "term": term})
        report.record(f"{tag}: divisibility", (bg.order * term) % bq.order == 0,
                      f"{bq.order} | {bg.order}*{term}")
    return report


def verify_lemma35(G: Group, N: Subgroup) -> VerificationReport:
    """``|B~0(G/N)|`` divides ``|B~0(G)| |G' ∩ N|``."""
    require_normal(G, N)
    report = VerificationReport("lemma3.5")
    tag = _tag(G, N)
    with report.timed():
        Q, _ = quotient(G, N)
        bg, bq = b0_order(G), b0_order(Q)
        m = intersection(N, derived_subgroup(G)).order
        report.record(tag, (bg * m) % bq == 0, f"{bq} | {bg}*{m}", {"B0(G/N)": bq, "B0(G)": bg, "G'&N": m})
    return report


def verify_prop48(G1: Group, G2: Group) -> VerificationReport:
    """``B~0(G1 x G2) = B~0(G1) x B~0(G2)`` as invariant-factor lists."""
    report = VerificationReport("prop4.8")
    P = direct_product(G1, G2)
    tag = P.label or f"{G1.order} x {G2.order}"
    with report.timed():
        lhs = _mult.bogomolov_tilde(P).B0_tilde
        rhs = _mult.bogomolov_tilde(G1).B0_tilde + _mult.bogomolov_tilde(G2).B0_tilde
        report.record(tag, lhs == rhs, f"product {lhs}, factors {rhs}",
                      {"product": lhs.to_list(), "merge": rhs.to_list()})
    return report


def regular_permutation_copy(G: Group) -> Group:
    """G as a permutation group through its right regular action."""
    gens = [tuple(int(v) for v in G.table[:, g]) for g in range(G.order)]
    return from_permutations(G.order, gens, label=f"{G.label} (regular)")


def presented_copy(G: Group) -> Group:
    """G rebuilt by coset enumeration of its Cayley presentation."""
    P, _ = cayley_presentation(G)
    T = todd_coxeter(P)
    H, _ = image_group(T, P)
    return H


def verify_invariance(G: Group, seed: int = 0, copies: int = 2,
                      presented: bool | None = None) -> VerificationReport:
    """Identical M and B~0 across relabelled, permutation-sourced and re-presented copies."""
    report = VerificationReport("invariance")
    rng = random.Random(seed)
    tag = _tag(G)
    with report.timed():
        base = _mult.bogomolov_tilde(G)
        variants = []
        for i in range(copies):
            perm = list(range(G.order))
            rng.shuffle(perm)
            H, _ = relabel(G, perm, label=f"{G.label} relabel {i}")
            variants.append((f"relabel {i}", H))
        variants.append(("permutation", regular_permutation_copy(G)))
        if presented if presented is not None else G.order <= 32:
            variants.append(("presentation", presented_copy(G)))
        for name, H in variants:
            r = _mult.bogomolov_tilde(H)
            report.record(f"{tag}: {name}", r.M == base.M and r.B0_tilde == base.B0_tilde,
                          f"M {r.M} vs {base.M}; B0 {r.B0_tilde} vs {base.B0_tilde}")
    return report


def verify_functoriality(G: Group, N: Subgroup, K: Subgroup) -> VerificationReport:
    """``(gamma alpha)* = gamma* alpha*`` for ``G -> G/N -> G/K`` with ``N <= K``."""
    require_normal(G, N)
    require_normal(G, K)
    if not N.issubset(K):
        raise ValueError("functoriality chain needs N inside K")
    report = VerificationReport("functoriality")
    tag = _tag(G, N, f" -> K{K.order}")
    with report.timed():
        Q1, alpha = quotient(G, N)
        Q2, gamma = quotient(Q1, Subgroup(Q1, np.unique(alpha.image[list(K.elements)])))
        composite = alpha.then(gamma)
        a = induced_map(alpha, "curly")
        c = induced_map(gamma, "curly")
        both = induced_map(composite, "curly")
        report.record(tag, both.equals(a.then(c)), "matrices of (ga)* and g* a*")
    return report


# ---------------------------------------------------------------------------
# campaigns


DEFAULT_MAX_ORDER = {
    "prop2.1": 16, "prop2.3": 16, "lemma2.2": 12, "prop3.3": 16, "prop3.4": 16,
    "lemma3.5": 32, "lemma4.3": 16, "prop4.5": 16, "lemma4.7": 32, "prop4.8": 64,
    "invariance": 32, "functoriality": 16, "dual-route": 32, "multiplier": 24,
}


def campaign_varieties() -> list:
    """The whitelisted ``(V, W)`` pairs used by the section-2 campaigns."""
    return [gamma_pair(1), gamma_pair(2), gamma_pair(3)]


def _normals(G: Group) -> list:
    return all_normal_subgroups(G)


def _campaign_prop21(groups):
    rep = VerificationReport("prop2.1")
    for G in groups:
        for V, W in campaign_varieties():
            for N in _normals(G):
                rep.extend(verify_prop21(G, N, V, W, label=f"{_tag(G, N)} V={V[0]}"))
    return rep


def _campaign_chain23(groups):
    rep = VerificationReport("prop2.3")
    for G in groups:
        for V, W in campaign_varieties():
            for N in _normals(G):
                rep.extend(verify_chain23(G, N, V, W, label=f"{_tag(G, N)} V={V[0]}"))
    return rep


def _campaign_lemma22(groups):
    rep = VerificationReport("lemma2.2")
    u, w = parse_word("[x1,x2]"), Leaf(1)
    for G in groups:
        for K in _normals(G):
            rep.extend(verify_hulse_lennox(G, K, u, w, label=_tag(G, K)))
    return rep


def _campaign_prop33(groups):
    rep = VerificationReport("prop3.3")
    for G in groups:
        for V in (abelian(), nilpotent(2)):
            for N in _normals(G):
                rep.extend(verify_prop33_tail(G, N, V), prefix=f"[{V}] ")
    return rep


def _per_normal(fn, name):
    def run(groups):
        rep = VerificationReport(name)
        for G in groups:
            for N in _normals(G):
                rep.extend(fn(G, N))
        return rep
    return run


def _central_subgroups(G: Group) -> list:
    Z = center(G)
    return [N for N in _normals(G) if N.issubset(Z)]


def _campaign_prop45(groups):
    rep = VerificationReport("prop4.5")
    for G in groups:
        for N in _central_subgroups(G):
            rep.extend(vp_criterion_check(Extension.canonical(G, N), abelian(), label=_tag(G, N)))
    return rep


def _campaign_lemma47(groups):
    rep = VerificationReport("lemma4.7")
    for G in groups:
        for N in _normals(G):
            rep.extend(lemma47_check(G, N, abelian(), label=_tag(G, N)))
    return rep


def relabeled_extension(E: Extension, perm) -> Extension:
    """Transport E along a relabelling of its middle group."""
    H, iso = relabel(E.G, perm)
    inv = np.argsort(np.asarray(perm))
    chi = Homomorphism(E.N, H, iso.image[E.chi.image], check=False)
    pi = Homomorphism(H, E.Q, E.pi.image[inv], check=False)
    return Extension(E.N, H, E.Q, chi, pi)


def _campaign_lemma43(groups, seed: int = 0):
    rep = VerificationReport("lemma4.3")
    rng = random.Random(seed)
    for G in groups:
        for N in _normals(G):
            E = Extension.canonical(G, N)
            perm = list(range(G.order))
            rng.shuffle(perm)
            E2 = relabeled_extension(E, perm)
            T = are_equivalent(E, E2)
            tag = _tag(G, N)
            if T is None:
                rep.record(tag, False, "relabelled copy not recognised as equivalent")
                continue
            a, b = bool(is_vp_extension(E, abelian())), bool(is_vp_extension(E2, abelian()))
            rep.record(tag, a == b, f"VP {a} vs {b}")
    return rep


def _pairs_for_prop48(groups, max_order: int, limit: int = 40):
    small = [G for G in groups if G.order > 1]
    out = []
    for i, G1 in enumerate(small):
        for G2 in small[i:]:
            if G1.order * G2.order <= max_order:
                out.append((G1, G2))
    # spread the selection over the sorted pair list for a deterministic mix
    if len(out) > limit:
        step = len(out) / limit
        out = [out[int(i * step)] for i in range(limit)]
    return out


def _campaign_prop48(groups, max_order: int = 64):
    rep = VerificationReport("prop4.8")
    for G1, G2 in _pairs_for_prop48(groups, max_order):
        if G1.order * G2.order > WEDGE_CAP:
            continue
        rep.extend(verify_prop48(G1, G2))
    return rep


def _campaign_invariance(groups):
    rep = VerificationReport("invariance")
    for G in groups:
        rep.extend(verify_invariance(G, seed=G.order))
    return rep


def _campaign_functoriality(groups):
    rep = VerificationReport("functoriality")
    for G in groups:
        normals = _normals(G)
        for N in normals:
            for K in normals:
                if N.issubset(K):
                    rep.extend(verify_functoriality(G, N, K))
    return rep


def dual_route_check(G: Group, mode: str = "bicyclic") -> VerificationReport:
    """B~0 by the curly exterior square against B0 by restriction of cocycles."""
    report = VerificationReport("dual-route")
    with report.timed():
        a = _mult.bogomolov_tilde(G)
        b = b0_cohomological(G, mode, cap=max(COHOMOLOGY_CAP, G.order))
        report.record(_tag(G), a.B0_tilde == b.B0_structure and a.M == b.M_structure,
                      f"exterior M={a.M} B0={a.B0_tilde}; cohomology M={b.M_structure} B0={b.B0_structure}",
                      {"exterior": a.B0_tilde.to_list(), "cohomology": b.B0_structure.to_list()})
    return report


def _campaign_dual(groups):
    rep = VerificationReport("dual-route")
    for G in groups:
        rep.extend(dual_route_check(G))
    return rep


CAMPAIGNS: dict[str, Callable] = {
    "prop2.1": _campaign_prop21,
    "prop2.3": _campaign_chain23,
    "lemma2.2": _campaign_lemma22,
    "prop3.3": _campaign_prop33,
    "prop3.4": _per_normal(verify_prop34_order, "prop3.4"),
    "lemma3.5": _per_normal(verify_lemma35, "lemma3.5"),
    "lemma4.3": _campaign_lemma43,
    "prop4.5": _campaign_prop45,
    "lemma4.7": _campaign_lemma47,
    "prop4.8": _campaign_prop48,
    "invariance": _campaign_invariance,
    "functoriality": _campaign_functoriality,
    "dual-route": _campaign_dual,
}

PROPOSITIONS = [k for k in CAMPAIGNS]


def run_campaign(name: str, corpus: Corpus, max_order: int | None = None) -> VerificationReport:
    if name not in CAMPAIGNS:
        raise KeyError(f"unknown proposition {name!r}; choose from {', '.join(PROPOSITIONS)}")
    limit = DEFAULT_MAX_ORDER[name] if max_order is None else min(max_order, _hard_cap(name))
    groups = [e.group for e in corpus.upto(limit)]
    t0 = time.perf_counter()
    fn = CAMPAIGNS[name]
    rep = fn(groups, limit) if name == "prop4.8" else fn(groups)
    rep.proposition = name
    rep.timings = {"total": time.perf_counter() - t0}
    if name in ("prop3.3", "prop3.4"):
        rep.notes.append("free-group level terms are checked only through their finite consequences")
    return rep


def _hard_cap(name: str) -> int:
    return 64 if name in ("prop4.8", "dual-route", "invariance", "lemma4.7", "lemma3.5") else 32


# ---------------------------------------------------------------------------
# report


def group_summary(G: Group, methods=("exterior", "cohomology")) -> dict:
    out: dict = {"order": G.order, "abelian": is_abelian(G)}
    timings = {}
    if "exterior" in methods:
        t0 = time.perf_counter()
        r = _mult.bogomolov_tilde(G)
        timings["exterior"] = time.perf_counter() - t0
        out["multiplier"] = r.M.to_list()
        out["B0_exterior"] = r.B0_tilde.to_list()
    if "cohomology" in methods:
        t0 = time.perf_counter()
        try:
            c = b0_cohomological(G, cap=max(COHOMOLOGY_CAP, G.order))
            out["multiplier_cohomology"] = c.M_structure.to_list()
            out["B0_cohomology"] = c.B0_structure.to_list()
        except CapExceeded as exc:
            out["B0_cohomology"] = f"cap exceeded: {exc}"
        timings["cohomology"] = time.perf_counter() - t0
    out["timings"] = {k: round(v, 4) for k, v in timings.items()}
    return out


def build_report(corpus: Corpus, checks=None, max_order: int | None = None,
                 include_timings: bool = True) -> dict:
    checks = list(checks) if checks is not None else []
    limit = max_order if max_order is not None else 32
    groups = {}
    for e in corpus.upto(limit):
        groups[e.label] = group_summary(e.group)
        if not include_timings:
            groups[e.label].pop("timings")
    props = {}
    for name in checks:
        rep = run_campaign(name, corpus, max_order)
        props[name] = rep.to_dict(include_timings)
    failures = sum(p["failed"] for p in props.values())
    disagreements = [k for k, g in groups.items()
                     if isinstance(g.get("B0_cohomology"), list) and g["B0_cohomology"] != g["B0_exterior"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "corpus_notes": corpus.notes,
        "groups": groups,
        "propositions": props,
        "disagreements": disagreements,
        "ok": failures == 0 and not disagreements,
    }


def write_report(data: dict, out) -> None:
    Path(out).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def report(corpus: Corpus, checks, out, max_order: int | None = None) -> int:
    """Write the JSON report; returns the exit status (nonzero iff a check failed)."""
    data = build_report(corpus, checks, max_order)
    write_report(data, out)
    return 0 if data["ok"] else 1
