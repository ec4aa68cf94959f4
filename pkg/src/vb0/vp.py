"""Extensions, verbal-preserving (VP) extensions and marginal extensions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import AbelianStructure
from .errors import CapExceeded, HypothesisFailed, NotHomomorphism
from .groups import (Group, Homomorphism, Subgroup, derived_subgroup, find_isomorphism,
                     intersection, quotient, require_normal)
from .report import VerificationReport
from .words import (EVAL_CAP, LawsLike, Variety, as_laws, law_values, marginal_subgroup,
                    value_set, verbal_subgroup)

EQUIVALENCE_CAP = 16


@dataclass(frozen=True)
class Extension:
    """``1 -> N -chi-> G -pi-> Q -> 1``, checked exact on construction."""

    N: Group
    G: Group
    Q: Group
    chi: Homomorphism
    pi: Homomorphism

    def __post_init__(self):
        if self.chi.source is not self.N or self.chi.target is not self.G:
            raise NotHomomorphism("chi must map N into G")
        if self.pi.source is not self.G or self.pi.target is not self.Q:
            raise NotHomomorphism("pi must map G onto Q")
        if not self.chi.is_injective():
            raise NotHomomorphism("chi is not injective")
        if not self.pi.is_surjective():
            raise NotHomomorphism("pi is not surjective")
        if self.chi.image_subgroup() != self.pi.kernel():
            raise NotHomomorphism("image of chi differs from kernel of pi")

    @property
    def image(self) -> Subgroup:
        return self.chi.image_subgroup()

    @classmethod
    def canonical(cls, G: Group, N: Subgroup) -> "Extension":
        """``1 -> N -> G -> G/N -> 1``."""
        require_normal(G, N)
        H, incl = N.as_group()
        Q, pi = quotient(G, N)
        return cls(H, G, Q, incl, pi)


@dataclass(frozen=True)
class VPVerdict:
    holds: bool
    witness: tuple | None = None
    law: object = None

    def __bool__(self):
        return self.holds


def is_vp_extension(E: Extension, V: LawsLike, cap: int = EVAL_CAP) -> VPVerdict:
    """Whether every quotient tuple killed by a law lifts to a tuple killed by it.

    All law values on G are tabulated at once; the set of Q-tuples with a
    trivial lift is the image of G's zero set under ``pi``, so the check is a
    set difference rather than a per-tuple lift search.
    """
    Q, G = E.Q, E.G
    pi = E.pi.image
    for v in as_laws(V):
        s = v.weight
        if G.order ** s > cap:
            raise CapExceeded(f"{G.order}^{s} tuples exceed the evaluation cap {cap}")
        vq = law_values(v, Q, cap)
        vg = law_values(v, G, cap)
        killed_q = np.flatnonzero(vq.ravel() == Q.identity)
        zeros = np.argwhere(vg == G.identity)
        lifted = np.zeros(Q.order ** s, dtype=bool)
        if len(zeros):
            codes = np.ravel_multi_index(tuple(pi[zeros[:, i]] for i in range(s)), (Q.order,) * s)
            lifted[codes] = True
        bad = killed_q[~lifted[killed_q]]
        if len(bad):
            tup = np.unravel_index(int(bad[0]), (Q.order,) * s)
            return VPVerdict(False, tuple(int(t) for t in tup), v)
    return VPVerdict(True)


def is_marginal_extension(E: Extension, V: LawsLike) -> bool:
    return E.image.issubset(marginal_subgroup(V, E.G))


def vp_criterion_check(E: Extension, V: LawsLike, label: str = "") -> VerificationReport:
    """For a marginal extension: VP holds exactly when ``chi(N) ∩ T(G) = 1``."""
    report = VerificationReport("prop4.5")
    tag = label or E.G.label or f"order {E.G.order}"
    with report.timed():
        if not is_marginal_extension(E, V):
            report.skip(tag, "hypothesis failed: chi(N) is not marginal")
            return report
        T = value_set(V, E.G)
        meet = sorted(int(x) for x in E.image.elements if int(x) in T and x != E.G.identity)
        vp = is_vp_extension(E, V)
        ok = vp.holds == (not meet)
        detail = f"VP={vp.holds}, |chi(N) & T(G)|={len(meet) + 1}"
        report.record(tag, ok, detail, {"unliftable": vp.witness, "intersection": meet})
    return report


def is_vp_subgroup(G: Group, N: Subgroup, V: LawsLike) -> VPVerdict:
    return is_vp_extension(Extension.canonical(G, N), V)


def are_equivalent(E1: Extension, E2: Extension, cap: int = EQUIVALENCE_CAP):
    """An isomorphism ``T: G1 -> G2`` with ``T chi1 = chi2`` and ``pi2 T = pi1``, or ``None``.

    Both extensions must share N and Q up to identical multiplication tables.
    """
    if max(E1.G.order, E2.G.order) > cap:
        raise CapExceeded(f"equivalence search is capped at order {cap}")
    if not (np.array_equal(E1.N.table, E2.N.table) and np.array_equal(E1.Q.table, E2.Q.table)):
        raise ValueError("extensions of different groups cannot be equivalent")
    p1, p2 = E1.pi.image, E2.pi.image
    fixed = {int(E1.chi(n)): int(E2.chi(n)) for n in range(E1.N.order)}

    def allowed(g, y):
        return p2[y] == p1[g]

    def accept(image):
        return np.array_equal(p2[image], p1)

    return find_isomorphism(E1.G, E2.G, fixed=fixed, allowed=allowed, accept=accept)


def _is_abelian_variety(V: LawsLike) -> bool:
    from .words import shape, left_normed

    laws = as_laws(V)
    return len(laws) == 1 and shape(laws[0]) == shape(left_normed(2))


def lemma47_check(G: Group, N: Subgroup, V: LawsLike | None = None,
                  label: str = "") -> VerificationReport:
    """For a marginal VP subgroup N: ``|B~0(G/N)| = |B~0(G)| |N ∩ G'|`` and ``B~0(G) -> B~0(G/N)`` is injective.

    Only the abelian variety has a B~0 engine, so other varieties raise
    :class:`HypothesisFailed`.  Failing marginal or VP hypotheses produce a
    skipped record.
    """
    from .multiplier import bogomolov_tilde, induced_map

    if V is None:
        from .words import abelian
        V = abelian()
    if not _is_abelian_variety(V):
        raise HypothesisFailed("variety", "only the abelian variety has a B~0 engine")
    report = VerificationReport("lemma4.7")
    tag = label or G.label or f"order {G.order}"
    with report.timed():
        E = Extension.canonical(G, N)
        if not is_marginal_extension(E, V):
            report.skip(tag, "hypothesis failed: N is not marginal")
            return report
        if not is_vp_extension(E, V):
            report.skip(tag, "hypothesis failed: N is not a VP subgroup")
            return report
        Q, pi = E.Q, E.pi
        bg = bogomolov_tilde(G).B0_tilde
        bq = bogomolov_tilde(Q).B0_tilde
        nv = intersection(N, verbal_subgroup(V, G)).order
        report.record(f"{tag}: order identity", bq.order == bg.order * nv,
                      f"|B0(G/N)|={bq.order}, |B0(G)|={bg.order}, |N & V(G)|={nv}",
                      {"B0(G)": bg.to_list(), "B0(G/N)": bq.to_list(), "N&V(G)": nv})
        alpha = induced_map(pi, "curly")
        report.record(f"{tag}: induced map injective", alpha.is_injective(),
                      f"|ker|={alpha.kernel_order}", alpha.kernel_order)
    return report
