"""Brute-force verifiers for the subgroup identities relating verbal and marginal subgroups.

Every verifier returns a :class:`~vb0.report.VerificationReport` with one
record per asserted inclusion or equation.  A failed record carries a witness
element that lies on the wrong side.

The identities are only claimed under a hypothesis relating the two varieties
(V lies inside the bracket of W with the variety of all groups).  That
hypothesis is not decidable from finitely many laws in general, so the
verifiers accept a whitelist of law pairs for which it holds by construction:

* ``V = [x1, ..., x_{c+1}]`` with ``W = [x1, ..., x_c]``;
* ``V = [w, x]`` for any o.c. word ``w`` and a fresh variable ``x``, with ``W = w``.
  Here ``V(G) = [W(G), G]``, so the hypothesis holds with equality.

Composites ``u o w`` are not on the list: with ``u = [x1,x2]`` and
``w = [x1,x2,x3]`` the symmetric group of degree 3 has ``V(G) = 1`` and
``V*(G) = G`` while ``[G, W(G)] != 1`` for either choice of W.

Other pairs are evaluated and reported as skipped, with a warning.
"""

from __future__ import annotations

import warnings

from .groups import (Group, Subgroup, commutator_subgroup, intersection, join,
                     require_normal, subgroup_generated)
from .report import VerificationReport
from .words import (Comm, Leaf, LawsLike, OCWord, as_laws, hall_bracket, left_normed,
                    marginal_subgroup, renumber, shape, value_set, verbal_subgroup)


def _shape_set(laws) -> set:
    return {shape(w) for w in laws}


def whitelist_reason(V: LawsLike, W: LawsLike) -> str | None:
    """Why ``(V, W)`` satisfies the hypothesis, or ``None`` if it is not a documented pair."""
    vl, wl = as_laws(V), as_laws(W)
    if len(vl) == 1 and len(wl) == 1:
        v, w = vl[0], wl[0]
        c = w.weight
        if shape(v) == shape(left_normed(c + 1)) and shape(w) == shape(left_normed(c)):
            return f"lower central pair: weight {c + 1} over weight {c}"
    wshapes = _shape_set(wl)
    if all(isinstance(v, Comm) and isinstance(v.right, Leaf) and shape(v.left) in wshapes
           for v in vl):
        return "every law is [w, x] with w a W-law and x a fresh variable"
    return None


def companion(V: LawsLike) -> tuple:
    """The W-laws paired with V on the whitelist: ``w`` for each law ``[w, x]``."""
    out = []
    for v in as_laws(V):
        if not (isinstance(v, Comm) and isinstance(v.right, Leaf)):
            raise ValueError(f"law {v} is not of the form [w, x]")
        w = renumber(v.left)
        if w not in out:
            out.append(w)
    return tuple(out)


def _missing(A: Subgroup, B: Subgroup):
    """First element of A outside B, or ``None`` when A is inside B."""
    bset = set(B.elements)
    for x in A.elements:
        if x not in bset:
            return int(x)
    return None


def _inclusion(report: VerificationReport, name: str, A: Subgroup, B: Subgroup) -> bool:
    w = _missing(A, B)
    return report.record(name, w is None, f"|A|={A.order}, |B|={B.order}", w)


def _equality(report: VerificationReport, name: str, A: Subgroup, B: Subgroup) -> bool:
    w = _missing(A, B)
    if w is None:
        w = _missing(B, A)
    return report.record(name, w is None, f"|lhs|={A.order}, |rhs|={B.order}", w)


def _gated(report: VerificationReport, V, W, tag: str) -> VerificationReport:
    """Route records into ``report`` directly or, off the whitelist, into a skip-only shadow."""
    if whitelist_reason(V, W) is not None:
        return report
    msg = f"{tag}: pair ({_laws_str(V)}; {_laws_str(W)}) is not on the whitelist; hypothesis unchecked"
    warnings.warn(msg, stacklevel=3)
    report.notes.append(msg)
    return VerificationReport(report.proposition)


def _flush_shadow(report: VerificationReport, shadow: VerificationReport):
    if shadow is report:
        return
    for r in shadow.results:
        report.skip(r.instance, f"hypothesis unchecked; observed {r.status}")


def _laws_str(V) -> str:
    return ",".join(str(w) for w in as_laws(V))


def verify_prop21(G: Group, N: Subgroup, V: LawsLike, W: LawsLike,
                  label: str = "") -> VerificationReport:
    """``N ∩ V(G) ⊇ [N V* G] ⊇ [N, W(G)]`` and ``[V*(G), W(G)] = 1``."""
    require_normal(G, N)
    tag = label or G.label or f"order {G.order}"
    report = VerificationReport("prop2.1")
    sink = _gated(report, V, W, tag)
    with report.timed():
        VG = verbal_subgroup(V, G)
        WG = verbal_subgroup(W, G)
        hb = hall_bracket(N, V, G)
        _inclusion(sink, f"{tag}: [NV*G] <= N & V(G)", hb, intersection(N, VG))
        _inclusion(sink, f"{tag}: [N,W(G)] <= [NV*G]", commutator_subgroup(G, N, WG), hb)
        Vstar = marginal_subgroup(V, G)
        bracket = commutator_subgroup(G, Vstar, WG)
        sink.record(f"{tag}: [V*(G),W(G)] = 1", bracket.is_trivial(),
                    f"|V*(G)|={Vstar.order}, |W(G)|={WG.order}",
                    None if bracket.is_trivial() else int(bracket.elements[1]))
    _flush_shadow(report, sink)
    return report


def verify_chain23(G: Group, N: Subgroup, V: LawsLike, W: LawsLike | None = None,
                   label: str = "") -> VerificationReport:
    """``[N, W(G)] ⊆ [N V* G] ⊆ <T(G) ∩ N> ⊆ N ∩ V(G)``; W defaults to :func:`companion`."""
    require_normal(G, N)
    if W is None:
        W = companion(V)
    tag = label or G.label or f"order {G.order}"
    report = VerificationReport("prop2.3")
    sink = _gated(report, V, W, tag)
    with report.timed():
        WG = verbal_subgroup(W, G)
        hb = hall_bracket(N, V, G)
        T = value_set(V, G)
        tn = subgroup_generated(G, [x for x in N.elements if int(x) in T])
        nv = intersection(N, verbal_subgroup(V, G))
        _inclusion(sink, f"{tag}: [N,W(G)] <= [NV*G]", commutator_subgroup(G, N, WG), hb)
        _inclusion(sink, f"{tag}: [NV*G] <= <T(G) & N>", hb, tn)
        _inclusion(sink, f"{tag}: <T(G) & N> <= N & V(G)", tn, nv)
    _flush_shadow(report, sink)
    return report


def bracket_word(u: OCWord, w: OCWord) -> OCWord:
    """``[u, w]`` with w's variables shifted past u's."""
    u = renumber(u)
    return Comm(u, renumber(w, start=u.weight + 1))


def verify_hulse_lennox(G: Group, K: Subgroup, u: OCWord, w: OCWord,
                        label: str = "") -> VerificationReport:
    """``[K v* G] = [[K u* G], w(G)] [u(G), [K w* G]]`` for ``v = [u, w]``."""
    require_normal(G, K)
    tag = label or G.label or f"order {G.order}"
    report = VerificationReport("lemma2.2")
    with report.timed():
        v = bracket_word(u, w)
        lhs = hall_bracket(K, v, G)
        left = commutator_subgroup(G, hall_bracket(K, u, G), verbal_subgroup(w, G))
        right = commutator_subgroup(G, verbal_subgroup(u, G), hall_bracket(K, w, G))
        _equality(report, f"{tag}: [K{v}*G] = [[Ku*G],w(G)][u(G),[Kw*G]]", lhs, join(G, left, right))
    return report


def gamma_pair(c: int) -> tuple:
    """The whitelisted ``(V, W)`` pair ``(γ_{c+1}, γ_c)`` as law tuples."""
    if c < 1:
        raise ValueError("c must be at least 1")
    return (left_normed(c + 1),), (left_normed(c),)
