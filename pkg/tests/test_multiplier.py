import numpy as np
import pytest

from conftest import cyclic, dihedral, klein, quaternion, symmetric
from vb0.abelian import AbelianStructure
from vb0.errors import CapExceeded
from vb0.groups import all_normal_subgroups, derived_subgroup, direct_product, quotient, relabel
from vb0.multiplier import (bogomolov_tilde, induced_map, schur_multiplier, wedge_group,
                            wedge_presentation)
from vb0.presentation import todd_coxeter

S = AbelianStructure


# known multipliers; every B~0 in this list is trivial
KNOWN = {
    "C1": S(), "C7": S(), "C2 x C2": S((2,)), "C2 x C4": S((2,)), "C4 x C4": S((4,)),
    "C3 x C3": S((3,)), "C2 x C2 x C4": S((2, 2, 2)), "C2^3": S((2, 2, 2)),
    "C4 x C6": S((2,)), "S3": S(), "D8": S((2,)), "Q8": S(), "A4": S((2,)), "S4": S((2,)),
    "D12": S((2,)), "D10": S(), "Q16": S(), "SD16": S(), "M16": S(), "Dic12": S(),
    "D16": S((2,)), "C2 x Q8": S((2, 2)), "C2 x D8": S((2, 2, 2)),
}


@pytest.mark.parametrize("label", sorted(KNOWN))
def test_multiplier_values(corpus, label):
    G = corpus.get(label).group
    assert schur_multiplier(G) == KNOWN[label]
    r = bogomolov_tilde(G)
    assert r.M == KNOWN[label]
    assert r.B0_tilde.is_trivial
    assert r.route_a == r.route_b


def test_extraspecial_groups(corpus):
    assert schur_multiplier(corpus.get("2^(1+4)+").group).order == 32
    assert schur_multiplier(corpus.get("2^(1+4)-").group).order == 32
    for label in ("2^(1+4)+", "2^(1+4)-"):
        assert bogomolov_tilde(corpus.get(label).group).B0_tilde.is_trivial


def test_carrier_order_is_derived_times_kernel(corpus):
    for label in ("D8", "Q8", "S4", "C2 x C2", "A4"):
        G = corpus.get(label).group
        W = wedge_group(G, "exterior")
        assert W.carrier_order == derived_subgroup(G).order * W.kernel.order
        if W.carrier is not None:
            assert W.carrier.order == W.carrier_order
            assert set(W.kappa.image.tolist()) == set(derived_subgroup(G).elements)


def test_exterior_pair_antisymmetry(Q8):
    W = wedge_group(Q8, "exterior")
    for x in range(8):
        for y in range(8):
            k1, d1 = W.pair(x, y)
            k2, d2 = W.mul(W.pair(x, y), W.pair(y, x))
            assert d2 == Q8.identity and not np.any(k2)


def test_curly_kills_commuting_pairs(D8):
    W = wedge_group(D8, "curly")
    for x in range(8):
        for y in range(8):
            if D8.mul(x, y) == D8.mul(y, x):
                k, d = W.pair(x, y)
                assert d == D8.identity and not np.any(k)


@pytest.mark.parametrize("G", [cyclic(3), klein(), symmetric(3), quaternion(), dihedral(8)],
                         ids=["C3", "K4", "S3", "Q8", "D8"])
@pytest.mark.parametrize("kind", ["exterior", "curly"])
def test_enumerate_route_agrees(G, kind):
    lin = wedge_group(G, kind, method="linear")
    enum = wedge_group(G, kind, method="enumerate")
    assert lin.kernel == enum.kernel


def test_wedge_presentation_generator_count(K4):
    P, gen_of = wedge_presentation(K4)
    assert P.ngens == 9 and len(gen_of) == 9
    T = todd_coxeter(P)
    # K4 ^ K4 = M(K4) = C2
    assert T.ncosets == 2


def test_caps():
    with pytest.raises(CapExceeded):
        wedge_group(cyclic(65))
    with pytest.raises(ValueError):
        wedge_group(cyclic(2), kind="smash")


def test_seed_does_not_change_answer(corpus):
    G = corpus.get("C2 x D8").group
    answers = {wedge_group(G, "exterior", seed=s, materialize=False).kernel for s in range(4)}
    assert answers == {S((2, 2, 2))}


def test_relabeled_copy_has_same_invariants(corpus):
    G = corpus.get("SD16").group
    H, _ = relabel(G, list(np.random.default_rng(3).permutation(16)))
    assert bogomolov_tilde(H).to_dict()["multiplier"] == bogomolov_tilde(G).to_dict()["multiplier"]


def test_cyclic_products_match_gcd():
    from math import gcd
    for a, b in [(2, 2), (2, 4), (4, 6), (3, 6), (2, 3)]:
        g = gcd(a, b)
        M = schur_multiplier(direct_product(cyclic(a), cyclic(b)))
        assert M == (S((g,)) if g > 1 else S())


# --- functoriality -------------------------------------------------------------------

def test_identity_induces_identity(D8):
    from vb0.groups import Homomorphism
    f = Homomorphism(D8, D8, np.arange(8))
    m = induced_map(f, "exterior")
    assert m.is_injective()
    assert np.array_equal(m.matrix % m.target.model.mods, np.eye(m.matrix.shape[0], dtype=np.int64))


def test_quotient_maps_compose(corpus):
    G = corpus.get("C2 x D8").group
    for N in all_normal_subgroups(G):
        Q, pi = quotient(G, N)
        for kind in ("exterior", "curly"):
            m = induced_map(pi, kind)
            assert m.image_order * m.kernel_order == m.source.kernel.order


def test_induced_from_product_projection():
    from vb0.groups import product_projections
    A, B = klein(), cyclic(2)
    P = direct_product(A, B)
    p1, _ = product_projections(A, B, P)
    m = induced_map(p1, "exterior")
    # M(C2^3) = C2^3 maps onto M(C2^2) = C2
    assert m.image_order == 2 and m.kernel_order == 4
