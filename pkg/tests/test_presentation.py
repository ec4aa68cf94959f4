import time

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cyclic, dihedral, klein, quaternion, symmetric
from vb0.errors import CapExceeded, CosetCapExceeded, FormatError, RelatorNotKilled
from vb0.groups import from_mul_table, is_isomorphic
from vb0.presentation import (Presentation, cayley_presentation, format_presentation,
                              hom_from_presentation, image_group, parse_presentation,
                              todd_coxeter)
from vb0.words import parse_free_word


def pres(n, *rels):
    return Presentation(n, tuple(parse_free_word(r) for r in rels))


# --- Cayley presentations -------------------------------------------------------------

def test_cayley_counts_klein():
    P, gen_of = cayley_presentation(klein())
    assert P.ngens == 3 and len(P.relators) == 9
    assert len(gen_of) == 3


def test_cayley_trivial_group():
    P, gen_of = cayley_presentation(from_mul_table([[0]]))
    assert P.ngens == 0 and P.relators == () and gen_of == {}


def test_cayley_cap():
    with pytest.raises(CapExceeded):
        cayley_presentation(cyclic(10), cap=8)


@pytest.mark.parametrize("G", [cyclic(5), klein(), symmetric(3), quaternion(), dihedral(8)],
                         ids=["C5", "K4", "S3", "Q8", "D8"])
def test_cayley_round_trip(G):
    P, gen_of = cayley_presentation(G)
    T = todd_coxeter(P)
    assert T.ncosets == G.order
    H, imgs = image_group(T, P)
    assert is_isomorphic(G, H)
    # the map x_g -> g is an isomorphism
    f = hom_from_presentation(P, G, [g for g, _ in sorted(gen_of.items(), key=lambda t: t[1])])
    assert f.is_injective() and f.is_surjective()


# --- parsing ---------------------------------------------------------------------

def test_parse_and_format_round_trip():
    text = "fp 2\nx1^4\nx2^2\nx2^-1 x1 x2 x1\n"
    P = parse_presentation(text)
    assert P.ngens == 2 and len(P.relators) == 3
    assert parse_presentation(format_presentation(P)) == P


def test_parse_errors():
    with pytest.raises(FormatError):
        parse_presentation("")
    with pytest.raises(FormatError):
        parse_presentation("fp two\nx1")
    with pytest.raises(FormatError):
        pres(1, "x2^2")


# --- coset enumeration -------------------------------------------------------------

@pytest.mark.parametrize("n,rels,index", [
    (1, ["x1^7"], 7),
    (2, ["x1^3", "x2^2", "(x1 x2)^2"], 6),
    (2, ["x1^4", "x2^2", "(x1 x2)^2"], 8),
    (2, ["x1^4", "x1^2 x2^-2", "x2^-1 x1 x2 x1"], 8),
    (2, ["x1^2", "x2^3", "(x1 x2)^3"], 12),
    (2, ["x1^2", "x2^3", "(x1 x2)^4"], 24),
    (2, ["x1^2", "x2^3", "(x1 x2)^5"], 60),
    (2, ["x1", "x2"], 1),
])
def test_todd_coxeter_orders(n, rels, index):
    assert todd_coxeter(pres(n, *rels)).ncosets == index


def test_subgroup_index():
    P = pres(2, "x1^3", "x2^2", "(x1 x2)^2")
    assert todd_coxeter(P, [parse_free_word("x1")]).ncosets == 2
    assert todd_coxeter(P, [parse_free_word("x2")]).ncosets == 3


def test_table_is_a_permutation_action():
    P = pres(2, "x1^2", "x2^3", "(x1 x2)^4")
    T = todd_coxeter(P)
    for i in range(2):
        perm = T.generator_permutation(i)
        assert sorted(perm) == list(range(T.ncosets))
    for r in P.relators:
        assert all(T.apply(c, r) == c for c in range(T.ncosets))


def test_coset_cap_on_infinite_group():
    with pytest.raises(CosetCapExceeded):
        todd_coxeter(pres(2, "x1^2"), max_cosets=200)


def test_long_relator_enumeration_is_fast():
    P = pres(2, "x1^2", "x2^2", "(x1 x2)^100")
    t = time.perf_counter()
    T = todd_coxeter(P)
    assert T.ncosets == 200
    assert time.perf_counter() - t < 1.0


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_relator_order_does_not_change_the_group(rnd):
    rels = ["x1^4", "x2^2", "(x1 x2)^2", "x1^2 x2 x1^-2 x2^-1"]
    rnd.shuffle(rels)
    P = pres(2, *rels)
    T = todd_coxeter(P)
    assert T.ncosets == 8
    G, _ = image_group(T, P)
    assert is_isomorphic(G, dihedral(8))


def test_image_group_generator_images():
    P = pres(1, "x1^5")
    G, imgs = image_group(todd_coxeter(P), P)
    assert G.order == 5 and G.element_orders[imgs[0]] == 5


# --- homomorphisms ---------------------------------------------------------------

def test_hom_to_quotient():
    P = pres(2, "x1^4", "x2^2", "(x1 x2)^2")
    C2 = cyclic(2)
    f = hom_from_presentation(P, C2, [0, 1])
    assert f.is_surjective() and f.kernel().order == 4


def test_relator_not_killed():
    P = pres(2, "x1^4", "x2^2", "(x1 x2)^2")
    C4 = cyclic(4)
    gen = next(g for g in range(4) if C4.element_orders[g] == 4)
    with pytest.raises(RelatorNotKilled):
        hom_from_presentation(P, C4, [gen, gen])


def test_hom_wrong_arity():
    with pytest.raises(ValueError):
        hom_from_presentation(pres(1, "x1^2"), cyclic(2), [1, 1])
