import pytest
from hypothesis import given, settings, strategies as st

from conftest import cyclic, dihedral, quaternion, symmetric
from vb0.errors import CapExceeded, MissingAssignment, NotNormal, VariableReuse, WordSyntaxError
from vb0.groups import (all_normal_subgroups, center, derived_subgroup, direct_product,
                        is_normal, parse_permutation, product_projections, quotient,
                        subgroup_generated, trivial_subgroup, whole)
from vb0.words import (Comm, Leaf, Word, abelian, compose, evaluate, hall_bracket, is_composite_of,
                       left_normed, marginal_subgroup, nilpotent, parse_free_word, parse_variety,
                       parse_word, value_set, verbal_subgroup, word_value_set)


# --- parsing --------------------------------------------------------------------

def test_parse_simple_commutator():
    w = parse_word("[x1,x2]")
    assert w == Comm(Leaf(1), Leaf(2)) and w.weight == 2


def test_parse_left_normed():
    assert parse_word("[x1,x2,x3]") == Comm(Comm(Leaf(1), Leaf(2)), Leaf(3))
    assert parse_word("[x1, x2, x3, x4]") == left_normed(4)


def test_variable_reuse():
    with pytest.raises(VariableReuse) as exc:
        parse_word("[x1,x1]")
    assert exc.value.variable == 1


@pytest.mark.parametrize("text,pos", [("[x1,", 4), ("[x1 x2]", 4), ("y1", 0), ("[x1,x2]]", 7), ("[x1]", 0)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(WordSyntaxError) as exc:
        parse_word(text)
    assert exc.value.position == pos


def test_free_word_parsing():
    w = parse_free_word("x1 x2^-1 (x1 x2)^2")
    assert w.flat() == [1, -2, 1, 2, 1, 2]
    assert parse_free_word("x1 x1^-1").letters == ()
    assert parse_free_word("[x1,x2]").flat() == [-1, -2, 1, 2]
    assert len(Word.from_flat([1, 1, -2])) == 3


# --- composition ----------------------------------------------------------------

def test_compose_commutators():
    c = compose(parse_word("[x1,x2]"), parse_word("[x1,x2]"))
    assert c == parse_word("[[x1,x2],[x3,x4]]") and c.weight == 4


def test_compose_with_single_variable():
    v = parse_word("[x1,x2,x3]")
    assert compose(Leaf(1), v) == v


def test_compose_weight_multiplies():
    assert compose(left_normed(3), left_normed(2)).weight == 6
    assert is_composite_of(compose(left_normed(3), left_normed(2)), left_normed(3)) == ((), ())


# --- evaluation -----------------------------------------------------------------

def test_evaluate_commuting_pair_is_trivial():
    G = cyclic(6)
    assert evaluate(parse_word("[x1,x2]"), G, [2, 5]) == G.identity


def test_evaluate_in_s3_gives_three_cycle():
    S3 = symmetric(3)
    idx = {p: i for i, p in enumerate(S3.permutations)}
    a, b = idx[parse_permutation("(1 2)", 3)], idx[parse_permutation("(1 2 3)", 3)]
    c = evaluate(parse_word("[x1,x2]"), S3, {1: a, 2: b})
    assert S3.element_orders[c] == 3
    # [a,b] = a^-1 b^-1 a b
    assert c == S3.product([S3.inverse(a), S3.inverse(b), a, b])


def test_evaluate_identity_assignment():
    G = dihedral(8)
    w = parse_word("[[x1,x2],[x3,x4],x5]")
    assert evaluate(w, G, [G.identity] * 5) == G.identity


def test_missing_assignment():
    with pytest.raises(MissingAssignment) as exc:
        evaluate(parse_word("[x1,x2]"), cyclic(3), {1: 0})
    assert exc.value.variable == 2


def test_evaluate_matches_free_word(corpus):
    G = corpus.get("Q8").group
    w = parse_word("[x1,x2,x3]")
    free = parse_free_word("[x1,x2,x3]")
    for a in range(8):
        for b in range(8):
            assert evaluate(w, G, [a, b, 3]) == free.evaluate(G, [a, b, 3])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["D8", "Q8", "D12", "A4", "S4"]), st.data())
def test_evaluation_commutes_with_quotients(label, data):
    G =_CORPUS().get(label).group
    normals = all_normal_subgroups(G)
    N = data.draw(st.sampled_from(normals))
    Q, pi = quotient(G, N)
    w = parse_word(data.draw(st.sampled_from(["[x1,x2]", "[x1,x2,x3]", "[[x1,x2],[x3,x4]]"])))
    args = [data.draw(st.integers(0, G.order - 1)) for _ in range(w.weight)]
    assert pi(evaluate(w, G, args)) == evaluate(w, Q, [pi(a) for a in args])


_cache = {}


def _CORPUS():
    if "c" not in _cache:
        from vb0.harness import load_corpus
        _cache["c"] = load_corpus()
    return _cache["c"]


# --- value sets, verbal and marginal subgroups ---------------------------------------

def test_value_set_abelian_law_on_abelian_group():
    assert value_set(abelian(), cyclic(7)) == frozenset({0})


def test_value_set_s3_is_the_order_three_subgroup():
    S3 = symmetric(3)
    assert value_set(abelian(), S3) == frozenset(derived_subgroup(S3).elements)


def test_value_set_q8_is_centre():
    Q8 = quaternion()
    assert value_set(abelian(), Q8) == frozenset(center(Q8).elements)


def test_value_set_contains_identity(corpus):
    for e in corpus.upto(16):
        for V in (abelian(), nilpotent(2)):
            assert e.group.identity in value_set(V, e.group)


def test_value_set_cap():
    from vb0.words import law_values
    with pytest.raises(CapExceeded):
        law_values(left_normed(6), cyclic(32), cap=10**6)


def test_word_value_set_against_brute_force(corpus):
    import itertools

    G = corpus.get("D8").group
    w = parse_word("[x1,x2,x3]")
    brute = {evaluate(w, G, t) for t in itertools.product(range(8), repeat=3)}
    assert set(word_value_set(w, G).tolist()) == brute


def test_abelian_law_identities_on_corpus(corpus):
    for e in corpus.upto(24):
        G = e.group
        assert marginal_subgroup(abelian(), G) == center(G), e.label
        assert verbal_subgroup(abelian(), G) == derived_subgroup(G), e.label


def test_nilpotent_two_on_d8(D8):
    V = nilpotent(2)
    assert verbal_subgroup(V, D8).is_trivial()
    assert marginal_subgroup(V, D8) == whole(D8)


def test_marginal_is_normal(corpus):
    for e in corpus.upto(16):
        for V in (abelian(), nilpotent(2), parse_variety("[[x1,x2],[x3,x4]]")):
            assert is_normal(e.group, marginal_subgroup(V, e.group))


def test_verbal_of_product_is_product_of_verbals(corpus):
    G1, G2 = corpus.get("S3").group, corpus.get("Q8").group
    P = direct_product(G1, G2)
    for V in (abelian(), nilpotent(2)):
        v1, v2 = verbal_subgroup(V, G1), verbal_subgroup(V, G2)
        expected = {a * G2.order + b for a in v1.elements for b in v2.elements}
        assert set(verbal_subgroup(V, P).elements) == expected
        T = value_set(V, P)
        t1, t2 = value_set(V, G1), value_set(V, G2)
        assert {a * G2.order + b for a in t1 for b in t2} <= T


def test_parse_variety_names():
    assert str(parse_variety("abelian")) == "abelian"
    assert parse_variety("nilpotent-3").laws == (left_normed(4),)
    v = parse_variety("compose:[x1,x2]:[x1,x2]")
    assert v.laws[0] == parse_word("[[x1,x2],[x3,x4]]")
    with pytest.raises(ValueError):
        nilpotent(0)


# --- the bracket [N V* G] ------------------------------------------------------

def test_hall_bracket_trivial_n(D8):
    assert hall_bracket(trivial_subgroup(D8), abelian(), D8).is_trivial()


def test_hall_bracket_whole_group_is_derived(corpus):
    for e in corpus.upto(16):
        G = e.group
        assert hall_bracket(whole(G), abelian(), G) == derived_subgroup(G)


def test_hall_bracket_central_is_trivial(corpus):
    for e in corpus.upto(16):
        G = e.group
        assert hall_bracket(center(G), abelian(), G).is_trivial()


def test_hall_bracket_requires_normal(S3):
    t = next(x for x in range(6) if S3.element_orders[x] == 2)
    with pytest.raises(NotNormal):
        hall_bracket(subgroup_generated(S3, [t]), abelian(), S3)
