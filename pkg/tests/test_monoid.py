import random

import pytest

from suenrich import automata
from suenrich.automata import all_words, from_regex
from suenrich.monoid import (FiniteMonoid, Morphism, RecognizedLanguage, algebraic_data,
                             format_monoid, idempotent_power, language_of, parse_monoid,
                             product_morphism, transition_monoid, witness_word)
from suenrich.errors import ParseError


@pytest.fixture(scope="module")
def ends_a_monoid(ends_a):
    return transition_monoid(ends_a)


def test_ends_a_monoid(ends_a_monoid):
    m, alpha, acc = ends_a_monoid
    assert m.size == 3
    ca, cb = alpha.image_of["a"], alpha.image_of["b"]
    # both letters act as constant maps
    assert m.mul(ca, cb) == cb and m.mul(cb, ca) == ca
    assert acc == frozenset({ca})


def test_trivial_and_parity_monoids():
    m, _, _ = transition_monoid(automata.universal(("a", "b")))
    assert m.size == 1
    m, alpha, _ = transition_monoid(from_regex("(aa)*", ("a",)))
    assert m.size == 2
    swap = alpha.image_of["a"]
    assert idempotent_power(m, swap) == (2, m.identity)


def test_algebraic_data(ends_a_monoid):
    m, alpha, _ = ends_a_monoid
    data = algebraic_data(alpha)
    assert set(data.S) == {alpha.image_of["a"], alpha.image_of["b"]}
    assert len(data.S1) == 3
    assert set(data.idempotents) == set(data.S)
    _, par, _ = transition_monoid(from_regex("(aa)*", ("a",)))
    pd = algebraic_data(par)
    assert pd.identity_in_S and pd.idempotents == (par.monoid.identity,)


def test_idempotent_powers(ends_a_monoid):
    m, alpha, _ = ends_a_monoid
    ca = alpha.image_of["a"]
    assert idempotent_power(m, ca) == (1, ca)


def test_product_morphism(ends_a_monoid):
    _, alpha, _ = ends_a_monoid
    par = Morphism(("a", "b"), FiniteMonoid(("1", "g"), ((0, 1), (1, 0)), 0), (1, 0))
    pm = product_morphism([alpha, par])
    assert pm.morphism.monoid.size <= 6
    for w in all_words(("a", "b"), 5):
        x = pm.morphism(w)
        assert pm.values[x] == (alpha(w), par(w))
    single = product_morphism([alpha])
    assert single.morphism.monoid.size == alpha.monoid.size


def test_witness_words(ends_a_monoid):
    _, alpha, _ = ends_a_monoid
    assert witness_word(alpha, alpha.image_of["a"]) == ("a",)
    assert witness_word(alpha, alpha.monoid.identity) == ()
    rng = random.Random(3)
    for _ in range(20):
        s = rng.choice(alpha.semigroup)
        w = witness_word(alpha, s, rng)
        assert w and alpha(w) == s


def test_unreachable_element_has_no_witness():
    m = FiniteMonoid(("1", "x", "y"), ((0, 1, 2), (1, 1, 2), (2, 2, 2)), 0)
    alpha = Morphism(("a",), m, (1,))
    with pytest.raises(ValueError):
        witness_word(alpha, 2)


def test_language_of(ends_a_monoid, ends_a):
    m, alpha, acc = ends_a_monoid
    assert automata.equivalent(language_of(RecognizedLanguage(alpha, acc)), ends_a)
    assert language_of(RecognizedLanguage(alpha, ())).is_empty()
    assert language_of(RecognizedLanguage(alpha, m.elements())).is_universal()


def test_monoid_format_round_trip(ends_a_monoid):
    m, alpha, acc = ends_a_monoid
    mf = parse_monoid(format_monoid(m, alpha, acc))
    assert mf.monoid.rows == m.rows and mf.morphism.images == alpha.images
    assert mf.accepting == acc


def test_non_associative_table_rejected():
    with pytest.raises(ParseError):
        parse_monoid("elements: 1 x y\nidentity: 1\ntable:\n1 x y\nx y x\ny y y\n")
