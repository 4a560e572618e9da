import pytest
from hypothesis import given, settings, strategies as st

from suenrich import automata
from suenrich.automata import (all_words, combine, compare, complement, enumerate_members,
                               equivalent, from_regex, parse_dfa, format_dfa, parse_word,
                               preimage_morphism, right_quotient, word_repr)
from suenrich.errors import ParseError

AB = ("a", "b")


def test_parse_ends_a(ends_a):
    assert ends_a.n_states == 2
    for w in all_words(AB, 5):
        assert ends_a.accepts(w) == (len(w) > 0 and w[-1] == "a")


def test_no_accepting_state_is_empty():
    d = parse_dfa("alphabet: a b\nstates: 1\ninitial: 0\naccepting:\n0 a 0\n0 b 0\n")
    assert d.is_empty()


def test_undeclared_state_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_dfa("alphabet: a b\nstates: 1\ninitial: 0\naccepting: 0\n0 a 3\n")


def test_missing_transitions_go_to_a_sink():
    d = parse_dfa("alphabet: a b\nstates: 2\ninitial: 0\naccepting: 1\n0 a 1\n")
    assert d.accepts("a") and not d.accepts("ab") and not d.accepts("b")


def test_format_round_trip(ends_a):
    assert equivalent(parse_dfa(format_dfa(ends_a)), ends_a)


def test_boolean_identities(ends_a):
    empty = automata.empty(AB)
    assert equivalent(combine("union", [ends_a, empty]), ends_a)
    assert equivalent(complement(complement(ends_a)), ends_a)
    ends_b = from_regex("(a|b)*b", AB)
    assert combine("intersection", [ends_a, ends_b]).is_empty()


def test_right_quotient(ends_a):
    assert right_quotient(ends_a, "a").is_universal()
    assert equivalent(right_quotient(ends_a, ""), ends_a)
    assert right_quotient(automata.empty(AB), "ab").is_empty()


def test_preimage_morphism():
    abstar = from_regex("(ab)*", AB)
    pre = preimage_morphism(abstar, {"a": ("a", "b")}, alphabet=("a",))
    assert equivalent(pre, from_regex("a*", ("a",)))
    d = from_regex("ε", AB)
    erase = preimage_morphism(d, {"a": (), "b": ()})
    assert erase.is_universal()


def test_compare(ends_a):
    assert equivalent(ends_a, ends_a.canonical)
    c = compare(ends_a, automata.universal(AB))
    assert c.relation == "subset"
    assert c.only_second == ()
    assert compare(ends_a, from_regex("(a|b)*a", AB)).relation == "equal"


def test_enumerate_members(ends_a):
    assert [word_repr(w) for w in enumerate_members(ends_a, 2)] == ["a", "aa", "ba"]
    assert enumerate_members(automata.empty(AB), 3) == []
    assert enumerate_members(from_regex("ε", AB), 3) == [()]


def test_parse_word_tuples():
    assert parse_word("ab") == ("a", "b")
    assert parse_word("(#,a,x)(x,b,#)") == ((None, "a", "x"), ("x", "b", None))


def test_regex_matches_bruteforce():
    d = from_regex("(a|b)*aa(a|b)*", AB)
    for w in all_words(AB, 6):
        assert d.accepts(w) == ("aa" in "".join(w))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.text("ab", max_size=4), max_size=4), min_size=2, max_size=2))
def test_finite_languages_boolean_ops(sets):
    x, y = sets
    dx, dy = automata.from_words(AB, x), automata.from_words(AB, y)
    u = combine("union", [dx, dy])
    i = combine("intersection", [dx, dy])
    for w in all_words(AB, 4):
        s = "".join(w)
        assert u.accepts(w) == (s in x or s in y)
        assert i.accepts(w) == (s in x and s in y)
    assert automata.minimize(u).n_states <= u.n_states
