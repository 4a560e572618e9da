import random

import pytest
from hypothesis import given, settings, strategies as st

from suenrich import automata
from suenrich.automata import all_words, from_regex
from suenrich.su import (SuClass, canonical_classes, canonical_partition, class_count, class_dfa,
                         delta, parse_class, su_class_of, su_equivalent, tag, tau_preimage, untag,
                         user_partition)

AB = ("a", "b")
words = st.text("ab", max_size=6).map(tuple)


def test_class_of():
    assert su_class_of("babba", 2) == SuClass.suffix("ba")
    assert su_class_of("a", 2) == SuClass.single("a")
    assert su_class_of("abab", 0) == SuClass.suffix(())


def test_canonical_partition_sizes():
    assert len(canonical_partition(AB, 2)) == 7 == class_count(2, 2)
    assert len(canonical_partition(AB, 0)) == 1


def test_tag_examples():
    p = canonical_partition(AB, 1)
    eps, pa, pb = SuClass.single(()), SuClass.suffix("a"), SuClass.suffix("b")
    assert tag((), p) == ()
    assert tag("ab", p) == ((eps, "a"), (pa, "b"))
    assert delta("b", "ab", p) == ((pb, "a"), (pa, "b"))
    assert delta("ab", (), p) == ()
    assert delta((), "abba", p) == tag("abba", p)


@settings(max_examples=100, deadline=None)
@given(words, words, st.integers(0, 3))
def test_prefix_decomposition(u, w, k):
    p = canonical_partition(AB, k)
    assert tag(u + w, p) == tag(u, p) + delta(u, w, p)
    assert untag(tag(w, p)) == w


@settings(max_examples=50, deadline=None)
@given(words, words, st.integers(0, 3))
def test_equivalence_is_a_right_congruence(u, w, k):
    if su_equivalent(u, w, k):
        for a in AB:
            assert su_equivalent(u + (a,), w + (a,), k)


def test_class_dfas():
    assert automata.equivalent(class_dfa(SuClass.suffix("ba"), AB), from_regex("(a|b)*ba", AB))
    assert automata.equivalent(class_dfa(SuClass.single(()), AB), from_regex("ε", AB))
    assert class_dfa(SuClass.suffix(()), AB).is_universal()
    assert class_dfa(SuClass.suffix("ba"), AB).n_states <= 4


def test_classes_partition_words():
    for k in range(4):
        classes = canonical_classes(AB, k)
        for w in all_words(AB, 6):
            assert sum(c.contains(w) for c in classes) == 1


def test_tau_preimage():
    p = canonical_partition(AB, 1)
    tagged = p.tagged_alphabet
    full = automata.universal(tagged)
    assert tau_preimage(full, p).is_universal()
    assert tau_preimage(automata.empty(tagged), p).is_empty()
    eps = SuClass.single(())
    starts = automata.explore(tagged, 0, lambda q, y: {0: 1 if y == (eps, "a") else 2}.get(q, q),
                              lambda q: q == 1)
    assert automata.equivalent(tau_preimage(starts, p), from_regex("a(a|b)*", AB))


def test_user_partition_validation():
    classes = canonical_classes(AB, 1)
    p = user_partition(AB, 1, [classes[:1], classes[1:]])
    assert len(p) == 2
    with pytest.raises(ValueError):
        user_partition(AB, 1, [classes[:1], classes[:2]])
    with pytest.raises(ValueError):
        user_partition(AB, 1, [classes[:1]])


def test_class_serialization_round_trip():
    for k in range(3):
        for c in canonical_classes(AB, k):
            assert parse_class(automata.letter_repr(c)) == c


def test_coarse_tagging_uses_block_labels():
    rng = random.Random(1)
    classes = canonical_classes(AB, 2)
    rng.shuffle(classes)
    p = user_partition(AB, 2, [classes[:3], classes[3:]])
    for w in all_words(AB, 4):
        for i, (label, a) in enumerate(tag(w, p)):
            assert su_class_of(w[:i], 2) in p.members_of(label) and a == w[i]
