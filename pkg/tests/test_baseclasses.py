from hypothesis import given, settings
from hypothesis import strategies as st

from suenrich import automata
from suenrich.automata import all_words, from_regex
from suenrich.baseclasses import (AT, SIGMA1, ContentCongruence, SuCongruence, at_covering,
                                  at_su_covering_oracle, finite_congruence_covering, get_solver,
                                  _letters, is_subword, realizable_contents, realizable_intervals,
                                  sigma1_covering, sigma1_separation, subword_closure)
from suenrich.efgames import preorder_witnesses

AB = ("a", "b")


def words(*ws):
    return automata.from_words(AB, [tuple(w) for w in ws])


def test_subword_closure():
    assert automata.equivalent(subword_closure(words("ab")), from_regex("(a|b)*a(a|b)*b(a|b)*", AB))
    assert subword_closure(automata.empty(AB)).is_empty()
    assert subword_closure(automata.universal(AB)).is_universal()


def test_closure_against_bruteforce():
    base = ["ab", "bba"]
    up = subword_closure(words(*base))
    for w in all_words(AB, 6):
        assert up.accepts(w) == any(is_subword(u, w) for u in base)


def test_sigma1_separation():
    r = sigma1_separation(words("ab"), words("ba"))
    assert r.separable
    assert automata.equivalent(r.separator, subword_closure(words("ab")))
    r = sigma1_separation(words("ab"), words("aab"))
    assert not r.separable
    w1, w2 = r.witness
    assert is_subword(w1, w2)
    r = sigma1_separation(automata.empty(AB), words("a"))
    assert r.separable and r.separator.is_empty()


def test_sigma1_covering_soundness():
    L = from_regex("a(a|b)*", AB)
    r = sigma1_covering(L, [words("b", "bb"), from_regex("b*", AB)])
    assert r.coverable
    union = automata.union(*r.cover)
    assert automata.included(L, union)


def test_at_covering():
    a_plus = from_regex("a+", ("a",))
    assert at_covering(a_plus, [from_regex("ε", ("a",))]).coverable
    L = from_regex("a(a|b)*", AB)
    assert not at_covering(L, [automata.universal(AB)]).coverable
    assert at_covering(automata.empty(AB), [L]).coverable


def test_finite_congruence_covering():
    ends_a = from_regex("(a|b)*a", AB)
    ends_b = from_regex("(a|b)*b", AB)
    assert finite_congruence_covering(SuCongruence(AB, 1), ends_a, [ends_b]).coverable
    assert not finite_congruence_covering(SuCongruence(AB, 1), ends_a, [ends_a]).coverable
    # a single class: coverable only when L is empty or some Lb member is
    one = SuCongruence(AB, 0)
    assert not finite_congruence_covering(one, ends_a, [ends_b]).coverable
    assert finite_congruence_covering(one, ends_a, [automata.empty(AB)]).coverable
    assert finite_congruence_covering(ContentCongruence(AB), from_regex("a+", AB),
                                      [from_regex("(a|b)*b(a|b)*", AB)]).coverable


def test_at_su_oracle():
    ends_a = from_regex("(a|b)*a", AB)
    ends_b = from_regex("(a|b)*b", AB)
    assert at_su_covering_oracle(ends_a, [ends_b], 1).coverable
    assert not at_su_covering_oracle(ends_a, [from_regex("a(a|b)*", AB)], 2).coverable


def test_registry():
    assert get_solver("sigma1") is SIGMA1
    assert get_solver("at") is AT
    assert get_solver("su2").name == "su2"
    assert not get_solver("su2").transferable
    assert SIGMA1.transferable and AT.transferable


def test_negative_sigma1_answer_has_game_witness():
    L1, L2 = words("ab"), words("aab", "abb")
    assert not sigma1_separation(L1, L2).separable
    s = preorder_witnesses(L1, L2, ranks=(1, 2), max_len=4, sig="lt")
    assert s.complete


def _random_dfa(rng, n, alphabet):
    lines = [f"alphabet: {' '.join(alphabet)}", f"states: {n}", "initial: 0",
             "accepting: " + ",".join(str(q) for q in range(n) if rng.random() < 0.4)]
    lines += [f"{q} {a} {rng.randrange(n)}" for q in range(n) for a in alphabet if rng.random() < 0.85]
    return automata.parse_dfa("\n".join(lines) + "\n")


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(1, 4), st.integers(1, 5), st.integers(1, 3))
def test_at_intervals_against_content_enumeration(rng, nl, n, nb):
    alphabet = ("a", "b", "c", "d")[:nl]
    d = _random_dfa(rng, n, alphabet)
    contents = realizable_contents(d)
    spread = {c for lo, up in realizable_intervals(d) for c in range(1 << nl)
              if lo & ~c == 0 and c & ~up == 0}
    assert spread == contents
    Lb = [_random_dfa(rng, rng.randint(1, 4), alphabet) for _ in range(nb)]
    others = [realizable_contents(b) for b in Lb]
    r = at_covering(d, Lb)
    assert r.coverable == all(any(c not in o for o in others) for c in contents)
    if r.coverable:
        assert automata.included(d, automata.union(automata.empty(alphabet), *r.cover))
        for k in r.cover:
            assert any(automata.disjoint(k, b) for b in Lb)
    else:
        assert d.accepts(r.witness)
        assert all(any(_letters(c, alphabet) == frozenset(r.witness) for c in o) for o in others)


def test_interval_families_beyond_64_letters():
    from suenrich.baseclasses import _Antichain, _Intervals
    for width in (3, 70):
        top = 1 << (width - 1)
        chain = _Antichain(width)
        assert chain.add(1, 1 | top) is not None
        assert chain.add(1, 1) is None
        assert chain.add(0, 3 | top) is not None
        assert chain.items() == [(0, 3 | top)]
        fam = _Intervals([(1, 1 | top)], width)
        assert fam.meeting(0, 1).all() and fam.misses(2, 2)
