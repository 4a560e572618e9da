from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suenrich.automata import all_words, from_regex
from suenrich.efgames import (ORDER, SUCCESSOR, fo2_equiv, fo2_game, preorder_witnesses,
                              sigma_game, sigma_preorder, split_rank_oracle, subword_rank_oracle,
                              verify_fo2_transfer, verify_sigma_transfer)
from suenrich.errors import CapacityError

AB = ("a", "b")
short = st.text(alphabet="ab", max_size=5)


def test_fo2_examples():
    assert not fo2_equiv("ab", "ba", 2, ORDER)
    assert fo2_equiv("ab", "ba", 1, ORDER)
    assert fo2_equiv("ab", "ba", 0, SUCCESSOR)
    assert fo2_equiv("abba", "abba", 3, SUCCESSOR)
    v = fo2_game("ab", "ba", 2)
    assert not v.holds and v.trace


def test_fo2_successor_is_finer():
    # aab vs abb: order-only rank 1 cannot tell, successor of order 2 can
    for w, w2 in product(all_words(AB, 4), repeat=2):
        if fo2_equiv(w, w2, 2, SUCCESSOR):
            assert fo2_equiv(w, w2, 2, ORDER)


@settings(max_examples=40, deadline=None)
@given(short, short, short)
def test_fo2_is_an_equivalence(u, v, w):
    for k in (1, 2):
        assert fo2_equiv(u, u, k)
        assert fo2_equiv(u, v, k) == fo2_equiv(v, u, k)
        if fo2_equiv(u, v, k) and fo2_equiv(v, w, k):
            assert fo2_equiv(u, w, k)
        if fo2_equiv(u, v, k + 1):
            assert fo2_equiv(u, v, k)


def test_subword_oracle_examples():
    assert subword_rank_oracle("ab", "aabb", 2)
    assert not subword_rank_oracle("aabb", "ab", 2)
    assert subword_rank_oracle("", "ab", 3)


def test_sigma_examples():
    assert sigma_preorder("abba", "abba", 2, 3)
    for k in range(4):
        assert sigma_preorder("", "ab", 1, k)
    assert sigma_preorder("ab", "aabb", 1, 2)
    assert not sigma_preorder("ba", "ab", 1, 2)


def test_sigma1_rank_is_nesting_depth():
    # at rank 2 the game sees that every position of aaa has an a on both
    # sides or at a border; the rank-2 subword relation does not
    assert subword_rank_oracle("aaa", "aa", 2)
    assert not sigma_preorder("aaa", "aa", 1, 2)
    assert not split_rank_oracle("aaa", "aa", 2)


def test_sigma1_game_matches_split_oracle():
    words = all_words(AB, 4)
    for w, w2 in product(words, repeat=2):
        for k in (1, 2, 3):
            assert sigma_preorder(w, w2, 1, k) == split_rank_oracle(w, w2, k)
        assert sigma_preorder(w, w2, 1, 1) == subword_rank_oracle(w, w2, 1)


def test_sigma_level_direction():
    # ε ≼ a for existential sentences, but ¬∃x distinguishes them at level 2
    assert sigma_preorder("", "a", 1, 1)
    assert not sigma_preorder("", "a", 2, 1)


def test_sigma_bounds():
    with pytest.raises(CapacityError):
        sigma_preorder("a" * 11, "a", 1, 1)
    with pytest.raises(CapacityError):
        sigma_preorder("a", "a", 1, 5)
    assert sigma_preorder("a" * 11, "a" * 11, 1, 1, max_len=12)


def test_sigma_signatures_and_trace():
    # successor sees aab vs aba ordering of the double letter
    assert not sigma_preorder("aa", "aba", 1, 2, SUCCESSOR)
    assert sigma_preorder("aa", "aba", 1, 2, ORDER)
    v = sigma_game("aa", "aba", 1, 2, "succ")
    assert v.to_json()["holds"] is False and v.trace


def test_fo2_transfer_report():
    r = verify_fo2_transfer(5, 1)
    assert r.passed and r.checked > 0 and r.premise_held > 0
    assert r.to_json()["pass"]


@pytest.mark.parametrize("n", [1, 2])
def test_sigma_transfer_report(n):
    r = verify_sigma_transfer(4, 1, n)
    assert r.passed, r.to_json()


def test_preorder_witnesses():
    a_star = from_regex("a*", AB)
    has_ab = from_regex("(a|b)*ab(a|b)*", AB)
    s = preorder_witnesses(a_star, has_ab, ranks=(1, 2), max_len=7)
    assert s.complete
    for m, (u, v) in s.found.items():
        assert set(u) <= {"a"} and has_ab.accepts(v)
        assert sigma_preorder(u, v, 1, m, SUCCESSOR)
    assert s.to_json()["note"].startswith("corroboration")
    none = preorder_witnesses(from_regex("b", AB), from_regex("a*", AB), ranks=(1,), max_len=4)
    assert not none.complete
