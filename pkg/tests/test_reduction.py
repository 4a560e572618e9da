import random

import pytest

from suenrich import automata, su
from suenrich.automata import all_words, from_regex
from suenrich.baseclasses import SIGMA1
from suenrich.errors import InvariantViolation
from suenrich.monoid import RecognizedLanguage, algebraic_data, transition_monoid
from suenrich.reduction import (build_beta, build_gamma, check_HK, check_gamma_identity,
                                corrupt_gamma, density_holds, eta, eta_class_data, eta_preimage,
                                misaligned_idempotent, scanner_preimage, separation_transfer)
from suenrich.su import SuClass, canonical_partition
from suenrich.wellformed import wfw_language

BOX = None
AB = ("a", "b")


@pytest.fixture(scope="module")
def alpha(ends_a):
    return transition_monoid(ends_a)[1]


@pytest.fixture(scope="module")
def lang(alpha):
    return RecognizedLanguage(alpha, {alpha.image_of["a"]})


def test_gamma_letter_images(alpha):
    g1 = build_gamma(alpha, 1)
    assert g1.letter_image(("a", "b", "a")) == ("a", "b", "a")
    g2 = build_gamma(alpha, 2)
    assert g2.letter_image((BOX, "b", "a")) == ("b", "a", "a")
    assert g1.letter_image((BOX, "1", BOX)) == ()


def test_gamma_identity(alpha, lang):
    for k in (1, 2, 3):
        assert check_gamma_identity(lang, build_gamma(alpha, k)).passed
    assert check_gamma_identity(RecognizedLanguage(alpha, ()), build_gamma(alpha, 1)).passed
    full = RecognizedLanguage(alpha, alpha.monoid.elements())
    assert check_gamma_identity(full, build_gamma(alpha, 2)).passed


def test_gamma_identity_with_random_witnesses(alpha, lang):
    for seed in range(5):
        g = build_gamma(alpha, 2, rng=random.Random(seed))
        assert check_gamma_identity(lang, g).passed


def test_corrupted_gamma_breaks_identity(alpha, lang):
    bad = corrupt_gamma(build_gamma(alpha, 1), seed=0)
    assert not check_gamma_identity(lang, bad).passed


def test_beta(alpha):
    g = build_gamma(alpha, 1)
    p = canonical_partition(AB, 1)
    beta = build_beta(p, g)
    assert beta(((BOX, "a", "a"),)) == ((SuClass.single(()), "a"), (SuClass.suffix("a"), "a"))
    assert beta(()) == ()
    for w in automata.enumerate_members(g.wf.language, 3):
        assert su.tag(g(w), p) == beta(w)


def test_HK_identity(alpha):
    g = build_gamma(alpha, 1)
    p = canonical_partition(AB, 1)
    pa = SuClass.suffix("a")
    tagged = p.tagged_alphabet
    full = automata.universal(tagged)
    assert check_HK(p, {c: full for c in p.labels}, g).passed
    assert check_HK(p, {pa: full}, g).passed
    target = (pa, "b")
    contains = automata.explore(tagged, 0, lambda q, y: 1 if q == 1 or y == target else 0,
                                lambda q: q == 1)
    assert check_HK(p, {c: contains for c in p.labels}, g).passed


def test_eta_examples(alpha):
    r = eta(alpha, "ab")
    assert r.positions == (1,)
    assert r.output == ((BOX, "a", "a"), ("a", "b", BOX))
    assert eta(alpha, "").output == ((BOX, "1", BOX),)
    assert eta(alpha, "a").output == ((BOX, "a", BOX),)


def test_eta_evaluates_correctly(alpha):
    data = algebraic_data(alpha)
    wf_eval = build_gamma(data, 1).wf.eval
    for w in all_words(AB, 7):
        r = eta(data, w)
        assert wf_eval(r.output) == alpha(w)
        assert density_holds(r.positions, len(w), data.monoid.size)


def test_class_data(alpha):
    cd = eta_class_data(alpha)
    assert cd.stratum == 6
    assert cd.b(SuClass.single(())) == (BOX, "1", BOX)
    assert cd.b(SuClass.single("ab")) == ("a", "b", BOX)
    p = cd.partition()
    for w in all_words(AB, 6):
        assert cd.beta_prime(su.tag(w, p)) == eta(alpha, w).truncated


def test_eta_preimage(alpha, lang):
    wf = build_gamma(alpha, 1).wf
    assert eta_preimage(wf.language, alpha).assembled.is_universal()
    assert eta_preimage(automata.empty(wf.letters), alpha).assembled.is_empty()
    shape = eta_preimage(wfw_language(lang, wf), alpha)
    assert automata.equivalent(shape.assembled, lang.dfa)
    assert shape.stratum == 2 * alpha.monoid.size
    assert automata.equivalent(scanner_preimage(wfw_language(lang, wf), alpha), lang.dfa)


def test_enriched_shape_literal_matches_assembled(alpha, lang):
    wf = build_gamma(alpha, 1).wf
    shape = eta_preimage(wfw_language(lang, wf), alpha)
    assert automata.equivalent(shape.literal(), shape.assembled)


def test_misaligned_selector_is_caught():
    from suenrich import corpus
    e = corpus.entry("contains_a")
    data = algebraic_data(e.morphism)
    r = eta(data, "b", misaligned_idempotent)
    assert build_gamma(data, 1).wf.eval(r.output) != e.morphism("b")


def test_separation_examples():
    l1 = from_regex("(a|b)*a", AB)
    l2 = from_regex("(a|b)*b", AB)
    from suenrich.monoid import common_morphism, recognized
    r1, r2 = common_morphism([recognized(l1), recognized(l2)])
    res = separation_transfer(r1, r2, SIGMA1)
    assert res.verdict and res.checks_passed
    assert res.stratum == 2 * r1.morphism.monoid.size
    cert = res.certificate()
    assert cert["verdict"] == "separable" and cert["stratum"] == res.stratum
    same = separation_transfer(r1, r1, SIGMA1, lift=False)
    assert not same.verdict
    empty = RecognizedLanguage(r1.morphism, ())
    res = separation_transfer(r1, empty, SIGMA1)
    assert res.verdict and res.checks_passed


def test_languages_must_share_a_morphism(alpha, lang):
    other = transition_monoid(from_regex("(a|b)*b", AB))[1]
    with pytest.raises(ValueError):
        separation_transfer(lang, RecognizedLanguage(other, ()), SIGMA1)
