import pytest

from suenrich import corpus, omega
from suenrich.automata import ParseError
from suenrich.errors import InvariantViolation
from suenrich.omega import (OmegaMorphism, OmegaSemigroup, UpWord, apply_gamma, check_axioms,
                            check_eqinf, eta_omega, eval_up, format_omega, gamma_omega,
                            parse_omega, parse_upword, upword_corpus, wf_omega_alphabet,
                            wfw_omega_membership)


@pytest.fixture(scope="module")
def inf_a():
    return omega.infinitely_many_a()


def up(text):
    return parse_upword(text)


def test_upword_canonical_form():
    assert UpWord.of("ab", "ab") == UpWord.of("", "ab")
    assert UpWord.of("", "abab") == UpWord.of("", "ab")
    assert UpWord.of("b", "ab") == UpWord.of("", "ba")
    assert str(UpWord.of("a", "b")) == "a(b)^w"
    assert up("a(b)^w") == UpWord.of("a", "b")
    assert up("(ab)^w").take(5) == tuple("ababa")
    with pytest.raises(ValueError):
        UpWord.of("a", "")
    for bad in ["ab", "a()^w", "a(b^w"]:
        with pytest.raises(ParseError):
            parse_upword(bad)


def test_axioms(inf_a):
    assert all(c.passed for c in check_axioms(inf_a.algebra))
    assert all(c.passed for c in check_axioms(omega.trivial().algebra))
    for name in corpus.omega_names():
        assert all(c.passed for c in check_axioms(corpus.load_omega(name).algebra)), name


def test_corrupted_mixed_product_is_reported(inf_a):
    o = inf_a.algebra
    bad = OmegaSemigroup(o.names, o.rows, o.omega_names, ((0, 1), (1, 1)), o.omega_map)
    failed = {c.name for c in check_axioms(bad) if not c.passed}
    assert "omega-shift" in failed


def test_eval(inf_a):
    assert inf_a.algebra.omega_name(eval_up(inf_a, up("(ab)^w"))) == "w_a"
    assert inf_a.algebra.omega_name(eval_up(inf_a, up("b(b)^w"))) == "w_b"
    assert inf_a.algebra.omega_name(eval_up(inf_a, up("aaa(b)^w"))) == "w_b"


def test_wf_alphabet_sizes(inf_a):
    assert len(wf_omega_alphabet(inf_a)) == 12
    assert len(wf_omega_alphabet(omega.trivial())) == 2
    assert all(x[1] is not None for x in wf_omega_alphabet(inf_a).letters)


def test_eta_examples(inf_a):
    r = eta_omega(inf_a, up("(a)^w"))
    assert r.output == UpWord.of([(None, "x_a", "x_a")], [("x_a", "x_a", "x_a")])
    r = eta_omega(inf_a, up("(b)^w"))
    assert r.output == UpWord.of([(None, "x_b", "x_b")], [("x_b", "x_b", "x_b")])


def test_eta_identity_on_corpus(inf_a):
    a = wf_omega_alphabet(inf_a)
    for w in upword_corpus("ab", 2, 3):
        r = eta_omega(inf_a, w, alphabet=a)
        assert a.is_well_formed(r.output)
        assert a.eval(r.output) == eval_up(inf_a, w)


def test_membership(inf_a):
    a = wf_omega_alphabet(inf_a)
    F = {inf_a.algebra.omega_index["w_a"]}
    assert wfw_omega_membership(inf_a, F, eta_omega(inf_a, up("(a)^w")).output)
    assert not wfw_omega_membership(inf_a, F, eta_omega(inf_a, up("(b)^w")).output)
    not_wf = UpWord.of([], [("x_a", "x_a", "x_a")])
    assert not a.is_well_formed(not_wf)
    assert not wfw_omega_membership(inf_a, F, not_wf)


def test_gamma(inf_a):
    images = gamma_omega(inf_a, 1)
    assert images[(None, "x_a", "x_a")] == ("a", "a")
    a = wf_omega_alphabet(inf_a)
    w = UpWord.of([(None, "x_b", "x_a")], [("x_a", "x_b", "x_a")])
    assert a.is_well_formed(w)
    assert a.eval(w) == eval_up(inf_a, apply_gamma(images, w))
    with pytest.raises(ValueError):
        gamma_omega(inf_a, 0)


def test_eqinf(inf_a):
    r = check_eqinf(inf_a, up("(a)^w"))
    assert r.passed and r.f == r.g == inf_a.algebra.index["x_a"]
    r = check_eqinf(inf_a, up("(b)^w"))
    assert r.passed and r.f == r.g == inf_a.algebra.index["x_b"]
    assert check_eqinf(omega.trivial(), up("(ab)^w")).passed


def test_window_override_is_flagged(inf_a):
    with pytest.warns(RuntimeWarning):
        r = eta_omega(inf_a, up("(ab)^w"), k_override=2)
    assert r.unsafe


def test_small_window_can_break_density():
    m = corpus.load_omega("first_letter").morphism
    with pytest.warns(RuntimeWarning), pytest.raises(InvariantViolation):
        eta_omega(m, up("(ab)^w"), k_override=1)


def test_format_roundtrip(inf_a):
    text = format_omega(inf_a.algebra, inf_a, {0})
    f = parse_omega(text)
    assert f.algebra.rows == inf_a.algebra.rows
    assert f.morphism.images == inf_a.images
    assert f.accepting == frozenset({0})
    with pytest.raises(ParseError):
        parse_omega("elements: x\n")
