from suenrich import automata
from suenrich.automata import all_words
from suenrich.monoid import RecognizedLanguage, algebraic_data, transition_monoid
from suenrich.wellformed import eval_word, is_well_formed, wf_alphabet, wf_language, wfw_language

BOX = None


def _setup(d):
    m, alpha, acc = transition_monoid(d)
    return alpha, wf_alphabet(alpha), acc


def test_alphabet_sizes(ends_a):
    _, wf, _ = _setup(ends_a)
    assert len(wf) == 27
    _, triv, _ = _setup(automata.universal(("a", "b")))
    assert len(triv) == 4


def test_box_identity_letter_always_present(ends_a):
    alpha, wf, _ = _setup(ends_a)
    assert (BOX, "1", BOX) in wf


def test_well_formedness(ends_a):
    _, wf, _ = _setup(ends_a)
    assert not is_well_formed((), wf)
    assert is_well_formed(((BOX, "a", "a"), ("a", "b", BOX)), wf)
    assert not is_well_formed(((BOX, "a", "a"), ("b", "b", BOX)), wf)
    lang = wf_language(wf)
    assert lang.accepts(((BOX, "a", "a"), ("a", "b", BOX)))
    assert not lang.accepts(())
    assert lang.n_states <= len(wf.data.idempotents) + 3


def test_wf_language_matches_predicate(ends_a):
    _, wf, _ = _setup(ends_a)
    lang = wf_language(wf)
    for w in all_words(wf.letters, 2):
        assert lang.accepts(w) == is_well_formed(w, wf)


def test_eval(ends_a):
    alpha, wf, _ = _setup(ends_a)
    assert alpha.monoid.name(eval_word(((BOX, "a", "a"), ("a", "b", BOX)), wf)) == "b"
    assert eval_word((), wf) == alpha.monoid.identity


def test_wfw_language(ends_a):
    alpha, wf, acc = _setup(ends_a)
    r = RecognizedLanguage(alpha, acc)
    W = wfw_language(r, wf)
    assert W.accepts(((BOX, "a", BOX),))
    assert not W.accepts(((BOX, "b", BOX),))
    assert wfw_language(RecognizedLanguage(alpha, ()), wf).is_empty()
    full = wfw_language(RecognizedLanguage(alpha, alpha.monoid.elements()), wf)
    assert automata.equivalent(full, wf.language)


def test_wfw_members_evaluate_into_F(ends_a):
    alpha, wf, acc = _setup(ends_a)
    W = wfw_language(RecognizedLanguage(alpha, acc), wf)
    for w in automata.enumerate_members(W, 3):
        assert is_well_formed(w, wf) and wf.eval(w) in acc
