"""Well-formed words over idempotent-bracketed triples.

Given a morphism ``α: A* → M`` with ``S = α(A⁺)``, the letters are triples
``(e, s, f)`` with ``s ∈ S¹`` and ``e, f`` idempotents of ``S`` or the box
``□`` (represented by ``None`` and serialized as ``#``).  A word
``(e_0,s_0,f_0)⋯(e_n,s_n,f_n)`` is well formed when ``e_0 = □``, ``f_n = □``
and ``f_i = e_{i+1}`` is an idempotent at every inner boundary.  Such a word
describes a factorization of some word of ``A*`` at chosen positions, and
:func:`eval` computes its value in ``M``.

Letters store element *names*, so they serialize transparently
(e.g. ``(#,a,b)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import automata
from .automata import Dfa, letter_key
from .monoid import AlgebraicData, Morphism, RecognizedLanguage, algebraic_data

BOX = None


@dataclass(frozen=True, eq=False)
class WfAlphabet:
    """The triple alphabet attached to a morphism (and its idempotent order)."""

    data: AlgebraicData

    @property
    def morphism(self) -> Morphism:
        return self.data.morphism

    @property
    def monoid(self):
        return self.data.monoid

    @cached_property
    def letters(self) -> tuple:
        n = self.monoid.name
        sides = [BOX] + [n(e) for e in self.data.idempotents]
        mids = [n(s) for s in self.data.S1]
        return tuple(sorted(product(sides, mids, sides), key=letter_key))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, x) -> bool:
        return x in self.decoded

    @cached_property
    def decoded(self) -> dict:
        """letter -> (e, s, f) as element indices (``None`` for the box)."""
        idx = self.monoid.index
        return {x: tuple(None if p is None else idx[p] for p in x) for x in self.letters}

    def encode(self, e, s, f) -> tuple:
        n = self.monoid.name
        letter = (None if e is None else n(e), n(s), None if f is None else n(f))
        if letter not in self.decoded:
            raise ValueError(f"{automata.letter_repr(letter)} is not a well-formed letter")
        return letter

    def decode(self, letter) -> tuple:
        try:
            return self.decoded[letter]
        except KeyError:
            raise ValueError(f"{automata.letter_repr(letter)} is not a well-formed letter") from None

    def eval_letter(self, letter) -> int:
        e, s, f = self.decode(letter)
        mul = self.monoid.mul
        v = s
        if e is not None:
            v = mul(e, v)
        if f is not None:
            v = mul(v, f)
        return v

    @cached_property
    def eval_morphism(self) -> Morphism:
        return Morphism(self.letters, self.monoid, tuple(self.eval_letter(x) for x in self.letters))

    def eval(self, w: Sequence) -> int:
        return self.eval_morphism(w)

    @cached_property
    def language(self) -> Dfa:
        return wf_language(self)


def wf_alphabet(m: Morphism | AlgebraicData) -> WfAlphabet:
    data = m if isinstance(m, AlgebraicData) else algebraic_data(m)
    return WfAlphabet(data)


def is_well_formed(w: Sequence, a: WfAlphabet) -> bool:
    if len(w) == 0:
        return False
    try:
        dec = [a.decode(x) for x in w]
    except ValueError:
        return False
    if dec[0][0] is not None or dec[-1][2] is not None:
        return False
    for (_, _, f), (e, _, _) in zip(dec, dec[1:]):
        if f is None or f != e:
            return False
    return True


_START, _FINAL, _SINK = "start", "final", "sink"


def _wf_step(a: WfAlphabet):
    def step(q, x):
        e, _, f = a.decoded[x]
        if q == _START:
            ok = e is None
        elif q in (_FINAL, _SINK):
            ok = False
        else:
            ok = e == q
        if not ok:
            return _SINK
        return _FINAL if f is None else f
    return step


def wf_language(a: WfAlphabet) -> Dfa:
    """Automaton of all well-formed words (at most ``|E(S)| + 3`` states)."""
    return automata.explore(a.letters, _START, _wf_step(a), lambda q: q == _FINAL).canonical


def eval_word(w: Sequence, a: WfAlphabet) -> int:
    """Value of a word over the triple alphabet; ``1_M`` for ε."""
    return a.eval(w)


eval = eval_word  # noqa: A001 - the operation is conventionally called eval


def wfw_language(r: RecognizedLanguage, a: WfAlphabet | None = None) -> Dfa:
    """Well-formed words whose value lies in ``α(L)``."""
    if a is None:
        a = wf_alphabet(r.morphism)
    elif a.morphism is not r.morphism:
        raise ValueError("alphabet and language use different morphisms")
    step_wf = _wf_step(a)
    val = {x: a.eval_letter(x) for x in a.letters}
    mul = a.monoid.mul
    acc = r.accepting

    def step(state, x):
        q, v = state
        q2 = step_wf(q, x)
        if q2 == _SINK:
            return (_SINK, None)
        return (q2, mul(v, val[x]))

    return automata.explore(a.letters, (_START, a.monoid.identity), step,
                            lambda s: s[0] == _FINAL and s[1] in acc).canonical


def wfw_languages(rs: Iterable[RecognizedLanguage], a: WfAlphabet | None = None) -> list[Dfa]:
    rs = list(rs)
    if a is None and rs:
        a = wf_alphabet(rs[0].morphism)
    return [wfw_language(r, a) for r in rs]


def parse_wf_word(text: str, a: WfAlphabet) -> tuple:
    w = automata.parse_word(text)
    for x in w:
        a.decode(x)
    return w
