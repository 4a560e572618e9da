"""Suffix-language strata, canonical partitions and prefix taggings.

For a stratum ``k`` the words over ``A`` fall into finitely many classes:
``A*v`` for each ``v`` of length exactly ``k`` (long words, classified by
their last ``k`` letters) and ``{w}`` for each ``w`` shorter than ``k``.
The class of ``w·a`` only depends on the class of ``w`` and on ``a``, which
makes the tagging map a letter-to-letter sequential transducer.

The tagging of ``w = a_0 ⋯ a_{n-1}`` relabels position ``i`` with the pair
``(class of a_0⋯a_{i-1}, a_i)``; :func:`delta` is the same relabeling
started from a left context ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import automata
from .automata import Dfa, letter_key, letter_repr, sort_alphabet, word_repr
from .errors import CapacityError, ParseError

DEFAULT_MAX_STRATUM = 8


class SuClass(NamedTuple):
    """One class of a canonical partition: ``A*word`` or ``{word}``."""

    kind: str  # "suffix" or "single"
    word: tuple

    @classmethod
    def suffix(cls, word: Sequence) -> "SuClass":
        return cls("suffix", tuple(word))

    @classmethod
    def single(cls, word: Sequence) -> "SuClass":
        return cls("single", tuple(word))

    @property
    def is_suffix(self) -> bool:
        return self.kind == "suffix"

    def contains(self, w: Sequence) -> bool:
        w = tuple(w)
        if self.kind == "single":
            return w == self.word
        return len(w) >= len(self.word) and (not self.word or w[-len(self.word):] == self.word)

    __contains__ = contains

    def representative(self) -> tuple:
        """The defining word: the shortest member of the class."""
        return self.word

    def __letter_key__(self):
        return (0 if self.kind == "single" else 1, len(self.word),
                tuple(letter_key(x) for x in self.word))

    def __letter_repr__(self):
        body = "" if not self.word else _plain_word(self.word)
        return "[" + ("*" if self.is_suffix else "=") + body + "]"

    def __str__(self):
        if self.is_suffix:
            return "A*" + ("" if not self.word else word_repr(self.word))
        return "{" + word_repr(self.word) + "}"


def _plain_word(w: Sequence) -> str:
    parts = [letter_repr(x) for x in w]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ".".join(parts)


def parse_class(text: str) -> SuClass:
    """Inverse of the bracketed class serialization (``[*ba]``, ``[=a]``, ``[=]``)."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")) or len(text) < 3:
        raise ParseError(f"malformed class {text!r}")
    kind, body = text[1], text[2:-1]
    if kind not in "*=":
        raise ParseError(f"malformed class {text!r}")
    word = tuple(body.split(".")) if "." in body else tuple(body)
    return SuClass("suffix" if kind == "*" else "single", word)


def parse_tagged_letter(text: str):
    """Parse ``([*ba],a)`` into ``(SuClass.suffix('ba'), 'a')``."""
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError(f"malformed tagged letter {text!r}")
    inner = text[1:-1]
    cut = inner.rfind("],")
    if cut < 0:
        raise ParseError(f"malformed tagged letter {text!r}")
    return parse_class(inner[:cut + 1]), automata.parse_letter(inner[cut + 2:])


def su_class_of(w: Sequence, k: int) -> SuClass:
    """Class of ``w`` in the canonical partition of stratum ``k``."""
    if k < 0:
        raise ValueError("stratum must be nonnegative")
    w = tuple(w)
    if len(w) >= k:
        return SuClass.suffix(w[len(w) - k:])
    return SuClass.single(w)


def su_equivalent(u: Sequence, w: Sequence, k: int) -> bool:
    """``u`` and ``w`` share their length-``k`` suffix, or are equal short words."""
    return su_class_of(u, k) == su_class_of(w, k)


def next_class(c: SuClass, a, k: int) -> SuClass:
    """Class of ``w·a`` for any ``w`` in ``c``."""
    if c.is_suffix:
        if k == 0:
            return c
        return SuClass.suffix(c.word[1:] + (a,))
    w = c.word + (a,)
    return SuClass.suffix(w) if len(w) == k else SuClass.single(w)


def class_count(n_letters: int, k: int) -> int:
    return n_letters ** k + sum(n_letters ** i for i in range(k))


def _words(alphabet: Sequence, n: int) -> Iterator[tuple]:
    return automata.all_words(alphabet, n, minlen=n)


def canonical_classes(alphabet: Iterable, k: int) -> list[SuClass]:
    """Singletons by length-lex, then suffix classes by lex order."""
    alphabet = sort_alphabet(alphabet)
    out = [SuClass.single(w) for w in automata.all_words(alphabet, k - 1)] if k > 0 else []
    out.extend(SuClass.suffix(w) for w in _words(alphabet, k))
    return out


class Block(NamedTuple):
    """A union of canonical classes used as one block of a coarser partition."""

    members: frozenset

    def __letter_key__(self):
        return (2, tuple(sorted(letter_key(c) for c in self.members)))

    def __letter_repr__(self):
        inner = "|".join(letter_repr(c)[1:-1]
                         for c in sorted(self.members, key=letter_key))
        return "[" + inner + "]"

    def __str__(self):
        return " ∪ ".join(str(c) for c in sorted(self.members, key=letter_key))


@dataclass(frozen=True, eq=False)
class SuPartition:
    """A partition of ``A*`` into unions of canonical classes of stratum ``k``.

    ``labels`` are the blocks in order; for the canonical partition each
    label is a :class:`SuClass`, otherwise a :class:`Block`.
    """

    alphabet: tuple
    k: int
    labels: tuple
    label_of_class: dict  # canonical class -> label

    @property
    def is_canonical(self) -> bool:
        return all(isinstance(lbl, SuClass) for lbl in self.labels)

    @cached_property
    def classes(self) -> tuple:
        return tuple(self.label_of_class)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def class_of(self, w: Sequence) -> SuClass:
        return su_class_of(w, self.k)

    def label_of(self, w: Sequence):
        return self.label_of_class[su_class_of(w, self.k)]

    def members_of(self, label) -> frozenset:
        if isinstance(label, SuClass):
            return frozenset({label})
        return label.members

    @cached_property
    def tagged_alphabet(self) -> tuple:
        return sort_alphabet((lbl, a) for lbl in self.labels for a in self.alphabet)

    def transducer(self) -> "TaggingTransducer":
        return TaggingTransducer(self)

    def __repr__(self):
        return f"SuPartition(k={self.k}, blocks={len(self.labels)})"


def canonical_partition(alphabet: Iterable, k: int,
                        max_stratum: int = DEFAULT_MAX_STRATUM) -> SuPartition:
    if k < 0:
        raise ValueError("stratum must be nonnegative")
    if k > max_stratum:
        raise CapacityError(f"stratum {k} exceeds the cap {max_stratum}")
    alphabet = sort_alphabet(alphabet)
    classes = canonical_classes(alphabet, k)
    return SuPartition(alphabet, k, tuple(classes), {c: c for c in classes})


def user_partition(alphabet: Iterable, k: int, blocks: Iterable[Iterable[SuClass]],
                   max_stratum: int = DEFAULT_MAX_STRATUM) -> SuPartition:
    """Validate a partition whose blocks are unions of canonical classes."""
    canon = canonical_partition(alphabet, k, max_stratum)
    known = set(canon.labels)
    mapping: dict = {}
    labels = []
    for blk in blocks:
        members = frozenset(blk)
        if not members:
            raise ValueError("partition blocks must be nonempty")
        bad = members - known
        if bad:
            raise ValueError(f"not a stratum-{k} class: {sorted(map(str, bad))}")
        label = next(iter(members)) if len(members) == 1 else Block(members)
        for c in members:
            if c in mapping:
                raise ValueError(f"class {c} occurs in two blocks")
            mapping[c] = label
        labels.append(label)
    missing = known - set(mapping)
    if missing:
        raise ValueError(f"blocks do not cover {sorted(map(str, missing))}")
    ordered = {c: mapping[c] for c in canon.labels}
    labels.sort(key=letter_key)
    return SuPartition(canon.alphabet, k, tuple(labels), ordered)


# ---------------------------------------------------------------------------
# taggings
# ---------------------------------------------------------------------------

def tag(w: Sequence, p: SuPartition) -> tuple:
    """The prefix tagging of ``w`` with respect to ``p``."""
    return delta((), w, p)


def delta(u: Sequence, w: Sequence, p: SuPartition) -> tuple:
    """Tagging of ``w`` read after the left context ``u``.

    By construction ``tag(u + w) == tag(u) + delta(u, w)``.
    """
    known = set(p.alphabet)
    c = su_class_of(u, p.k)
    out = []
    for a in w:
        if a not in known:
            raise ValueError(f"letter {letter_repr(a)!r} not in alphabet")
        out.append((p.label_of_class[c], a))
        c = next_class(c, a, p.k)
    for a in u:
        if a not in known:
            raise ValueError(f"letter {letter_repr(a)!r} not in alphabet")
    return tuple(out)


def untag(t: Sequence) -> tuple:
    return tuple(a for _, a in t)


class TaggingTransducer:
    """Sequential letter-to-letter transducer realising :func:`tag`.

    States are canonical classes; on letter ``a`` in state ``c`` it outputs
    ``(label(c), a)`` and moves to the class of ``c·a``.
    """

    def __init__(self, p: SuPartition):
        self.partition = p
        self.initial = su_class_of((), p.k)

    @property
    def states(self) -> tuple:
        return self.partition.classes

    def step(self, c: SuClass, a):
        return next_class(c, a, self.partition.k), (self.partition.label_of_class[c], a)

    def run(self, w: Sequence) -> tuple:
        c, out = self.initial, []
        for a in w:
            c, y = self.step(c, a)
            out.append(y)
        return tuple(out)


def tau_preimage(d: Dfa, p: SuPartition) -> Dfa:
    """``τ⁻¹(L(d))`` for a DFA over the tagged alphabet of ``p``."""
    return enrichment(p, {lbl: d for lbl in p.labels})


def enrichment(p: SuPartition, langs: dict) -> Dfa:
    """``⋃_P (P ∩ τ⁻¹(L_P))`` for tagged languages ``langs[P]``.

    Blocks without an entry contribute nothing.  Every tagged DFA must be
    over a superset of the tagged letters it reads; letters outside its
    alphabet lead to rejection.
    """
    labels = [lbl for lbl in p.labels if lbl in langs]
    dfas = [langs[lbl] for lbl in labels]
    slot = {lbl: i for i, lbl in enumerate(labels)}
    k = p.k
    dead = -1

    def step(state, a):
        c, qs = state
        label = p.label_of_class[c]
        y = (label, a)
        nq = []
        for d, q in zip(dfas, qs):
            if q == dead:
                nq.append(dead)
                continue
            i = d.index.get(y)
            nq.append(dead if i is None else d.delta[q][i])
        return next_class(c, a, k), tuple(nq)

    def accept(state):
        c, qs = state
        j = slot.get(p.label_of_class[c])
        return j is not None and qs[j] != dead and qs[j] in dfas[j].accepting

    start = (su_class_of((), k), tuple(d.initial for d in dfas))
    return automata.explore(p.alphabet, start, step, accept).canonical


def class_dfa(c: SuClass, alphabet: Iterable) -> Dfa:
    """Automaton for ``A*w`` or ``{w}``."""
    alphabet = sort_alphabet(alphabet)
    for x in c.word:
        if x not in alphabet:
            raise ValueError(f"letter {letter_repr(x)!r} not in alphabet")
    if not c.is_suffix:
        return automata.from_words(alphabet, [c.word])
    n = len(c.word)

    def step(tail, a):
        return (tail + (a,))[-n:] if n else ()

    return automata.explore(alphabet, (), step, lambda t: t == c.word).canonical


def partition_dfa(p: SuPartition, label) -> Dfa:
    """Automaton for one block of ``p``."""
    return automata.explore(p.alphabet, su_class_of((), p.k),
                            lambda c, a: next_class(c, a, p.k),
                            lambda c: p.label_of_class[c] == label).canonical
