"""Deterministic finite automata over structured finite alphabets.

Letters may be plain strings, ``None`` (the box marker), integers, tuples of
letters (tagged pairs, well-formed triples, ...) or any object exposing
``__letter_key__``/``__letter_repr__``.  Every alphabet is stored sorted by
:func:`letter_key`, so two automata over the same letter set always agree on
letter order, and canonical forms can be compared structurally.

Language equality is decided by comparing canonical forms: complete,
reachable, minimal automata whose states are numbered in breadth-first order
over the sorted alphabet.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import AlphabetMismatch, CapacityError, ParseError

Letter = Hashable
Word = tuple

BOX_REPR = "#"


# ---------------------------------------------------------------------------
# letters and words
# ---------------------------------------------------------------------------

def letter_key(x):
    """Total order key over structured letters (stable across runs)."""
    custom = getattr(x, "__letter_key__", None)
    if custom is not None:
        return (4, custom())
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, tuple):
        return (3, tuple(letter_key(p) for p in x))
    raise TypeError(f"unsupported letter type: {type(x).__name__}")


def letter_repr(x) -> str:
    """Serialize a letter: ``#`` for the box, ``(p,q[,r])`` for tuples."""
    custom = getattr(x, "__letter_repr__", None)
    if custom is not None:
        return custom()
    if x is None:
        return BOX_REPR
    if isinstance(x, tuple):
        return "(" + ",".join(letter_repr(p) for p in x) + ")"
    return str(x)


def word_repr(w: Sequence) -> str:
    """Readable form of a word; ``ε`` for the empty word."""
    if len(w) == 0:
        return "ε"
    parts = [letter_repr(x) for x in w]
    if all(isinstance(x, str) and len(x) == 1 for x in w):
        return "".join(parts)
    if all(p.startswith("(") for p in parts):
        return "".join(parts)
    return " ".join(parts)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_letter(text: str):
    """Inverse of :func:`letter_repr` for plain/tuple letters."""
    text = text.strip()
    if not text:
        raise ParseError("empty letter")
    if text == BOX_REPR:
        return None
    if text.startswith("("):
        if not text.endswith(")"):
            raise ParseError(f"malformed structured letter {text!r}")
        return tuple(parse_letter(p) for p in _split_top(text[1:-1]))
    if any(c in text for c in "(), \t"):
        raise ParseError(f"malformed letter {text!r}")
    return text


_TUPLE_TOKEN = re.compile(r"\([^()]*(?:\([^()]*\)[^()]*)*\)")


def parse_word(text: str, alphabet: Sequence | None = None) -> Word:
    """Parse a word.

    ``ε`` or the empty string is the empty word.  Words over structured
    alphabets are concatenations of ``(...)`` letters; words over plain
    single-character alphabets are plain strings; otherwise letters are
    separated by whitespace.
    """
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    if text.startswith("("):
        letters, pos = [], 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            if text[pos] != "(":
                raise ParseError(f"malformed structured word {text!r}")
            depth, end = 0, pos
            while end < len(text):
                if text[end] == "(":
                    depth += 1
                elif text[end] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                end += 1
            if depth != 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
            letters.append(parse_letter(text[pos:end + 1]))
            pos = end + 1
        word = tuple(letters)
    elif any(c.isspace() for c in text):
        word = tuple(parse_letter(t) for t in text.split())
    else:
        word = tuple(text)
    if alphabet is not None:
        known = set(alphabet)
        for x in word:
            if x not in known:
                raise ParseError(f"letter {letter_repr(x)!r} not in alphabet")
    return word


def sort_alphabet(letters: Iterable) -> tuple:
    letters = tuple(letters)
    out = tuple(sorted(set(letters), key=letter_key))
    if len(out) != len(letters):
        raise ValueError("alphabet letters must be pairwise distinct")
    return out


# ---------------------------------------------------------------------------
# the automaton type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dfa:
    """A complete DFA; states are ``0 .. n-1``.

    ``delta[q][i]`` is the successor of state ``q`` on ``alphabet[i]``.
    Instances are immutable; build them with :func:`make_dfa` or
    :func:`explore` rather than directly.
    """

    alphabet: tuple
    delta: tuple
    initial: int
    accepting: frozenset

    def __post_init__(self):
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        m = len(self.alphabet)
        for row in self.delta:
            if len(row) != m:
                raise ValueError("transition table is not total")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError("transition target out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")

    # -- basic access -------------------------------------------------------
    @property
    def n_states(self) -> int:
        return len(self.delta)

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.alphabet)}

    def step(self, q: int, letter) -> int:
        try:
            return self.delta[q][self.index[letter]]
        except KeyError:
            raise ValueError(f"letter {letter_repr(letter)!r} not in alphabet") from None

    def run(self, word: Iterable, q: int | None = None) -> int:
        q = self.initial if q is None else q
        idx, delta = self.index, self.delta
        for x in word:
            try:
                q = delta[q][idx[x]]
            except KeyError:
                raise ValueError(f"letter {letter_repr(x)!r} not in alphabet") from None
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.accepting

    __contains__ = accepts

    # -- canonical form -----------------------------------------------------
    @cached_property
    def canonical(self) -> "Dfa":
        return _minimize(self)

    def minimize(self) -> "Dfa":
        return self.canonical

    def is_empty(self) -> bool:
        return not self.canonical.accepting

    def is_universal(self) -> bool:
        return len(self.canonical.accepting) == self.canonical.n_states

    def with_accepting(self, accepting: Iterable[int]) -> "Dfa":
        return Dfa(self.alphabet, self.delta, self.initial, frozenset(accepting))

    def __repr__(self):
        return (f"Dfa(states={self.n_states}, letters={len(self.alphabet)}, "
                f"accepting={sorted(self.accepting)})")


def make_dfa(alphabet: Iterable, transitions: dict, initial, accepting: Iterable,
             states: Iterable | None = None) -> Dfa:
    """Build a DFA from a partial transition map ``{(state, letter): state}``.

    State names are arbitrary hashables; missing transitions go to an
    implicit rejecting sink.
    """
    alphabet = sort_alphabet(alphabet)
    names = list(states) if states is not None else []
    seen = set(names)
    for (p, _), r in transitions.items():
        for s in (p, r):
            if s not in seen:
                seen.add(s)
                names.append(s)
    if initial not in seen:
        names.append(initial)
        seen.add(initial)
    num = {s: i for i, s in enumerate(names)}
    sink = len(names)
    idx = {x: i for i, x in enumerate(alphabet)}
    rows = [[sink] * len(alphabet) for _ in range(len(names) + 1)]
    for (p, x), r in transitions.items():
        if x not in idx:
            raise ValueError(f"letter {letter_repr(x)!r} not in alphabet")
        rows[num[p]][idx[x]] = num[r]
    if all(q != sink for row in rows[:sink] for q in row):
        rows.pop()  # complete: no sink needed
    acc = frozenset(num[s] for s in accepting)
    return Dfa(alphabet, tuple(tuple(r) for r in rows), num[initial], acc)


def explore(alphabet: Iterable, start, step: Callable, accept: Callable,
            max_states: int | None = None) -> Dfa:
    """Breadth-first construction of a DFA over arbitrary hashable states.

    ``step(state, letter)`` returns the successor and ``accept(state)`` the
    acceptance bit.  Only reachable states are materialized.
    """
    alphabet = sort_alphabet(alphabet)
    num = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for x in alphabet:
            t = step(s, x)
            j = num.get(t)
            if j is None:
                j = len(order)
                num[t] = j
                order.append(t)
                if max_states is not None and j >= max_states:
                    raise CapacityError(f"automaton construction exceeded {max_states} states")
            row.append(j)
        rows.append(tuple(row))
        i += 1
    acc = frozenset(j for j, s in enumerate(order) if accept(s))
    return Dfa(alphabet, tuple(rows), 0, acc)


def determinize(alphabet: Iterable, starts: Iterable, step: Callable, accept: Callable,
                epsilon: Callable | None = None, max_states: int | None = None) -> Dfa:
    """Subset construction for an implicitly given NFA.

    ``step(q, letter)`` yields successor states, ``epsilon(q)`` (optional)
    yields ε-successors, ``accept(q)`` tells whether ``q`` is final.
    """

    def close(qs):
        if epsilon is None:
            return frozenset(qs)
        todo, seen = list(qs), set(qs)
        while todo:
            q = todo.pop()
            for r in epsilon(q):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return frozenset(seen)

    def sstep(qs, x):
        out = set()
        for q in qs:
            out.update(step(q, x))
        return close(out)

    return explore(alphabet, close(starts), sstep, lambda qs: any(accept(q) for q in qs),
                   max_states=max_states)


def universal(alphabet: Iterable) -> Dfa:
    alphabet = sort_alphabet(alphabet)
    return Dfa(alphabet, ((0,) * len(alphabet),), 0, frozenset({0}))


def empty(alphabet: Iterable) -> Dfa:
    alphabet = sort_alphabet(alphabet)
    return Dfa(alphabet, ((0,) * len(alphabet),), 0, frozenset())


def from_words(alphabet: Iterable, words: Iterable[Sequence]) -> Dfa:
    """DFA accepting exactly a finite set of words (a trie)."""
    trie = {(): False}
    for w in words:
        w = tuple(w)
        for i in range(len(w)):
            trie.setdefault(w[:i + 1], False)
        trie[w] = True
    dead = object()

    def step(s, x):
        if s is dead:
            return dead
        t = s + (x,)
        return t if t in trie else dead

    return explore(alphabet, (), step, lambda s: s is not dead and trie[s]).canonical


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def _reachable(d: Dfa) -> list[int]:
    seen = {d.initial}
    order = [d.initial]
    i = 0
    while i < len(order):
        for t in d.delta[order[i]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def _minimize(d: Dfa) -> Dfa:
    order = _reachable(d)
    pos = {q: i for i, q in enumerate(order)}
    n = len(order)
    table = np.array([[pos[t] for t in d.delta[q]] for q in order], dtype=np.int64)
    blocks = np.array([1 if q in d.accepting else 0 for q in order], dtype=np.int64)
    count = len(set(blocks.tolist()))
    while True:
        sig = np.concatenate([blocks[:, None], blocks[table]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = np.asarray(new).reshape(-1)
        new_count = int(new.max()) + 1 if n else 0
        blocks = new
        if new_count == count:
            break
        count = new_count
    # breadth-first renumbering from the initial block
    rep = {}
    for i in range(n):
        rep.setdefault(int(blocks[i]), i)
    start = int(blocks[0])
    num = {start: 0}
    seq = [start]
    rows = []
    i = 0
    while i < len(seq):
        b = seq[i]
        row = []
        for t in table[rep[b]]:
            tb = int(blocks[t])
            j = num.get(tb)
            if j is None:
                j = len(seq)
                num[tb] = j
                seq.append(tb)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    acc = frozenset(num[int(blocks[pos[q]])] for q in order if q in d.accepting)
    out = Dfa(d.alphabet, tuple(rows), 0, acc)
    out.__dict__["canonical"] = out
    return out


def minimize(d: Dfa) -> Dfa:
    return d.canonical


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    _check_same_alphabet(d1, d2)
    c1, c2 = d1.canonical, d2.canonical
    return c1.delta == c2.delta and c1.accepting == c2.accepting


# ---------------------------------------------------------------------------
# Boolean and regular operations
# ---------------------------------------------------------------------------

def _check_same_alphabet(*ds: Dfa):
    first = ds[0].alphabet
    for d in ds[1:]:
        if d.alphabet != first:
            raise AlphabetMismatch("automata are over different alphabets")


def product(ds: Sequence[Dfa], accept: Callable[[tuple], bool]) -> Dfa:
    """Synchronous product; ``accept`` receives the tuple of acceptance bits."""
    _check_same_alphabet(*ds)
    alphabet = ds[0].alphabet
    rows = [d.delta for d in ds]
    accs = [d.accepting for d in ds]
    ixs = [d.index for d in ds]

    def step(s, x):
        return tuple(rows[i][q][ixs[i][x]] for i, q in enumerate(s))

    return explore(alphabet, tuple(d.initial for d in ds), step,
                   lambda s: accept(tuple(q in accs[i] for i, q in enumerate(s))))


def union(*ds: Dfa) -> Dfa:
    return product(ds, any).canonical


def intersection(*ds: Dfa) -> Dfa:
    return product(ds, all).canonical


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.delta, d.initial,
               frozenset(range(d.n_states)) - d.accepting).canonical


def difference(d1: Dfa, d2: Dfa) -> Dfa:
    return product((d1, d2), lambda b: b[0] and not b[1]).canonical


def concat_right_letter(d: Dfa, letter) -> Dfa:
    """The language ``L(d) · letter``."""
    if letter not in d.index:
        raise ValueError(f"letter {letter_repr(letter)!r} not in alphabet")
    final = ("final",)

    def step(q, x):
        if q == final:
            return ()
        out = [d.delta[q][d.index[x]]]
        if x == letter and q in d.accepting:
            out.append(final)
        return out

    return determinize(d.alphabet, [d.initial], step, lambda q: q == final).canonical


def combine(kind: str, inputs: Sequence[Dfa], letter=None) -> Dfa:
    """Dispatch ``union | intersection | complement | concat_right_letter``."""
    if not inputs:
        raise ValueError("combine needs at least one automaton")
    if kind == "union":
        return union(*inputs)
    if kind == "intersection":
        return intersection(*inputs)
    if kind == "complement":
        if len(inputs) != 1:
            raise ValueError("complement takes exactly one automaton")
        return complement(inputs[0])
    if kind == "concat_right_letter":
        if len(inputs) != 1:
            raise ValueError("concat_right_letter takes exactly one automaton")
        return concat_right_letter(inputs[0], letter)
    raise ValueError(f"unknown combination {kind!r}")


def right_quotient(d: Dfa, u: Sequence) -> Dfa:
    """``L(d) · u⁻¹ = {w : wu ∈ L(d)}``."""
    for x in u:
        if x not in d.index:
            raise ValueError(f"letter {letter_repr(x)!r} not in alphabet")
    acc = frozenset(q for q in range(d.n_states) if d.run(u, q) in d.accepting)
    return d.with_accepting(acc).canonical


def preimage_morphism(d: Dfa, images: dict, alphabet: Iterable | None = None) -> Dfa:
    """``h⁻¹(L(d))`` for the word morphism given by ``images[letter] = word``.

    The source alphabet defaults to the keys of ``images``.
    """
    alphabet = sort_alphabet(images.keys() if alphabet is None else alphabet)
    for x in alphabet:
        if x not in images:
            raise ValueError(f"no image for letter {letter_repr(x)!r}")
    rows = tuple(tuple(d.run(images[x], q) for x in alphabet) for q in range(d.n_states))
    return Dfa(alphabet, rows, d.initial, d.accepting).canonical


def relabel(d: Dfa, mapping: dict) -> Dfa:
    """Rename letters injectively (``mapping[old] = new``)."""
    new_alpha = sort_alphabet(mapping[x] for x in d.alphabet)
    inv = {mapping[x]: x for x in d.alphabet}
    rows = tuple(tuple(row[d.index[inv[y]]] for y in new_alpha) for row in d.delta)
    return Dfa(new_alpha, rows, d.initial, d.accepting)


def extend_alphabet(d: Dfa, letters: Iterable) -> Dfa:
    """Same language over a larger alphabet (new letters lead to a sink)."""
    new_alpha = sort_alphabet(set(d.alphabet) | set(letters))
    sink = d.n_states
    rows = []
    for q in range(d.n_states):
        rows.append(tuple(d.delta[q][d.index[y]] if y in d.index else sink for y in new_alpha))
    rows.append((sink,) * len(new_alpha))
    return Dfa(new_alpha, tuple(rows), d.initial, d.accepting)


def reverse(d: Dfa) -> Dfa:
    """DFA for the mirror language (via subset construction)."""
    back: dict = {}
    for q in range(d.n_states):
        for i, x in enumerate(d.alphabet):
            back.setdefault((d.delta[q][i], x), []).append(q)
    return determinize(d.alphabet, d.accepting, lambda q, x: back.get((q, x), ()),
                       lambda q: q == d.initial).canonical


# ---------------------------------------------------------------------------
# search and comparison
# ---------------------------------------------------------------------------

def shortest_accepted(d: Dfa) -> Word | None:
    """Length-lex least accepted word, or ``None`` if the language is empty."""
    parent = {d.initial: None}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        if q in d.accepting:
            word = []
            while parent[q] is not None:
                q, x = parent[q]
                word.append(x)
            return tuple(reversed(word))
        for i, t in enumerate(d.delta[q]):
            if t not in parent:
                parent[t] = (q, d.alphabet[i])
                queue.append(t)
    return None


def find_member(d: Dfa) -> Word | None:
    return shortest_accepted(d)


def is_empty(d: Dfa) -> bool:
    return shortest_accepted(d) is None


def intersection_witness(*ds: Dfa) -> Word | None:
    return shortest_accepted(product(ds, all))


def disjoint(d1: Dfa, d2: Dfa) -> bool:
    return intersection_witness(d1, d2) is None


def difference_witness(d1: Dfa, d2: Dfa) -> Word | None:
    """Shortest word in ``L(d1) ∖ L(d2)``."""
    return shortest_accepted(product((d1, d2), lambda b: b[0] and not b[1]))


def included(d1: Dfa, d2: Dfa) -> bool:
    return difference_witness(d1, d2) is None


@dataclass(frozen=True)
class Comparison:
    relation: str          # equal | subset | superset | incomparable
    only_first: Word | None = None   # witness in L1 ∖ L2
    only_second: Word | None = None  # witness in L2 ∖ L1

    def __str__(self):
        return self.relation


def compare(d1: Dfa, d2: Dfa) -> Comparison:
    """Relate two languages; counterexample words witness strict verdicts."""
    _check_same_alphabet(d1, d2)
    w12 = difference_witness(d1, d2)
    w21 = difference_witness(d2, d1)
    if w12 is None and w21 is None:
        rel = "equal"
    elif w12 is None:
        rel = "subset"
    elif w21 is None:
        rel = "superset"
    else:
        rel = "incomparable"
    return Comparison(rel, w12, w21)


def enumerate_members(d: Dfa, maxlen: int) -> list[Word]:
    """All accepted words of length ≤ maxlen in length-lex order."""
    if maxlen < 0:
        return []
    live = _coreachable(d)
    out = []
    layer = [((), d.initial)] if d.initial in live else []
    for length in range(maxlen + 1):
        out.extend(w for w, q in layer if q in d.accepting)
        if length == maxlen:
            break
        nxt = []
        for w, q in layer:
            for i, t in enumerate(d.delta[q]):
                if t in live:
                    nxt.append((w + (d.alphabet[i],), t))
        layer = nxt
    return out


def all_words(alphabet: Sequence, maxlen: int, minlen: int = 0) -> Iterator[Word]:
    """All words over ``alphabet`` (in the given order) by length-lex."""
    layer = [()]
    for length in range(maxlen + 1):
        if length >= minlen:
            yield from layer
        if length == maxlen:
            break
        layer = [w + (x,) for w in layer for x in alphabet]


def _coreachable(d: Dfa) -> set[int]:
    back: dict = {}
    for q in range(d.n_states):
        for t in d.delta[q]:
            back.setdefault(t, set()).add(q)
    live = set(d.accepting)
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in back.get(q, ()):
            if p not in live:
                live.add(p)
                todo.append(p)
    return live


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_dfa(text: str, letter_parser: Callable[[str], object] = parse_letter) -> Dfa:
    """Parse the line-oriented DFA format.

    ::

        alphabet: a b
        states: 2
        initial: 0
        accepting: 1
        0 a 1
        1 b 0

    Lines whose first token starts with ``#`` are comments.  Missing
    transitions complete to an implicit rejecting sink.
    """
    alphabet = nstates = initial = accepting = None
    transitions: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("# ") or line == "#" or line.startswith("//"):
            continue
        if ":" in line and line.split(":", 1)[0].strip() in ("alphabet", "states", "initial",
                                                               "accepting"):
            key, value = (s.strip() for s in line.split(":", 1))
            if key == "alphabet":
                letters = [letter_parser(t) for t in value.split()]
                if not letters:
                    raise ParseError("empty alphabet", lineno)
                if len(set(letters)) != len(letters):
                    raise ParseError("duplicate letter in alphabet", lineno)
                alphabet = letters
            elif key == "states":
                try:
                    nstates = int(value)
                except ValueError:
                    raise ParseError(f"bad state count {value!r}", lineno) from None
                if nstates < 1:
                    raise ParseError("need at least one state", lineno)
            elif key == "initial":
                initial = _parse_state(value, lineno)
            else:
                accepting = [_parse_state(t, lineno) for t in value.replace(",", " ").split()]
            continue
        toks = line.split()
        if len(toks) != 3:
            raise ParseError(f"expected 'src letter dst', got {line!r}", lineno)
        if alphabet is None or nstates is None:
            raise ParseError("transitions must follow the alphabet and states headers", lineno)
        src, dst = _parse_state(toks[0], lineno), _parse_state(toks[2], lineno)
        letter = letter_parser(toks[1])
        if letter not in alphabet:
            raise ParseError(f"unknown letter {toks[1]!r}", lineno)
        for s in (src, dst):
            if s >= nstates:
                raise ParseError(f"unknown state {s}", lineno)
        if (src, letter) in transitions:
            raise ParseError(f"duplicate transition from {src} on {toks[1]!r}", lineno)
        transitions[(src, letter)] = dst
    if alphabet is None:
        raise ParseError("missing 'alphabet:' header")
    if nstates is None:
        raise ParseError("missing 'states:' header")
    if initial is None:
        raise ParseError("missing 'initial:' header")
    if initial >= nstates:
        raise ParseError(f"unknown initial state {initial}")
    accepting = accepting or []
    for q in accepting:
        if q >= nstates:
            raise ParseError(f"unknown accepting state {q}")
    return make_dfa(alphabet, transitions, initial, accepting, states=range(nstates))


def _parse_state(tok: str, lineno: int) -> int:
    try:
        q = int(tok)
    except ValueError:
        raise ParseError(f"bad state {tok!r}", lineno) from None
    if q < 0:
        raise ParseError(f"bad state {tok!r}", lineno)
    return q


def format_dfa(d: Dfa) -> str:
    """Serialize in the format read by :func:`parse_dfa` (sink edges kept)."""
    lines = [
        "alphabet: " + " ".join(letter_repr(x) for x in d.alphabet),
        f"states: {d.n_states}",
        f"initial: {d.initial}",
        "accepting: " + ",".join(str(q) for q in sorted(d.accepting)),
    ]
    for q in range(d.n_states):
        for i, x in enumerate(d.alphabet):
            lines.append(f"{q} {letter_repr(x)} {d.delta[q][i]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# a tiny regular-expression front end for test authoring
# ---------------------------------------------------------------------------

def from_regex(pattern: str, alphabet: Iterable) -> Dfa:
    """Compile a minimal regex: single-character letters, ``|``, ``*``, ``+``,
    ``?``, parentheses, ``.`` (any letter), ``ε`` (empty word), ``∅``."""
    alphabet = sort_alphabet(alphabet)
    parser = _RegexParser(pattern, alphabet)
    start, end = parser.parse()
    eps, trans = parser.eps, parser.trans
    return determinize(alphabet, [start], lambda q, x: trans.get((q, x), ()),
                       lambda q: q == end, epsilon=lambda q: eps.get(q, ())).canonical


class _RegexParser:
    def __init__(self, text, alphabet):
        self.text, self.pos, self.alphabet = text.replace(" ", ""), 0, alphabet
        self.count = 0
        self.eps: dict = {}
        self.trans: dict = {}

    def new(self):
        self.count += 1
        return self.count

    def edge(self, p, q, x=None):
        if x is None:
            self.eps.setdefault(p, []).append(q)
        else:
            self.trans.setdefault((p, x), []).append(q)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self):
        frag = self.union()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.peek()!r} in regex")
        return frag

    def union(self):
        frags = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            frags.append(self.concat())
        if len(frags) == 1:
            return frags[0]
        s, e = self.new(), self.new()
        for a, b in frags:
            self.edge(s, a)
            self.edge(b, e)
        return s, e

    def concat(self):
        s = e = self.new()
        while self.peek() is not None and self.peek() not in "|)":
            a, b = self.repeat()
            self.edge(e, a)
            e = b
        return s, e

    def repeat(self):
        a, b = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.peek()
            self.pos += 1
            s, e = self.new(), self.new()
            self.edge(s, a)
            self.edge(b, e)
            if op in "*?":
                self.edge(s, e)
            if op in "*+":
                self.edge(b, a)
            a, b = s, e
        return a, b

    def atom(self):
        c = self.peek()
        if c is None:
            raise ParseError("unexpected end of regex")
        self.pos += 1
        if c == "(":
            frag = self.union()
            if self.peek() != ")":
                raise ParseError("missing ')' in regex")
            self.pos += 1
            return frag
        s, e = self.new(), self.new()
        if c == "ε":
            self.edge(s, e)
        elif c == "∅":
            pass
        elif c == ".":
            for x in self.alphabet:
                self.edge(s, e, x)
        else:
            if c not in self.alphabet:
                raise ParseError(f"letter {c!r} not in alphabet")
            self.edge(s, e, c)
        return s, e
