"""Finite monoids, recognizing morphisms and the derived algebraic data.

Monoid elements are integers ``0 .. n-1`` with human-readable names.  The
well-formed alphabets built later refer to elements by name, so names must be
unique and must not contain parentheses, commas, whitespace or ``#``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

import numpy as np

from . import automata
from .automata import Dfa, letter_repr, sort_alphabet
from .errors import AlphabetMismatch, CapacityError, ParseError

DEFAULT_MAX_MONOID = 64

_BAD_NAME_CHARS = set("(),# \t")


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    """A monoid given by its multiplication table ``rows[x][y] = x·y``."""

    names: tuple
    rows: tuple
    identity: int

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise ValueError("a monoid has at least one element")
        if len(set(self.names)) != n:
            raise ValueError("element names must be distinct")
        for name in self.names:
            if not name or set(name) & _BAD_NAME_CHARS:
                raise ValueError(f"bad element name {name!r}")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("multiplication table must be square")
        t = self.array
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entry out of range")
        e = self.identity
        if not (np.all(t[e] == np.arange(n)) and np.all(t[:, e] == np.arange(n))):
            raise ValueError("identity is not neutral")
        if not np.array_equal(t[t], t[:, t]):
            raise ValueError("multiplication is not associative")

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.rows, dtype=np.int64)
        a.flags.writeable = False
        return a

    @cached_property
    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def elements(self) -> range:
        return range(len(self.names))

    def mul(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def product(self, xs: Iterable[int]) -> int:
        acc = self.identity
        rows = self.rows
        for x in xs:
            acc = rows[acc][x]
        return acc

    def power(self, x: int, p: int) -> int:
        acc = self.identity
        for _ in range(p):
            acc = self.rows[acc][x]
        return acc

    def is_idempotent(self, x: int) -> bool:
        return self.rows[x][x] == x

    def element(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ValueError(f"unknown monoid element {name!r}") from None

    def name(self, x: int) -> str:
        return self.names[x]

    def __repr__(self):
        return f"FiniteMonoid(size={self.size})"


def idempotent_power(m: FiniteMonoid, s: int) -> tuple[int, int]:
    """Least ``p ≥ 1`` with ``s^p`` idempotent, together with ``s^p``."""
    x, p = s, 1
    while not m.is_idempotent(x):
        x = m.mul(x, s)
        p += 1
        if p > m.size + 1:  # pragma: no cover - impossible in a finite monoid
            raise AssertionError("no idempotent power found")
    return p, x


def idempotent_exponent(m: FiniteMonoid) -> int:
    """Least ``p ≥ 1`` such that ``s^p`` is idempotent for every element."""
    from math import lcm

    p = 1
    for s in m.elements():
        p = lcm(p, idempotent_power(m, s)[0])
    return p


@dataclass(frozen=True, eq=False)
class Morphism:
    """A morphism ``A* → M`` given by the images of the letters."""

    alphabet: tuple
    monoid: FiniteMonoid
    images: tuple  # images[i] is the image of alphabet[i]

    def __post_init__(self):
        if len(self.images) != len(self.alphabet):
            raise ValueError("one image per letter required")
        if tuple(sort_alphabet(self.alphabet)) != tuple(self.alphabet):
            raise ValueError("alphabet must be given in canonical order")

    @classmethod
    def from_dict(cls, monoid: FiniteMonoid, images: dict) -> "Morphism":
        alphabet = sort_alphabet(images)
        return cls(alphabet, monoid, tuple(images[a] for a in alphabet))

    @cached_property
    def image_of(self) -> dict:
        return dict(zip(self.alphabet, self.images))

    def __call__(self, word: Iterable) -> int:
        m, img = self.monoid, self.image_of
        acc = m.identity
        rows = m.rows
        try:
            for x in word:
                acc = rows[acc][img[x]]
        except KeyError as exc:
            raise ValueError(f"letter {letter_repr(exc.args[0])!r} not in alphabet") from None
        return acc

    def image(self, word: Iterable) -> int:
        return self(word)

    @cached_property
    def reachable(self) -> tuple:
        """``α(A*)``, in element order."""
        return tuple(sorted(_closure(self.monoid, self.images, include_identity=True)))

    @cached_property
    def semigroup(self) -> tuple:
        """``S = α(A⁺)``, in element order."""
        return tuple(sorted(_closure(self.monoid, self.images, include_identity=False)))

    def cayley_dfa(self, accepting: Iterable[int]) -> Dfa:
        return language_of(RecognizedLanguage(self, frozenset(accepting)))

    def __repr__(self):
        pairs = ", ".join(f"{letter_repr(a)}->{self.monoid.name(x)}"
                          for a, x in zip(self.alphabet, self.images))
        return f"Morphism({pairs}; |M|={self.monoid.size})"


def _closure(m: FiniteMonoid, gens: Sequence[int], include_identity: bool) -> set:
    start = {m.identity} if include_identity else set(gens)
    seen = set(start)
    todo = list(start)
    while todo:
        x = todo.pop()
        for g in gens:
            y = m.mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@dataclass(frozen=True)
class AlgebraicData:
    """``S = α(A⁺)``, ``S¹`` and the idempotents ``E(S)``.

    ``idempotents`` is listed in the fixed order used to pick "the smallest"
    idempotent; by default this is element order.
    """

    morphism: Morphism
    S: tuple
    S1: tuple
    idempotents: tuple

    @property
    def monoid(self) -> FiniteMonoid:
        return self.morphism.monoid

    @property
    def identity_in_S(self) -> bool:
        return self.monoid.identity in self.S

    @cached_property
    def idempotent_rank(self) -> dict:
        return {e: i for i, e in enumerate(self.idempotents)}

    def with_idempotent_order(self, order: Sequence[int]) -> "AlgebraicData":
        if sorted(order) != sorted(self.idempotents):
            raise ValueError("order must be a permutation of the idempotents")
        return AlgebraicData(self.morphism, self.S, self.S1, tuple(order))

    def shuffled(self, rng: random.Random) -> "AlgebraicData":
        order = list(self.idempotents)
        rng.shuffle(order)
        return self.with_idempotent_order(order)

    def summary(self) -> dict:
        n = self.monoid.name
        return {
            "M": list(self.monoid.names),
            "identity": n(self.monoid.identity),
            "S": [n(x) for x in self.S],
            "S1": [n(x) for x in self.S1],
            "E(S)": [n(x) for x in self.idempotents],
            "identity_in_S": self.identity_in_S,
        }


def algebraic_data(m: Morphism, idempotent_order: Sequence[int] | None = None) -> AlgebraicData:
    mon = m.monoid
    S = m.semigroup
    S1 = S if mon.identity in S else tuple(sorted(S + (mon.identity,)))
    E = tuple(x for x in S if mon.is_idempotent(x))
    data = AlgebraicData(m, S, S1, E)
    if idempotent_order is not None:
        data = data.with_idempotent_order(idempotent_order)
    return data


@dataclass(frozen=True, eq=False)
class RecognizedLanguage:
    """``α⁻¹(F)`` for a morphism ``α`` and accepting set ``F``."""

    morphism: Morphism
    accepting: frozenset

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = self.morphism.monoid.size
        if any(not 0 <= x < n for x in self.accepting):
            raise ValueError("accepting element out of range")

    def accepts(self, word) -> bool:
        return self.morphism(word) in self.accepting

    __contains__ = accepts

    @property
    def alphabet(self) -> tuple:
        return self.morphism.alphabet

    @cached_property
    def image(self) -> frozenset:
        """``α(L)``: accepting elements actually reached by some word."""
        return frozenset(self.accepting) & frozenset(self.morphism.reachable)

    @cached_property
    def dfa(self) -> Dfa:
        return language_of(self)

    def under(self, other: Morphism, projection: Callable[[int], int]) -> "RecognizedLanguage":
        """Re-express over ``other`` given a projection ``other → self.morphism``."""
        acc = frozenset(x for x in other.monoid.elements() if projection(x) in self.accepting)
        return RecognizedLanguage(other, acc)


def language_of(r: RecognizedLanguage) -> Dfa:
    """Cayley-graph automaton: states are elements, initial ``1_M``."""
    m = r.morphism
    rows = m.monoid.rows
    delta = tuple(tuple(rows[x][g] for g in m.images) for x in m.monoid.elements())
    return Dfa(m.alphabet, delta, m.monoid.identity, frozenset(r.accepting)).canonical


# ---------------------------------------------------------------------------
# generated monoids: transition monoids and products
# ---------------------------------------------------------------------------

class Generated(NamedTuple):
    morphism: Morphism
    values: tuple  # underlying value of each element


def generate_monoid(alphabet: Iterable, identity: Hashable, letter_value: Callable,
                    mul: Callable, max_size: int = DEFAULT_MAX_MONOID) -> Generated:
    """Submonoid generated by letter values under ``mul``.

    Elements are numbered breadth-first over the sorted alphabet and named
    by their length-lex least witness word (the identity is named ``1``).
    """
    alphabet = sort_alphabet(alphabet)
    gens = [letter_value(a) for a in alphabet]
    values = [identity]
    names = ["1"]
    num = {identity: 0}
    i = 0
    while i < len(values):
        v = values[i]
        for a, g in zip(alphabet, gens):
            w = mul(v, g)
            if w not in num:
                if len(values) >= max_size:
                    raise CapacityError(f"monoid exceeds the size cap of {max_size} elements")
                num[w] = len(values)
                values.append(w)
                base = "" if i == 0 else names[i]
                names.append(base + _name_piece(a))
        i += 1
    if len(set(names)) != len(names):
        names = [f"m{j}" if j else "1" for j in range(len(values))]
    rows = tuple(tuple(num[mul(x, y)] for y in values) for x in values)
    mon = FiniteMonoid(tuple(names), rows, 0)
    return Generated(Morphism(alphabet, mon, tuple(num[g] for g in gens)), tuple(values))


def _name_piece(a) -> str:
    s = letter_repr(a)
    if len(s) == 1 and not set(s) & _BAD_NAME_CHARS:
        return s
    return "<" + "".join(c if c not in _BAD_NAME_CHARS else "_" for c in s) + ">"


def transition_monoid(d: Dfa, max_size: int = DEFAULT_MAX_MONOID) -> tuple[FiniteMonoid, Morphism, frozenset]:
    """Transition monoid of ``d`` with its morphism and accepting set.

    An element is the state transformation ``q ↦ δ(q, w)``, and ``w`` is
    accepted iff its transformation maps the initial state into ``F``.
    """
    n = d.n_states
    ident = tuple(range(n))

    def letter_value(a):
        i = d.index[a]
        return tuple(d.delta[q][i] for q in range(n))

    gen = generate_monoid(d.alphabet, ident, letter_value,
                          lambda f, g: tuple(g[f[q]] for q in range(n)), max_size)
    acc = frozenset(i for i, f in enumerate(gen.values) if f[d.initial] in d.accepting)
    return gen.morphism.monoid, gen.morphism, acc


def recognized(d: Dfa, max_size: int = DEFAULT_MAX_MONOID) -> RecognizedLanguage:
    """The language of ``d`` as recognized by its transition monoid."""
    _, m, acc = transition_monoid(d, max_size)
    return RecognizedLanguage(m, acc)


@dataclass(frozen=True, eq=False)
class ProductMorphism:
    """A generated product of morphisms together with component projections."""

    morphism: Morphism
    components: tuple
    values: tuple  # values[x] = tuple of component elements

    def project(self, i: int, x: int) -> int:
        return self.values[x][i]

    def lift(self, i: int, r: RecognizedLanguage) -> RecognizedLanguage:
        if r.morphism is not self.components[i]:
            raise ValueError("language is not recognized by this component")
        return r.under(self.morphism, lambda x: self.values[x][i])


def product_morphism(ms: Sequence[Morphism], max_size: int = DEFAULT_MAX_MONOID) -> ProductMorphism:
    if not ms:
        raise ValueError("need at least one morphism")
    alphabet = ms[0].alphabet
    for m in ms[1:]:
        if m.alphabet != alphabet:
            raise AlphabetMismatch("morphisms are over different alphabets")
    ident = tuple(m.monoid.identity for m in ms)
    gen = generate_monoid(
        alphabet, ident,
        lambda a: tuple(m.image_of[a] for m in ms),
        lambda x, y: tuple(m.monoid.mul(p, q) for m, p, q in zip(ms, x, y)),
        max_size,
    )
    return ProductMorphism(gen.morphism, tuple(ms), gen.values)


def common_morphism(langs: Sequence[RecognizedLanguage],
                    max_size: int = DEFAULT_MAX_MONOID) -> list[RecognizedLanguage]:
    """Re-express languages over a single morphism (their generated product).

    Languages already sharing one morphism are returned unchanged.
    """
    first = langs[0].morphism
    if all(r.morphism is first for r in langs):
        return list(langs)
    distinct: list[Morphism] = []
    for r in langs:
        if not any(r.morphism is m for m in distinct):
            distinct.append(r.morphism)
    prod = product_morphism(distinct, max_size)
    out = []
    for r in langs:
        i = next(j for j, m in enumerate(distinct) if m is r.morphism)
        out.append(prod.lift(i, r))
    return out


# ---------------------------------------------------------------------------
# witness words
# ---------------------------------------------------------------------------

@dataclass
class _Witnesses:
    any_word: dict = field(default_factory=dict)       # shortest word, possibly ε
    nonempty_word: dict = field(default_factory=dict)  # shortest nonempty word


def _shortest_witnesses(m: Morphism) -> _Witnesses:
    mon = m.monoid
    out = _Witnesses()
    out.any_word[mon.identity] = ()
    queue = deque([mon.identity])
    while queue:
        x = queue.popleft()
        for a, g in zip(m.alphabet, m.images):
            y = mon.mul(x, g)
            if y not in out.any_word:
                out.any_word[y] = out.any_word[x] + (a,)
                queue.append(y)
    queue = deque()
    for a, g in zip(m.alphabet, m.images):
        if g not in out.nonempty_word:
            out.nonempty_word[g] = (a,)
            queue.append(g)
    while queue:
        x = queue.popleft()
        for a, g in zip(m.alphabet, m.images):
            y = mon.mul(x, g)
            if y not in out.nonempty_word:
                out.nonempty_word[y] = out.nonempty_word[x] + (a,)
                queue.append(y)
    return out


def _witness_tables(m: Morphism) -> _Witnesses:
    tables = m.__dict__.get("_witnesses")
    if tables is None:
        tables = _shortest_witnesses(m)
        m.__dict__["_witnesses"] = tables
    return tables


def witness_word(m: Morphism, s: int, rng: random.Random | None = None,
                 slack: int = 3) -> tuple:
    """A word ``w`` with ``α(w) = s``; nonempty whenever ``s ∈ S``.

    Without ``rng`` this is the length-lex least such word.  With ``rng`` a
    word is drawn uniformly among witnesses of a random length between the
    shortest length and ``slack`` more (lengths with no witness are skipped).
    """
    tables = _witness_tables(m)
    if s in tables.nonempty_word:
        base = tables.nonempty_word[s]
        nonempty = True
    elif s in tables.any_word:
        base = tables.any_word[s]  # only the identity outside S: ε
        nonempty = False
    else:
        raise ValueError(f"element {m.monoid.name(s)!r} is not the image of any word")
    if rng is None or not nonempty:
        return base
    lengths = list(range(len(base), len(base) + slack + 1))
    rng.shuffle(lengths)
    for n in lengths:
        w = _random_word_of_length(m, s, n, rng)
        if w is not None:
            return w
    return base  # pragma: no cover - the shortest length always succeeds


def _random_word_of_length(m: Morphism, s: int, n: int, rng: random.Random):
    mon = m.monoid
    size = mon.size
    # ways[j][x] = number of words of length j leading from x to s
    ways = [[0] * size for _ in range(n + 1)]
    ways[0][s] = 1
    for j in range(1, n + 1):
        prev = ways[j - 1]
        row = ways[j]
        for x in range(size):
            row[x] = sum(prev[mon.mul(x, g)] for g in m.images)
    x = mon.identity
    if ways[n][x] == 0 or n == 0:
        return None
    word = []
    for j in range(n, 0, -1):
        pick = rng.randrange(ways[j][x])
        for a, g in zip(m.alphabet, m.images):
            y = mon.mul(x, g)
            c = ways[j - 1][y]
            if pick < c:
                word.append(a)
                x = y
                break
            pick -= c
    return tuple(word)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

class MonoidFile(NamedTuple):
    monoid: FiniteMonoid
    morphism: Morphism | None
    accepting: frozenset | None

    def language(self) -> RecognizedLanguage:
        if self.morphism is None:
            raise ParseError("monoid description has no 'images:' section")
        return RecognizedLanguage(self.morphism, self.accepting or frozenset())


def parse_monoid(text: str) -> MonoidFile:
    """Parse the monoid format::

        elements: 1 x y
        identity: 1
        table:
        1 x y
        x x y
        y x y
        images: a=x b=y
        accepting: x

    Row ``i`` of the table lists the products ``e_i · e_j``.  The ``images``
    and ``accepting`` lines are optional.
    """
    sections = _sections(text, ("elements", "identity", "table", "images", "accepting"))
    names = _required(sections, "elements")[0][1].split()
    if not names:
        raise ParseError("no elements declared")
    idx = {n: i for i, n in enumerate(names)}
    if len(idx) != len(names):
        raise ParseError("duplicate element name")
    ident_name = _required(sections, "identity")[0][1].strip()
    if ident_name not in idx:
        raise ParseError(f"identity {ident_name!r} is not an element")
    rows = _table(sections, "table", names, idx)
    try:
        mon = FiniteMonoid(tuple(names), rows, idx[ident_name])
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    morphism = accepting = None
    if "images" in sections:
        images = {}
        for lineno, value in sections["images"]:
            for tok in value.split():
                if "=" not in tok:
                    raise ParseError(f"expected letter=element, got {tok!r}", lineno)
                a, x = tok.split("=", 1)
                letter = automata.parse_letter(a)
                if letter in images:
                    raise ParseError(f"duplicate image for letter {a!r}", lineno)
                if x not in idx:
                    raise ParseError(f"unknown element {x!r}", lineno)
                images[letter] = idx[x]
        if not images:
            raise ParseError("empty alphabet")
        morphism = Morphism.from_dict(mon, images)
    if "accepting" in sections:
        acc = set()
        for lineno, value in sections["accepting"]:
            for tok in value.replace(",", " ").split():
                if tok not in idx:
                    raise ParseError(f"unknown element {tok!r}", lineno)
                acc.add(idx[tok])
        accepting = frozenset(acc)
    return MonoidFile(mon, morphism, accepting)


def format_monoid(m: FiniteMonoid, morphism: Morphism | None = None,
                  accepting: Iterable[int] | None = None) -> str:
    lines = ["elements: " + " ".join(m.names), f"identity: {m.name(m.identity)}", "table:"]
    for row in m.rows:
        lines.append(" ".join(m.name(x) for x in row))
    if morphism is not None:
        lines.append("images: " + " ".join(f"{letter_repr(a)}={m.name(x)}"
                                           for a, x in zip(morphism.alphabet, morphism.images)))
    if accepting is not None:
        lines.append("accepting: " + " ".join(m.name(x) for x in sorted(accepting)))
    return "\n".join(lines) + "\n"


def _sections(text: str, keys: Sequence[str]) -> dict:
    """Split ``key: value`` headers; continuation lines belong to the last key."""
    out: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split(":", 1)[0].strip() if ":" in line else None
        if head in keys:
            current = head
            if head in out:
                raise ParseError(f"duplicate section {head!r}", lineno)
            out[head] = []
            rest = line.split(":", 1)[1].strip()
            if rest:
                out[head].append((lineno, rest))
        elif current is None:
            raise ParseError(f"unexpected line {line!r}", lineno)
        else:
            out[current].append((lineno, line))
    return out


def _required(sections: dict, key: str):
    if key not in sections or not sections[key]:
        raise ParseError(f"missing {key!r} section")
    return sections[key]


def _table(sections: dict, key: str, cols: Sequence[str], idx: dict, row_names=None) -> tuple:
    body = _required(sections, key)
    nrows = len(row_names if row_names is not None else cols)
    if len(body) != nrows:
        raise ParseError(f"{key!r} needs {nrows} rows, got {len(body)}")
    rows = []
    for lineno, value in body:
        toks = value.split()
        if len(toks) != len(cols):
            raise ParseError(f"row has {len(toks)} entries, expected {len(cols)}", lineno)
        row = []
        for t in toks:
            if t not in idx:
                raise ParseError(f"unknown element {t!r}", lineno)
            row.append(idx[t])
        rows.append(tuple(row))
    return tuple(rows)
