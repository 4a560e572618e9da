"""Ultimately periodic ω-words, finite ω-semigroups and the well-formed
ω-alphabet.

A finite ω-semigroup is stored the Wilke way: a semigroup table for ``S₊``,
a mixed product table ``S₊ × S_ω → S_ω`` and the map ``s ↦ s^ω``.  Every
ω-word handled here is ultimately periodic (``u·v^ω``), which is enough to
evaluate morphisms exactly and to check the pointwise identities of the
factorization maps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from . import automata
from .automata import letter_key, word_repr
from .errors import InvariantViolation, ParseError
from .monoid import _required, _sections, _table
from .report import Check

BOX = None


# ---------------------------------------------------------------------------
# up-words
# ---------------------------------------------------------------------------

def _primitive_root(v: tuple) -> tuple:
    n = len(v)
    for p in range(1, n + 1):
        if n % p == 0 and v[:p] * (n // p) == v:
            return v[:p]
    return v


@dataclass(frozen=True)
class UpWord:
    """The ω-word ``prefix · period^ω`` in canonical form.

    Use :meth:`of` to build one: it picks the primitive period and the
    shortest prefix, so two up-words denote the same ω-word exactly when
    they compare equal.
    """

    prefix: tuple
    period: tuple

    @classmethod
    def of(cls, prefix: Sequence, period: Sequence) -> "UpWord":
        u, v = tuple(prefix), tuple(period)
        if not v:
            raise ValueError("the period of an ultimately periodic word must be nonempty")
        v = _primitive_root(v)
        while u and u[-1] == v[-1]:
            u, v = u[:-1], (v[-1],) + v[:-1]
        return cls(u, v)

    def letter(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(n))

    def map(self, images: dict) -> "UpWord":
        """Image under the letter-to-word morphism ``images``."""
        u = tuple(x for a in self.prefix for x in images[a])
        v = tuple(x for a in self.period for x in images[a])
        return UpWord.of(u, v)

    def __str__(self):
        u = word_repr(self.prefix) if self.prefix else ""
        return f"{u}({word_repr(self.period)})^w"


def parse_upword(text: str) -> UpWord:
    """Parse ``u(v)^w``; ``u`` may be empty."""
    text = text.strip()
    if not text.endswith(")^w"):
        raise ParseError(f"up-word {text!r} must end with '(period)^w'")
    body = text[:-2]
    depth = 0
    for start in range(len(body) - 1, -1, -1):
        if body[start] == ")":
            depth += 1
        elif body[start] == "(":
            depth -= 1
            if depth == 0:
                break
    else:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    period = automata.parse_word(body[start + 1:-1])
    if not period:
        raise ParseError("empty period")
    return UpWord.of(automata.parse_word(body[:start]), period)


# ---------------------------------------------------------------------------
# ω-semigroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OmegaSemigroup:
    """Finite ω-semigroup ``(S₊, S_ω)`` given by its three tables."""

    names: tuple
    rows: tuple
    omega_names: tuple
    mixed_rows: tuple
    omega_map: tuple

    def __post_init__(self):
        n, m = len(self.names), len(self.omega_names)
        if n == 0 or m == 0:
            raise ValueError("both sorts of an ω-semigroup must be nonempty")
        if len(set(self.names) | set(self.omega_names)) != n + m:
            raise ValueError("element names must be distinct")
        if len(self.rows) != n or any(len(r) != n or not all(0 <= x < n for x in r) for r in self.rows):
            raise ValueError("the product table must be square over S₊")
        if len(self.mixed_rows) != n or any(len(r) != m or not all(0 <= x < m for x in r)
                                            for r in self.mixed_rows):
            raise ValueError("the mixed table must have one row per S₊ element over S_ω")
        if len(self.omega_map) != n or not all(0 <= x < m for x in self.omega_map):
            raise ValueError("the ω-map must send each S₊ element into S_ω")

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    @cached_property
    def omega_index(self) -> dict:
        return {n: i for i, n in enumerate(self.omega_names)}

    def mul(self, s: int, t: int) -> int:
        return self.rows[s][t]

    def mixed(self, s: int, x: int) -> int:
        return self.mixed_rows[s][x]

    def omega(self, s: int) -> int:
        return self.omega_map[s]

    def product(self, xs: Iterable[int]) -> int:
        acc = None
        for x in xs:
            acc = x if acc is None else self.rows[acc][x]
        if acc is None:
            raise ValueError("empty product in a semigroup")
        return acc

    def power(self, s: int, p: int) -> int:
        return self.product([s] * p)

    def is_idempotent(self, s: int) -> bool:
        return self.rows[s][s] == s

    def idempotent_power(self, s: int) -> int:
        x, p = s, 1
        while not self.is_idempotent(x):
            x, p = self.mul(x, s), p + 1
        return p

    @cached_property
    def exponent(self) -> int:
        """Common idempotent exponent: ``s^e`` is idempotent for every ``s``."""
        e = 1
        for s in range(self.size):
            e = lcm(e, self.idempotent_power(s))
        return e

    def name(self, s: int) -> str:
        return self.names[s]

    def omega_name(self, x: int) -> str:
        return self.omega_names[x]


def check_axioms(o: OmegaSemigroup) -> list[Check]:
    """Exhaustively check associativity, mixed associativity and ω-coherence."""
    n, m = o.size, len(o.omega_names)
    nm, on = o.name, o.omega_name

    def first(items):
        return next(iter(items), None)

    assoc = first(f"({nm(a)}{nm(b)}){nm(c)} != {nm(a)}({nm(b)}{nm(c)})"
                  for a, b, c in product(range(n), repeat=3)
                  if o.mul(o.mul(a, b), c) != o.mul(a, o.mul(b, c)))
    mixed = first(f"{nm(a)}({nm(b)}·{on(x)}) != ({nm(a)}{nm(b)})·{on(x)}"
                  for a, b, x in product(range(n), range(n), range(m))
                  if o.mixed(a, o.mixed(b, x)) != o.mixed(o.mul(a, b), x))
    # powers of s cycle within |S₊| + 1 steps
    power = first(f"({nm(s)}^{p})^ω != {nm(s)}^ω"
                  for s in range(n) for p in range(2, n + 2)
                  if o.omega(o.power(s, p)) != o.omega(s))
    shift = first(f"{nm(s)}({nm(t)}{nm(s)})^ω != ({nm(s)}{nm(t)})^ω"
                  for s, t in product(range(n), repeat=2)
                  if o.mixed(s, o.omega(o.mul(t, s))) != o.omega(o.mul(s, t)))
    return [Check("associativity", assoc is None, assoc),
            Check("mixed-associativity", mixed is None, mixed),
            Check("omega-power", power is None, power),
            Check("omega-shift", shift is None, shift)]


@dataclass(frozen=True, eq=False)
class OmegaMorphism:
    """Letter images in ``S₊``; extends to ``(A⁺, A^ω) → (S₊, S_ω)``."""

    alphabet: tuple
    algebra: OmegaSemigroup
    images: tuple

    def __post_init__(self):
        if len(self.alphabet) != len(self.images):
            raise ValueError("one image per letter is required")
        if not all(0 <= x < self.algebra.size for x in self.images):
            raise ValueError("letter images must lie in S₊")

    @classmethod
    def from_dict(cls, algebra: OmegaSemigroup, images: dict) -> "OmegaMorphism":
        letters = automata.sort_alphabet(images)
        return cls(letters, algebra, tuple(images[a] for a in letters))

    @cached_property
    def image_of(self) -> dict:
        return dict(zip(self.alphabet, self.images))

    def finite(self, w: Sequence) -> int:
        """Image of a nonempty finite word in ``S₊``."""
        if len(w) == 0:
            raise ValueError("the empty word has no image in S₊")
        return self.algebra.product(self.image_of[a] for a in w)

    @cached_property
    def semigroup(self) -> tuple:
        """``S = α(A⁺)`` as sorted element indices."""
        seen = set(self.images)
        frontier = list(seen)
        while frontier:
            nxt = []
            for s in frontier:
                for g in self.images:
                    t = self.algebra.mul(s, g)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def witnesses(self) -> dict:
        """A shortest nonempty word for every element of ``S``."""
        out = {}
        for a, g in zip(self.alphabet, self.images):
            out.setdefault(g, (a,))
        frontier = sorted(out)
        while frontier:
            nxt = []
            for s in frontier:
                for a, g in zip(self.alphabet, self.images):
                    t = self.algebra.mul(s, g)
                    if t not in out:
                        out[t] = out[s] + (a,)
                        nxt.append(t)
            frontier = nxt
        return out


def eval_up(m: OmegaMorphism, w: UpWord) -> int:
    """``α(u)·α(v)^ω`` as an ``S_ω`` index."""
    if not w.period:
        raise ValueError("empty period")
    o = m.algebra
    x = o.omega(m.finite(w.period))
    return o.mixed(m.finite(w.prefix), x) if w.prefix else x


# ---------------------------------------------------------------------------
# well-formed ω-alphabet
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WfOmegaAlphabet:
    """Letters ``(e, s, f)`` with ``e ∈ E(S) ∪ {□}``, ``s ∈ S``, ``f ∈ E(S)``."""

    morphism: OmegaMorphism
    idempotents: tuple  # the chosen order on E(S)

    @property
    def algebra(self) -> OmegaSemigroup:
        return self.morphism.algebra

    @cached_property
    def letters(self) -> tuple:
        n = self.algebra.name
        sides = [n(e) for e in self.idempotents]
        mids = [n(s) for s in self.morphism.semigroup]
        return tuple(sorted(product([BOX] + sides, mids, sides), key=letter_key))

    def __len__(self):
        return len(self.letters)

    def __contains__(self, x):
        return x in self.decoded

    @cached_property
    def decoded(self) -> dict:
        idx = self.algebra.index
        return {x: tuple(None if p is None else idx[p] for p in x) for x in self.letters}

    def encode(self, e, s, f) -> tuple:
        n = self.algebra.name
        letter = (None if e is None else n(e), n(s), n(f))
        if letter not in self.decoded:
            raise ValueError(f"{automata.letter_repr(letter)} is not a well-formed ω-letter")
        return letter

    def eval_letter(self, letter) -> int:
        e, s, f = self.decoded[letter]
        o = self.algebra
        v = o.mul(s, f)
        return v if e is None else o.mul(e, v)

    @cached_property
    def eval_morphism(self) -> OmegaMorphism:
        return OmegaMorphism(self.letters, self.algebra,
                             tuple(self.eval_letter(x) for x in self.letters))

    def is_well_formed(self, w: UpWord) -> bool:
        seq = w.prefix + w.period + w.period[:1]
        if any(x not in self.decoded for x in seq):
            return False
        dec = [self.decoded[x] for x in seq]
        if dec[0][0] is not None:
            return False
        return all(f == e for (_, _, f), (e, _, _) in zip(dec, dec[1:]))

    def eval(self, w: UpWord) -> int:
        return eval_up(self.eval_morphism, w)


def wf_omega_alphabet(m: OmegaMorphism, idempotent_order: Sequence[int] | None = None) -> WfOmegaAlphabet:
    idem = tuple(s for s in m.semigroup if m.algebra.is_idempotent(s))
    if idempotent_order is not None:
        order = tuple(idempotent_order)
        if sorted(order) != sorted(idem):
            raise ValueError("idempotent order must list every idempotent of S exactly once")
        idem = order
    return WfOmegaAlphabet(m, idem)


def default_k(m: OmegaMorphism) -> int:
    """Window length ``2^{3|S₊|}`` used to find distinguished positions."""
    return 2 ** (3 * m.algebra.size)


def covering_stratum(m: OmegaMorphism) -> int:
    """Stratum ``2^{3|S₊|+1}`` at which the ω reduction is stated."""
    return 2 * default_k(m)


# ---------------------------------------------------------------------------
# factorization at distinguished positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaEta:
    """Output of :func:`eta_omega` together with its periodic bookkeeping."""

    word: UpWord
    output: UpWord
    k: int
    positions: tuple       # distinguished positions x_0 < ... < x_b
    idempotents: tuple     # e_i at each listed position
    segments: tuple        # α(w_i) for i = 0 .. b
    period_start: int      # the output period covers letters a+1 .. b
    unsafe: bool = False


def _scan(m: OmegaMorphism, w: UpWord, k: int, upto: int, order: dict):
    """Distinguished flag and smallest idempotent at positions ``0 .. upto-1``."""
    o = m.algebra
    img = m.image_of
    suffixes: dict = {}  # value -> shortest length of a suffix ending just before x
    out = []
    for x in range(upto):
        best = None
        for s in suffixes:
            if o.is_idempotent(s) and s in order and (best is None or order[s] < order[best]):
                best = s
        out.append(best)
        g = img[w.letter(x)]
        nxt = {g: 1}
        for s, ln in suffixes.items():
            if ln < k:
                t = o.mul(s, g)
                if t not in nxt or nxt[t] > ln + 1:
                    nxt[t] = ln + 1
        suffixes = nxt
    return out


def eta_omega(m: OmegaMorphism, w: UpWord, k_override: int | None = None, *,
              alphabet: WfOmegaAlphabet | None = None, check_density: bool = True) -> OmegaEta:
    """Cut ``w`` at its distinguished positions and label each factor."""
    a = alphabet or wf_omega_alphabet(m)
    k = default_k(m) if k_override is None else k_override
    unsafe = k_override is not None and k_override != default_k(m)
    if unsafe:
        warnings.warn(f"window length {k} differs from 2^(3|S+|) = {default_k(m)}; "
                      "density is no longer guaranteed", RuntimeWarning, stacklevel=2)
    if k < 1:
        raise ValueError("window length must be positive")
    order = {e: i for i, e in enumerate(a.idempotents)}
    p = len(w.period)
    start = len(w.prefix) + k  # k-types are periodic from here on
    upto = start + p + max(p, k) + 1
    marks = _scan(m, w, k, upto, order)
    if check_density:
        for y in range(k - 1, upto):
            if all(marks[x] is None for x in range(y - k + 1, y + 1)):
                raise InvariantViolation(f"no distinguished position in window ending at {y} of {w}")
    dist = [x for x in range(upto) if marks[x] is not None]
    # first distinguished position in the periodic zone, and its shift by one period
    try:
        ia = next(i for i, x in enumerate(dist) if x >= start)
        ib = dist.index(dist[ia] + p)
    except (StopIteration, ValueError):
        raise InvariantViolation(f"distinguished positions of {w} are not periodic") from None
    dist = dist[:ib + 1]
    es = [marks[x] for x in dist]
    o, nm = m.algebra, m.algebra.name
    segs, letters = [], []
    bounds = [0] + dist
    for i in range(len(dist)):
        seg = w.take(bounds[i + 1])[bounds[i]:]
        s = m.finite(seg)
        segs.append(s)
        left = None if i == 0 else nm(es[i - 1])
        letters.append((left, nm(s), nm(es[i])))
    out = UpWord.of(letters[:ia + 1], letters[ia + 1:])
    return OmegaEta(w, out, k, tuple(dist), tuple(es), tuple(segs), ia + 1, unsafe)


def gamma_omega(m: OmegaMorphism, k: int, witnesses: dict | None = None,
                alphabet: WfOmegaAlphabet | None = None) -> dict:
    """Letter images ``⌈e⌉^k ⌈s⌉ ⌈f⌉^k`` (no left block after ``□``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    a = alphabet or wf_omega_alphabet(m)
    wit = dict(m.witnesses)
    if witnesses:
        wit.update(witnesses)
    for s in m.semigroup:
        if not wit.get(s):
            raise ValueError(f"no nonempty witness for {m.algebra.name(s)}")
        if m.finite(wit[s]) != s:
            raise ValueError(f"witness {word_repr(wit[s])} does not evaluate to {m.algebra.name(s)}")
    images = {}
    for letter, (e, s, f) in a.decoded.items():
        left = () if e is None else wit[e] * k
        images[letter] = left + wit[s] + wit[f] * k
    return images


def apply_gamma(images: dict, w: UpWord) -> UpWord:
    return w.map(images)


def wfw_omega_membership(m: OmegaMorphism, F: Iterable[int], w: UpWord,
                         alphabet: WfOmegaAlphabet | None = None) -> bool:
    """``w`` is well formed and its value lies in ``F``."""
    a = alphabet or wf_omega_alphabet(m)
    return a.is_well_formed(w) and a.eval(w) in set(F)


# ---------------------------------------------------------------------------
# the Ramsey data behind eval(⌈w⌉) = α(w)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EqinfReport:
    conclusive: bool
    s: int | None = None
    t: int | None = None
    f: int | None = None
    g: int | None = None
    blocks: tuple = ()
    equalities: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.conclusive and all(self.equalities.values())

    def to_json(self, o: OmegaSemigroup) -> dict:
        out = {"conclusive": self.conclusive, "pass": self.passed}
        if self.conclusive:
            out.update({k: o.name(getattr(self, k)) for k in "stfg"})
            out["equalities"] = dict(self.equalities)
            out["blocks"] = list(self.blocks)
        return out


def check_eqinf(m: OmegaMorphism, w: UpWord, *, bound: int = 64,
                k_override: int | None = None) -> EqinfReport:
    """Find a block decomposition of the factorization of ``w`` and compare
    the plain products ``s, f`` with the idempotent-padded ones ``t, g``.

    The first block runs through the factor closing at letter ``i_1`` (the
    leading factor included); every later block spans ``c`` output periods,
    with ``c`` searched up to ``bound`` until both ``f`` and ``g`` are
    idempotent, ``sf = s`` and ``tg = t``.
    """
    eta = eta_omega(m, w, k_override)
    o = m.algebra
    q = eta.period_start            # index of the first periodic factor
    p = len(eta.segments) - q       # factors per output period
    plain = list(eta.segments)
    padded = [o.mul(s, e) for s, e in zip(eta.segments, eta.idempotents)]
    head_s, head_t = o.product(plain[:q]), o.product(padded[:q])
    per_s, per_t = o.product(plain[q:]), o.product(padded[q:])
    for c in range(1, bound + 1):
        f, g = o.power(per_s, c), o.power(per_t, c)
        if not (o.is_idempotent(f) and o.is_idempotent(g)):
            continue
        s, t = o.mul(head_s, f), o.mul(head_t, g)
        if o.mul(s, f) != s or o.mul(t, g) != t:
            continue
        eqs = {"s=t": s == t, "fg=f": o.mul(f, g) == f, "gf=g": o.mul(g, f) == g}
        return EqinfReport(True, s, t, f, g, (q + c * p - 1, c * p), eqs)
    return EqinfReport(False)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaFile:
    algebra: OmegaSemigroup
    morphism: OmegaMorphism | None
    accepting: frozenset | None


def parse_omega(text: str) -> OmegaFile:
    """Parse the ω-semigroup format::

        elements: xa xb
        table:
        xa xa
        xa xb
        omega-elements: wa wb
        mixed:
        wa wb
        wa wb
        omega: xa=wa xb=wb
        images: a=xa b=xb
        accepting: wa

    Rows of ``mixed`` are indexed by ``S₊`` and list ``s·x`` for each
    ``x ∈ S_ω``.  ``images`` and ``accepting`` (a subset of ``S_ω``) are
    optional.
    """
    sections = _sections(text, ("elements", "table", "omega-elements", "mixed", "omega",
                                "images", "accepting"))
    names = _required(sections, "elements")[0][1].split()
    onames = _required(sections, "omega-elements")[0][1].split()
    if not names or not onames:
        raise ParseError("both element sorts must be nonempty")
    idx = {n: i for i, n in enumerate(names)}
    oidx = {n: i for i, n in enumerate(onames)}
    if len(idx) != len(names) or len(oidx) != len(onames) or set(idx) & set(oidx):
        raise ParseError("duplicate element name")
    rows = _table(sections, "table", names, idx)
    mixed = _table(sections, "mixed", onames, oidx, row_names=names)
    omap: dict = {}
    for lineno, value in _required(sections, "omega"):
        for tok in value.split():
            s, _, x = tok.partition("=")
            if s not in idx or x not in oidx:
                raise ParseError(f"expected element=omega-element, got {tok!r}", lineno)
            omap[idx[s]] = oidx[x]
    if len(omap) != len(names):
        raise ParseError("the ω-map must be given for every element")
    try:
        alg = OmegaSemigroup(tuple(names), rows, tuple(onames), mixed,
                             tuple(omap[i] for i in range(len(names))))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    morphism = accepting = None
    if "images" in sections:
        images = {}
        for lineno, value in sections["images"]:
            for tok in value.split():
                a, _, x = tok.partition("=")
                if not a or x not in idx:
                    raise ParseError(f"expected letter=element, got {tok!r}", lineno)
                images[automata.parse_letter(a)] = idx[x]
        if not images:
            raise ParseError("empty alphabet")
        morphism = OmegaMorphism.from_dict(alg, images)
    if "accepting" in sections:
        acc = set()
        for lineno, value in sections["accepting"]:
            for tok in value.replace(",", " ").split():
                if tok not in oidx:
                    raise ParseError(f"unknown ω-element {tok!r}", lineno)
                acc.add(oidx[tok])
        accepting = frozenset(acc)
    return OmegaFile(alg, morphism, accepting)


def format_omega(o: OmegaSemigroup, morphism: OmegaMorphism | None = None,
                 accepting: Iterable[int] | None = None) -> str:
    lines = ["elements: " + " ".join(o.names), "table:"]
    lines += [" ".join(o.name(x) for x in row) for row in o.rows]
    lines.append("omega-elements: " + " ".join(o.omega_names))
    lines.append("mixed:")
    lines += [" ".join(o.omega_name(x) for x in row) for row in o.mixed_rows]
    lines.append("omega: " + " ".join(f"{o.name(s)}={o.omega_name(x)}"
                                      for s, x in enumerate(o.omega_map)))
    if morphism is not None:
        lines.append("images: " + " ".join(f"{automata.letter_repr(a)}={o.name(x)}"
                                           for a, x in zip(morphism.alphabet, morphism.images)))
    if accepting is not None:
        lines.append("accepting: " + " ".join(o.omega_name(x) for x in sorted(accepting)))
    return "\n".join(lines) + "\n"


def load_omega(path) -> OmegaFile:
    with open(path, encoding="utf-8") as fh:
        return parse_omega(fh.read())


# ---------------------------------------------------------------------------
# built-in algebras
# ---------------------------------------------------------------------------

def infinitely_many_a() -> OmegaMorphism:
    """Recognizer of "infinitely many a" over ``{a, b}``."""
    o = OmegaSemigroup(("x_a", "x_b"), ((0, 0), (0, 1)), ("w_a", "w_b"),
                       ((0, 1), (0, 1)), (0, 1))
    return OmegaMorphism(("a", "b"), o, (0, 1))


def trivial(alphabet: Sequence = "ab") -> OmegaMorphism:
    o = OmegaSemigroup(("s",), ((0,),), ("w",), ((0,),), (0,))
    return OmegaMorphism(tuple(alphabet), o, (0,) * len(alphabet))


def upword_corpus(alphabet: Sequence = "ab", max_prefix: int = 2, max_period: int = 3) -> list[UpWord]:
    """Distinct up-words ``u(v)^w`` with ``|u| ≤ max_prefix``, ``1 ≤ |v| ≤ max_period``."""
    seen: dict = {}
    for u in automata.all_words(tuple(alphabet), max_prefix):
        for v in automata.all_words(tuple(alphabet), max_period, minlen=1):
            w = UpWord.of(u, v)
            seen.setdefault(w, None)
    return list(seen)
