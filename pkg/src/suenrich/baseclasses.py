"""Base-class solvers: Σ₁(<) (upward-closed languages), alphabet testable
languages, and a generic oracle for classes given by a finite congruence.

Every solver answers separation and covering questions on DFAs and returns
a certificate (a separator or a cover) when the answer is positive.
Solvers that satisfy the hypotheses of the transfer (nontrivial, closed
under right quotients and inverse images) advertise ``transferable``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Protocol, Sequence

import numpy as np

from . import automata, su
from .automata import Dfa, letter_key, sort_alphabet
from .errors import CapacityError
from .monoid import Morphism

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class SeparationResult:
    separable: bool
    separator: Dfa | None = None
    witness: tuple | None = None  # (w1, w2) supporting a negative answer, if known


@dataclass(frozen=True)
class CoverResult:
    coverable: bool
    cover: list | None = None
    witness: tuple | None = None  # a word of L no cover element can contain, if known


# ---------------------------------------------------------------------------
# closures
# ---------------------------------------------------------------------------

def subword_closure(d: Dfa) -> Dfa:
    """Upward closure: words having some word of ``L(d)`` as scattered subword."""
    return automata.determinize(
        d.alphabet, [d.initial],
        lambda q, a: (q, d.delta[q][d.index[a]]),
        lambda q: q in d.accepting).canonical


def downward_closure(d: Dfa) -> Dfa:
    """Scattered subwords of words of ``L(d)`` (the trimmed automaton may skip letters)."""
    live = automata._coreachable(d)
    start = [d.initial] if d.initial in live else []
    return automata.determinize(
        d.alphabet, start,
        lambda q, a: [t for t in (d.delta[q][d.index[a]],) if t in live],
        lambda q: q in d.accepting,
        epsilon=lambda q: [t for t in d.delta[q] if t in live]).canonical


def is_subword(u: Sequence, w: Sequence) -> bool:
    it = iter(w)
    return all(any(x == y for y in it) for x in u)


# ---------------------------------------------------------------------------
# Σ₁(<)
# ---------------------------------------------------------------------------

def sigma1_separation(L1: Dfa, L2: Dfa) -> SeparationResult:
    """Separable iff ``↑L1 ∩ L2 = ∅``; the separator is ``↑L1``."""
    up = subword_closure(L1)
    w2 = automata.intersection_witness(up, L2)
    if w2 is None:
        return SeparationResult(True, up)
    return SeparationResult(False, None, (_subword_source(L1, w2), w2))


def _subword_source(L1: Dfa, w2: Sequence):
    """Some word of ``L1`` that is a subword of ``w2`` (exists by choice of w2)."""
    sub = downward_closure(automata.from_words(L1.alphabet, [w2]))
    return automata.intersection_witness(L1, sub)


def sigma1_covering(L: Dfa, Lb: Sequence[Dfa]) -> CoverResult:
    """Exact Σ₁(<) covering.

    An upward-closed language misses ``L_i`` iff it misses ``↓L_i``, so the
    pair is coverable iff ``L ∩ ⋂_i ↓L_i = ∅``.  The cover consists of the
    upward closures ``↑(L ∖ ↓L_i)``.
    """
    downs = [downward_closure(b) for b in Lb]
    common = automata.intersection(L, *downs) if downs else L
    w = automata.shortest_accepted(common)
    if w is not None:
        return CoverResult(False, None, w)
    cover = []
    for dn in downs:
        part = automata.difference(L, dn)
        if not part.is_empty():
            cover.append(subword_closure(part))
    return CoverResult(True, cover)


# ---------------------------------------------------------------------------
# alphabet testable languages
# ---------------------------------------------------------------------------

def realizable_contents(d: Dfa, budget: int = DEFAULT_BUDGET) -> set:
    """Letter sets ``cont(w)`` over accepted words ``w`` (lazy BFS).

    Contents are bitmasks over ``d.alphabet`` (bit ``i`` = ``alphabet[i]``).
    """
    live = automata._coreachable(d)
    if d.initial not in live:
        return set()
    start = (d.initial, 0)
    seen = {start}
    queue = deque([start])
    out = set()
    nl = len(d.alphabet)
    while queue:
        q, c = queue.popleft()
        if q in d.accepting:
            out.add(c)
        row = d.delta[q]
        for i in range(nl):
            t = row[i]
            if t not in live:
                continue
            nxt = (t, c | (1 << i))
            if nxt not in seen:
                if len(seen) >= budget:
                    raise CapacityError("content exploration exceeded its budget")
                seen.add(nxt)
                queue.append(nxt)
    return out


def content_interval_dfa(alphabet: Iterable, lower: Iterable, upper: Iterable) -> Dfa:
    """Words whose letter set ``X`` satisfies ``lower ⊆ X ⊆ upper``."""
    lower, upper = frozenset(lower), frozenset(upper)
    sink = "sink"

    def step(s, a):
        if s == sink or a not in upper:
            return sink
        return s | {a} if a in lower else s

    return automata.explore(alphabet, frozenset(), step,
                            lambda s: s != sink and s == lower).canonical


def _letters(mask: int, alphabet: Sequence) -> frozenset:
    return frozenset(a for i, a in enumerate(alphabet) if mask >> i & 1)


def _mask_type(width: int):
    """Array dtype and scalar cast for ``width``-bit content masks."""
    if width <= 64:
        return np.uint64, np.uint64
    return object, int


class _Antichain:
    """Maximal content intervals ``(lo, up)`` under inclusion, as bitmask
    arrays so each insertion is one vectorized comparison."""

    def __init__(self, width: int):
        self.dtype, self.cast = _mask_type(width)
        self.lo = np.zeros(16, dtype=self.dtype)
        self.up = np.zeros(16, dtype=self.dtype)
        self.alive = np.zeros(16, dtype=bool)
        self.n = 0

    def _masks(self):
        n = self.n
        return self.lo[:n], self.up[:n], self.alive[:n]

    def covers(self, lo: int, up: int) -> bool:
        """Some kept interval contains ``[lo, up]``."""
        L, U, A = self._masks()
        lo_, up_ = self.cast(lo), self.cast(up)
        return bool(np.any(A & ((L & ~lo_) == 0) & ((up_ & ~U) == 0)))

    def add(self, lo: int, up: int) -> int | None:
        """Insert unless contained; drop the intervals it contains."""
        if self.covers(lo, up):
            return None
        L, U, A = self._masks()
        lo_, up_ = self.cast(lo), self.cast(up)
        A[A & ((lo_ & ~L) == 0) & ((U & ~up_) == 0)] = False
        if self.n == len(self.lo):
            grow = len(self.lo)
            self.lo = np.concatenate([self.lo, np.zeros(grow, dtype=self.dtype)])
            self.up = np.concatenate([self.up, np.zeros(grow, dtype=self.dtype)])
            self.alive = np.concatenate([self.alive, np.zeros(grow, dtype=bool)])
        i = self.n
        self.lo[i], self.up[i], self.alive[i] = lo_, up_, True
        self.n += 1
        return i

    def items(self) -> list:
        L, U, A = self._masks()
        return [(int(x), int(y)) for x, y, ok in zip(L, U, A) if ok]


def realizable_intervals(d: Dfa, budget: int = DEFAULT_BUDGET) -> set:
    """The realizable contents of ``d`` as a set of intervals ``(lo, up)``.

    A letter labelling a self-loop on a visited state can be taken or skipped
    at will, so every walk free of self-loops realizes exactly the contents
    between its own content ``lo`` and ``lo`` plus the self-loop letters of
    the states it visits.  The union of these intervals is the set returned
    by :func:`realizable_contents`, usually in far fewer pieces.
    """
    live = automata._coreachable(d)
    if d.initial not in live:
        return set()
    nl = len(d.alphabet)
    loops = [sum(1 << i for i in range(nl) if d.delta[q][i] == q) for q in range(d.n_states)]
    # per state, an antichain of maximal intervals: extending both sides of
    # [lo, up] ⊆ [lo', up'] by the same walk preserves the inclusion
    best = {q: _Antichain(nl) for q in range(d.n_states)}
    queue = deque()
    size = 0

    def offer(q, lo, up):
        nonlocal size
        up |= lo
        i = best[q].add(lo, up)
        if i is None:
            return
        size += 1
        if size > budget:
            raise CapacityError("content exploration exceeded its budget")
        queue.append((q, i, lo, up))

    offer(d.initial, 0, loops[d.initial])
    while queue:
        q, i, lo, up = queue.popleft()
        if not best[q].alive[i]:
            continue  # superseded meanwhile
        row = d.delta[q]
        for a in range(nl):
            t = row[a]
            if t == q or t not in live:
                continue
            offer(t, lo | (1 << a), up | loops[t])
    return _drop_subsumed(iv for q in d.accepting for iv in best[q].items())


def _drop_subsumed(intervals) -> set:
    # widest first: a later interval can then never strictly contain a kept one
    ivs = sorted(set(intervals), key=lambda iv: (bin(iv[1] & ~iv[0]).count("1"), iv), reverse=True)
    keep = _Antichain(max((up.bit_length() for _, up in ivs), default=0))
    return {iv for iv in ivs if keep.add(*iv) is not None}


class _Intervals:
    """A fixed family of content intervals with vectorized queries."""

    def __init__(self, intervals, width: int):
        dtype, self.cast = _mask_type(width)
        ivs = sorted(intervals)
        self.lo = np.array([lo for lo, _ in ivs], dtype=dtype)
        self.up = np.array([up for _, up in ivs], dtype=dtype)

    def meeting(self, lo: int, up: int) -> np.ndarray:
        """Mask of the intervals sharing a content with ``[lo, up]``."""
        lo_, up_ = self.cast(lo), self.cast(up)
        return ((self.lo | lo_) & ~(self.up & up_)) == 0

    def misses(self, lo: int, up: int) -> bool:
        return not self.meeting(lo, up).any()

    def escape(self, lo: int, up: int, mask: np.ndarray) -> int:
        """Letters that take ``[lo, up]`` out of some masked interval
        (0 when every masked interval contains it)."""
        lo_, up_ = self.cast(lo), self.cast(up)
        extra = ((self.lo[mask] & ~lo_) | (up_ & ~self.up[mask]))
        nz = extra[extra != 0]
        return int(nz[0]) if len(nz) else 0


def at_covering(L: Dfa, Lb: Sequence[Dfa], budget: int = DEFAULT_BUDGET) -> CoverResult:
    """Exact AT covering via realizable letter contents.

    Coverable iff every content realized in ``L`` is missing from the
    contents realized by some member of ``Lb``.  The contents of ``L`` are
    handled as intervals ``[lo, up]``; an interval meeting a content interval
    of every ``L_i`` is split on a letter that separates it from one of those
    intervals, until each piece avoids some ``L_i`` (its interval language is
    then a cover element disjoint from ``L_i``) or some single content is
    realized everywhere (not coverable).
    """
    alphabet = L.alphabet
    n = len(alphabet)
    for b in Lb:
        if b.alphabet != alphabet:
            raise automata.AlphabetMismatch("automata are over different alphabets")
    rl = realizable_intervals(L, budget)
    rbs = [_Intervals(realizable_intervals(b, budget), n) for b in Lb]
    pieces = _Antichain(n)
    work = sorted(rl)
    while work:
        lo, up = work.pop()
        if pieces.covers(lo, up):
            continue
        hits = [rb.meeting(lo, up) for rb in rbs]
        avoid = next((i for i, h in enumerate(hits) if not h.any()), None)
        if avoid is not None:
            pieces.add(*_grow_interval(lo, up, n, rbs[avoid]))
            continue
        extra = next((e for rb, h in zip(rbs, hits) if (e := rb.escape(lo, up, h))), 0)
        if not extra:
            # every interval met contains [lo, up]: its contents are realized everywhere
            return CoverResult(False, None, _word_with_content(L, _letters(lo, alphabet)))
        bit = extra & -extra
        work.append((lo, up & ~bit))
        work.append((lo | bit, up))
    cover = [content_interval_dfa(alphabet, _letters(lo, alphabet), _letters(up, alphabet))
             for lo, up in sorted(pieces.items())]
    return CoverResult(True, cover)


def _grow_interval(lo: int, up: int, n: int, forbidden: _Intervals) -> tuple:
    """Widen ``[lo, up]`` letter by letter while it misses ``forbidden``."""
    for i in range(n):
        bit = 1 << i
        if not up & bit and forbidden.misses(lo, up | bit):
            up |= bit
    for i in range(n):
        bit = 1 << i
        if lo & bit and forbidden.misses(lo & ~bit, up):
            lo &= ~bit
    return lo, up


def _word_with_content(d: Dfa, c: frozenset):
    return automata.intersection_witness(d, content_interval_dfa(d.alphabet, c, c))


# ---------------------------------------------------------------------------
# finite congruences
# ---------------------------------------------------------------------------

class Congruence(Protocol):
    """A finite-index congruence presented lazily: the class of ``w·a`` is
    ``step(class of w, a)``.  Class values must be hashable."""

    alphabet: tuple

    def initial(self) -> Hashable: ...

    def step(self, c: Hashable, a) -> Hashable: ...


@dataclass(frozen=True)
class MorphismCongruence:
    morphism: Morphism

    @property
    def alphabet(self):
        return self.morphism.alphabet

    def initial(self):
        return self.morphism.monoid.identity

    def step(self, c, a):
        return self.morphism.monoid.mul(c, self.morphism.image_of[a])

    def describe(self, c) -> str:
        return self.morphism.monoid.name(c)


@dataclass(frozen=True)
class ContentCongruence:
    """Same set of letters (the classes generating AT)."""

    alphabet: tuple

    def initial(self):
        return frozenset()

    def step(self, c, a):
        return c if a in c else c | {a}

    def describe(self, c) -> str:
        return "{" + ",".join(automata.letter_repr(x) for x in sorted(c, key=letter_key)) + "}"


@dataclass(frozen=True)
class SuCongruence:
    """Same class in the canonical partition of stratum ``k``."""

    alphabet: tuple
    k: int

    def initial(self):
        return su.su_class_of((), self.k)

    def step(self, c, a):
        return su.next_class(c, a, self.k)

    def describe(self, c) -> str:
        return str(c)


@dataclass(frozen=True)
class EnrichedContentCongruence:
    """Same stratum-``j`` class and same set of tagged letters: the classes
    generating the alphabet-testable languages enriched at stratum ``j``."""

    alphabet: tuple
    j: int

    def initial(self):
        return (su.su_class_of((), self.j), frozenset())

    def step(self, c, a):
        cls, content = c
        y = (cls, a)
        return su.next_class(cls, a, self.j), content if y in content else content | {y}

    def describe(self, c) -> str:
        cls, content = c
        letters = ",".join(automata.letter_repr(y) for y in sorted(content, key=letter_key))
        return f"{cls} with tags {{{letters}}}"


@dataclass
class CongruenceVerdict:
    coverable: bool
    assignment: dict = field(default_factory=dict)  # class -> index of avoided member
    witness: tuple | None = None  # word of L whose class meets all members
    explored: int = 0


def congruence_cover_search(cong: Congruence, L: Dfa, Lb: Sequence[Dfa],
                            budget: int = DEFAULT_BUDGET) -> CongruenceVerdict:
    """Joint BFS over (class, state of L, states of Lb).

    Stops as soon as one class is seen to meet ``L`` and every member of
    ``Lb`` (then no cover exists).
    """
    dfas = [L] + list(Lb)
    for d in dfas:
        if d.alphabet != tuple(cong.alphabet):
            raise automata.AlphabetMismatch("congruence and automata alphabets differ")
    m = len(Lb)
    start = (cong.initial(),) + tuple(d.initial for d in dfas)
    parent = {start: None}
    queue = deque([start])
    meets: dict = {}  # class -> bitmask; bit 0 = L, bit i+1 = Lb[i]
    full = (1 << (m + 1)) - 1
    while queue:
        st = queue.popleft()
        c = st[0]
        bits = 0
        for i, (d, q) in enumerate(zip(dfas, st[1:])):
            if q in d.accepting:
                bits |= 1 << i
        if bits:
            cur = meets.get(c, 0) | bits
            meets[c] = cur
            if cur == full:
                return CongruenceVerdict(False, witness=_class_witness(parent, st, L, c, meets),
                                         explored=len(parent))
        for a in cong.alphabet:
            nxt = (cong.step(c, a),) + tuple(d.delta[q][d.index[a]] for d, q in zip(dfas, st[1:]))
            if nxt not in parent:
                if len(parent) >= budget:
                    raise CapacityError("congruence exploration exceeded its budget")
                parent[nxt] = (st, a)
                queue.append(nxt)
    assignment = {}
    for c, bits in meets.items():
        if bits & 1:
            assignment[c] = next(i for i in range(m) if not bits & (1 << (i + 1)))
    return CongruenceVerdict(True, assignment, explored=len(parent))


def _class_witness(parent, st, L, c, meets):
    # a word reaching the state where the class was completed; if that word is
    # not itself in L, report only the class
    word = []
    cur = st
    while parent[cur] is not None:
        cur, a = parent[cur]
        word.append(a)
    word = tuple(reversed(word))
    return word if L.accepts(word) else None


def congruence_class_dfa(cong: Congruence, classes: Iterable, max_states: int = DEFAULT_BUDGET) -> Dfa:
    wanted = set(classes)
    return automata.explore(cong.alphabet, cong.initial(), cong.step,
                            lambda c: c in wanted, max_states=max_states).canonical


def finite_congruence_covering(cong: Congruence | Morphism, L: Dfa, Lb: Sequence[Dfa],
                               budget: int = DEFAULT_BUDGET, build_cover: bool = True) -> CoverResult:
    """Covering for the Boolean algebra generated by the classes of ``cong``.

    Optimal covers are unions of classes, so coverable iff no class meets
    both ``L`` and every member of ``Lb``.
    """
    if isinstance(cong, Morphism):
        cong = MorphismCongruence(cong)
    v = congruence_cover_search(cong, L, Lb, budget)
    if not v.coverable:
        return CoverResult(False, None, v.witness)
    if not build_cover:
        return CoverResult(True, None)
    groups: dict = {}
    for c, i in v.assignment.items():
        groups.setdefault(i, []).append(c)
    cover = [congruence_class_dfa(cong, groups[i]) for i in sorted(groups)]
    return CoverResult(True, cover)


def at_su_covering_oracle(L: Dfa, Lb: Sequence[Dfa], j: int, budget: int = DEFAULT_BUDGET,
                          use_lower_strata: bool = True) -> CoverResult:
    """Covering for alphabet testable languages enriched at stratum ``j``.

    The enriched classes grow with the stratum, so a positive answer at any
    stratum ``j' ≤ j`` is a positive answer at ``j``; lower strata are tried
    first because their class spaces are much smaller.  The final answer is
    decided at stratum ``j`` itself.
    """
    alphabet = L.alphabet
    if use_lower_strata:
        for jj in range(0, j):
            try:
                r = finite_congruence_covering(EnrichedContentCongruence(alphabet, jj), L, Lb,
                                               budget, build_cover=False)
            except CapacityError:
                break
            if r.coverable:
                return r
    return finite_congruence_covering(EnrichedContentCongruence(alphabet, j), L, Lb,
                                      budget, build_cover=False)


# ---------------------------------------------------------------------------
# solver values
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BaseSolver:
    """A pluggable solver together with its declared properties."""

    name: str
    separate_fn: Callable
    cover_fn: Callable
    nontrivial: bool = True
    closed_under_right_quotient: bool = True
    closed_under_inverse_image: bool = True

    def __post_init__(self):
        if not self.nontrivial:
            raise ValueError(f"solver {self.name!r}: the class must be nontrivial")

    @property
    def transferable(self) -> bool:
        return (self.nontrivial and self.closed_under_right_quotient
                and self.closed_under_inverse_image)

    def separate(self, L1: Dfa, L2: Dfa) -> SeparationResult:
        return self.separate_fn(L1, L2)

    def cover(self, L: Dfa, Lb: Sequence[Dfa]) -> CoverResult:
        return self.cover_fn(L, list(Lb))


def _separate_by_cover(cover_fn):
    def separate(L1: Dfa, L2: Dfa) -> SeparationResult:
        r = cover_fn(L1, [L2])
        if not r.coverable:
            return SeparationResult(False, None, None if r.witness is None else (r.witness,))
        parts = r.cover or []
        sep = automata.union(*parts) if parts else automata.empty(L1.alphabet)
        return SeparationResult(True, sep)
    return separate


SIGMA1 = BaseSolver("sigma1", sigma1_separation, sigma1_covering)
AT = BaseSolver("at", _separate_by_cover(at_covering), at_covering)


def su_solver(k: int) -> BaseSolver:
    """Direct solver for one fixed stratum (not used through the transfer)."""
    def cover(L, Lb):
        return finite_congruence_covering(SuCongruence(L.alphabet, k), L, Lb)
    return BaseSolver(f"su{k}", _separate_by_cover(cover), cover,
                      closed_under_right_quotient=False, closed_under_inverse_image=False)


def congruence_solver(m: Morphism, name: str = "congruence") -> BaseSolver:
    """Direct solver for the classes of a given morphism."""
    def cover(L, Lb):
        return finite_congruence_covering(MorphismCongruence(m), L, Lb)
    return BaseSolver(name, _separate_by_cover(cover), cover,
                      closed_under_right_quotient=False, closed_under_inverse_image=False)


def get_solver(name: str, loader: Callable[[str], Morphism] | None = None) -> BaseSolver:
    """Resolve ``sigma1 | at | su<k> | congruence:<file>``."""
    if name == "sigma1":
        return SIGMA1
    if name == "at":
        return AT
    if name.startswith("su") and name[2:].isdigit():
        return su_solver(int(name[2:]))
    if name.startswith("congruence:"):
        if loader is None:
            raise ValueError("congruence solvers need a morphism loader")
        return congruence_solver(loader(name.split(":", 1)[1]), name)
    raise ValueError(f"unknown class {name!r}")
