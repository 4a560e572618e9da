"""Ehrenfeucht–Fraïssé games on finite words.

Two families of games are solved by memoized exhaustive search:

* the two-pebble game for two-variable logic, over the order alone
  (``sig="lt"``) or the order plus the successor relation (``sig="succ"``);
* the Σn game with an alternation counter, whose verdict is the rank-``k``
  Σn preorder ``w ≼ w2``.  The strong signature (``sig="succ"``) adds the
  successor, ``min``, ``max`` and the nullary ``ε`` predicate.

Positions are 0-based.  Equality between pebbled positions is always part of
the signature, so Duplicator must preserve the three-way comparison of any
two pebbles (``<``, ``=`` or ``>``).

On top of the engines the module provides exhaustive checks of the two
tagging-transfer properties: agreement of the game on SU-tagged words implies
agreement of the successor game on the untagged words.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .automata import all_words, word_repr
from .errors import CapacityError
from .report import Check
from .su import canonical_partition, delta, su_equivalent, tag

ORDER = "lt"
SUCCESSOR = "succ"
_SIG_ALIASES = {
    "lt": ORDER, "<": ORDER, "order": ORDER, "order-only": ORDER,
    "succ": SUCCESSOR, "+1": SUCCESSOR, "order+successor": SUCCESSOR,
}

MAX_WORD_LENGTH = 10
MAX_ROUNDS = 4


def normalize_signature(sig: str) -> str:
    try:
        return _SIG_ALIASES[sig]
    except KeyError:
        raise ValueError(f"unknown signature {sig!r} (use 'lt' or 'succ')") from None


def _cmp(x: int, y: int) -> int:
    return (x > y) - (x < y)


@dataclass(frozen=True)
class PreorderVerdict:
    """Outcome of one game, with a short strategy trace.

    When Spoiler wins, ``trace`` holds a winning opening move of Spoiler.
    When Duplicator wins, it lists her answer to every opening move.
    """

    relation: str
    holds: bool
    rounds: int
    signature: str
    trace: tuple = ()

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"relation": self.relation, "holds": self.holds, "rounds": self.rounds,
                "signature": self.signature, "trace": [dict(t) for t in self.trace]}


# ---------------------------------------------------------------------------
# two-variable game
# ---------------------------------------------------------------------------

class _Fo2Game:
    def __init__(self, w, w2, sig):
        self.words = (tuple(w), tuple(w2))
        self.succ = normalize_signature(sig) == SUCCESSOR
        self.win = lru_cache(maxsize=None)(self._win)

    def answers(self, side: int, x: int, y: int, x2: int | None):
        """Duplicator's legal replies when Spoiler moves from ``x`` to ``y``.

        ``side`` is the word Spoiler plays in; ``x2`` is the pebble in the
        other word (``None`` in the opening round).
        """
        me, other = self.words[side], self.words[1 - side]
        label = me[y]
        for y2, b in enumerate(other):
            if b != label:
                continue
            if x2 is not None:
                if _cmp(y, x) != _cmp(y2, x2):
                    continue
                if self.succ and ((x + 1 == y) != (x2 + 1 == y2)
                                  or (y + 1 == x) != (y2 + 1 == x2)):
                    continue
            yield y2

    def _win(self, p: int, p2: int, rounds: int) -> bool:
        """Does Duplicator survive ``rounds`` more moves from pebbles ``(p, p2)``?"""
        if rounds == 0:
            return True
        for side, (x, x2) in ((0, (p, p2)), (1, (p2, p))):
            for y in range(len(self.words[side])):
                if y == x:
                    continue  # the copy answer keeps the configuration
                if not any(self._next(side, y, y2, rounds)
                           for y2 in self.answers(side, x, y, x2)):
                    return False
        return True

    def _next(self, side, y, y2, rounds):
        return self.win(y, y2, rounds - 1) if side == 0 else self.win(y2, y, rounds - 1)

    def play(self, k: int) -> tuple[bool, tuple]:
        if k == 0:
            return True, ()
        trace = []
        for side in (0, 1):
            for y in range(len(self.words[side])):
                good = [y2 for y2 in self.answers(side, 0, y, None)
                        if self._next(side, y, y2, k)]
                if not good:
                    return False, ({"spoiler": side, "position": y},)
                trace.append({"spoiler": side, "position": y, "answer": good[0]})
        return True, tuple(trace)


def fo2_game(w: Sequence, w2: Sequence, k: int, sig: str = ORDER) -> PreorderVerdict:
    if k < 0:
        raise ValueError("number of rounds must be nonnegative")
    holds, trace = _Fo2Game(w, w2, sig).play(k)
    return PreorderVerdict("fo2-equiv", holds, k, normalize_signature(sig), trace)


def fo2_equiv(w: Sequence, w2: Sequence, k: int, sig: str = ORDER) -> bool:
    """Whether Duplicator wins the ``k``-round two-pebble game on ``(w, w2)``."""
    return fo2_game(w, w2, k, sig).holds


# ---------------------------------------------------------------------------
# Σn game
# ---------------------------------------------------------------------------

class _SigmaGame:
    def __init__(self, w, w2, n, sig):
        if n < 1:
            raise ValueError("level n must be at least 1")
        self.words = (tuple(w), tuple(w2))
        self.n = n
        self.strong = normalize_signature(sig) == SUCCESSOR
        self.win = lru_cache(maxsize=None)(self._win)

    def constants_agree(self) -> bool:
        if not self.strong:
            return True
        return (len(self.words[0]) == 0) == (len(self.words[1]) == 0)

    def compatible(self, pairs, x: int, x2: int) -> bool:
        """Is ``pairs ∪ {(x, x2)}`` a correct configuration (``pairs`` being one)?"""
        w, w2 = self.words
        if w[x] != w2[x2]:
            return False
        if self.strong and ((x == 0) != (x2 == 0)
                            or (x == len(w) - 1) != (x2 == len(w2) - 1)):
            return False
        for y, y2 in pairs:
            if _cmp(x, y) != _cmp(x2, y2):
                return False
            if self.strong and ((x + 1 == y) != (x2 + 1 == y2)
                                or (y + 1 == x) != (y2 + 1 == x2)):
                return False
        return True

    def moves(self, active: int, counter: int):
        yield active, counter
        if counter < self.n - 1:
            yield 1 - active, counter + 1

    def answers(self, pairs, side: int, p: int):
        for q in range(len(self.words[1 - side])):
            pair = (p, q) if side == 0 else (q, p)
            if self.compatible(pairs, *pair):
                yield pair

    def _win(self, pairs: frozenset, active: int, counter: int, rounds: int) -> bool:
        if rounds == 0:
            return True
        for side, c in self.moves(active, counter):
            taken = {pr[side] for pr in pairs}
            for p in range(len(self.words[side])):
                if p in taken:
                    continue  # answered by the matching pebble at no cost
                if not any(self.win(pairs | {pair}, side, c, rounds - 1)
                           for pair in self.answers(pairs, side, p)):
                    return False
        return True

    def play(self, k: int) -> tuple[bool, tuple]:
        if not self.constants_agree():
            return False, ({"spoiler": "constants"},)
        if k == 0:
            return True, ()
        trace = []
        empty: frozenset = frozenset()
        for side, c in self.moves(0, 0):
            for p in range(len(self.words[side])):
                good = [pair for pair in self.answers(empty, side, p)
                        if self.win(frozenset([pair]), side, c, k - 1)]
                if not good:
                    return False, ({"spoiler": side, "position": p},)
                trace.append({"spoiler": side, "position": p, "answer": good[0][1 - side]})
        return True, tuple(trace)


def _check_bounds(w, w2, k, max_len, max_rounds):
    if k < 0:
        raise ValueError("number of rounds must be nonnegative")
    if max(len(w), len(w2)) > max_len:
        raise CapacityError(f"words longer than {max_len} letters are beyond the game bound")
    if k > max_rounds:
        raise CapacityError(f"more than {max_rounds} rounds are beyond the game bound")


def sigma_game(w: Sequence, w2: Sequence, n: int, k: int, sig: str = ORDER, *,
               max_len: int = MAX_WORD_LENGTH, max_rounds: int = MAX_ROUNDS) -> PreorderVerdict:
    w, w2 = tuple(w), tuple(w2)
    _check_bounds(w, w2, k, max_len, max_rounds)
    holds, trace = _SigmaGame(w, w2, n, sig).play(k)
    return PreorderVerdict("sigma-preorder", holds, k, normalize_signature(sig), trace)


def sigma_preorder(w: Sequence, w2: Sequence, n: int, k: int, sig: str = ORDER, *,
                   max_len: int = MAX_WORD_LENGTH, max_rounds: int = MAX_ROUNDS) -> bool:
    """``w ≼ w2`` for rank-``k`` Σn sentences: Spoiler starts in ``w``.

    Raises :class:`CapacityError` beyond the desk-scale bounds (overridable).
    """
    return sigma_game(w, w2, n, k, sig, max_len=max_len, max_rounds=max_rounds).holds


def subword_rank_oracle(w: Sequence, w2: Sequence, k: int) -> bool:
    """Every subword of ``w`` of length at most ``k`` is a subword of ``w2``."""
    w, w2 = tuple(w), tuple(w2)
    subwords = {tuple(w[i] for i in idx)
                for m in range(min(k, len(w)) + 1)
                for idx in combinations(range(len(w)), m)}
    return all(_embeds(s, w2) for s in subwords)


def _embeds(s: tuple, w: tuple) -> bool:
    it = iter(w)
    return all(a in it for a in s)


# ---------------------------------------------------------------------------
# transfer properties
# ---------------------------------------------------------------------------

@dataclass
class TransferReport:
    """Result of an exhaustive property run over a grid of words."""

    name: str
    params: dict
    checked: int = 0
    premise_held: int = 0
    violations: list = field(default_factory=list)
    extra: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and all(c.passed for c in self.extra)

    def checks(self) -> list[Check]:
        main = Check(self.name, not self.violations,
                     self.violations[0] if self.violations else None,
                     {"checked": self.checked, "premise_held": self.premise_held,
                      "violations": len(self.violations)})
        return [main, *self.extra]

    def to_json(self) -> dict:
        return {"name": self.name, "params": self.params, "pass": self.passed,
                "checked": self.checked, "premise_held": self.premise_held,
                "violations": self.violations[:20],
                "checks": [c.to_json() for c in self.extra]}


def _pair_text(*ws) -> str:
    return " vs ".join(word_repr(w) for w in ws)


def verify_fo2_transfer(maxlen: int = 5, k: int = 1, alphabet: Sequence = "ab") -> TransferReport:
    """Order-only equivalence of the stratum-``2k`` taggings implies
    successor equivalence of the words, on every pair up to ``maxlen``."""
    if k not in (1, 2):
        raise CapacityError("the two-variable transfer check supports k in {1, 2}")
    if maxlen > 6:
        raise CapacityError("the two-variable transfer check supports maxlen <= 6")
    alphabet = tuple(alphabet)
    part = canonical_partition(alphabet, 2 * k)
    words = list(all_words(alphabet, maxlen))
    tagged = {w: tag(w, part) for w in words}
    rep = TransferReport("fo2-transfer", {"maxlen": maxlen, "k": k, "stratum": 2 * k})
    for i, w in enumerate(words):
        for w2 in words[i:]:
            rep.checked += 1
            if not fo2_equiv(tagged[w], tagged[w2], k, ORDER):
                continue
            rep.premise_held += 1
            if not fo2_equiv(w, w2, k, SUCCESSOR):
                rep.violations.append(_pair_text(w, w2))
    rep.extra.append(_fo2_spot_check(alphabet))
    return rep


def _fo2_spot_check(alphabet) -> Check:
    """"ab" and "ba" split by the successor game; so must their taggings be."""
    if not {"a", "b"} <= set(alphabet):
        return Check("fo2-spot-check", True, detail={"skipped": True})
    k = 2  # one round only compares letter contents, which agree
    part = canonical_partition(alphabet, 2 * k)
    plain = fo2_equiv("ab", "ba", k, SUCCESSOR)
    tagged = fo2_equiv(tag("ab", part), tag("ba", part), k, ORDER)
    return Check("fo2-spot-check", (not plain) and (not tagged),
                 None if (not plain and not tagged) else "ab vs ba",
                 {"rounds": k, "successor_equiv": plain, "tagged_equiv": tagged})


def verify_sigma_transfer(maxlen: int = 4, k: int = 1, n: int = 1, alphabet: Sequence = "ab",
                          *, samples: int = 200, seed: int = 0) -> TransferReport:
    """The Σn tagging transfer, plus the suffix-removal, concatenation and
    shadow-decomposition properties used to establish it.

    With ``ℓ = 2^k``: if ``w`` and ``w2`` agree on the stratum-``ℓ`` class and
    ``τ_ℓ(w) ≼ τ_ℓ(w2)`` at rank ``k + ℓ`` (order only), then ``w ≼ w2`` at
    rank ``k`` in the strong signature.
    """
    if k not in (1, 2):
        raise CapacityError("the Σn transfer check supports k in {1, 2}")
    if n not in (1, 2):
        raise CapacityError("the Σn transfer check supports n in {1, 2}")
    if maxlen > 5:
        raise CapacityError("the Σn transfer check supports maxlen <= 5")
    alphabet = tuple(alphabet)
    ell = 2 ** k
    part = canonical_partition(alphabet, ell)
    words = list(all_words(alphabet, maxlen))
    tagged = {w: tag(w, part) for w in words}
    bound = {"max_len": max(maxlen, MAX_WORD_LENGTH), "max_rounds": k + ell}
    rep = TransferReport("sigma-transfer", {"maxlen": maxlen, "k": k, "n": n, "stratum": ell})
    hypothesis = []
    for w in words:
        for w2 in words:
            rep.checked += 1
            if not su_equivalent(w, w2, ell):
                continue
            if not sigma_preorder(tagged[w], tagged[w2], n, k + ell, ORDER, **bound):
                continue
            rep.premise_held += 1
            hypothesis.append((w, w2))
            if not sigma_preorder(w, w2, n, k, SUCCESSOR, **bound):
                rep.violations.append(_pair_text(w, w2))
    rng = random.Random(seed)
    rep.extra.append(check_suffix_removal(words, n, k, rng, samples))
    rep.extra.append(check_concatenation(words, n, k, rng, samples))
    rep.extra.append(check_shadow(hypothesis, part, n, k, rng, samples))
    return rep


def check_suffix_removal(words, n: int, k: int, rng: random.Random, samples: int,
                         max_h: int = 2) -> Check:
    """``|u| ≤ h`` and ``wu ≼_{k+h} w2u`` imply ``w ≼_k w2`` (order only)."""
    short = [u for u in words if len(u) <= max_h]
    tested = 0
    bound = {"max_len": MAX_WORD_LENGTH + max_h, "max_rounds": k + max_h}
    for _ in range(samples):
        w, w2, u = rng.choice(words), rng.choice(words), rng.choice(short)
        h = rng.randint(len(u), max_h)
        if sigma_preorder(w + u, w2 + u, n, k + h, ORDER, **bound):
            tested += 1
            if not sigma_preorder(w, w2, n, k, ORDER, **bound):
                return Check("suffix-removal", False, f"{_pair_text(w, w2)} with u={word_repr(u)}, h={h}")
    return Check("suffix-removal", True, detail={"samples": samples, "premise_held": tested})


def check_concatenation(words, n: int, k: int, rng: random.Random, samples: int) -> Check:
    """``w ≼ w2`` implies ``wv ≼ w2v`` (order only)."""
    tested = 0
    bound = {"max_len": 2 * MAX_WORD_LENGTH, "max_rounds": k}
    for _ in range(samples):
        w, w2, v = rng.choice(words), rng.choice(words), rng.choice(words)
        if sigma_preorder(w, w2, n, k, ORDER, **bound):
            tested += 1
            if not sigma_preorder(w + v, w2 + v, n, k, ORDER, **bound):
                return Check("concatenation", False, f"{_pair_text(w, w2)} with v={word_repr(v)}")
    return Check("concatenation", True, detail={"samples": samples, "premise_held": tested})


def check_shadow(hypothesis, part, n: int, k: int, rng: random.Random, samples: int) -> Check:
    """Shadow decomposition: for a hypothesis pair ``(w, w2)`` and a position
    ``y = x + h`` of ``w`` (``h = ℓ/2``), some ``y2`` in ``w2`` carries the same
    letter, has an equivalent prefix, and splits both taggings into
    comparable halves at rank ``k + ℓ − 1``."""
    ell, h = part.k, part.k // 2
    rounds = k + ell - 1
    bound = {"max_len": MAX_WORD_LENGTH, "max_rounds": rounds}
    pool = [(w, w2, y) for w, w2 in hypothesis for y in range(h, len(w))]
    if len(pool) > samples:
        pool = rng.sample(pool, samples)
    for w, w2, y in pool:
        found = False
        for y2 in range(len(w2)):
            if w2[y2] != w[y] or not su_equivalent(w[:y], w2[:y2], ell):
                continue
            if not sigma_preorder(tag(w[:y], part), tag(w2[:y2], part), n, rounds, ORDER, **bound):
                continue
            left = delta(w[:y + 1], w[y + 1:], part)
            right = delta(w2[:y2 + 1], w2[y2 + 1:], part)
            if sigma_preorder(left, right, n, rounds, ORDER, **bound):
                found = True
                break
        if not found:
            return Check("shadow-decomposition", False, f"{_pair_text(w, w2)} at position {y}")
    return Check("shadow-decomposition", True, detail={"instances": len(pool)})


def split_rank_oracle(w: Sequence, w2: Sequence, k: int) -> bool:
    """Rank-``k`` existential preorder by splitting at an answered position.

    ``w ≼_k w2`` exactly when every position of ``w`` has a same-letter
    position of ``w2`` whose left parts and right parts are ``≼_{k-1}``.
    Independent of the game engine; agrees with the subword oracle for
    ``k ≤ 1`` and is strictly finer beyond.
    """
    @lru_cache(maxsize=None)
    def leq(u: tuple, v: tuple, r: int) -> bool:
        if r == 0:
            return True
        return all(any(b == a and leq(u[:x], v[:y], r - 1) and leq(u[x + 1:], v[y + 1:], r - 1)
                       for y, b in enumerate(v))
                   for x, a in enumerate(u))
    return leq(tuple(w), tuple(w2), k)


# ---------------------------------------------------------------------------
# witness search for inseparability
# ---------------------------------------------------------------------------

@dataclass
class WitnessSearch:
    """Bounded search for pairs ``w1 ∈ L1``, ``w2 ∈ L2`` with ``w1 ≼ w2``.

    A found pair at every rank corroborates an inseparability verdict; it is
    not a proof (the preorder at a fixed rank is only one approximation).
    """

    max_len: int
    n: int
    signature: str
    found: dict  # rank -> (w1, w2) or None
    candidates: int = 0

    @property
    def complete(self) -> bool:
        return all(p is not None for p in self.found.values())

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "n": self.n, "signature": self.signature,
                "candidates": self.candidates, "complete": self.complete,
                "witnesses": {str(m): None if p is None else [word_repr(p[0]), word_repr(p[1])]
                              for m, p in sorted(self.found.items())},
                "note": "corroboration only, not a proof of inseparability"}


def preorder_witnesses(L1, L2, ranks: Sequence[int] = (1, 2, 3), max_len: int = 10,
                       n: int = 1, sig: str = SUCCESSOR) -> WitnessSearch:
    """Shortest pairs (by total length) ``w1 ∈ L1, w2 ∈ L2`` of length at most
    ``max_len`` with ``w1 ≼ w2`` at each rank.  ``L1``/``L2`` are automata
    (anything with ``enumerate_members`` support)."""
    from .automata import enumerate_members
    sig = normalize_signature(sig)
    left = enumerate_members(L1, max_len)
    right = enumerate_members(L2, max_len)
    pairs = sorted(((u, v) for u in left for v in right), key=lambda p: (len(p[0]) + len(p[1]), p))
    bound = {"max_len": max(max_len, MAX_WORD_LENGTH), "max_rounds": max(max(ranks, default=0), MAX_ROUNDS)}
    found = {}
    for m in ranks:
        # the strong preorder refines the order-only one, which refines the
        # rank-m subword relation: a cheap necessary condition
        found[m] = next(((u, v) for u, v in pairs
                         if subword_rank_oracle(u, v, m) and sigma_preorder(u, v, n, m, sig, **bound)),
                        None)
    return WitnessSearch(max_len, n, sig, found, len(pairs))
