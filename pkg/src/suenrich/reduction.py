"""Reducing enriched separation and covering to the base class.

Two maps connect words over ``A`` with well-formed words:

* the morphism ``γ`` (:class:`GammaMap`) expands each triple ``(e, s, f)``
  into ``⌈e⌉^k ⌈s⌉ ⌈f⌉^k`` using witness words ``⌈x⌉`` with ``α(⌈x⌉) = x``;
* the map ``η`` (:func:`eta`) cuts a word at its *distinguished* positions
  (those whose ``k``-type ``u`` is stabilized by an idempotent ``e``:
  ``α(u)·e = α(u)``, with ``k = |M|``) and records the pieces as triples.

Both directions are made effective on automata: :func:`build_HK` pulls an
enriched language back to the triple alphabet, :func:`eta_preimage` pushes a
triple-alphabet language to an explicitly enriched language over ``A`` at
stratum ``2|M|``.  :func:`separation_transfer` and :func:`covering_transfer`
run a base solver on ``W[L]`` and lift its answer.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import automata, su
from .automata import Dfa, letter_repr, word_repr
from .errors import CapacityError, InvariantViolation
from .monoid import AlgebraicData, Morphism, RecognizedLanguage, algebraic_data, witness_word
from .report import Check
from .su import SuClass, SuPartition
from .wellformed import WfAlphabet, wf_language, wfw_language

DEFAULT_MAX_ETA_STRATUM = 22
SHAPE_CLASS_LIST_CAP = 1024

Selector = Callable[[AlgebraicData, int], "int | None"]


def _data(m: Morphism | AlgebraicData) -> AlgebraicData:
    return m if isinstance(m, AlgebraicData) else algebraic_data(m)


def comparison_check(name: str, d1: Dfa, d2: Dfa, relation: str = "equal") -> Check:
    """Check ``d1 = d2`` (or ``d1 ⊆ d2`` with ``relation='subset'``, or
    disjointness with ``relation='disjoint'``), recording a counterexample."""
    if relation == "disjoint":
        w = automata.intersection_witness(d1, d2)
        return Check(name, w is None, None if w is None else word_repr(w))
    if relation == "subset":
        w = automata.difference_witness(d1, d2)
        return Check(name, w is None, None if w is None else word_repr(w))
    c = automata.compare(d1, d2)
    if c.relation == "equal":
        return Check(name, True)
    w = c.only_first if c.only_first is not None else c.only_second
    side = "left only" if c.only_first is not None else "right only"
    return Check(name, False, word_repr(w), {"relation": c.relation, "side": side})


# ---------------------------------------------------------------------------
# γ
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaMap:
    """The expansion morphism from triples to words, for a fixed ``k ≥ 1``."""

    wf: WfAlphabet
    k: int
    witnesses: dict  # element s ∈ S¹ -> word ⌈s⌉

    @property
    def data(self) -> AlgebraicData:
        return self.wf.data

    @property
    def morphism(self) -> Morphism:
        return self.wf.morphism

    def power(self, e) -> tuple:
        """``⌈e⌉^k``; ε for the box."""
        return () if e is None else self.witnesses[e] * self.k

    @cached_property
    def images(self) -> dict:
        out = {}
        for x in self.wf.letters:
            e, s, f = self.wf.decode(x)
            out[x] = self.power(e) + self.witnesses[s] + self.power(f)
        return out

    def letter_image(self, x) -> tuple:
        return self.images[x]

    def __call__(self, w: Iterable) -> tuple:
        out: list = []
        for x in w:
            out.extend(self.images[x])
        return tuple(out)

    def table(self) -> dict:
        name = self.wf.monoid.name
        return {name(s): word_repr(w) for s, w in sorted(self.witnesses.items())}


def build_gamma(m: Morphism | AlgebraicData | WfAlphabet, k: int,
                rng: random.Random | None = None, witnesses: dict | None = None,
                validate: bool = True) -> GammaMap:
    """γ for stratum ``k``; witnesses are length-lex least unless ``rng`` is
    given (random re-draw) or an explicit table is supplied."""
    if k < 1:
        raise ValueError("γ needs k ≥ 1")
    wf = m if isinstance(m, WfAlphabet) else WfAlphabet(_data(m))
    data = wf.data
    if witnesses is None:
        witnesses = {s: witness_word(data.morphism, s, rng) for s in data.S1}
    else:
        witnesses = {s: tuple(w) for s, w in witnesses.items()}
    if validate:
        alpha = data.morphism
        for s in data.S1:
            if s not in witnesses:
                raise ValueError(f"no witness for {data.monoid.name(s)}")
            w = witnesses[s]
            if alpha(w) != s:
                raise ValueError(f"witness {word_repr(w)} does not evaluate to {data.monoid.name(s)}")
            if s in data.S and not w:
                raise ValueError("witnesses of elements of S must be nonempty")
    return GammaMap(wf, k, dict(witnesses))


def corrupt_gamma(g: GammaMap, seed: int) -> GammaMap:
    """A deliberately wrong γ: one witness of ``S`` replaced by a word with a
    different image (used by mutation smoke tests)."""
    rng = random.Random(seed)
    data = g.data
    alpha = data.morphism
    targets = [s for s in data.S if any(alpha(g.witnesses[t]) != s for t in data.S1)]
    if not targets:
        raise ValueError("cannot corrupt γ for a one-element image")
    s = rng.choice(targets)
    wrong = [g.witnesses[t] for t in data.S1 if alpha(g.witnesses[t]) != s and g.witnesses[t]]
    if not wrong:
        wrong = [tuple(alpha.alphabet[:1])]
    table = dict(g.witnesses)
    table[s] = rng.choice(wrong)
    return GammaMap(g.wf, g.k, table)


def check_gamma_identity(r: RecognizedLanguage, g: GammaMap) -> Check:
    """``W[L] = WF ∩ γ⁻¹(L)`` as an exact automata identity."""
    if r.morphism is not g.morphism:
        raise ValueError("language and γ use different morphisms")
    lhs = wfw_language(r, g.wf)
    pre = automata.preimage_morphism(r.dfa, g.images, alphabet=g.wf.letters)
    rhs = automata.intersection(g.wf.language, pre)
    return comparison_check(f"gamma-identity[k={g.k}]", lhs, rhs)


# ---------------------------------------------------------------------------
# β and H_K
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BetaMap:
    """Morphism from triples to tagged words with ``β(w) = τ(γ(w))`` on
    well-formed ``w``."""

    partition: SuPartition
    gamma: GammaMap
    images: dict

    def __call__(self, w: Iterable) -> tuple:
        out: list = []
        for x in w:
            out.extend(self.images[x])
        return tuple(out)


def build_beta(p: SuPartition, g: GammaMap) -> BetaMap:
    if p.k != g.k:
        raise ValueError(f"partition stratum {p.k} differs from γ stratum {g.k}")
    if p.alphabet != g.morphism.alphabet:
        raise ValueError("partition and morphism alphabets differ")
    images = {}
    for x in g.wf.letters:
        e, _, _ = g.wf.decode(x)
        images[x] = su.delta(g.power(e), g.images[x], p)
    return BetaMap(p, g, images)


def last_letter_classes(p: SuPartition, g: GammaMap) -> dict:
    """For each right-boxed letter ``x``, the class of any ``γ(w)`` where
    ``w`` is well formed and ends with ``x``."""
    out = {}
    for x in g.wf.letters:
        if g.wf.decode(x)[2] is None:
            out[x] = su.su_class_of(g.images[x], p.k)
    return out


_WITNESS_LETTER = "d"


def _witness_language() -> Dfa:
    """A nonempty, non-universal language ``D*dD*`` over ``D = {d}``."""
    return automata.from_regex("d+", "d")


def build_HK(parts: SuPartition, perclass: dict, g: GammaMap) -> Dfa:
    """Triple-alphabet language ``H`` with ``H ∩ WF = WF ∩ γ⁻¹(K)`` for
    ``K = ⋃_P (P ∩ τ⁻¹(perclass[P]))``.

    ``H`` is assembled from ``h⁻¹(D*dD*)`` (last letter lands in the class)
    and ``β⁻¹(L_P)``, mirroring the closure properties that keep it inside
    the base class.
    """
    if parts.k != g.k:
        raise ValueError(f"partition stratum {parts.k} differs from γ stratum {g.k}")
    beta = build_beta(parts, g)
    final_class = last_letter_classes(parts, g)
    witness = _witness_language()
    letters = g.wf.letters
    pieces = []
    for label in parts.labels:
        lp = perclass.get(label)
        if lp is None:
            continue
        members = parts.members_of(label)
        h = {x: ((_WITNESS_LETTER,) if final_class.get(x) in members else ()) for x in letters}
        in_class = automata.preimage_morphism(witness, h, alphabet=letters)
        lp = _over(lp, parts.tagged_alphabet)
        tagged = automata.preimage_morphism(lp, beta.images, alphabet=letters)
        pieces.append(automata.intersection(in_class, tagged))
    if not pieces:
        return automata.empty(letters)
    return automata.union(*pieces)


def enriched_language(parts: SuPartition, perclass: dict) -> Dfa:
    return su.enrichment(parts, {lbl: _over(d, parts.tagged_alphabet) for lbl, d in perclass.items()})


def check_HK(parts: SuPartition, perclass: dict, g: GammaMap) -> Check:
    h = build_HK(parts, perclass, g)
    k_lang = enriched_language(parts, perclass)
    wf = g.wf.language
    lhs = automata.intersection(h, wf)
    rhs = automata.intersection(wf, automata.preimage_morphism(k_lang, g.images, alphabet=g.wf.letters))
    return comparison_check(f"HK-identity[k={g.k}]", lhs, rhs)


def _over(d: Dfa, alphabet: tuple) -> Dfa:
    if d.alphabet == alphabet:
        return d
    extra = set(d.alphabet) - set(alphabet)
    if extra:
        # letters that never occur in taggings are irrelevant: drop them
        keep = tuple(x for x in d.alphabet if x not in extra)
        rows = tuple(tuple(r[d.index[x]] for x in keep) for r in d.delta)
        d = Dfa(keep, rows, d.initial, d.accepting)
    return automata.extend_alphabet(d, alphabet)


# ---------------------------------------------------------------------------
# η
# ---------------------------------------------------------------------------

def smallest_idempotent(data: AlgebraicData, u: int) -> int | None:
    """Least idempotent ``e`` (in the fixed order) with ``u·e = u``."""
    mul = data.monoid.mul
    for e in data.idempotents:
        if mul(u, e) == u:
            return e
    return None


def misaligned_idempotent(data: AlgebraicData, u: int) -> int | None:
    """Deliberately wrong selector: same distinguished positions, but an
    idempotent violating ``u·e = u`` whenever one exists.  Mutation hook."""
    good = smallest_idempotent(data, u)
    if good is None:
        return None
    mul = data.monoid.mul
    for e in data.idempotents:
        if mul(u, e) != u:
            return e
    return good


@dataclass(frozen=True)
class EtaResult:
    word: tuple
    k: int
    positions: tuple
    idempotents: tuple
    segments: tuple
    output: tuple

    @property
    def truncated(self) -> tuple:
        """The output without its last letter."""
        return self.output[:-1]


def density_holds(positions: Sequence[int], length: int, k: int) -> bool:
    """Every window ``[y-k+1, y]`` with ``k-1 ≤ y < length`` holds a position."""
    if length < k:
        return True
    for y in range(k - 1, length):
        i = bisect_left(positions, y - k + 1)
        if i >= len(positions) or positions[i] > y:
            return False
    return True


def eta(m: Morphism | AlgebraicData, w: Sequence, selector: Selector | None = None,
        check_density: bool = True) -> EtaResult:
    """Cut ``w`` at its distinguished positions (direct definition)."""
    data = _data(m)
    alpha = data.morphism
    wf = WfAlphabet(data)
    select = selector or smallest_idempotent
    w = tuple(w)
    k = data.monoid.size
    positions, idems = [], []
    for x in range(len(w)):
        e = select(data, alpha(w[max(0, x - k):x]))
        if e is not None:
            positions.append(x)
            idems.append(e)
    if check_density and not density_holds(positions, len(w), k):
        raise InvariantViolation(f"distinguished positions too sparse in {word_repr(w)}")
    cuts = [0] + positions + [len(w)]
    segments = tuple(w[cuts[i]:cuts[i + 1]] for i in range(len(cuts) - 1))
    lefts = [None] + idems
    rights = idems + [None]
    output = tuple(wf.encode(lefts[i], alpha(seg), rights[i]) for i, seg in enumerate(segments))
    return EtaResult(w, k, tuple(positions), tuple(idems), segments, output)


class EtaScanner:
    """Finite-state left-to-right realisation of ``η``.

    A state remembers the images of the last ``≤ k`` suffixes, the
    idempotent of the last distinguished position and the value of the
    current segment.  Reading the letter at position ``x`` first decides
    whether ``x`` is distinguished (emitting the finished triple), so the
    emission depends on the prefix only.
    """

    def __init__(self, data: AlgebraicData, selector: Selector | None = None,
                 max_states: int = 2_000_000):
        self.data = data
        self.wf = WfAlphabet(data)
        self.select = selector or smallest_idempotent
        self.k = data.monoid.size
        self.max_states = max_states
        self.letter_index = {x: i for i, x in enumerate(self.wf.letters)}
        mon = data.monoid
        self._mul = mon.mul
        one = mon.identity
        self.states = [((one,), None, one)]
        self.ids = {self.states[0]: 0}
        self._emit: dict = {}
        self._step: dict = {}

    def _intern(self, st) -> int:
        i = self.ids.get(st)
        if i is None:
            i = len(self.states)
            if i >= self.max_states:
                raise CapacityError(f"η scanner exceeded {self.max_states} states")
            self.ids[st] = i
            self.states.append(st)
        return i

    def emission(self, sid: int):
        """(letter index or -1, idempotent or None) for the next position."""
        hit = self._emit.get(sid)
        if hit is None:
            suf, last, seg = self.states[sid]
            e = self.select(self.data, suf[-1])
            idx = -1 if e is None else self.letter_index[self.wf.encode(last, seg, e)]
            hit = (idx, e)
            self._emit[sid] = hit
        return hit

    def step(self, sid: int, g: int) -> int:
        key = (sid, g)
        hit = self._step.get(key)
        if hit is None:
            suf, last, seg = self.states[sid]
            _, e = self.emission(sid)
            if e is not None:
                last, seg = e, self.data.monoid.identity
            mul = self._mul
            seg = mul(seg, g)
            suf = ((self.data.monoid.identity,) + tuple(mul(s, g) for s in suf))[: self.k + 1]
            hit = self._intern((suf, last, seg))
            self._step[key] = hit
        return hit

    def final(self, sid: int) -> int:
        _, last, seg = self.states[sid]
        return self.letter_index[self.wf.encode(last, seg, None)]

    def run(self, w: Sequence) -> tuple:
        alpha = self.data.morphism.image_of
        sid, out = 0, []
        for a in w:
            idx, _ = self.emission(sid)
            if idx >= 0:
                out.append(self.wf.letters[idx])
            sid = self.step(sid, alpha[a])
        out.append(self.wf.letters[self.final(sid)])
        return tuple(out)

    def explore(self):
        """Materialize all reachable states: (transition table, emission, final)."""
        images = self.data.morphism.images
        i = 0
        rows = []
        while i < len(self.states):
            rows.append([self.step(i, g) for g in images])
            i += 1
        delta = np.array(rows, dtype=np.int64).reshape(len(self.states), len(images))
        emit = np.array([self.emission(s)[0] for s in range(len(self.states))], dtype=np.int64)
        fin = np.array([self.final(s) for s in range(len(self.states))], dtype=np.int64)
        return delta, emit, fin


@dataclass(eq=False)
class EtaClassData:
    """Per-class data of the canonical partition at stratum ``2|M|``.

    Class indices: singletons ``{w}`` (``|w| < j``) by length-lex, then the
    suffix classes ``A*v`` (``|v| = j``) by lex order.  ``out[c]`` is the
    triple emitted at a position whose prefix lies in ``c`` (``-1`` when the
    position is not distinguished), ``fin[c]`` the last triple of ``⌈w⌉``
    for ``w ∈ c``.
    """

    data: AlgebraicData
    wf: WfAlphabet
    stratum: int
    alphabet: tuple
    out: np.ndarray
    fin: np.ndarray

    @property
    def n_letters(self) -> int:
        return len(self.alphabet)

    @cached_property
    def offsets(self) -> list:
        n, j = self.n_letters, self.stratum
        offs = [0]
        for ell in range(j + 1):
            offs.append(offs[-1] + n ** ell)
        return offs  # offs[ell] = first index of words of length ell

    @property
    def n_classes(self) -> int:
        return len(self.out)

    @cached_property
    def letter_pos(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def index_of(self, c: SuClass) -> int:
        n, pos = self.n_letters, self.letter_pos
        code = 0
        for a in c.word:
            code = code * n + pos[a]
        if c.is_suffix:
            if len(c.word) != self.stratum:
                raise ValueError(f"{c} is not a stratum-{self.stratum} class")
            return self.offsets[self.stratum] + code
        if len(c.word) >= self.stratum:
            raise ValueError(f"{c} is not a stratum-{self.stratum} class")
        return self.offsets[len(c.word)] + code

    def class_at(self, i: int) -> SuClass:
        j, n = self.stratum, self.n_letters
        ell = bisect_left(self.offsets, i + 1) - 1
        ell = min(ell, j)
        code = i - self.offsets[ell]
        word = []
        for _ in range(ell):
            code, r = divmod(code, n)
            word.append(self.alphabet[r])
        word = tuple(reversed(word))
        return SuClass.suffix(word) if ell == j else SuClass.single(word)

    def index_of_word(self, w: Sequence) -> int:
        return self.index_of(su.su_class_of(w, self.stratum))

    @cached_property
    def succ(self) -> np.ndarray:
        """``succ[c, a]`` = class of ``w·a`` for ``w ∈ c``."""
        n, j, offs = self.n_letters, self.stratum, self.offsets
        total = self.n_classes
        out = np.empty((total, n), dtype=np.int64)
        for ell in range(j + 1):
            codes = np.arange(n ** ell, dtype=np.int64)
            rows = offs[ell] + codes
            for a in range(n):
                if ell < j:
                    out[rows, a] = offs[ell + 1] + codes * n + a
                else:
                    out[rows, a] = offs[j] + (codes * n + a) % (n ** j)
        return out

    def b(self, c: SuClass):
        """Last letter of ``⌈w⌉`` for every ``w ∈ c``."""
        return self.wf.letters[int(self.fin[self.index_of(c)])]

    def c(self, c: SuClass, a=None):
        """Triple carried by a position labelled ``(c, a)``, or None when such
        positions are not distinguished (independent of ``a``)."""
        i = int(self.out[self.index_of(c)])
        return None if i < 0 else self.wf.letters[i]

    def beta_prime_letter(self, tagged) -> tuple:
        label, _ = tagged
        x = self.c(label)
        return () if x is None else (x,)

    def beta_prime(self, tagged_word: Iterable) -> tuple:
        out: list = []
        for y in tagged_word:
            out.extend(self.beta_prime_letter(y))
        return tuple(out)

    def partition(self) -> SuPartition:
        return su.canonical_partition(self.alphabet, self.stratum, max_stratum=self.stratum)

    def beta_prime_images(self, p: SuPartition | None = None) -> dict:
        p = p or self.partition()
        return {y: self.beta_prime_letter(y) for y in p.tagged_alphabet}


def eta_class_data(m: Morphism | AlgebraicData, selector: Selector | None = None,
                   max_stratum: int = DEFAULT_MAX_ETA_STRATUM,
                   check_representatives: bool = True) -> EtaClassData:
    """Class data at stratum ``2|M|``, computed from canonical representatives.

    With ``check_representatives`` every long class ``A*v`` is re-evaluated
    on the second representative ``a·v`` (``a`` the first letter) and any
    disagreement raises :class:`InvariantViolation`.
    """
    data = _data(m)
    j = 2 * data.monoid.size
    if j > max_stratum:
        raise CapacityError(f"stratum {j} exceeds the cap {max_stratum}")
    scanner = EtaScanner(data, selector)
    delta, emit, fin = scanner.explore()
    n = len(data.morphism.alphabet)
    levels = [np.zeros(1, dtype=np.int64)]
    for _ in range(j):
        levels.append(delta[levels[-1]].reshape(-1))
    sids = np.concatenate(levels)
    out_arr, fin_arr = emit[sids], fin[sids]
    if check_representatives and n > 0:
        alt = delta[np.zeros(1, dtype=np.int64), 0]
        for _ in range(j):
            alt = delta[alt].reshape(-1)
        base = levels[-1]
        bad = np.nonzero((emit[alt] != emit[base]) | (fin[alt] != fin[base]))[0]
        if len(bad):
            cd = EtaClassData(data, scanner.wf, j, data.morphism.alphabet, out_arr, fin_arr)
            c = cd.class_at(int(len(sids) - len(base) + bad[0]))
            raise InvariantViolation(f"class data of {c} depends on the representative")
    return EtaClassData(data, scanner.wf, j, data.morphism.alphabet, out_arr, fin_arr)


def _refine_tracker(cd: EtaClassData) -> tuple:
    """Moore-minimize the class tracker (output = out, final = fin).

    Returns (block of each class, block transition table, out and fin per
    block); block ids are dense.
    """
    succ = cd.succ
    _, blocks = np.unique(cd.out * (len(cd.wf.letters) + 1) + cd.fin, return_inverse=True)
    blocks = blocks.reshape(-1).astype(np.int64)
    count = int(blocks.max()) + 1
    while True:
        key = blocks.copy()
        for a in range(succ.shape[1]):
            _, key = np.unique(key * (len(blocks) + 1) + blocks[succ[:, a]], return_inverse=True)
            key = key.reshape(-1).astype(np.int64)
        new_count = int(key.max()) + 1
        blocks = key
        if new_count == count:
            break
        count = new_count
    rep = np.full(count, -1, dtype=np.int64)
    rep[blocks[::-1]] = np.arange(len(blocks) - 1, -1, -1)
    table = blocks[succ[rep]]
    return blocks, table, cd.out[rep], cd.fin[rep]


@dataclass(frozen=True)
class ShapeGroup:
    """Classes sharing the same last triple ``b``; their tagged language is
    ``β′⁻¹(K·b⁻¹)``."""

    b: tuple
    quotient: Dfa
    n_classes: int
    example: SuClass

    @property
    def ref(self) -> str:
        return f"beta'^-1(K/{letter_repr(self.b)})"


@dataclass(eq=False)
class EnrichedShape:
    """An enriched description ``⋃_P (P ∩ τ⁻¹(L_P))`` at a recorded stratum."""

    stratum: int
    n_classes: int
    groups: list
    assembled: Dfa
    class_data: EtaClassData
    per_class: dict | None = None  # SuClass -> tagged Dfa (small strata only)

    def tagged_language_ref(self, c: SuClass) -> str:
        b = self.class_data.b(c)
        return next(g.ref for g in self.groups if g.b == b)

    def classes_json(self) -> list:
        if self.n_classes <= SHAPE_CLASS_LIST_CAP:
            return [{"class": letter_repr(self.class_data.class_at(i)),
                     "tagged_language_ref": self.groups_by_letter[int(self.class_data.fin[i])].ref}
                    for i in range(self.n_classes)]
        return [{"class": f"{g.n_classes} classes, e.g. {letter_repr(g.example)}",
                 "tagged_language_ref": g.ref} for g in self.groups]

    @cached_property
    def groups_by_letter(self) -> dict:
        idx = {x: i for i, x in enumerate(self.class_data.wf.letters)}
        return {idx[g.b]: g for g in self.groups}

    def tagged_languages(self) -> dict:
        """Materialize every ``L_P`` over the tagged alphabet (small strata)."""
        if self.per_class is None:
            if self.n_classes > SHAPE_CLASS_LIST_CAP:
                raise CapacityError("too many classes to materialize tagged languages")
            cd = self.class_data
            p = cd.partition()
            images = cd.beta_prime_images(p)
            by_b = {}
            for g in self.groups:
                by_b[g.b] = automata.preimage_morphism(g.quotient, images, alphabet=p.tagged_alphabet)
            self.per_class = {c: by_b[cd.b(c)] for c in p.labels}
        return self.per_class

    def literal(self) -> Dfa:
        """The enrichment formula evaluated literally (small strata only)."""
        cd = self.class_data
        return su.enrichment(cd.partition(), self.tagged_languages())


def eta_preimage(K: Dfa, m: Morphism | AlgebraicData | EtaClassData,
                 selector: Selector | None = None,
                 max_stratum: int = DEFAULT_MAX_ETA_STRATUM) -> EnrichedShape:
    """``η⁻¹(K) = ⋃_P (P ∩ τ⁻¹(β′⁻¹(K·b_P⁻¹)))`` at stratum ``2|M|``."""
    cd = m if isinstance(m, EtaClassData) else eta_class_data(m, selector, max_stratum)
    letters = cd.wf.letters
    if K.alphabet != letters:
        K = _over(K, letters)
    blocks, table, out_b, fin_b = _refine_tracker(cd)
    # the tracker starts in the block of the class {ε}, which has index 0
    blocks0 = int(blocks[0])
    kd, kacc = K.delta, K.accepting
    out_b, fin_b = out_b.tolist(), fin_b.tolist()
    table = table.tolist()

    def step(state, a):
        b, q = state
        o = out_b[b]
        if o >= 0:
            q = kd[q][o]
        return table[b][cd.letter_pos[a]], q

    def accept(state):
        b, q = state
        return kd[q][fin_b[b]] in kacc

    assembled = automata.explore(cd.alphabet, (blocks0, K.initial), step, accept).canonical
    groups = []
    fin_vals, first_idx, counts = np.unique(cd.fin, return_index=True, return_counts=True)
    for v, i, cnt in zip(fin_vals.tolist(), first_idx.tolist(), counts.tolist()):
        b = letters[v]
        groups.append(ShapeGroup(b, automata.right_quotient(K, (b,)), cnt, cd.class_at(i)))
    return EnrichedShape(cd.stratum, cd.n_classes, groups, assembled, cd)


def scanner_preimage(K: Dfa, m: Morphism | AlgebraicData, selector: Selector | None = None) -> Dfa:
    """``η⁻¹(K)`` computed directly from the scanner (an independent route)."""
    data = _data(m)
    sc = EtaScanner(data, selector)
    K = _over(K, sc.wf.letters)
    alpha = data.morphism.image_of

    def step(state, a):
        sid, q = state
        idx, _ = sc.emission(sid)
        if idx >= 0:
            q = K.delta[q][idx]
        return sc.step(sid, alpha[a]), q

    return automata.explore(data.morphism.alphabet, (0, K.initial), step,
                            lambda s: K.delta[s[1]][sc.final(s[0])] in K.accepting).canonical


# ---------------------------------------------------------------------------
# transfer procedures
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class TransferResult:
    problem: str  # "separation" | "covering"
    verdict: bool
    stratum: int
    base: str
    separator: Dfa | None = None
    cover: list | None = None
    shapes: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    base_output: object = None

    @property
    def verdict_text(self) -> str:
        word = "separable" if self.problem == "separation" else "coverable"
        return word if self.verdict else f"not {word}"

    @property
    def checks_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def certificate(self) -> dict:
        classes = []
        for i, shape in enumerate(self.shapes):
            for entry in shape.classes_json():
                entry = dict(entry)
                if len(self.shapes) > 1:
                    entry["element"] = i
                classes.append(entry)
        return {
            "verdict": self.verdict_text,
            "stratum": self.stratum,
            "classes": classes,
            "checks": [c.to_json() for c in self.checks],
        }


def _require_transferable(base):
    if not getattr(base, "transferable", False):
        raise ValueError(f"solver {base.name!r} does not satisfy the transfer hypotheses")


def _shared_morphism(langs: Sequence[RecognizedLanguage]) -> Morphism:
    m = langs[0].morphism
    for r in langs[1:]:
        if r.morphism is not m:
            raise ValueError("all languages must be recognized by one morphism "
                             "(use monoid.common_morphism first)")
    return m


def _gamma_checks(langs, data, rng) -> list:
    g = build_gamma(data, 1, rng=rng)
    out = []
    for i, r in enumerate(langs):
        c = check_gamma_identity(r, g)
        out.append(Check(f"{c.name}[{i}]", c.passed, c.counterexample, c.detail))
    return out


def separation_transfer(L1: RecognizedLanguage, L2: RecognizedLanguage, base, *,
                        data: AlgebraicData | None = None, rng: random.Random | None = None,
                        lift: bool = True, gamma_checks: bool = True,
                        selector: Selector | None = None) -> TransferResult:
    """Decide enriched separability of ``L1`` from ``L2`` through ``base``."""
    _require_transferable(base)
    m = _shared_morphism([L1, L2])
    data = data or algebraic_data(m)
    if data.morphism is not m:
        raise ValueError("algebraic data belongs to another morphism")
    wf = WfAlphabet(data)
    W1, W2 = wfw_language(L1, wf), wfw_language(L2, wf)
    res = base.separate(W1, W2)
    stratum = 2 * data.monoid.size
    out = TransferResult("separation", bool(res.separable), stratum, base.name, base_output=res)
    if gamma_checks:
        out.checks.extend(_gamma_checks([L1, L2], data, rng))
    if res.separable and res.separator is not None:
        sep = _over(res.separator, wf.letters)
        out.checks.append(comparison_check("base-separator-contains-W1", W1, sep, "subset"))
        out.checks.append(comparison_check("base-separator-avoids-W2", sep, W2, "disjoint"))
        if lift:
            shape = eta_preimage(sep, data, selector)
            out.shapes.append(shape)
            out.separator = shape.assembled
            out.checks.append(comparison_check("separator-contains-L1", L1.dfa, shape.assembled, "subset"))
            out.checks.append(comparison_check("separator-avoids-L2", shape.assembled, L2.dfa, "disjoint"))
            out.checks.append(Check("shape-stratum", shape.stratum == stratum,
                                    None, {"stratum": shape.stratum, "expected": stratum}))
    return out


def covering_transfer(L: RecognizedLanguage, Lb: Sequence[RecognizedLanguage], base, *,
                      data: AlgebraicData | None = None, rng: random.Random | None = None,
                      lift: bool = True, gamma_checks: bool = True,
                      selector: Selector | None = None) -> TransferResult:
    """Decide enriched coverability of ``(L, Lb)`` through ``base``."""
    _require_transferable(base)
    Lb = list(Lb)
    m = _shared_morphism([L] + Lb)
    data = data or algebraic_data(m)
    if data.morphism is not m:
        raise ValueError("algebraic data belongs to another morphism")
    wf = WfAlphabet(data)
    W = wfw_language(L, wf)
    Wb = [wfw_language(r, wf) for r in Lb]
    res = base.cover(W, Wb)
    stratum = 2 * data.monoid.size
    out = TransferResult("covering", bool(res.coverable), stratum, base.name, base_output=res)
    if gamma_checks:
        out.checks.extend(_gamma_checks([L] + Lb, data, rng))
    if res.coverable and res.cover is not None:
        cover = [_over(k, wf.letters) for k in res.cover]
        out.checks.extend(_cover_checks("base-", W, Wb, cover))
        if lift:
            lifted = []
            for k in cover:
                shape = eta_preimage(k, data, selector)
                out.shapes.append(shape)
                lifted.append(shape.assembled)
            out.cover = lifted
            out.checks.extend(_cover_checks("", L.dfa, [r.dfa for r in Lb], lifted))
            out.checks.append(Check("shape-stratum", all(s.stratum == stratum for s in out.shapes),
                                    None, {"expected": stratum}))
    return out


def _cover_checks(prefix: str, L: Dfa, Lb: Sequence[Dfa], cover: Sequence[Dfa]) -> list:
    union = automata.union(*cover) if cover else automata.empty(L.alphabet)
    checks = [comparison_check(f"{prefix}cover-contains-L", L, union, "subset")]
    for i, k in enumerate(cover):
        ok = any(automata.disjoint(k, b) for b in Lb)
        checks.append(Check(f"{prefix}cover-element-{i}-separating", ok,
                            None if ok else word_repr(automata.shortest_accepted(k) or ())))
    return checks
