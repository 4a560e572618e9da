"""The shipped example corpus and the fixed instance lists built from it."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path

from . import automata
from .automata import Dfa
from .monoid import (FiniteMonoid, Morphism, RecognizedLanguage, common_morphism, parse_monoid,
                     transition_monoid, witness_word)
from .omega import OmegaFile, parse_omega

ACCEPTING_SAMPLE = 8
_SAMPLE_SEED = 20160301


def corpus_dir() -> Path:
    return Path(str(resources.files(__package__) / "corpus"))


def _read(name: str) -> str:
    return (corpus_dir() / name).read_text(encoding="utf-8")


def dfa_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.dfa"))


@lru_cache(maxsize=None)
def load_dfa(name: str) -> Dfa:
    return automata.parse_dfa(_read(f"{name}.dfa"))


@lru_cache(maxsize=None)
def load_monoid(name: str):
    return parse_monoid(_read(f"{name}.monoid"))


def monoid_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.monoid"))


def omega_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.omega"))


@lru_cache(maxsize=None)
def load_omega(name: str) -> OmegaFile:
    return parse_omega(_read(f"{name}.omega"))


# ---------------------------------------------------------------------------
# languages recognized by a DFA's transition monoid
# ---------------------------------------------------------------------------

def accepting_sample(d: Dfa, size: int = ACCEPTING_SAMPLE) -> list[frozenset]:
    """A fixed sample of accepting-state sets: all of them when there are at
    most ``size``, otherwise the automaton's own set plus a seeded draw."""
    subsets = [frozenset(c) for r in range(d.n_states + 1)
               for c in combinations(range(d.n_states), r)]
    if len(subsets) <= size:
        return subsets
    rest = [s for s in subsets if s != d.accepting]
    rng = random.Random(_SAMPLE_SEED + d.n_states)
    return [d.accepting] + sorted(rng.sample(rest, size - 1), key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    name: str
    dfa: Dfa
    monoid: FiniteMonoid
    morphism: Morphism

    def language(self, accepting_states) -> RecognizedLanguage:
        """The language of the automaton with the given accepting states,
        expressed over its transition monoid."""
        acc = frozenset(accepting_states)
        d = self.dfa.with_accepting(acc)
        elems = frozenset(x for x in self.morphism.reachable
                          if d.accepts(witness_word(self.morphism, x)))
        return RecognizedLanguage(self.morphism, elems)

    def languages(self) -> list[RecognizedLanguage]:
        return [self.language(f) for f in accepting_sample(self.dfa)]

    @property
    def own_language(self) -> RecognizedLanguage:
        return self.language(self.dfa.accepting)


@lru_cache(maxsize=None)
def entry(name: str) -> CorpusEntry:
    d = load_dfa(name)
    m, alpha, _ = transition_monoid(d)
    return CorpusEntry(name, d, m, alpha)


def entries() -> list[CorpusEntry]:
    return [entry(n) for n in dfa_names()]


# ---------------------------------------------------------------------------
# instance lists
# ---------------------------------------------------------------------------

# separable pairs whose lifted separators are checked end to end
SEPARABLE_INSTANCES = (
    ("contains_aa", "abstar"),
    ("ends_a", "ends_b"),
    ("contains_ab", "only_a"),
    ("second_a", "starts_ab"),
    ("ends_aa", "abstar"),
    ("starts_a", "bastar"),
    ("empty_word", "nonempty"),
)

# pairs where the Σ1 route answers "not separable"
INSEPARABLE_INSTANCES = (
    ("contains_a", "only_a"),
    ("only_a", "contains_ab"),
    ("abstar", "contains_aa"),
    ("only_a", "contains_a"),
    ("even_a", "contains_a"),
    ("contains_ab", "a_then_b"),
    ("one_b", "even_length"),
    ("at_most_one_a", "contains_aa"),
    ("ends_ab", "one_b"),
)

SEPARATION_INSTANCES = SEPARABLE_INSTANCES + INSEPARABLE_INSTANCES


def pair_languages(n1: str, n2: str) -> tuple[RecognizedLanguage, RecognizedLanguage]:
    """The two corpus languages re-expressed over one morphism."""
    l1, l2 = common_morphism([entry(n1).own_language, entry(n2).own_language])
    return l1, l2


# (F, G) pairs of accepting sets for the two-element covering instances
_COVER_ACCEPTING = ((("1",), ("z",)), (("z",), ("1",)), (("1", "z"), ("z",)), (("z",), ("1", "z")))


def covering_instances() -> list[tuple[str, RecognizedLanguage, RecognizedLanguage]]:
    """Sixteen instances over two-element monoids (|A| = 2): each shipped
    two-element monoid file contributes four (L, L') accepting-set pairs."""
    out = []
    for name in monoid_names():
        mf = load_monoid(name)
        if mf.monoid.size != 2 or mf.morphism is None or len(mf.morphism.alphabet) != 2:
            continue
        m = mf.monoid
        other = next(n for n in m.names if n != m.name(m.identity))
        for F, G in _COVER_ACCEPTING:
            F = {m.index["1"] if x == "1" else m.index[other] for x in F}
            G = {m.index["1"] if x == "1" else m.index[other] for x in G}
            out.append((f"{name}:{sorted(F)}/{sorted(G)}",
                        RecognizedLanguage(mf.morphism, F), RecognizedLanguage(mf.morphism, G)))
    return out
