"""Verification suites over the shipped corpus.

Each suite returns a :class:`SuiteResult` holding :class:`Check` values.
The suites ``su``, ``wf``, ``gamma``, ``eta``, ``games`` and ``omega`` make
up ``all``; ``transfer`` (separation/covering soundness, oracle agreement,
inseparability corroboration and choice invariance) is run on request.

Two mutation hooks exist for smoke-testing the suites themselves:

* ``gamma-table`` replaces one γ witness by a word with a wrong image;
* ``eta-idempotent`` makes η carry an idempotent that does not stabilize the
  k-type of the distinguished position.

A clean build passes every suite of ``all``; under either mutation at least
one suite must fail.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import automata, corpus, omega, su
from .automata import word_repr
from .baseclasses import AT, SIGMA1, at_su_covering_oracle
from .efgames import (ORDER, SUCCESSOR, fo2_equiv, preorder_witnesses, sigma_preorder,
                      split_rank_oracle, subword_rank_oracle, verify_fo2_transfer,
                      verify_sigma_transfer)
from .errors import InvariantViolation
from .monoid import FiniteMonoid, Morphism, algebraic_data, product_morphism
from .reduction import (build_beta, build_gamma, check_gamma_identity, corrupt_gamma, eta,
                        eta_class_data, eta_preimage, misaligned_idempotent, smallest_idempotent,
                        comparison_check, covering_transfer, separation_transfer)
from .report import Check
from .wellformed import is_well_formed, wf_alphabet, wfw_language

MUTATIONS = ("gamma-table", "eta-idempotent")
DEFAULT_SEED = 0


@dataclass
class Options:
    """Knobs shared by the suites."""

    seed: int = DEFAULT_SEED
    mutate: str | None = None
    fail_fast: bool = False
    pointwise_len: int = 8   # exhaustive bound for pointwise η checks
    redraws: int = 5         # random witness re-draws for choice invariance

    def __post_init__(self):
        if self.mutate is not None and self.mutate not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutate!r} (expected one of {', '.join(MUTATIONS)})")

    @property
    def selector(self):
        return misaligned_idempotent if self.mutate == "eta-idempotent" else smallest_idempotent


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.name, "pass": self.passed, "checked": len(self.checks),
               "failed": len(self.failures()),
               "checks": [c.to_json() for c in self.checks]}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


class _Stop(Exception):
    pass


class _Collector:
    def __init__(self, result: SuiteResult, opts: Options):
        self.result, self.opts = result, opts

    def add(self, check: Check):
        self.result.checks.append(check)
        if self.opts.fail_fast and not check.passed:
            raise _Stop

    def count(self, name: str, bad: list, total: int, **detail):
        """Aggregate many pointwise comparisons into one check."""
        self.add(Check(name, not bad, bad[0] if bad else None,
                       {"checked": total, "violations": len(bad), **detail}))


# ---------------------------------------------------------------------------
# su: tagging identities
# ---------------------------------------------------------------------------

def _tag_by_definition(w, p: su.SuPartition) -> tuple:
    return tuple((p.label_of(w[:i]), a) for i, a in enumerate(w))


def _coarse_partition(alphabet, k: int, rng: random.Random) -> su.SuPartition:
    classes = su.canonical_classes(alphabet, k)
    rng.shuffle(classes)
    n_blocks = rng.randint(1, len(classes))
    blocks = [classes[i::n_blocks] for i in range(n_blocks)]
    return su.user_partition(alphabet, k, blocks)


def suite_su(col: _Collector):
    rng = random.Random(col.opts.seed)
    words = list(automata.all_words("ab", 5))
    for k in (0, 1, 2, 3):
        for p in (su.canonical_partition("ab", k), _coarse_partition("ab", k, rng)):
            kind = "canonical" if p.is_canonical else "coarse"
            bad, total = [], 0
            for u in words:
                tu = _tag_by_definition(u, p)
                for w in words:
                    total += 1
                    if _tag_by_definition(u + w, p) != tu + su.delta(u, w, p):
                        bad.append(f"u={word_repr(u)} w={word_repr(w)}")
            col.count(f"tau-delta[k={k},{kind}]", bad, total)
            tr = p.transducer()
            bad = [word_repr(w) for w in words if tr.run(w) != su.tag(w, p)]
            col.count(f"transducer[k={k},{kind}]", bad, len(words))
        count = len(su.canonical_classes("ab", k))
        col.add(Check(f"class-count[k={k}]", count == su.class_count(2, k), None,
                      {"classes": count}))


# ---------------------------------------------------------------------------
# wf: well-formedness, eval(η(w)) = α(w), β′(τ(w)) = t⌈w⌉, density
# ---------------------------------------------------------------------------

def _eta_guarded(data, w, selector):
    try:
        return eta(data, w, selector), None
    except InvariantViolation as exc:
        return None, str(exc)


def suite_wf(col: _Collector):
    sel = col.opts.selector
    maxlen = col.opts.pointwise_len
    for e in corpus.entries():
        data = algebraic_data(e.morphism)
        wf = wf_alphabet(data)
        bad_form, bad_eval, bad_density, total = [], [], [], 0
        for w in automata.all_words(e.morphism.alphabet, maxlen):
            total += 1
            r, err = _eta_guarded(data, w, sel)
            if r is None:
                bad_density.append(err)
                continue
            if not is_well_formed(r.output, wf):
                bad_form.append(word_repr(w))
            elif wf.eval(r.output) != e.morphism(w):
                bad_eval.append(word_repr(w))
        col.count(f"eta-well-formed[{e.name}]", bad_form, total)
        col.count(f"eta-eval[{e.name}]", bad_eval, total)
        col.count(f"density[{e.name}]", bad_density, total)
        cd = eta_class_data(data, sel, check_representatives=False)
        p = cd.partition()
        bad, total = [], 0
        for w in automata.all_words(e.morphism.alphabet, 6):
            total += 1
            r, _ = _eta_guarded(data, w, sel)
            if r is not None and cd.beta_prime(su.tag(w, p)) != r.truncated:
                bad.append(word_repr(w))
        col.count(f"beta-prime[{e.name}]", bad, total, stratum=cd.stratum)


# ---------------------------------------------------------------------------
# gamma: W[L] = WF ∩ γ⁻¹(L) and τ(γ(w)) = β(w)
# ---------------------------------------------------------------------------

def _gamma(data, k: int, opts: Options, salt: int = 0):
    g = build_gamma(data, k)
    if opts.mutate == "gamma-table" and len(data.S) > 1:
        g = corrupt_gamma(g, opts.seed + salt)
    return g


def gamma_identities(col: _Collector):
    """W[L] = WF ∩ γ_k⁻¹(L) for k = 1, 2, 3 over the accepting-set sample."""
    for idx, e in enumerate(corpus.entries()):
        data = algebraic_data(e.morphism)
        for k in (1, 2, 3):
            g = _gamma(data, k, col.opts, idx)
            for j, r in enumerate(e.languages()):
                c = check_gamma_identity(r, g)
                col.add(Check(f"{c.name}[{e.name}#{j}]", c.passed, c.counterexample, c.detail))


def tau_gamma_beta(col: _Collector):
    """τ(γ(w)) = β(w) on well-formed words of length at most 3."""
    for idx, e in enumerate(corpus.entries()):
        data = algebraic_data(e.morphism)
        words = automata.enumerate_members(wf_alphabet(data).language, 3)
        for k in (1, 2, 3):
            g = _gamma(data, k, col.opts, idx)
            p = su.canonical_partition(e.morphism.alphabet, g.k)
            beta = build_beta(p, g)
            bad = [word_repr(w) for w in words if su.tag(g(w), p) != beta(w)]
            col.count(f"tau-gamma-beta[k={g.k}][{e.name}]", bad, len(words))


def suite_gamma(col: _Collector):
    gamma_identities(col)
    tau_gamma_beta(col)


# ---------------------------------------------------------------------------
# eta: η⁻¹(W[L]) = L, exactly and pointwise
# ---------------------------------------------------------------------------

def suite_eta(col: _Collector):
    sel = col.opts.selector
    maxlen = col.opts.pointwise_len
    for e in corpus.entries():
        data = algebraic_data(e.morphism)
        wf = wf_alphabet(data)
        try:
            cd = eta_class_data(data, sel)
        except InvariantViolation as exc:
            col.add(Check(f"eta-class-data[{e.name}]", False, str(exc)))
            continue
        words = list(automata.all_words(e.morphism.alphabet, maxlen))
        outputs = []
        for w in words:
            r, _ = _eta_guarded(data, w, sel)
            outputs.append(None if r is None else r.output)
        for j, r in enumerate(e.languages()):
            W = wfw_language(r, wf)
            shape = eta_preimage(W, cd)
            col.add(comparison_check(f"eta-identity[{e.name}#{j}]", shape.assembled, r.dfa))
            ok = shape.stratum == 2 * data.monoid.size
            col.add(Check(f"eta-stratum[{e.name}#{j}]", ok, None, {"stratum": shape.stratum}))
            bad = [word_repr(w) for w, out in zip(words, outputs)
                   if out is None or r.accepts(w) != W.accepts(out)]
            col.count(f"eta-pointwise[{e.name}#{j}]", bad, len(words))


# ---------------------------------------------------------------------------
# games
# ---------------------------------------------------------------------------

def suite_games(col: _Collector):
    words6 = list(automata.all_words("ab", 6))
    # Σ1(<): exact agreement with the split oracle; the subword relation is
    # implied, and coincides for at most one round
    split_bad, sub_bad, low_bad, total = [], [], [], 0
    for k in range(4):
        for w in words6:
            for w2 in words6:
                total += 1
                g = sigma_preorder(w, w2, 1, k, ORDER)
                if g != split_rank_oracle(w, w2, k):
                    split_bad.append(f"{word_repr(w)} vs {word_repr(w2)} k={k}")
                s = subword_rank_oracle(w, w2, k)
                if g and not s:
                    sub_bad.append(f"{word_repr(w)} vs {word_repr(w2)} k={k}")
                if k <= 1 and g != s:
                    low_bad.append(f"{word_repr(w)} vs {word_repr(w2)} k={k}")
    col.count("sigma1-split-oracle", split_bad, total)
    col.count("sigma1-implies-subword", sub_bad, total)
    col.count("sigma1-subword-low-rank", low_bad, total)

    rep = verify_fo2_transfer(5, 1)
    for c in rep.checks():
        col.add(c)
    for n in (1, 2):
        rep = verify_sigma_transfer(4, 1, n, seed=col.opts.seed)
        for c in rep.checks():
            col.add(Check(f"{c.name}[n={n}]", c.passed, c.counterexample, c.detail))

    words4 = list(automata.all_words("ab", 4))
    game_invariants(col, words4, words4)


def game_invariants(col: _Collector, fo2_words: Sequence, sigma_words: Sequence,
                    fo2_ranks: Sequence[int] = (1, 2), sigma_ranks: Sequence[int] = (1, 2),
                    levels: Sequence[int] = (1, 2)) -> dict:
    """Preorder, equivalence and monotonicity checks on the given grids.

    Returns the Σn relation table ``{(n, k, sig, w, w2): bool}`` so callers
    can test further properties without replaying the games.
    """
    # FO²: equivalence relation, refined by more rounds
    bad_refl, bad_sym, bad_refine, bad_trans = [], [], [], []
    words = list(fo2_words)
    for sig in (ORDER, SUCCESSOR):
        eq = {(k, w, w2): fo2_equiv(w, w2, k, sig) for k in fo2_ranks for w in words for w2 in words}
        for k in fo2_ranks:
            for w in words:
                if not eq[k, w, w]:
                    bad_refl.append(f"{word_repr(w)} k={k} {sig}")
                for w2 in words:
                    if eq[k, w, w2] != eq[k, w2, w]:
                        bad_sym.append(f"{word_repr(w)} vs {word_repr(w2)} k={k} {sig}")
                    if k - 1 in fo2_ranks and eq[k, w, w2] and not eq[k - 1, w, w2]:
                        bad_refine.append(f"{word_repr(w)} vs {word_repr(w2)} k={k} {sig}")
            cls = {}
            for w in words:
                cls.setdefault(next(r for r in words if eq[k, w, r]), []).append(w)
            for members in cls.values():
                if any(not eq[k, x, y] for x in members for y in members):
                    bad_trans.append(f"class of {word_repr(members[0])} k={k} {sig}")
    col.count("fo2-reflexive", bad_refl, len(words))
    col.count("fo2-symmetric", bad_sym, len(words) ** 2)
    col.count("fo2-transitive", bad_trans, len(words))
    col.count("fo2-refines", bad_refine, len(words) ** 2)

    # Σn: preorders, refined by more rounds and by more alternation
    bad_refl, bad_trans, bad_k, bad_n = [], [], [], []
    words = list(sigma_words)
    rel = {}
    for sig in (ORDER, SUCCESSOR):
        for n in levels:
            for k in sigma_ranks:
                for w in words:
                    for w2 in words:
                        rel[n, k, sig, w, w2] = sigma_preorder(w, w2, n, k, sig)
        for n in levels:
            for k in sigma_ranks:
                for w in words:
                    if not rel[n, k, sig, w, w]:
                        bad_refl.append(f"{word_repr(w)} n={n} k={k} {sig}")
                ups = {w: [w2 for w2 in words if rel[n, k, sig, w, w2]] for w in words}
                for w in words:
                    for w2 in ups[w]:
                        if any(not rel[n, k, sig, w, w3] for w3 in ups[w2]):
                            bad_trans.append(f"{word_repr(w)} <= {word_repr(w2)} n={n} k={k} {sig}")
                for w in words:
                    for w2 in words:
                        if k - 1 in sigma_ranks and rel[n, k, sig, w, w2] and not rel[n, k - 1, sig, w, w2]:
                            bad_k.append(f"{word_repr(w)} vs {word_repr(w2)} n={n} k={k} {sig}")
                        # more alternation means more sentences: ≼ at level n+1 refines level n
                        if n - 1 in levels and rel[n, k, sig, w, w2] and not rel[n - 1, k, sig, w, w2]:
                            bad_n.append(f"{word_repr(w)} vs {word_repr(w2)} n={n} k={k} {sig}")
    col.count("sigma-reflexive", bad_refl, len(words))
    col.count("sigma-transitive", bad_trans, len(words) ** 2)
    col.count("sigma-rank-monotone", bad_k, len(words) ** 2)
    col.count("sigma-level-refines", bad_n, len(words) ** 2)
    return rel


# ---------------------------------------------------------------------------
# omega
# ---------------------------------------------------------------------------

def shipped_omega() -> list:
    """(name, morphism, accepting set) for every shipped ω-algebra file."""
    out = []
    for name in corpus.omega_names():
        f = corpus.load_omega(name)
        if f.morphism is not None:
            out.append((name, f.morphism, f.accepting))
    return out


def suite_omega(col: _Collector):
    algebras = [(n, f.algebra) for n in corpus.omega_names() for f in [corpus.load_omega(n)]]
    algebras += [("builtin:inf-a", omega.infinitely_many_a().algebra),
                 ("builtin:trivial", omega.trivial().algebra)]
    for name, o in algebras:
        for c in omega.check_axioms(o):
            col.add(Check(f"{c.name}[{name}]", c.passed, c.counterexample, c.detail))
    words = omega.upword_corpus("ab", 2, 3)
    for name, m, F in shipped_omega():
        a = omega.wf_omega_alphabet(m)
        bad_form, bad_eval = [], []
        for w in words:
            r = omega.eta_omega(m, w, alphabet=a)
            if not a.is_well_formed(r.output):
                bad_form.append(str(w))
            elif a.eval(r.output) != omega.eval_up(m, w):
                bad_eval.append(str(w))
        col.count(f"omega-eta-well-formed[{name}]", bad_form, len(words), k=omega.default_k(m))
        col.count(f"omega-eval[{name}]", bad_eval, len(words), k=omega.default_k(m))
        F = set(F or ())
        images = omega.gamma_omega(m, 1, alphabet=a)
        letters = list(a.letters)
        bad, total = [], 0
        for u in automata.all_words(letters, 1):
            for v in automata.all_words(letters, 2, minlen=1):
                w = omega.UpWord.of(u, v)
                if not a.is_well_formed(w):
                    continue
                total += 1
                lhs = omega.wfw_omega_membership(m, F, w, a)
                rhs = omega.eval_up(m, omega.apply_gamma(images, w)) in F
                if lhs != rhs:
                    bad.append(str(w))
        col.count(f"omega-gamma-identity[{name}]", bad, total)
        for text in ("(a)^w", "(b)^w", "(ab)^w"):
            rep = omega.check_eqinf(m, omega.parse_upword(text))
            col.add(Check(f"eqinf[{name}:{text}]", rep.passed, None if rep.passed else text,
                          rep.to_json(m.algebra)))


# ---------------------------------------------------------------------------
# transfer (criteria on separation and covering)
# ---------------------------------------------------------------------------

def padding_morphism(alphabet: Sequence) -> Morphism:
    """Length parity: the extra factor used for padded products."""
    z2 = FiniteMonoid(("1", "g"), ((0, 1), (1, 0)), 0)
    return Morphism(tuple(alphabet), z2, (1,) * len(alphabet))


def _permuted(data, rng: random.Random):
    order = list(data.idempotents)
    if len(order) > 1:
        while tuple(order) == data.idempotents:
            rng.shuffle(order)
    return data.with_idempotent_order(order)


def _padded(langs):
    pm = product_morphism([langs[0].morphism, padding_morphism(langs[0].alphabet)])
    return [pm.lift(0, r) for r in langs]


def transfer_soundness(col: _Collector):
    for n1, n2 in corpus.SEPARABLE_INSTANCES:
        l1, l2 = corpus.pair_languages(n1, n2)
        start = time.perf_counter()
        r = separation_transfer(l1, l2, SIGMA1)
        spent = time.perf_counter() - start
        size = l1.morphism.monoid.size
        col.add(Check(f"separable[{n1}/{n2}]", r.verdict, None, {"M": size}))
        for c in r.checks:
            col.add(Check(f"{c.name}[{n1}/{n2}]", c.passed, c.counterexample, c.detail))
        if size <= 4:
            col.add(Check(f"runtime[{n1}/{n2}]", spent < 60, None, {"seconds": round(spent, 1)}))


def oracle_agreement(col: _Collector):
    for name, L, G in corpus.covering_instances():
        r = covering_transfer(L, [G], AT)
        j = 2 * L.morphism.monoid.size
        o = at_su_covering_oracle(L.dfa, [G.dfa], j)
        col.add(Check(f"at-oracle[{name}]", r.verdict == bool(o.coverable) and r.checks_passed, None,
                      {"transfer": r.verdict_text, "oracle": bool(o.coverable), "stratum": j}))


def inseparability_corroboration(col: _Collector, max_len: int = 10, ranks=(1, 2, 3)):
    """Witness pairs for every "not separable" verdict (corroboration only)."""
    for n1, n2 in corpus.SEPARATION_INSTANCES:
        l1, l2 = corpus.pair_languages(n1, n2)
        r = separation_transfer(l1, l2, SIGMA1, lift=False, gamma_checks=False)
        if r.verdict:
            continue
        s = preorder_witnesses(l1.dfa, l2.dfa, ranks, max_len)
        for m in ranks:
            pair = s.found[m]
            col.add(Check(f"witness[{n1}/{n2}][m={m}]", pair is not None,
                          None if pair is not None else f"none up to length {max_len}",
                          {"pair": None if pair is None else [word_repr(pair[0]), word_repr(pair[1])],
                           "note": "corroboration, not proof"}))


def choice_invariance(col: _Collector):
    opts = col.opts
    rng = random.Random(opts.seed)

    def sep(langs, **kw):
        return separation_transfer(langs[0], langs[1], SIGMA1, **kw)

    for n1, n2 in corpus.SEPARATION_INSTANCES:
        langs = corpus.pair_languages(n1, n2)
        tag = f"{n1}/{n2}"
        ref = sep(langs, lift=False, gamma_checks=False).verdict
        for i in range(opts.redraws):
            r = sep(langs, lift=False, rng=random.Random(opts.seed + 1 + i))
            col.add(Check(f"redraw-{i}[{tag}]", r.verdict == ref and r.checks_passed))
        data = _permuted(algebraic_data(langs[0].morphism), rng)
        r = sep(langs, data=data, lift=ref, gamma_checks=False)
        col.add(Check(f"idempotent-order[{tag}]", r.verdict == ref and r.checks_passed, None,
                      {"order": [data.monoid.name(e) for e in data.idempotents]}))
        r = sep(_padded(langs), lift=False, gamma_checks=False)
        col.add(Check(f"padded-product[{tag}]", r.verdict == ref, None,
                      {"M": r.stratum // 2}))
    for name, L, G in corpus.covering_instances():
        ref = covering_transfer(L, [G], AT, lift=False, gamma_checks=False).verdict
        for i in range(opts.redraws):
            r = covering_transfer(L, [G], AT, lift=False, rng=random.Random(opts.seed + 1 + i))
            col.add(Check(f"redraw-{i}[{name}]", r.verdict == ref and r.checks_passed))
        data = _permuted(algebraic_data(L.morphism), rng)
        r = covering_transfer(L, [G], AT, data=data, gamma_checks=False)
        col.add(Check(f"idempotent-order[{name}]", r.verdict == ref and r.checks_passed))
        PL, PG = _padded([L, G])
        r = covering_transfer(PL, [PG], AT, lift=False, gamma_checks=False)
        col.add(Check(f"padded-product[{name}]", r.verdict == ref, None, {"M": r.stratum // 2}))


def suite_transfer(col: _Collector):
    transfer_soundness(col)
    oracle_agreement(col)
    inseparability_corroboration(col)
    choice_invariance(col)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[[_Collector], None]] = {
    "su": suite_su,
    "wf": suite_wf,
    "gamma": suite_gamma,
    "eta": suite_eta,
    "games": suite_games,
    "omega": suite_omega,
    "transfer": suite_transfer,
}
ALL = ("su", "wf", "gamma", "eta", "games", "omega")


def run_suite(name: str, opts: Options | None = None) -> SuiteResult:
    opts = opts or Options()
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    result = SuiteResult(name)
    start = time.perf_counter()
    try:
        SUITES[name](_Collector(result, opts))
    except _Stop:
        pass
    result.seconds = time.perf_counter() - start
    return result


def run(names: str | Sequence[str] = "all", opts: Options | None = None) -> list[SuiteResult]:
    if isinstance(names, str):
        names = ALL if names == "all" else (names,)
    return [run_suite(n, opts) for n in names]
