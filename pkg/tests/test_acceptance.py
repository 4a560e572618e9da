"""Acceptance criteria, one test each.

Every test records a single pass/fail line (printed in the terminal summary)
and then asserts the criterion exactly as stated.  Criteria that fail are
left failing; their analysis lives with the project notes.
"""

import time
from itertools import product

from conftest import CRITERIA

from suenrich import automata, corpus
from suenrich.automata import word_repr
from suenrich.cli import main
from suenrich.efgames import ORDER, sigma_preorder, subword_rank_oracle
from suenrich.suites import (MUTATIONS, Options, SuiteResult, _Collector, choice_invariance,
                             gamma_identities, game_invariants, inseparability_corroboration,
                             oracle_agreement, run_suite, tau_gamma_beta, transfer_soundness)

MUTATION_SEEDS = (0, 1, 2)


def collect(*steps, opts=None):
    res = SuiteResult("acceptance")
    col = _Collector(res, opts or Options())
    start = time.perf_counter()
    out = [step(col) for step in steps]
    res.seconds = time.perf_counter() - start
    return res, out


def describe(res: SuiteResult, extra: str = "") -> str:
    bad = res.failures()
    text = f"{len(res.checks) - len(bad)}/{len(res.checks)} checks, {res.seconds:.1f}s"
    if bad:
        shown = ", ".join(f"{c.name}" + (f" ({c.counterexample})" if c.counterexample else "")
                          for c in bad[:4])
        text += f"; failing: {shown}" + (" ..." if len(bad) > 4 else "")
    return text + (f"; {extra}" if extra else "")


def record(n: int, title: str, ok: bool, summary: str):
    CRITERIA[n] = (ok, title, summary)
    assert ok, summary


def test_criterion_01_gamma_identity():
    entries = [e for e in corpus.entries()
               if e.dfa.n_states <= 4 and len(e.dfa.alphabet) == 2]
    res, _ = collect(gamma_identities)
    ok = res.passed and len(entries) >= 20 and res.seconds < 60
    record(1, "gamma identity", ok, describe(res, f"{len(entries)} automata"))


def test_criterion_02_eta_identity():
    res = run_suite("eta")
    ok = res.passed and res.seconds < 300
    record(2, "eta identity", ok, describe(res))


def test_criterion_03_tagging_identities():
    su_res = run_suite("su")
    wf_res = run_suite("wf")
    tgb, _ = collect(tau_gamma_beta)
    res = SuiteResult("identities", su_res.checks + wf_res.checks + tgb.checks,
                      su_res.seconds + wf_res.seconds + tgb.seconds)
    record(3, "tagging and class-data identities", res.passed, describe(res))


def test_criterion_04_transfer_soundness():
    res, _ = collect(transfer_soundness)
    record(4, "transfer soundness", res.passed, describe(res))


def test_criterion_05_oracle_agreement():
    res, _ = collect(oracle_agreement)
    n = sum(1 for _ in corpus.covering_instances())
    ok = res.passed and n >= 10
    record(5, "AT oracle agreement", ok, describe(res, f"{n} instances"))


def test_criterion_06_inseparability_corroboration():
    res, _ = collect(inseparability_corroboration)
    record(6, "inseparability corroboration (not a proof)", res.passed, describe(res))


def test_criterion_07_choice_invariance():
    res, _ = collect(choice_invariance)
    record(7, "choice invariance", res.passed, describe(res))


def test_criterion_08_game_suites():
    words6 = list(automata.all_words("ab", 6))
    start = time.perf_counter()
    mismatches = [(w, w2, k) for k in range(4) for w, w2 in product(words6, repeat=2)
                  if sigma_preorder(w, w2, 1, k, ORDER) != subword_rank_oracle(w, w2, k)]
    res, (suite, rel) = collect(lambda col: run_suite("games").checks,
                                lambda col: game_invariants(col, automata.all_words("ab", 5), words6,
                                                            sigma_ranks=(1, 2, 3)))
    for c in suite:
        res.checks.append(c)
    # the containment as literally stated: Σn preorder ⊆ Σn+1 preorder
    literal = [(w, w2, k, sig) for (n, k, sig, w, w2), v in rel.items()
               if n == 1 and v and not rel[2, k, sig, w, w2]]
    seconds = time.perf_counter() - start
    parts = [f"game vs subword oracle: {len(mismatches)} mismatches"
             + (f" (first {word_repr(mismatches[0][0])} vs {word_repr(mismatches[0][1])}, "
                f"k={mismatches[0][2]})" if mismatches else ""),
             f"Σn ⊆ Σn+1 as stated: {len(literal)} violations"
             + (f" (first {word_repr(literal[0][0])} vs {word_repr(literal[0][1])}, k={literal[0][2]})"
                if literal else ""),
             f"{seconds:.0f}s"]
    ok = not mismatches and not literal and res.passed and seconds < 600
    record(8, "game suites", ok, describe(res) + "; " + "; ".join(parts))


def test_criterion_09_omega_suite():
    res = run_suite("omega")
    ok = res.passed and res.seconds < 120
    record(9, "omega suite", ok, describe(res))


def test_criterion_10_cli_end_to_end(capsys):
    clean = main(["verify", "--suite", "all"])
    capsys.readouterr()
    caught = {}
    for m in MUTATIONS:
        for seed in MUTATION_SEEDS:
            caught[m, seed] = main(["verify", "--suite", "all", "--mutate", m,
                                    "--seed", str(seed), "--fail-fast"]) != 0
            capsys.readouterr()
    missed = [f"{m}/seed {s}" for (m, s), hit in caught.items() if not hit]
    ok = clean == 0 and not missed
    summary = (f"clean exit {clean}; mutations caught {sum(caught.values())}/{len(caught)}"
               + (f"; missed {', '.join(missed)}" if missed else ""))
    record(10, "CLI end to end", ok, summary)
