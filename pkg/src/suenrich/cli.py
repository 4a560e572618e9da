"""Command-line front end.

Every subcommand prints one JSON report on stdout.  Exit status: 0 for
success (separable, coverable, game won, suites passed), 1 for a negative
answer, 2 for usage and input errors, 3 when an internal check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import automata, omega, suites
from .automata import format_dfa, letter_repr, parse_word, word_repr
from .baseclasses import get_solver
from .efgames import fo2_game, sigma_game
from .errors import CapacityError, InvariantViolation, ParseError, SuenrichError
from .monoid import (RecognizedLanguage, algebraic_data, common_morphism, format_monoid,
                     parse_monoid, recognized, transition_monoid)
from .reduction import covering_transfer, separation_transfer
from .wellformed import wf_alphabet, wfw_language

SCHEMA_VERSION = 1

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CHECK = 0, 1, 2, 3


class UsageError(SuenrichError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parse_file(path: str, parser):
    try:
        return parser(_read(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_dfa(path: str):
    return _parse_file(path, automata.parse_dfa)


def load_language(path: str) -> RecognizedLanguage:
    """A language from a ``.dfa`` file or a ``.monoid`` file with images."""
    if path.endswith(".monoid"):
        return _parse_file(path, parse_monoid).language()
    return recognized(load_dfa(path))


def _load_morphism(path: str):
    mf = _parse_file(path, parse_monoid)
    if mf.morphism is None:
        raise ParseError(f"{path}: no 'images:' section")
    return mf.morphism


def _elements(m, text: str) -> frozenset:
    names = [t for t in text.replace(",", " ").split() if t]
    try:
        return frozenset(m.element(n) for n in names)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _checks_exit(report: dict, verdict: bool) -> int:
    if not all(c["pass"] for c in report.get("checks", [])):
        return EXIT_CHECK
    return EXIT_OK if verdict else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_monoid(args) -> tuple[dict, int]:
    d = load_dfa(args.dfa)
    m, alpha, acc = transition_monoid(d, args.max_size)
    data = algebraic_data(alpha)
    report = {
        "states": d.n_states,
        "monoid": {
            "elements": list(m.names),
            "identity": m.name(m.identity),
            "table": [[m.name(x) for x in row] for row in m.rows],
            "images": {letter_repr(a): m.name(x) for a, x in zip(alpha.alphabet, alpha.images)},
            "accepting": sorted(m.name(x) for x in acc),
        },
        "algebraic_data": data.summary(),
        "text": format_monoid(m, alpha, acc),
    }
    return report, EXIT_OK


def cmd_wfw(args) -> tuple[dict, int]:
    d = load_dfa(args.dfa)
    m, alpha, acc = transition_monoid(d, args.max_size)
    if args.F is not None:
        acc = _elements(m, args.F)
    r = RecognizedLanguage(alpha, acc)
    wf = wf_alphabet(alpha)
    W = wfw_language(r, wf)
    report = {
        "M": m.size,
        "F": sorted(m.name(x) for x in acc),
        "wf_alphabet": {"size": len(wf.letters)},
        "wf_language": {"states": wf.language.n_states},
        "W": {"states": W.n_states, "empty": W.is_empty(),
              "shortest": None if W.is_empty() else word_repr(automata.shortest_accepted(W))},
    }
    if len(wf.letters) <= args.list_letters:
        report["wf_alphabet"]["letters"] = [letter_repr(x) for x in wf.letters]
    if args.dfa_out:
        Path(args.dfa_out).write_text(format_dfa(W), encoding="utf-8")
        report["W"]["written"] = args.dfa_out
    return report, EXIT_OK


def _solver(name: str):
    try:
        return get_solver(name, _load_morphism)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_separate(args) -> tuple[dict, int]:
    base = _solver(args.cls)
    l1, l2 = common_morphism([load_language(args.L1), load_language(args.L2)], args.max_size)
    rng = random.Random(args.seed) if args.seed is not None else None
    r = separation_transfer(l1, l2, base, rng=rng, lift=not args.no_lift)
    report = {"problem": "separation", "class": base.name, "M": l1.morphism.monoid.size,
              **r.certificate()}
    if r.separator is not None and args.dfa_out:
        Path(args.dfa_out).write_text(format_dfa(r.separator), encoding="utf-8")
        report["separator_written"] = args.dfa_out
    return report, _checks_exit(report, r.verdict)


def cmd_cover(args) -> tuple[dict, int]:
    base = _solver(args.cls)
    langs = common_morphism([load_language(p) for p in [args.L] + args.Lb], args.max_size)
    rng = random.Random(args.seed) if args.seed is not None else None
    r = covering_transfer(langs[0], langs[1:], base, rng=rng, lift=not args.no_lift)
    report = {"problem": "covering", "class": base.name, "M": langs[0].morphism.monoid.size,
              **r.certificate()}
    if r.cover is not None:
        report["cover_size"] = len(r.cover)
    return report, _checks_exit(report, r.verdict)


def cmd_efgame(args) -> tuple[dict, int]:
    w, w2 = parse_word(args.w), parse_word(args.w2)
    bounds = {}
    if args.max_len is not None:
        bounds["max_len"] = args.max_len
    if args.max_rounds is not None:
        bounds["max_rounds"] = args.max_rounds
    if args.logic == "fo2":
        v = fo2_game(w, w2, args.k, args.sig)
        params = {"logic": "fo2", "k": args.k}
    else:
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        v = sigma_game(w, w2, args.n, args.k, args.sig, **bounds)
        params = {"logic": "sigma", "n": args.n, "k": args.k}
    report = {**params, "w": word_repr(w), "w2": word_repr(w2), **v.to_json()}
    if not args.trace:
        report.pop("trace", None)
    return report, EXIT_OK if v.holds else EXIT_NEGATIVE


def _omega_file(path: str):
    return _parse_file(path, omega.parse_omega)


def _omega_morphism(path: str):
    f = _omega_file(path)
    if f.morphism is None:
        raise ParseError(f"{path}: no 'images:' section")
    return f


def cmd_omega(args) -> tuple[dict, int]:
    if args.op == "axioms":
        f = _omega_file(args.file)
        checks = omega.check_axioms(f.algebra)
        report = {"op": "axioms", "checks": [c.to_json() for c in checks]}
        return report, EXIT_OK if all(c.passed for c in checks) else EXIT_NEGATIVE
    f = _omega_morphism(args.file)
    m, o = f.morphism, f.morphism.algebra
    try:
        w = omega.parse_upword(args.word)
    except ValueError as exc:
        raise ParseError(f"bad up-word {args.word!r}: {exc}") from None
    report = {"op": args.op, "word": str(w), "k": omega.default_k(m),
              "covering_stratum": omega.covering_stratum(m)}
    if args.op == "eval":
        report["value"] = o.omega_name(omega.eval_up(m, w))
        if f.accepting is not None:
            report["accepted"] = omega.eval_up(m, w) in f.accepting
        return report, EXIT_OK
    if args.op == "eta":
        if args.k is not None:
            report["k"] = args.k
            report["unsafe_k"] = True
        r = omega.eta_omega(m, w, args.k)
        a = omega.wf_omega_alphabet(m)
        report["eta"] = str(r.output)
        report["value"] = o.omega_name(a.eval(r.output))
        ok = a.eval(r.output) == omega.eval_up(m, w)
        report["checks"] = [{"name": "eval-eta", "pass": ok}]
        return report, EXIT_OK if ok else EXIT_CHECK
    if args.op == "eqinf":
        r = omega.check_eqinf(m, w, bound=args.bound)
        report.update(r.to_json(o))
        if not r.conclusive:
            return report, EXIT_NEGATIVE
        return report, EXIT_OK if r.passed else EXIT_CHECK
    raise UsageError(f"unknown omega operation {args.op!r}")  # pragma: no cover


def cmd_verify(args) -> tuple[dict, int]:
    opts = suites.Options(seed=args.seed, mutate=args.mutate, fail_fast=args.fail_fast)
    names = suites.ALL if args.suite == "all" else (args.suite,)
    results = []
    for name in names:
        results.append(suites.run_suite(name, opts))
    report = {"suite": args.suite, "seed": args.seed, "mutate": args.mutate,
              "pass": all(r.passed for r in results),
              "suites": [r.to_json(timing=args.timing) for r in results]}
    if not args.verbose:
        for s in report["suites"]:
            s["checks"] = [c for c in s["checks"] if not c["pass"]]
    return report, EXIT_OK if report["pass"] else EXIT_CHECK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="suenrich", description=__doc__.splitlines()[0])
    p.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    p.add_argument("--indent", type=int, default=2, help="JSON indentation (default 2)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("monoid", help="transition monoid and algebraic data of a DFA")
    q.add_argument("dfa")
    q.add_argument("--max-size", type=int, default=64)
    q.set_defaults(func=cmd_monoid)

    q = sub.add_parser("wfw", help="well-formed alphabet and W[L] for a DFA")
    q.add_argument("dfa")
    q.add_argument("-F", help="accepting monoid elements (comma or space separated); "
                              "default: the image of the DFA's language")
    q.add_argument("--dfa-out", help="write W[L] to this file")
    q.add_argument("--list-letters", type=int, default=64,
                   help="list the alphabet when it has at most this many letters")
    q.add_argument("--max-size", type=int, default=64)
    q.set_defaults(func=cmd_wfw)

    q = sub.add_parser("separate", help="enriched separation through a base class")
    q.add_argument("--class", dest="cls", required=True,
                   help="sigma1 | at | su<k> | congruence:<monoid file>")
    q.add_argument("L1")
    q.add_argument("L2")
    q.add_argument("--no-lift", action="store_true", help="skip lifting the separator")
    q.add_argument("--seed", type=int, help="re-draw γ witnesses with this seed")
    q.add_argument("--dfa-out", help="write the lifted separator to this file")
    q.add_argument("--max-size", type=int, default=64)
    q.set_defaults(func=cmd_separate)

    q = sub.add_parser("cover", help="enriched covering through a base class")
    q.add_argument("--class", dest="cls", required=True)
    q.add_argument("L")
    q.add_argument("Lb", nargs="+")
    q.add_argument("--no-lift", action="store_true")
    q.add_argument("--seed", type=int)
    q.add_argument("--max-size", type=int, default=64)
    q.set_defaults(func=cmd_cover)

    q = sub.add_parser("efgame", help="Ehrenfeucht–Fraïssé games")
    q.add_argument("--logic", choices=("fo2", "sigma"), required=True)
    q.add_argument("--n", type=int, default=1, help="alternation level (sigma)")
    q.add_argument("--k", type=int, required=True, help="number of rounds")
    q.add_argument("--sig", default="lt", help="lt | succ")
    q.add_argument("--trace", action="store_true", help="include a strategy trace")
    q.add_argument("--max-len", type=int)
    q.add_argument("--max-rounds", type=int)
    q.add_argument("w")
    q.add_argument("w2")
    q.set_defaults(func=cmd_efgame)

    q = sub.add_parser("omega", help="operations on ω-semigroups and up-words")
    q.add_argument("op", choices=("axioms", "eval", "eta", "eqinf"))
    q.add_argument("file")
    q.add_argument("word", nargs="?", help="up-word u(v)^w")
    q.add_argument("--k", type=int, help="override k for eta (unsafe)")
    q.add_argument("--bound", type=int, default=64, help="search bound for eqinf")
    q.set_defaults(func=cmd_omega)

    q = sub.add_parser("verify", help="run verification suites")
    q.add_argument("--suite", default="all", choices=(*suites.SUITES, "all"))
    q.add_argument("--mutate", choices=suites.MUTATIONS)
    q.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    q.add_argument("--fail-fast", action="store_true")
    q.add_argument("--verbose", action="store_true", help="list passing checks too")
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    start = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        if args.command == "omega" and args.op != "axioms" and args.word is None:
            raise UsageError(f"omega {args.op} needs an up-word")
        report, code = args.func(args)
    except (UsageError, ParseError, CapacityError, ValueError) as exc:
        print(f"suenrich: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"suenrich: internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = {"schema": SCHEMA_VERSION, "command": argv, **report}
    if args.timing:
        out["seconds"] = round(time.perf_counter() - start, 3)
    print(json.dumps(out, indent=args.indent, ensure_ascii=False))
    return code

