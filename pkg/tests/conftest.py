import pytest

from suenrich import automata
from suenrich.monoid import recognized


@pytest.fixture(scope="session")
def ends_a():
    """Minimal DFA of A*a over {a, b}."""
    return automata.parse_dfa("alphabet: a b\nstates: 2\ninitial: 0\naccepting: 1\n"
                              "0 a 1\n0 b 0\n1 a 1\n1 b 0\n")


@pytest.fixture(scope="session")
def ends_a_lang(ends_a):
    return recognized(ends_a)


# one line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, title, summary = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {summary}")
