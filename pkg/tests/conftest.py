from pathlib import Path

import pytest

from permclosure import parse_grammar

DATA = Path(__file__).parent / "data"

CFG_FIXTURES = ("g_ab", "g_dyck", "g_fin", "g_pal")
IG_FIXTURES = ("ig_abc", "ig_abc_plus", "ig_anbn_nf", "ig_aba_nf")


def load(name: str):
    suffix = {"g": ".cfg", "i": ".igr"}.get(name[0], ".nfa")
    return parse_grammar((DATA / f"{name}{suffix}").read_text())


def words(*items) -> frozenset:
    """Words from strings of one-letter symbols; 'eps' is the empty word."""
    return frozenset(() if w == "eps" else tuple(w) for w in items)


@pytest.fixture(scope="session")
def g_ab():
    return load("g_ab")


@pytest.fixture(scope="session")
def g_dyck():
    return load("g_dyck")


@pytest.fixture(scope="session")
def g_fin():
    return load("g_fin")


@pytest.fixture(scope="session")
def g_pal():
    return load("g_pal")


@pytest.fixture(scope="session")
def ig_abc():
    return load("ig_abc")


@pytest.fixture(scope="session")
def ig_abc_plus():
    return load("ig_abc_plus")


@pytest.fixture(scope="session")
def ab_star():
    return load("ab_star")


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
