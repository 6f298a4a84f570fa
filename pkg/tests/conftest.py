from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

WRESTLERS = "inform(name = the Wrestlers, price range = cheap, customer rating = low)"


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def wrestlers():
    from nlgkit.mr import parse_mr

    return parse_mr(WRESTLERS)


@pytest.fixture(scope="session")
def wrestlers_lexicon():
    from nlgkit.mr import SlotLexicon

    return SlotLexicon.load(FIXTURES / "wrestlers_lexicon.json")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in mod.RESULTS:
        terminalreporter.write_line(f"{status:4}  {name}  [{detail}]")
