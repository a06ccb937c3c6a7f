import json

import pytest

from braidorder.braidact import parse_braid
from braidorder.certificate import dumps
from braidorder.search import obstruct

# criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def headline():
    """Driver result for s1 s2^-3 with the default options."""
    return obstruct(parse_braid("s1 s2^-3"), 6)


@pytest.fixture(scope="session")
def golden_text(headline):
    return dumps(headline.certificate)


@pytest.fixture
def golden_json(golden_text):
    return json.loads(golden_text)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
