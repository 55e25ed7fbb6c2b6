from pathlib import Path

import pytest

from capdelta.core import AgentKind, AgentProfile, parse_capability_id

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def cid(text):
    return parse_capability_id(text)


def human(caps, **kw):
    return AgentProfile("h", AgentKind.HUMAN, {cid(k): v for k, v in caps.items()}, **kw)


def robot(caps, **kw):
    return AgentProfile("a", AgentKind.AUTONOMOUS, {cid(k): v for k, v in caps.items()}, **kw)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
