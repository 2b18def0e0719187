import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import FIX_A, jsonl  # noqa: E402

from semhmc import build_index, learn, parse_corpus  # noqa: E402


@pytest.fixture
def fix_a_lines():
    return jsonl(FIX_A)


@pytest.fixture
def fix_a_index(fix_a_lines):
    return build_index(parse_corpus(fix_a_lines))


@pytest.fixture
def fix_a_model(fix_a_index):
    return learn(fix_a_index)


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::" in getattr(report, "nodeid", "") and report.when == "call":
                rows.append((report.nodeid, outcome))
    if not rows:
        return
    terminalreporter.section("ACCEPTANCE")
    for nodeid, outcome in sorted(rows):
        name = nodeid.split("::")[-1]
        doc = getattr(_ACCEPTANCE_DOCS.get(name), "__doc__", None) or name
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {doc.splitlines()[0]}")


_ACCEPTANCE_DOCS = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if item.module.__name__ == "test_acceptance":
            _ACCEPTANCE_DOCS[item.name] = item.function
