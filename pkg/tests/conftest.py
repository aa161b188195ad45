from pathlib import Path

import pytest

from akem.kb import AliasDictionary, AliasEntry, Provenance, parse_kb_lines

DATA = Path(__file__).parent / "data"


def kb_from_text(text: str):
    return parse_kb_lines(text.splitlines())


def aliases_of(mapping: dict[str, list[str]]) -> AliasDictionary:
    """Alias dictionary straight from ``{surface: [ids]}``."""
    return AliasDictionary(
        AliasEntry(s, eid, Provenance.ORIGINAL) for s, ids in mapping.items() for eid in ids
    )


@pytest.fixture
def planted_dir():
    return DATA / "planted"


@pytest.fixture
def toy_dir():
    return DATA / "toy"


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
