import re
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"
FOL_DIR = DATA / "fol"

_COMMENT = re.compile(r"//[^\n]*")


def squash(text: str) -> str:
    """Whitespace- and comment-insensitive form for token-level comparison."""
    return "".join(_COMMENT.sub("", text).split())


def corpus(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def example_graph():
    from cosmo.graph import example_graph as load

    return load()


@pytest.fixture(scope="session")
def c5_model():
    from cosmo import parse

    return parse(corpus("c5_long_en.cosmo")).model


@pytest.fixture(scope="session")
def c123_model():
    from cosmo import parse

    return parse(corpus("c123_long_en.cosmo")).model


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.REPORT):
            terminalreporter.write_line(line)
