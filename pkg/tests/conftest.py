import pytest

from preslab import corpus
from preslab.logic import GRAPH
from preslab.syntax import parse_formula


@pytest.fixture
def graph_formula():
    return lambda text: parse_formula(text, GRAPH)


@pytest.fixture(scope="session")
def sentence_corpus():
    return corpus.sentence_corpus()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
