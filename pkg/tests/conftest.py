from pathlib import Path

import pytest

from elpinpoint import build_pinpoint_formula, classify, normalize, parse_ontology, parse_query

DATA = Path(__file__).parent / "data"
GALEN = DATA / "galen_mg.elt"

# the single MinA of Endocarditis <= HeartDisease, as 0-based normalized ids
# (s1, s2, s5, s7, s8, s10, s11, s13); confirmed by brute force in test_pinpoint
GALEN_MINA = frozenset({0, 1, 4, 6, 7, 9, 10, 12})


@pytest.fixture(scope="session")
def galen():
    return parse_ontology(GALEN.read_text())


@pytest.fixture(scope="session")
def galen_tbox(galen):
    return normalize(galen)


@pytest.fixture(scope="session")
def galen_closure(galen_tbox):
    return classify(galen_tbox)


@pytest.fixture(scope="session")
def galen_formula(galen_closure):
    return build_pinpoint_formula(galen_closure)


@pytest.fixture(scope="session")
def galen_query(galen):
    return parse_query("Endocarditis <= HeartDisease", galen.symbols)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
