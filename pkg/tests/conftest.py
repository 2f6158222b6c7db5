import pytest

from orm import corpus
from orm.inverses import compute_basis, compute_X
from orm.monoid import Monoid


@pytest.fixture(scope="session")
def abacab():
    return Monoid(corpus.presentation("abacab"))


@pytest.fixture(scope="session")
def abacab_table(abacab):
    return compute_basis(compute_X(abacab), abacab)


@pytest.fixture(scope="session")
def bicyclic():
    return Monoid(corpus.presentation("bicyclic"))


@pytest.fixture(scope="session")
def aba():
    return Monoid(corpus.presentation("aba"))


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
