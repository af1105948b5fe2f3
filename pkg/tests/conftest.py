import pytest

from spforge.samples import running_example, running_tower


@pytest.fixture(scope="session")
def tower():
    return running_tower()


@pytest.fixture(scope="session")
def running():
    return running_example()


@pytest.fixture(scope="session")
def running_short():
    """The running example truncated at N=10 for the heavier checks."""
    return running_example(trunc=10)


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE]
