import pytest

from selftrap import ModelParams, RadialGrid, solve

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grid():
    return RadialGrid()


@pytest.fixture(scope="session")
def solutions(grid):
    """Cached lower-branch shooting solutions keyed by ``(c, g)``."""
    cache = {}

    def get(c, g=0.0, branch="lower"):
        key = (c, g, branch)
        if key not in cache:
            cache[key] = solve(ModelParams(c, g), branch, grid)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
