import numpy as np
import pytest
from hypothesis import settings

from nashpgd.catalog import KEYS, builtin

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile("default")


def random_profile(game, rng):
    return tuple(rng.dirichlet(np.ones(m)) for m in game.action_counts)


def random_joint(game, rng):
    return rng.dirichlet(np.ones(game.num_joint))


@pytest.fixture(params=KEYS)
def named(request):
    return builtin(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; printed again in the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
