import numpy as np
import pytest

from ranspace.config import Configuration

ACCEPTANCE_RESULTS = []


def random_configuration(rng, d, n, scale=1.0):
    return Configuration(rng.uniform(-scale, scale, size=(n, d)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
