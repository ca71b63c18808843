import numpy as np
import pytest

from ergokit.haar import stream

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng(request):
    # independent, reproducible stream per test
    key = sum(ord(ch) for ch in request.node.name)
    return stream(12345, key)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
