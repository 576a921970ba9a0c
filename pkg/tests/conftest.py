import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# one line per acceptance criterion, printed in the terminal summary
CRITERIA: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    CRITERIA[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(CRITERIA[number])


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
