import numpy as np
import pytest

from gaussdde import DdeParams

FIG_TAUS = (3.0, 5.0, 6.0, 8.0, 12.0, 20.0)
FIG_SETS = [(b, tau) for b in (6.0, -6.0) for tau in FIG_TAUS]


def fig_params(b, tau, a=0.15, c=1.0):
    return DdeParams(a, b, tau, c)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def acceptance(label, ok, detail):
    """Print one PASS/FAIL line for an acceptance criterion and remember it for the summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
