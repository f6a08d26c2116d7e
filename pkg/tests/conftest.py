import numpy as np
import pytest

from sjmd import SolverConfig

# parameters of the three-channel synthetic benchmark
BENCH = dict(alpha_max=80000.0, beta=0.05, b_bar=0.9, tau=50.0)


@pytest.fixture
def bench_config():
    return SolverConfig(**BENCH)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
