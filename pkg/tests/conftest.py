from pathlib import Path

import pytest
from hypothesis import strategies as st

from dermarket import GeneratorFleet, validate_and_build

SCENARIO_FILE = Path(__file__).resolve().parent.parent / "scenarios" / "two_prosumer_example.json"

TWO_PROSUMERS = [(-0.1, 10.0, 10.0), (-0.1, 10.0, 30.0)]


def two_prosumer(count: int = 1):
    """Two identical-preference prosumers differing only in capacity, alpha = 5."""
    return validate_and_build(TWO_PROSUMERS, GeneratorFleet(count, 5.0))


@pytest.fixture
def example():
    return two_prosumer(1)


@pytest.fixture
def example2():
    return two_prosumer(2)


@pytest.fixture
def scenario_file():
    return SCENARIO_FILE


prosumer_st = st.tuples(
    st.floats(-0.5, -0.01),
    st.floats(8.0, 20.0),
    st.floats(0.0, 40.0),
)
prosumers_st = st.lists(prosumer_st, min_size=1, max_size=6)

# any seed yields a valid, solvable scenario
seed_st = st.integers(min_value=0, max_value=2**32 - 1)

# filled by the acceptance suite, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
