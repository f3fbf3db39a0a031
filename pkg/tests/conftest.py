import hypothesis.strategies as st
import pytest

from snpsim import gen_random

# bounds of the property-test corpus
RANDOM_BOUNDS = dict(q_max=50, rules_per_neuron_max=4, out_degree_max=8,
                     spikes_max=20, delay_max=3)


@st.composite
def random_systems(draw, q_max=50):
    """A validated random system, reproducible from the drawn seed."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    bounds = dict(RANDOM_BOUNDS, q_max=q_max)
    return gen_random(seed=seed, **bounds)


_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(nodeid: str, outcome: str) -> None:
    _ACCEPTANCE_RESULTS.append((nodeid, outcome))


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    record_acceptance(name, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{outcome}  {name}")


@pytest.fixture
def empty_system():
    from snpsim import SNPSystem

    return SNPSystem().validate()
