import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mucalc.formula import normalize, parse
from mucalc.randgen import random_formula

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def formula(text, logic="rel"):
    return normalize(parse(text, logic))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def rel_formulas(draw, max_size=10):
    rng = random.Random(draw(seeds))
    return random_formula(rng, rng.randint(1, max_size))


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
