import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from glp.syntax import BOT, TOP, And, Box, Dia, Iff, Implies, Not, Or, Var

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def formulas(max_leaves: int = 12, n_modalities: int = 3, n_vars: int = 3):
    leaf = st.one_of(st.just(TOP), st.just(BOT), st.builds(Var, st.integers(0, n_vars - 1)))
    k = st.integers(0, n_modalities - 1)

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(Box, k, children),
            st.builds(Dia, k, children),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
