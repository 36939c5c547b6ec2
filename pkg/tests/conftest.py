from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from haarlab.dyadic import step_function

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

fractions = st.builds(Fraction, st.integers(-16, 16), st.sampled_from([1, 2, 4, 8]))


@st.composite
def step_functions(draw, max_level=4, max_cells=12):
    """Random piecewise constants on a dyadic grid."""
    level = draw(st.integers(0, max_level))
    start = draw(st.integers(-8, 8))
    vals = draw(st.lists(fractions, min_size=1, max_size=max_cells))
    return step_function(level, start, vals)


@st.composite
def coeff_entries(draw, max_level=4):
    """Finite dicts {(j, mu): Fraction} at levels -1..max_level."""
    keys = draw(st.lists(st.tuples(st.integers(-1, max_level), st.integers(-6, 6)),
                         min_size=1, max_size=12, unique=True))
    return {k: draw(fractions) for k in keys}


@pytest.fixture(scope="session")
def cw_system():
    from haarlab.splines import chui_wang_mother
    return chui_wang_mother()


# -- acceptance reporting: one PASS/FAIL line per criterion ---------------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria[n] = ("PASS" if rep.passed else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, text = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {text}")
