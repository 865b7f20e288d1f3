import os

import pytest
from hypothesis import HealthCheck, settings

from grastor import exactlinalg as el
from grastor.scalars import prime_field, quadratic_field, rationals

settings.register_profile("grastor", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "grastor"))


def sub(ring, n, rows):
    """Subspace spanned by the given integer rows."""
    return el.span(ring, n, ring.array(rows) if rows else [])


@pytest.fixture
def gf2():
    return prime_field(2)


@pytest.fixture
def gf3():
    return prime_field(3)


@pytest.fixture
def gf5():
    return prime_field(5)


@pytest.fixture
def gf9():
    return quadratic_field(3)


@pytest.fixture
def qq():
    return rationals()


# criterion number -> one-line PASS/FAIL summary, filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 13):
        terminalreporter.write_line(ACCEPTANCE.get(k, f"C{k:<2} FAIL  (did not complete)"))
