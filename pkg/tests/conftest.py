import os
import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# reference computations in the tests use mpmath at high precision
mp.mp.dps = 80


@pytest.fixture
def rng():
    return random.Random(20261015)


def small_fraction(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def pytest_terminal_summary(terminalreporter):
    from _support import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
